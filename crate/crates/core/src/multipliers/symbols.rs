//! Pointwise Fourier symbols of the linear operators.
//!
//! Conventions: `∂_j ↦ iξ_j`, `-Δ ↦ |ξ|²`, `|∇| ↦ |ξ|`. Every symbol here is
//! real. Values on singular sets follow the rules documented per function.

use num_complex::Complex64;

use super::Coefficients;

pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

#[inline]
pub fn norm_sq(xi: [f64; 3]) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec<T>(a: &Mat3, v: [T; 3]) -> [T; 3]
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    [
        v[0] * a[0][0] + v[1] * a[0][1] + v[2] * a[0][2],
        v[0] * a[1][0] + v[1] * a[1][1] + v[2] * a[1][2],
        v[0] * a[2][0] + v[1] * a[2][1] + v[2] * a[2][2],
    ]
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

/// Leray projector `I - ξξᵀ/|ξ|²`; identity at `ξ = 0`.
pub fn leray(xi: [f64; 3]) -> Mat3 {
    let r2 = norm_sq(xi);
    if r2 == 0.0 {
        return IDENTITY;
    }
    let mut p = IDENTITY;
    for i in 0..3 {
        for j in 0..3 {
            p[i][j] -= xi[i] * xi[j] / r2;
        }
    }
    p
}

/// Diagonalizer `U(ξ)`, a real symmetric involution.
///
/// With `ρ = √(ξ2²+ξ3²)` the rows are `[1,0,0]`, `[0, ξ2/ρ, ξ3/ρ]`,
/// `[0, ξ3/ρ, -ξ2/ρ]`. On the line `ρ = 0` the identity is returned; there
/// `L̄(ξ)` is already a multiple of the identity, so the diagonalization
/// identity still holds.
pub fn u_diagonalizer(xi: [f64; 3]) -> Mat3 {
    let rho = xi[1].hypot(xi[2]);
    if rho == 0.0 {
        return IDENTITY;
    }
    let (c, s) = (xi[1] / rho, xi[2] / rho);
    [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, s, -c]]
}

/// Diagonal symbol of `L`:
/// `((ν4+ν5)/2·|ξ|² + ν1·ξ1²ρ²/|ξ|²` twice, then `ν4/2·|ξ|² + ν5/2·ξ1²)`.
/// Zero at `ξ = 0`.
pub fn operator_l(c: &Coefficients, xi: [f64; 3]) -> [f64; 3] {
    let r2 = norm_sq(xi);
    if r2 == 0.0 {
        return [0.0; 3];
    }
    let x1 = xi[0] * xi[0];
    let rho2 = xi[1] * xi[1] + xi[2] * xi[2];
    let a = 0.5 * (c.nu4() + c.nu5()) * r2 + c.nu1() * x1 * rho2 / r2;
    let b = 0.5 * c.nu4() * r2 + 0.5 * c.nu5() * x1;
    [a, a, b]
}

/// Entrywise square root of [`operator_l`].
pub fn operator_sqrt_l(c: &Coefficients, xi: [f64; 3]) -> [f64; 3] {
    operator_l(c, xi).map(f64::sqrt)
}

/// Symbol of the projected viscous operator `L̄ = ℙL̃` on divergence-free
/// fields (symmetric). Zero at `ξ = 0`.
pub fn operator_lbar(c: &Coefficients, xi: [f64; 3]) -> Mat3 {
    let r2 = norm_sq(xi);
    if r2 == 0.0 {
        return [[0.0; 3]; 3];
    }
    let (nu1, nu4, nu5) = (c.nu1(), c.nu4(), c.nu5());
    let [x1, x2, x3] = xi;
    let base = 0.5 * (nu4 + nu5) * r2;
    let f1 = x1 * x1 / r2;
    let m11 = base + nu1 * f1 * (x2 * x2 + x3 * x3);
    let m22 = base - 0.5 * nu5 * x3 * x3 + nu1 * f1 * x2 * x2;
    let m33 = base - 0.5 * nu5 * x2 * x2 + nu1 * f1 * x3 * x3;
    let m23 = (0.5 * nu5 + nu1 * f1) * x2 * x3;
    [[m11, 0.0, 0.0], [0.0, m22, m23], [0.0, m23, m33]]
}

/// Symbol of the unprojected linear operator
/// `L̃u = -ν4/2 Δu - (ν5/2 Δu1 + (ν1+ν5)∂1²u1, ν5/2(∂1²u2 + ∂1∂2u1), ν5/2(∂1²u3 + ∂1∂3u1))`.
pub fn operator_ltilde(c: &Coefficients, xi: [f64; 3]) -> Mat3 {
    let r2 = norm_sq(xi);
    let (nu1, nu4, nu5) = (c.nu1(), c.nu4(), c.nu5());
    let [x1, x2, x3] = xi;
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 0.5 * nu4 * r2;
    }
    m[0][0] += 0.5 * nu5 * r2 + (nu1 + nu5) * x1 * x1;
    m[1][1] += 0.5 * nu5 * x1 * x1;
    m[1][0] += 0.5 * nu5 * x1 * x2;
    m[2][2] += 0.5 * nu5 * x1 * x1;
    m[2][0] += 0.5 * nu5 * x1 * x3;
    m
}

/// Tagged symbol values for the operator catalogue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolValue {
    Scalar(Complex64),
    Matrix(Mat3),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Scalar,
    Matrix3,
}

/// The Fourier multipliers used by the solver, as value objects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FourierSymbol {
    Leray,
    Diagonalizer,
    LTilde(Coefficients),
    LBar(Coefficients),
    /// Diagonal `L`, returned as a diagonal matrix.
    L(Coefficients),
    SqrtL(Coefficients),
    AbsGradient,
    /// `e^{it|ξ|}`
    HalfWave(f64),
}

impl FourierSymbol {
    pub fn kind(&self) -> SymbolKind {
        match self {
            FourierSymbol::AbsGradient | FourierSymbol::HalfWave(_) => SymbolKind::Scalar,
            _ => SymbolKind::Matrix3,
        }
    }

    pub fn eval(&self, xi: [f64; 3]) -> SymbolValue {
        let diag = |d: [f64; 3]| [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]];
        match self {
            FourierSymbol::Leray => SymbolValue::Matrix(leray(xi)),
            FourierSymbol::Diagonalizer => SymbolValue::Matrix(u_diagonalizer(xi)),
            FourierSymbol::LTilde(c) => SymbolValue::Matrix(operator_ltilde(c, xi)),
            FourierSymbol::LBar(c) => SymbolValue::Matrix(operator_lbar(c, xi)),
            FourierSymbol::L(c) => SymbolValue::Matrix(diag(operator_l(c, xi))),
            FourierSymbol::SqrtL(c) => SymbolValue::Matrix(diag(operator_sqrt_l(c, xi))),
            FourierSymbol::AbsGradient => SymbolValue::Scalar(Complex64::new(norm_sq(xi).sqrt(), 0.0)),
            FourierSymbol::HalfWave(t) => SymbolValue::Scalar(Complex64::from_polar(1.0, t * norm_sq(xi).sqrt())),
        }
    }

    /// Value used on the measure-zero set where the formula is singular.
    pub fn singular_set_rule(&self) -> &'static str {
        match self {
            FourierSymbol::Leray => "identity at ξ = 0 (mean mode passes through)",
            FourierSymbol::Diagonalizer => "identity on the line ξ2 = ξ3 = 0",
            FourierSymbol::LTilde(_) => "none (polynomial symbol)",
            FourierSymbol::LBar(_) | FourierSymbol::L(_) | FourierSymbol::SqrtL(_) => "zero at ξ = 0",
            FourierSymbol::AbsGradient => "zero at ξ = 0",
            FourierSymbol::HalfWave(_) => "one at ξ = 0",
        }
    }
}

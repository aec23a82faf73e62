//! Application of the symbols in [`super::symbols`] to fields.

use num_complex::Complex64;
use rayon::prelude::*;

use super::symbols::{self, Mat3};
use super::Coefficients;
use crate::error::{Error, Result};
use crate::spectral::{SpectralField, VectorField3};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Applies a per-mode real matrix symbol. `None` zeroes the mode.
pub fn apply_matrix_symbol(
    u: &VectorField3,
    symbol: impl Fn([usize; 3], [f64; 3]) -> Option<Mat3> + Sync,
) -> VectorField3 {
    let grid = *u.grid();
    let n = grid.n();
    let ks = grid.wavenumbers();
    let [a, b, c] = u.components().each_ref().map(|f| f.coeffs());
    let out: Vec<[Complex64; 3]> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let x = [a[idx], b[idx], c[idx]];
            if x == [ZERO; 3] {
                return x;
            }
            let ijk = [idx / (n * n), (idx / n) % n, idx % n];
            match symbol(ijk, [ks[ijk[0]], ks[ijk[1]], ks[ijk[2]]]) {
                Some(m) => symbols::mat_vec(&m, x),
                None => [ZERO; 3],
            }
        })
        .collect();
    let mut comps = [Vec::with_capacity(out.len()), Vec::with_capacity(out.len()), Vec::with_capacity(out.len())];
    for v in out {
        for (c, x) in comps.iter_mut().zip(v) {
            c.push(x);
        }
    }
    let [c0, c1, c2] = comps.map(|c| SpectralField::from_coeffs(grid, c).expect("length preserved"));
    VectorField3::new([c0, c1, c2])
}

/// Applies a per-mode diagonal real symbol.
pub fn apply_diagonal_symbol(u: &VectorField3, symbol: impl Fn([f64; 3]) -> [f64; 3] + Sync) -> VectorField3 {
    let [a, b, c] = u.components().each_ref();
    VectorField3::new([
        a.apply_symbol(|xi| Complex64::new(symbol(xi)[0], 0.0)),
        b.apply_symbol(|xi| Complex64::new(symbol(xi)[1], 0.0)),
        c.apply_symbol(|xi| Complex64::new(symbol(xi)[2], 0.0)),
    ])
}

/// Leray projection onto divergence-free fields. The mean mode is untouched.
pub fn leray_project(u: &VectorField3) -> VectorField3 {
    apply_matrix_symbol(u, |_, xi| Some(symbols::leray(xi)))
}

/// The diagonalizer `𝕌`.
///
/// Its symbol is odd in `(ξ2, ξ3)`, so it maps real fields to fields whose
/// second and third components are imaginary. Modes carrying a Nyquist
/// index have no odd partner on the grid and are zeroed.
pub fn apply_diagonalizer(u: &VectorField3) -> VectorField3 {
    let grid = *u.grid();
    apply_matrix_symbol(u, move |ijk, xi| {
        if ijk.iter().any(|&i| grid.is_nyquist(i)) {
            None
        } else {
            Some(symbols::u_diagonalizer(xi))
        }
    })
}

pub fn apply_ltilde(c: &Coefficients, u: &VectorField3) -> VectorField3 {
    let c = *c;
    apply_matrix_symbol(u, move |_, xi| Some(symbols::operator_ltilde(&c, xi)))
}

pub fn apply_lbar(c: &Coefficients, u: &VectorField3) -> VectorField3 {
    let c = *c;
    apply_matrix_symbol(u, move |_, xi| Some(symbols::operator_lbar(&c, xi)))
}

/// `L` acting on a field in v-coordinates.
pub fn apply_l(c: &Coefficients, v: &VectorField3) -> VectorField3 {
    let c = *c;
    apply_diagonal_symbol(v, move |xi| symbols::operator_l(&c, xi))
}

pub fn apply_sqrt_l(c: &Coefficients, v: &VectorField3) -> VectorField3 {
    let c = *c;
    apply_diagonal_symbol(v, move |xi| symbols::operator_sqrt_l(&c, xi))
}

/// `e^{-tL}|∇|^order v` for `v` in v-coordinates.
pub fn semigroup_apply(c: &Coefficients, t: f64, v: &VectorField3, derivative_order: u32) -> Result<VectorField3> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if derivative_order > 4 {
        return Err(Error::InvalidArgument(format!("derivative order {derivative_order} exceeds 4")));
    }
    let c = *c;
    Ok(apply_diagonal_symbol(v, move |xi| {
        let r = symbols::norm_sq(xi).sqrt();
        let w = r.powi(derivative_order as i32);
        symbols::operator_l(&c, xi).map(|l| (-t * l).exp() * w)
    }))
}

/// `e^{it|∇|} f`. The mean mode is multiplied by one.
pub fn halfwave_apply(t: f64, f: &SpectralField) -> SpectralField {
    f.apply_symbol(|xi| Complex64::from_polar(1.0, t * symbols::norm_sq(xi).sqrt()))
}

/// `|∇| f`.
pub fn abs_grad(f: &SpectralField) -> SpectralField {
    f.apply_symbol(|xi| Complex64::new(symbols::norm_sq(xi).sqrt(), 0.0))
}

/// `|∇|^{-1} f` with the mean mode sent to zero.
pub fn abs_grad_inverse(f: &SpectralField) -> SpectralField {
    f.apply_symbol(|xi| {
        let r = symbols::norm_sq(xi).sqrt();
        if r == 0.0 {
            ZERO
        } else {
            Complex64::new(1.0 / r, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Axis, Grid3};

    fn grid() -> Grid3 {
        Grid3::new(16, 1.0).unwrap()
    }

    fn bumpy(g: Grid3) -> VectorField3 {
        VectorField3::from_fn(g, |x| {
            [
                (x[0]).sin() * (2.0 * x[1]).cos() + 0.3,
                (x[1] + x[2]).cos() + (x[0] - x[2]).sin(),
                (3.0 * x[2]).sin() * x[0].cos(),
            ]
        })
    }

    #[test]
    fn leray_kills_gradients_and_is_idempotent() {
        let g = grid();
        let p = SpectralField::from_fn(g, |x| (x[0] + 2.0 * x[1]).sin() * x[2].cos());
        assert!(leray_project(&p.gradient()).l2_norm() < 1e-12);
        let u = bumpy(g);
        let pu = leray_project(&u);
        assert!((&leray_project(&pu) - &pu).l2_norm() < 1e-12);
        assert!(pu.divergence().l2_norm() < 1e-12);
        assert!((pu.mean()[0] - u.mean()[0]).norm() < 1e-15);
    }

    #[test]
    fn diagonalizer_is_an_involution_on_resolved_modes() {
        let u = bumpy(grid());
        let back = apply_diagonalizer(&apply_diagonalizer(&u));
        assert!((&back - &u).l2_norm() < 1e-12);
    }

    #[test]
    fn semigroup_third_component_decay() {
        let g = grid();
        let c = Coefficients::new(0.5, 1.0, 0.7).unwrap();
        let f = SpectralField::from_fn(g, |x| (2.0 * x[0] + x[1]).cos());
        let v = VectorField3::new([SpectralField::zeros(g), SpectralField::zeros(g), f.clone()]);
        let t = 0.3;
        let out = semigroup_apply(&c, t, &v, 0).unwrap();
        let factor = (-t * (0.5 * 5.0 + 0.5 * 0.7 * 4.0)).exp();
        assert!((out.component(2) - &f.scaled(factor)).l2_norm() < 1e-12);
        assert!(semigroup_apply(&c, -1.0, &v, 0).is_err());
        assert_eq!(semigroup_apply(&c, 0.0, &v, 0).unwrap(), v);
    }

    #[test]
    fn semigroup_law() {
        let c = Coefficients::new(-0.3, 1.0, 0.2).unwrap();
        let v = bumpy(grid());
        let ab = semigroup_apply(&c, 0.1, &semigroup_apply(&c, 0.25, &v, 0).unwrap(), 0).unwrap();
        let direct = semigroup_apply(&c, 0.35, &v, 0).unwrap();
        assert!((&ab - &direct).l2_norm() < 1e-12 * v.l2_norm());
    }

    #[test]
    fn halfwave_is_unitary_and_a_group() {
        let f = bumpy(grid()).component(1).clone();
        let g = halfwave_apply(7.3, &f);
        assert!((g.l2_norm() - f.l2_norm()).abs() < 1e-13 * f.l2_norm());
        let back = halfwave_apply(-7.3, &g);
        assert!((&back - &f).l2_norm() < 1e-12);
        assert_eq!(halfwave_apply(0.0, &f), f);
    }

    #[test]
    fn abs_grad_inverse_pair() {
        let f = bumpy(grid()).component(0).clone();
        let mut zero_mean = f.clone();
        zero_mean.coeffs_mut()[0] = ZERO;
        let back = abs_grad(&abs_grad_inverse(&f));
        assert!((&back - &zero_mean).l2_norm() < 1e-12);
        let dd = f.differentiate(Axis::X1, 2);
        assert!(dd.l2_norm() > 0.0);
    }
}

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::{fft3, Direction};
use super::grid::Grid3;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i]
    }
}

/// Complex Fourier coefficients of a scalar field on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid3,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid3) -> Self {
        Self { grid, coeffs: vec![ZERO; grid.len()] }
    }

    pub fn from_coeffs(grid: Grid3, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: coeffs.len() });
        }
        Ok(Self { grid, coeffs })
    }

    /// Forward transform of real physical samples.
    pub fn from_real(grid: Grid3, physical: &[f64]) -> Result<Self> {
        if physical.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: physical.len() });
        }
        let data = physical.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(Self::from_complex_physical(grid, data))
    }

    pub fn from_complex_physical(grid: Grid3, mut data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), grid.len());
        fft3(&mut data, grid.n(), Direction::Forward);
        Self { grid, coeffs: data }
    }

    /// Samples `f(x)` at the grid points (signed coordinates) and transforms.
    pub fn from_fn(grid: Grid3, f: impl Fn([f64; 3]) -> f64 + Sync) -> Self {
        let xs = grid.coords();
        let n = grid.n();
        let phys: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                f([xs[i], xs[j], xs[k]])
            })
            .collect();
        Self::from_real(grid, &phys).expect("sized by grid")
    }

    #[inline]
    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        fft3(&mut data, self.grid.n(), Direction::Inverse);
        data
    }

    /// Real part of the inverse transform.
    pub fn to_real(&self) -> Vec<f64> {
        self.to_physical().into_iter().map(|c| c.re).collect()
    }

    pub fn check_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Maps every `n`-long row along axis 2; `f(i, j, src, dst)`.
    fn map_rows(&self, f: impl Fn(usize, usize, &[Complex64], &mut [Complex64]) + Sync) -> SpectralField {
        let grid = self.grid;
        let n = grid.n();
        let mut coeffs = vec![ZERO; grid.len()];
        coeffs.par_chunks_mut(n).zip(self.coeffs.par_chunks(n)).enumerate().for_each(|(row, (dst, src))| {
            f(row / n, row % n, src, dst);
        });
        SpectralField { grid, coeffs }
    }

    /// Pointwise multiplication by a Fourier symbol `m(ξ)`.
    pub fn apply_symbol(&self, symbol: impl Fn([f64; 3]) -> Complex64 + Sync) -> SpectralField {
        let ks = self.grid.wavenumbers();
        self.map_rows(|i, j, src, dst| {
            for (k, (d, &c)) in dst.iter_mut().zip(src).enumerate() {
                if c != ZERO {
                    *d = c * symbol([ks[i], ks[j], ks[k]]);
                }
            }
        })
    }

    /// Same as [`apply_symbol`](Self::apply_symbol) but the symbol also sees
    /// the FFT indices, for rules that depend on Nyquist membership.
    pub fn apply_indexed_symbol(
        &self,
        symbol: impl Fn([usize; 3], [f64; 3]) -> Complex64 + Sync,
    ) -> SpectralField {
        let ks = self.grid.wavenumbers();
        self.map_rows(|i, j, src, dst| {
            for (k, (d, &c)) in dst.iter_mut().zip(src).enumerate() {
                *d = c * symbol([i, j, k], [ks[i], ks[j], ks[k]]);
            }
        })
    }

    /// Per-index factors `(i k_m)^order` of `∂^order` along one axis, with
    /// the Nyquist entry zeroed for odd orders.
    fn derivative_factors(&self, order: u32) -> Vec<Complex64> {
        let grid = self.grid;
        let ik_pow = I.powu(order);
        (0..grid.n())
            .map(|m| {
                if order % 2 == 1 && grid.is_nyquist(m) {
                    ZERO
                } else {
                    ik_pow * grid.wavenumber(m).powi(order as i32)
                }
            })
            .collect()
    }

    /// `∂^order` along `axis`: multiplication by `(i k)^order`. The Nyquist
    /// plane of that axis is zeroed for odd orders.
    pub fn differentiate(&self, axis: Axis, order: u32) -> SpectralField {
        if order == 0 {
            return self.clone();
        }
        let fac = self.derivative_factors(order);
        match axis {
            Axis::X1 => self.map_rows(|i, _, src, dst| {
                for (d, &c) in dst.iter_mut().zip(src) {
                    *d = c * fac[i];
                }
            }),
            Axis::X2 => self.map_rows(|_, j, src, dst| {
                for (d, &c) in dst.iter_mut().zip(src) {
                    *d = c * fac[j];
                }
            }),
            Axis::X3 => self.map_rows(|_, _, src, dst| {
                for ((d, &c), &f) in dst.iter_mut().zip(src).zip(&fac) {
                    *d = c * f;
                }
            }),
        }
    }

    /// `Σ_a ∂_a f_a` for three fields on this grid, in one pass.
    pub fn divergence_of(fields: [&SpectralField; 3]) -> SpectralField {
        let grid = fields[0].grid;
        let n = grid.n();
        let fac = fields[0].derivative_factors(1);
        let mut coeffs = vec![ZERO; grid.len()];
        coeffs.par_chunks_mut(n).enumerate().for_each(|(row, dst)| {
            let (i, j) = (row / n, row % n);
            let r = row * n..(row + 1) * n;
            let (a, b, c) = (&fields[0].coeffs[r.clone()], &fields[1].coeffs[r.clone()], &fields[2].coeffs[r]);
            for k in 0..n {
                dst[k] = a[k] * fac[i] + b[k] * fac[j] + c[k] * fac[k];
            }
        });
        SpectralField { grid, coeffs }
    }

    pub fn gradient(&self) -> VectorField3 {
        VectorField3::new([
            self.differentiate(Axis::X1, 1),
            self.differentiate(Axis::X2, 1),
            self.differentiate(Axis::X3, 1),
        ])
    }

    pub fn laplacian(&self) -> SpectralField {
        self.apply_symbol(|xi| Complex64::new(-(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]), 0.0))
    }

    /// Zeroes every mode outside the dealiasing cube.
    pub fn dealias_in_place(&mut self) {
        let grid = self.grid;
        let c = grid.dealias_cutoff();
        let n = grid.n();
        let kept: Vec<bool> = (0..n).map(|m| grid.mode(m).abs() <= c).collect();
        self.coeffs.par_chunks_mut(n).enumerate().for_each(|(row, line)| {
            if !(kept[row / n] && kept[row % n]) {
                line.fill(ZERO);
                return;
            }
            for (v, &keep) in line.iter_mut().zip(&kept) {
                if !keep {
                    *v = ZERO;
                }
            }
        });
    }

    pub fn dealiased(&self) -> SpectralField {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    /// `conj(ĉ(-ξ))`: the coefficients of the complex-conjugate field.
    pub fn conjugate_field(&self) -> SpectralField {
        let grid = self.grid;
        let coeffs = (0..grid.len())
            .into_par_iter()
            .map(|idx| self.coeffs[grid.reflect(idx)].conj())
            .collect();
        SpectralField { grid, coeffs }
    }

    /// Max deviation from Hermitian symmetry, i.e. how far the field is from real.
    pub fn hermitian_defect(&self) -> f64 {
        let grid = self.grid;
        (0..grid.len())
            .into_par_iter()
            .map(|idx| (self.coeffs[idx] - self.coeffs[grid.reflect(idx)].conj()).norm())
            .reduce(|| 0.0, f64::max)
    }

    /// Projects onto real fields: `(f + f̄)/2`.
    pub fn real_part(&self) -> SpectralField {
        let conj = self.conjugate_field();
        let mut out = self.clone();
        out.coeffs.par_iter_mut().zip(conj.coeffs.par_iter()).for_each(|(a, b)| *a = (*a + *b) * 0.5);
        out
    }

    pub fn scale(&mut self, a: f64) {
        self.coeffs.par_iter_mut().for_each(|c| *c *= a);
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    pub fn scaled_complex(&self, a: Complex64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.par_iter_mut().for_each(|c| *c *= a);
        out
    }

    /// `self += a·x`.
    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        assert!(self.grid.same_as(&x.grid), "axpy across grids");
        self.coeffs.par_iter_mut().zip(x.coeffs.par_iter()).for_each(|(s, &v)| *s += v * a);
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.par_iter().map(|c| c.norm()).reduce(|| 0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.par_iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `( Σ_k (1+|k|²)^order |ĉ(k)|² · V )^{1/2}`; order 0 is the L² norm.
    pub fn sobolev_norm(&self, order: f64) -> f64 {
        self.weighted_sum_sq(order).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    pub(crate) fn weighted_sum_sq(&self, order: f64) -> f64 {
        let grid = self.grid;
        let ks = grid.wavenumbers();
        let n = grid.n();
        let coeffs = &self.coeffs;
        let s = ordered_sum(coeffs.len(), |idx| {
            let sq = coeffs[idx].norm_sqr();
            if sq == 0.0 || order == 0.0 {
                return sq;
            }
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let k2 = ks[i] * ks[i] + ks[j] * ks[j] + ks[k] * ks[k];
            (1.0 + k2).powf(order) * sq
        });
        s * grid.volume()
    }

    /// Max of |f| over the collocation points.
    pub fn sup_norm(&self) -> f64 {
        self.to_physical().par_iter().map(|c| c.norm()).reduce(|| 0.0, f64::max)
    }

    /// Physical-space inner product `∫ f ḡ dx` computed via Parseval.
    pub fn inner(&self, other: &SpectralField) -> Complex64 {
        let (a, b) = (&self.coeffs, &other.coeffs);
        let re = ordered_sum(a.len(), |i| (a[i] * b[i].conj()).re);
        let im = ordered_sum(a.len(), |i| (a[i] * b[i].conj()).im);
        Complex64::new(re, im) * self.grid.volume()
    }
}

/// Inverse transforms of real (Hermitian) fields, two per complex FFT:
/// `a + ib` is transformed and the real and imaginary parts separate.
pub fn to_real_batch(fields: &[&SpectralField]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        let [a, b] = match pair {
            [a, b] => [*a, *b],
            [a] => {
                out.push(a.to_real());
                continue;
            }
            _ => unreachable!(),
        };
        assert!(a.grid.same_as(&b.grid), "batch across grids");
        let mut data: Vec<Complex64> =
            a.coeffs.par_iter().zip(b.coeffs.par_iter()).map(|(&x, &y)| x + I * y).collect();
        fft3(&mut data, a.grid.n(), Direction::Inverse);
        let (re, im): (Vec<f64>, Vec<f64>) = data.into_par_iter().map(|z| (z.re, z.im)).unzip();
        out.push(re);
        out.push(im);
    }
    out
}

/// Forward transforms of real sample arrays, two per complex FFT, with
/// the halves recovered from `X(k) = (Z(k) + conj Z(-k))/2`.
pub fn from_real_batch(grid: Grid3, samples: &[&[f64]]) -> Vec<SpectralField> {
    let n = grid.n();
    let mut out = Vec::with_capacity(samples.len());
    for pair in samples.chunks(2) {
        let [x, y] = match pair {
            [x, y] => [*x, *y],
            [x] => {
                out.push(SpectralField::from_real(grid, x).expect("sized by grid"));
                continue;
            }
            _ => unreachable!(),
        };
        assert!(x.len() == grid.len() && y.len() == grid.len(), "samples not sized by grid");
        let mut z: Vec<Complex64> = x.par_iter().zip(y.par_iter()).map(|(&a, &b)| Complex64::new(a, b)).collect();
        fft3(&mut z, n, Direction::Forward);
        let mut xa = vec![ZERO; grid.len()];
        let mut ya = vec![ZERO; grid.len()];
        xa.par_chunks_mut(n).zip(ya.par_chunks_mut(n)).enumerate().for_each(|(row, (xr, yr))| {
            let (i, j) = (row / n, row % n);
            let mirror = ((n - i) % n * n + (n - j) % n) * n;
            let zr = &z[row * n..(row + 1) * n];
            for k in 0..n {
                let w = z[mirror + (n - k) % n].conj();
                xr[k] = (zr[k] + w) * 0.5;
                yr[k] = (zr[k] - w) * Complex64::new(0.0, -0.5);
            }
        });
        out.push(SpectralField { grid, coeffs: xa });
        out.push(SpectralField { grid, coeffs: ya });
    }
    out
}

const SUM_CHUNK: usize = 4096;

/// Parallel sum with a fixed association order, so the result does not
/// depend on how rayon schedules the work.
pub(crate) fn ordered_sum(len: usize, term: impl Fn(usize) -> f64 + Sync) -> f64 {
    let partials: Vec<f64> = (0..len.div_ceil(SUM_CHUNK))
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * SUM_CHUNK).min(len);
            (c * SUM_CHUNK..end).map(&term).sum::<f64>()
        })
        .collect();
    partials.iter().sum()
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        assert!(self.grid.same_as(&rhs.grid), "addition across grids");
        self.coeffs.par_iter_mut().zip(rhs.coeffs.par_iter()).for_each(|(a, b)| *a += b);
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        assert!(self.grid.same_as(&rhs.grid), "subtraction across grids");
        self.coeffs.par_iter_mut().zip(rhs.coeffs.par_iter()).for_each(|(a, b)| *a -= b);
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}

/// Pointwise physical product of 2–4 factors, transformed back and dealiased.
pub fn dealias_product(fs: &[&SpectralField]) -> Result<SpectralField> {
    if !(2..=4).contains(&fs.len()) {
        return Err(Error::InvalidArgument(format!("dealias_product takes 2-4 factors, got {}", fs.len())));
    }
    let grid = *fs[0].grid();
    for f in &fs[1..] {
        fs[0].check_grid(f)?;
    }
    let mut acc = fs[0].to_physical();
    for f in &fs[1..] {
        let p = f.to_physical();
        acc.par_iter_mut().zip(p.par_iter()).for_each(|(a, b)| *a *= b);
    }
    let mut out = SpectralField::from_complex_physical(grid, acc);
    out.dealias_in_place();
    Ok(out)
}

/// Three spectral components on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3 {
    components: [SpectralField; 3],
}

impl VectorField3 {
    pub fn new(components: [SpectralField; 3]) -> Self {
        assert!(
            components[0].grid().same_as(components[1].grid()) && components[0].grid().same_as(components[2].grid()),
            "vector components on different grids"
        );
        Self { components }
    }

    pub fn try_new(components: [SpectralField; 3]) -> Result<Self> {
        components[0].check_grid(&components[1])?;
        components[0].check_grid(&components[2])?;
        Ok(Self { components })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self::new([SpectralField::zeros(grid), SpectralField::zeros(grid), SpectralField::zeros(grid)])
    }

    pub fn from_fn(grid: Grid3, f: impl Fn([f64; 3]) -> [f64; 3] + Sync) -> Self {
        Self::new([
            SpectralField::from_fn(grid, |x| f(x)[0]),
            SpectralField::from_fn(grid, |x| f(x)[1]),
            SpectralField::from_fn(grid, |x| f(x)[2]),
        ])
    }

    #[inline]
    pub fn grid(&self) -> &Grid3 {
        self.components[0].grid()
    }

    #[inline]
    pub fn component(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    #[inline]
    pub fn component_mut(&mut self, i: usize) -> &mut SpectralField {
        &mut self.components[i]
    }

    pub fn components(&self) -> &[SpectralField; 3] {
        &self.components
    }

    pub fn into_components(self) -> [SpectralField; 3] {
        self.components
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> VectorField3 {
        VectorField3::new([f(&self.components[0]), f(&self.components[1]), f(&self.components[2])])
    }

    pub fn divergence(&self) -> SpectralField {
        let c = &self.components;
        SpectralField::divergence_of([&c[0], &c[1], &c[2]])
    }

    pub fn curl(&self) -> VectorField3 {
        let c = &self.components;
        VectorField3::new([
            &c[2].differentiate(Axis::X2, 1) - &c[1].differentiate(Axis::X3, 1),
            &c[0].differentiate(Axis::X3, 1) - &c[2].differentiate(Axis::X1, 1),
            &c[1].differentiate(Axis::X1, 1) - &c[0].differentiate(Axis::X2, 1),
        ])
    }

    pub fn dealiased(&self) -> VectorField3 {
        self.map(SpectralField::dealiased)
    }

    pub fn scaled(&self, a: f64) -> VectorField3 {
        self.map(|f| f.scaled(a))
    }

    pub fn axpy(&mut self, a: f64, x: &VectorField3) {
        for (s, v) in self.components.iter_mut().zip(x.components.iter()) {
            s.axpy(a, v);
        }
    }

    pub fn sobolev_norm(&self, order: f64) -> f64 {
        self.components.iter().map(|c| c.weighted_sum_sq(order)).sum::<f64>().sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// Max over grid points of the Euclidean norm of the (complex) vector.
    pub fn sup_norm(&self) -> f64 {
        let p: Vec<Vec<Complex64>> = self.components.iter().map(|c| c.to_physical()).collect();
        (0..p[0].len())
            .into_par_iter()
            .map(|i| (p[0][i].norm_sqr() + p[1][i].norm_sqr() + p[2][i].norm_sqr()).sqrt())
            .reduce(|| 0.0, f64::max)
    }

    pub fn to_real(&self) -> [Vec<f64>; 3] {
        let c = &self.components;
        to_real_batch(&[&c[0], &c[1], &c[2]]).try_into().expect("three components")
    }

    pub fn mean(&self) -> [Complex64; 3] {
        [self.components[0].mean(), self.components[1].mean(), self.components[2].mean()]
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(SpectralField::is_finite)
    }
}

impl Add for &VectorField3 {
    type Output = VectorField3;
    fn add(self, rhs: &VectorField3) -> VectorField3 {
        VectorField3::new([
            &self.components[0] + &rhs.components[0],
            &self.components[1] + &rhs.components[1],
            &self.components[2] + &rhs.components[2],
        ])
    }
}

impl Sub for &VectorField3 {
    type Output = VectorField3;
    fn sub(self, rhs: &VectorField3) -> VectorField3 {
        VectorField3::new([
            &self.components[0] - &rhs.components[0],
            &self.components[1] - &rhs.components[1],
            &self.components[2] - &rhs.components[2],
        ])
    }
}

impl AddAssign<&VectorField3> for VectorField3 {
    fn add_assign(&mut self, rhs: &VectorField3) {
        for (a, b) in self.components.iter_mut().zip(rhs.components.iter()) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn grid() -> Grid3 {
        Grid3::new(16, 1.0).unwrap()
    }

    #[test]
    fn constant_field_is_pure_dc() {
        let g = grid();
        let f = SpectralField::from_real(g, &vec![1.0; g.len()]).unwrap();
        assert!(close(f.mean().re, 1.0, 1e-15));
        assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn cosine_has_two_equal_modes() {
        let g = grid();
        let f = SpectralField::from_fn(g, |x| x[0].cos());
        let plus = f.coeffs()[g.flat(1, 0, 0)];
        let minus = f.coeffs()[g.flat(15, 0, 0)];
        assert!(close(plus.re, 0.5, 1e-14) && close(minus.re, 0.5, 1e-14));
        let rest: f64 = f.coeffs().iter().map(|c| c.norm()).sum::<f64>() - plus.norm() - minus.norm();
        assert!(rest < 1e-13);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g = grid();
        assert!(matches!(SpectralField::from_real(g, &[0.0; 10]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn derivative_examples() {
        let g = grid();
        let f = SpectralField::from_fn(g, |x| x[0].cos());
        let d1 = f.differentiate(Axis::X1, 1);
        let expect = SpectralField::from_fn(g, |x| -x[0].sin());
        assert!((&d1 - &expect).max_abs_coeff() < 1e-14);
        assert!(f.differentiate(Axis::X2, 1).max_abs_coeff() < 1e-15);

        // e^{i3x1}: second derivative is -9 times itself.
        let mut e3 = SpectralField::zeros(g);
        e3.coeffs_mut()[g.flat(3, 0, 0)] = Complex64::new(1.0, 0.0);
        let dd = e3.differentiate(Axis::X1, 2);
        assert!((dd.coeffs()[g.flat(3, 0, 0)] - Complex64::new(-9.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn odd_derivative_kills_nyquist() {
        let g = grid();
        let mut f = SpectralField::zeros(g);
        f.coeffs_mut()[g.flat(8, 0, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(f.differentiate(Axis::X1, 1).max_abs_coeff(), 0.0);
        assert!(f.differentiate(Axis::X1, 2).max_abs_coeff() > 0.0);
    }

    #[test]
    fn cos_squared_product() {
        let g = grid();
        let f = SpectralField::from_fn(g, |x| x[0].cos());
        let p = dealias_product(&[&f, &f]).unwrap();
        let expect = SpectralField::from_fn(g, |x| 0.5 + 0.5 * (2.0 * x[0]).cos());
        assert!((&p - &expect).max_abs_coeff() < 1e-15);
    }

    #[test]
    fn product_with_one_is_dealias() {
        let g = grid();
        let f = SpectralField::from_fn(g, |x| (x[0] + 2.0 * x[1]).sin() + (7.0 * x[2]).cos());
        let one = SpectralField::from_fn(g, |_| 1.0);
        let p = dealias_product(&[&f, &one]).unwrap();
        assert!((&p - &f.dealiased()).max_abs_coeff() < 1e-15);
        // 7 > cutoff 5 on n = 16
        assert!(p.coeffs()[g.flat(0, 0, 7)].norm() == 0.0);
    }

    #[test]
    fn product_arity_and_grid_checks() {
        let g = grid();
        let f = SpectralField::zeros(g);
        assert!(dealias_product(&[&f]).is_err());
        let h = SpectralField::zeros(Grid3::new(8, 1.0).unwrap());
        assert!(matches!(dealias_product(&[&f, &h]), Err(Error::GridMismatch)));
    }

    #[test]
    fn sobolev_examples() {
        let g = grid();
        assert_eq!(SpectralField::zeros(g).sobolev_norm(2.0), 0.0);
        let mut e = SpectralField::zeros(g);
        e.coeffs_mut()[g.flat(1, 0, 0)] = Complex64::new(1.0, 0.0);
        let l2 = e.l2_norm();
        assert!(close(e.sobolev_norm(1.0), 2f64.sqrt() * l2, 1e-12 * l2));
        assert!(close(l2, g.volume().sqrt(), 1e-12));
    }

    #[test]
    fn sup_norm_examples() {
        let g = grid();
        assert!(close(SpectralField::from_fn(g, |x| x[0].cos()).sup_norm(), 1.0, 1e-14));
        assert_eq!(SpectralField::zeros(g).sup_norm(), 0.0);
    }
}

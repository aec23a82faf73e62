//! Littlewood–Paley shells and the physical-space localizations `Q_jk`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid3, SpectralField};

/// Even radial cutoff: `1` on `[0, 1]`, `0` on `[2, ∞)`, C∞ in between.
///
/// The transition is `g(2-r) / (g(2-r) + g(r-1))` with `g(s) = e^{-1/s}`
/// for `s > 0` and `g = 0` otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Mollifier;

impl Mollifier {
    #[inline]
    fn g(s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            (-1.0 / s).exp()
        }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r <= 1.0 {
            1.0
        } else if r >= 2.0 {
            0.0
        } else {
            let a = Self::g(2.0 - r);
            a / (a + Self::g(r - 1.0))
        }
    }

    /// `φ(r/2^k)`.
    #[inline]
    pub fn leq(&self, k: i32, r: f64) -> f64 {
        self.eval(r * (-k as f64).exp2())
    }

    /// `φ_k(r) = φ(r/2^k) - φ(r/2^{k-1})`.
    #[inline]
    pub fn shell(&self, k: i32, r: f64) -> f64 {
        self.leq(k, r) - self.leq(k - 1, r)
    }
}

/// Frequency shell `P_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicProjector {
    pub k: i32,
    pub mollifier: Mollifier,
}

impl DyadicProjector {
    pub fn new(k: i32) -> Self {
        Self { k, mollifier: Mollifier }
    }

    #[inline]
    pub fn symbol(&self, xi: [f64; 3]) -> f64 {
        self.mollifier.shell(self.k, norm(xi))
    }

    pub fn apply(&self, f: &SpectralField) -> SpectralField {
        lp_project(f, self.k)
    }
}

/// Range of shell indices that meet the grid's nonzero wave numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellRange {
    pub kmin: i32,
    pub kmax: i32,
}

impl ShellRange {
    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.kmin..=self.kmax
    }

    pub fn contains(&self, k: i32) -> bool {
        (self.kmin..=self.kmax).contains(&k)
    }
}

/// Shells `k` with `φ_k` nonzero somewhere on the grid: from
/// `floor(log2 ξ_min)` to `ceil(log2 ξ_max)` where `ξ_max` is the corner of
/// the full (undealiased) cube.
pub fn resolved_shells(grid: &Grid3) -> ShellRange {
    let xi_min = grid.min_wavenumber();
    let xi_max = 3f64.sqrt() * (grid.n() / 2) as f64 / grid.box_length();
    ShellRange { kmin: xi_min.log2().floor() as i32, kmax: xi_max.log2().ceil() as i32 }
}

#[inline]
fn norm(xi: [f64; 3]) -> f64 {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// `P_k f`.
pub fn lp_project(f: &SpectralField, k: i32) -> SpectralField {
    let m = Mollifier;
    f.apply_symbol(|xi| Complex64::new(m.shell(k, norm(xi)), 0.0))
}

/// `P_{≤k} f`, symbol `φ(|ξ|/2^k)`; keeps the mean.
pub fn lp_project_leq(f: &SpectralField, k: i32) -> SpectralField {
    let m = Mollifier;
    f.apply_symbol(|xi| Complex64::new(m.leq(k, norm(xi)), 0.0))
}

/// `P_{>k} f = f - P_{≤k} f`.
pub fn lp_project_gt(f: &SpectralField, k: i32) -> SpectralField {
    let m = Mollifier;
    f.apply_symbol(|xi| Complex64::new(1.0 - m.leq(k, norm(xi)), 0.0))
}

/// Largest `j` needed for the `Q_jk` partition to cover the box:
/// `2^J ≥ √3·π·box_length`.
pub fn max_localization_index(grid: &Grid3) -> i32 {
    (3f64.sqrt() * std::f64::consts::PI * grid.box_length()).log2().ceil() as i32
}

/// First admissible `j` for shell `k`.
pub fn min_localization_index(k: i32) -> i32 {
    (-k).max(0)
}

/// Physical cutoff `φ̃_j^{(k)}(|x|)`.
pub fn localization_cutoff(j: i32, k: i32, r: f64) -> f64 {
    let m = Mollifier;
    if k + j == 0 && k <= 0 {
        m.leq(-k, r)
    } else if j == 0 && k >= 0 {
        m.eval(r)
    } else {
        m.shell(j, r)
    }
}

/// `Q_jk f = φ̃_j^{(k)}(x)·P_k f(x)` with radial cutoffs centred at the
/// origin. Requires `j ≥ 0` and `k + j ≥ 0`.
pub fn q_project(f: &SpectralField, j: i32, k: i32) -> Result<SpectralField> {
    if j < 0 || k + j < 0 {
        return Err(Error::InvalidLocalization { k, j });
    }
    let grid = *f.grid();
    let pk = lp_project(f, k).to_physical();
    let xs = grid.coords();
    let n = grid.n();
    let data: Vec<Complex64> = pk
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let (a, b, c) = (idx / (n * n), (idx / n) % n, idx % n);
            let r = (xs[a] * xs[a] + xs[b] * xs[b] + xs[c] * xs[c]).sqrt();
            v * localization_cutoff(j, k, r)
        })
        .collect();
    Ok(SpectralField::from_complex_physical(grid, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mollifier_shape() {
        let m = Mollifier;
        assert_eq!(m.eval(0.0), 1.0);
        assert_eq!(m.eval(1.0), 1.0);
        assert_eq!(m.eval(2.0), 0.0);
        assert!((m.eval(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(m.eval(-1.3), m.eval(1.3));
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = m.eval(1.0 + i as f64 / 100.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn shells_partition_unity_away_from_zero() {
        let m = Mollifier;
        for i in 1..500 {
            let r = 0.05 * i as f64;
            let s: f64 = (-6..=8).map(|k| m.shell(k, r)).sum();
            assert!((s - 1.0).abs() < 1e-12, "r={r} sum={s}");
        }
    }

    #[test]
    fn localization_rejects_inadmissible_pairs() {
        let g = Grid3::new(8, 1.0).unwrap();
        let f = SpectralField::zeros(g);
        assert!(matches!(q_project(&f, -1, 3), Err(Error::InvalidLocalization { .. })));
        assert!(matches!(q_project(&f, 1, -2), Err(Error::InvalidLocalization { .. })));
        assert!(q_project(&f, 2, -2).is_ok());
    }

    #[test]
    fn boundary_branch() {
        // k + j = 0 with k < 0 uses φ(r/2^j), not the annulus.
        assert_eq!(localization_cutoff(2, -2, 0.0), 1.0);
        assert_eq!(localization_cutoff(3, -2, 0.0), 0.0);
    }
}

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic cube of side `2π·box_length` sampled with `points_per_axis`
/// points along each axis.
///
/// Wave numbers along an axis are `m / box_length` with `m` in standard FFT
/// order (`0, 1, …, n/2-1, -n/2, …, -1`). Physical sample `i` sits at the
/// signed coordinate `x = m(i)·dx`, so the origin is index 0 and the box is
/// `[-π·box_length, π·box_length)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct Grid3 {
    points_per_axis: usize,
    box_length: f64,
    dealias_fraction: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    points_per_axis: usize,
    box_length: f64,
    #[serde(default = "default_dealias")]
    dealias_fraction: f64,
}

fn default_dealias() -> f64 {
    Grid3::DEFAULT_DEALIAS
}

impl TryFrom<RawGrid> for Grid3 {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        Grid3::with_dealias(r.points_per_axis, r.box_length, r.dealias_fraction)
    }
}

impl From<Grid3> for RawGrid {
    fn from(g: Grid3) -> Self {
        RawGrid { points_per_axis: g.points_per_axis, box_length: g.box_length, dealias_fraction: g.dealias_fraction }
    }
}

impl Grid3 {
    pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

    pub fn new(points_per_axis: usize, box_length: f64) -> Result<Self> {
        Self::with_dealias(points_per_axis, box_length, Self::DEFAULT_DEALIAS)
    }

    pub fn with_dealias(points_per_axis: usize, box_length: f64, dealias_fraction: f64) -> Result<Self> {
        if points_per_axis < 8 || !points_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis must be even and >= 8, got {points_per_axis}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!("box_length must be positive, got {box_length}")));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias_fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        Ok(Self { points_per_axis, box_length, dealias_fraction })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.points_per_axis
    }

    #[inline]
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    #[inline]
    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(3)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn side(&self) -> f64 {
        2.0 * PI * self.box_length
    }

    pub fn volume(&self) -> f64 {
        self.side().powi(3)
    }

    pub fn spacing(&self) -> f64 {
        self.side() / self.points_per_axis as f64
    }

    /// Signed integer mode number of FFT index `i`.
    #[inline]
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.points_per_axis;
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    #[inline]
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.points_per_axis / 2
    }

    /// Wave number of FFT index `i` along any axis.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> f64 {
        self.mode(i) as f64 / self.box_length
    }

    /// Signed physical coordinate of sample `i` along any axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.mode(i) as f64 * self.spacing()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.wavenumber(i)).collect()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.coord(i)).collect()
    }

    #[inline]
    pub fn flat(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.points_per_axis + j) * self.points_per_axis + k
    }

    #[inline]
    pub fn unflat(&self, idx: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    /// Wave vector of flat index `idx`.
    #[inline]
    pub fn wave_vector(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.unflat(idx);
        [self.wavenumber(i), self.wavenumber(j), self.wavenumber(k)]
    }

    /// Flat index of the mode `-ξ`.
    #[inline]
    pub fn reflect(&self, idx: usize) -> usize {
        let n = self.points_per_axis;
        let [i, j, k] = self.unflat(idx);
        self.flat((n - i) % n, (n - j) % n, (n - k) % n)
    }

    /// Largest retained |m| per axis under the dealiasing rule.
    ///
    /// A mode survives iff `|m| < dealias_fraction · n/2`; for the 2/3 rule
    /// this gives `3·cutoff < n`, the alias-free condition for quadratic
    /// products.
    pub fn dealias_cutoff(&self) -> i64 {
        let bound = self.dealias_fraction * (self.points_per_axis as f64 / 2.0);
        (bound.ceil() as i64 - 1).max(0)
    }

    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        let c = self.dealias_cutoff();
        let [i, j, k] = self.unflat(idx);
        self.mode(i).abs() <= c && self.mode(j).abs() <= c && self.mode(k).abs() <= c
    }

    /// Largest resolved |ξ| (corner of the retained cube).
    pub fn max_resolved_wavenumber(&self) -> f64 {
        3f64.sqrt() * self.dealias_cutoff() as f64 / self.box_length
    }

    /// Smallest nonzero |ξ|.
    pub fn min_wavenumber(&self) -> f64 {
        1.0 / self.box_length
    }

    pub fn same_as(&self, other: &Grid3) -> bool {
        self == other
    }
}

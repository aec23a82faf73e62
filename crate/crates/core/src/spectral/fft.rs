//! Three-dimensional complex FFT built from batched 1-D `rustfft` plans.
//!
//! Forward transforms carry the `1/n³` factor, inverse transforms carry none.
//! Every line is transformed by the same plan regardless of how rayon splits
//! the work, so results are bitwise independent of the thread count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

static PLANS: Lazy<Mutex<HashMap<(usize, bool), Plan>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, forward: bool) -> Plan {
    let mut cache = PLANS.lock().expect("fft plan cache poisoned");
    cache
        .entry((n, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if forward {
                planner.plan_fft_forward(n)
            } else {
                planner.plan_fft_inverse(n)
            }
        })
        .clone()
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Lines per rayon task; keeps scratch allocation amortized.
const BATCH: usize = 64;

fn transform_lines(lines: &mut [Complex64], n: usize, fft: &Plan) {
    lines.par_chunks_mut(n * BATCH).for_each(|chunk| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(chunk, &mut scratch);
    });
}

/// In-place 3-D transform of an `n³` row-major array.
pub(crate) fn fft3(data: &mut [Complex64], n: usize, dir: Direction) {
    debug_assert_eq!(data.len(), n * n * n);
    let fft = plan(n, dir == Direction::Forward);
    let nn = n * n;

    // Axis 2 is contiguous.
    transform_lines(data, n, &fft);

    // Axis 1: gather lines (i, k) -> buffer, transform, scatter back.
    let mut lines = vec![Complex64::new(0.0, 0.0); data.len()];
    {
        let src = &*data;
        lines.par_chunks_mut(n).enumerate().for_each(|(l, line)| {
            let (i, k) = (l / n, l % n);
            for (j, out) in line.iter_mut().enumerate() {
                *out = src[i * nn + j * n + k];
            }
        });
    }
    transform_lines(&mut lines, n, &fft);
    {
        let src = &lines;
        data.par_chunks_mut(n).enumerate().for_each(|(row, out)| {
            let (i, j) = (row / n, row % n);
            for (k, o) in out.iter_mut().enumerate() {
                *o = src[(i * n + k) * n + j];
            }
        });
    }

    // Axis 0: lines indexed by (j, k).
    {
        let src = &*data;
        lines.par_chunks_mut(n).enumerate().for_each(|(l, line)| {
            for (i, out) in line.iter_mut().enumerate() {
                *out = src[i * nn + l];
            }
        });
    }
    transform_lines(&mut lines, n, &fft);
    {
        let src = &lines;
        data.par_chunks_mut(n).enumerate().for_each(|(row, out)| {
            let (i, j) = (row / n, row % n);
            for (k, o) in out.iter_mut().enumerate() {
                *o = src[(j * n + k) * n + i];
            }
        });
    }

    if dir == Direction::Forward {
        let scale = 1.0 / (nn * n) as f64;
        data.par_iter_mut().for_each(|c| *c *= scale);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(data: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        let w = -2.0 * std::f64::consts::PI / n as f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let ph = w * ((a * i + b * j + c * k) % n) as f64;
                                acc += data[(i * n + j) * n + k] * Complex64::from_polar(1.0, ph);
                            }
                        }
                    }
                    out[(a * n + b) * n + c] = acc / (n * n * n) as f64;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 4;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let mut fast = data.clone();
        fft3(&mut fast, n, Direction::Forward);
        let slow = naive_dft(&data, n);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-13);
        }
        fft3(&mut fast, n, Direction::Inverse);
        for (a, b) in fast.iter().zip(&data) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}

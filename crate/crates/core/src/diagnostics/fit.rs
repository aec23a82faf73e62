//! Log-log least-squares decay fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub quantity: String,
    pub window: [f64; 2],
    pub samples: usize,
    /// Fitted exponent `p` in `y ≈ C t^p`.
    pub slope: f64,
    pub stderr: f64,
    pub prefactor: f64,
    pub reference_exponent: Option<f64>,
    pub reference_source: Option<String>,
}

impl DecayFit {
    /// `|slope - reference| ≤ tol`, false without a reference.
    pub fn passes(&self, tol: f64) -> bool {
        self.reference_exponent.is_some_and(|r| (self.slope - r).abs() <= tol)
    }

    pub fn with_reference(mut self, exponent: f64, source: impl Into<String>) -> Self {
        self.reference_exponent = Some(exponent);
        self.reference_source = Some(source.into());
        self
    }
}

/// Fits `log y = log C + p log t` over samples with `t` in `window`.
pub fn decay_fit(quantity: &str, times: &[f64], values: &[f64], window: [f64; 2]) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(Error::InvalidSeries(format!("{} times but {} values", times.len(), values.len())));
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window[0] && **t <= window[1])
        .map(|(&t, &y)| (t, y))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::InvalidSeries(format!(
            "{} samples in [{}, {}], need at least {MIN_FIT_SAMPLES}",
            pts.len(),
            window[0],
            window[1]
        )));
    }
    if let Some((t, y)) = pts.iter().find(|(t, y)| !(*t > 0.0 && *y > 0.0 && y.is_finite())) {
        return Err(Error::InvalidSeries(format!("non-positive sample ({t}, {y}) in a log fit")));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidSeries("all samples at the same time".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(DecayFit {
        quantity: quantity.to_string(),
        window,
        samples: pts.len(),
        slope,
        stderr,
        prefactor: intercept.exp(),
        reference_exponent: None,
        reference_source: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let ts: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let ys: Vec<f64> = ts.iter().map(|t| 3.0 * t.powf(-1.5)).collect();
        let f = decay_fit("y", &ts, &ys, [2.0, 18.0]).unwrap().with_reference(-1.5, "exact");
        assert!((f.slope + 1.5).abs() < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-10);
        assert!(f.stderr < 1e-12);
        assert_eq!(f.samples, 17);
        assert!(f.passes(1e-9));
    }

    #[test]
    fn rejects_short_or_bad_series() {
        let ts: Vec<f64> = (1..=5).map(|i| i as f64).collect();
        assert!(decay_fit("y", &ts, &ts, [0.0, 10.0]).is_err());
        let ts: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let mut ys = ts.clone();
        ys[3] = 0.0;
        assert!(decay_fit("y", &ts, &ys, [0.0, 10.0]).is_err());
        assert!(decay_fit("y", &ts, &ys[..9], [0.0, 10.0]).is_err());
    }
}

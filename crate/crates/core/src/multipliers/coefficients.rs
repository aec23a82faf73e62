use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leslie coefficients `(ν1, ν4, ν5)` of the model with `ν2 = ν3 = 0`,
/// `ν6 = ν5` and no kinematic transport (`λ1 = λ2 = 0`).
///
/// Construction enforces `ν4 > 0`, `ν1 > -2(ν4+ν5)` and `ν5 > -ν4`; these
/// make every diagonal entry of `L(ξ)` strictly positive for `ξ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients", into = "RawCoefficients")]
pub struct Coefficients {
    nu1: f64,
    nu4: f64,
    nu5: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoefficients {
    nu1: f64,
    nu4: f64,
    nu5: f64,
}

impl TryFrom<RawCoefficients> for Coefficients {
    type Error = Error;
    fn try_from(r: RawCoefficients) -> Result<Self> {
        Coefficients::new(r.nu1, r.nu4, r.nu5)
    }
}

impl From<Coefficients> for RawCoefficients {
    fn from(c: Coefficients) -> Self {
        RawCoefficients { nu1: c.nu1, nu4: c.nu4, nu5: c.nu5 }
    }
}

impl Coefficients {
    pub fn new(nu1: f64, nu4: f64, nu5: f64) -> Result<Self> {
        let violations = Self::violations(nu1, nu4, nu5);
        if violations.is_empty() {
            Ok(Self { nu1, nu4, nu5 })
        } else {
            Err(Error::InadmissibleCoefficients { violations })
        }
    }

    /// Human-readable list of violated admissibility inequalities.
    pub fn violations(nu1: f64, nu4: f64, nu5: f64) -> Vec<String> {
        let mut v = Vec::new();
        if !(nu1.is_finite() && nu4.is_finite() && nu5.is_finite()) {
            v.push("coefficients must be finite".to_string());
            return v;
        }
        if !(nu4 > 0.0) {
            v.push(format!("ν4>0 violated (ν4 = {nu4})"));
        }
        if !(nu1 > -2.0 * (nu4 + nu5)) {
            v.push(format!("ν1>-2(ν4+ν5) violated (ν1 = {nu1}, -2(ν4+ν5) = {})", -2.0 * (nu4 + nu5)));
        }
        if !(nu5 > -nu4) {
            v.push(format!("ν5>-ν4 violated (ν5 = {nu5}, -ν4 = {})", -nu4));
        }
        v
    }

    #[inline]
    pub fn nu1(&self) -> f64 {
        self.nu1
    }

    #[inline]
    pub fn nu4(&self) -> f64 {
        self.nu4
    }

    #[inline]
    pub fn nu5(&self) -> f64 {
        self.nu5
    }

    /// Constant `c12` with `L_11(ξ) = L_22(ξ) ≥ c12·|ξ|²`:
    /// `(ν4+ν5)/2 · min{1, 1 + ν1/(2(ν4+ν5))}`.
    pub fn lower_bound_transverse(&self) -> f64 {
        let s = self.nu4 + self.nu5;
        0.5 * s * f64::min(1.0, 1.0 + self.nu1 / (2.0 * s))
    }

    /// Constant `c3` with `L_33(ξ) ≥ c3·|ξ|²`: `min{(ν4+ν5)/2, ν4/2}`.
    pub fn lower_bound_third(&self) -> f64 {
        f64::min(0.5 * (self.nu4 + self.nu5), 0.5 * self.nu4)
    }

    /// Uniform parabolicity constant: `min(c12, c3)`.
    pub fn parabolicity(&self) -> f64 {
        self.lower_bound_transverse().min(self.lower_bound_third())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_is_strict() {
        assert!(Coefficients::new(1.0, 2.0, 1.0).is_ok());
        let e = Coefficients::new(0.0, -1.0, 0.0).unwrap_err().to_string();
        assert!(e.contains("ν4>0"), "{e}");
        // boundary of the second inequality is excluded
        let e = Coefficients::new(-6.0, 2.0, 1.0).unwrap_err().to_string();
        assert!(e.contains("ν1>-2(ν4+ν5)"), "{e}");
        let e = Coefficients::new(0.0, 1.0, -1.0).unwrap_err().to_string();
        assert!(e.contains("ν5>-ν4"), "{e}");
    }

    #[test]
    fn serde_validates() {
        let ok: Coefficients = serde_json::from_str(r#"{"nu1":1,"nu4":2,"nu5":1}"#).unwrap();
        assert_eq!(ok.nu4(), 2.0);
        assert!(serde_json::from_str::<Coefficients>(r#"{"nu1":1,"nu4":-2,"nu5":1}"#).is_err());
    }
}

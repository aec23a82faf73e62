//! Commuting vector fields and the higher-order energies `E^a`.

use serde::{Deserialize, Serialize};

use super::energy::{dissipation_rate, velocity_sum, wave_sum};
use crate::error::{Error, Result};
use crate::multipliers::{abs_grad, apply_diagonalizer, Coefficients, Mollifier};
use crate::physics::rhs_angle_system_with_velocity;
use crate::spectral::{Axis, Grid3, SpectralField, VectorField3};
use crate::timestepper::SimulationState;

/// One letter of a vector-field word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// `∂t`
    Dt,
    /// `∂_i`, axis index `0..3`.
    D(usize),
    /// Rotation `Ω̃_i = x ∧ ∇` plus the matrix part on vectors, axis `0..3`.
    Omega(usize),
}

/// A word `Z^a = Z_1 ⋯ Z_m`, applied right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses letters like `Dt D1 O3`, separated by whitespace or `*`.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .split(|c: char| c.is_whitespace() || c == '*')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let axis = |rest: &str| match rest {
                    "1" => Ok(0),
                    "2" => Ok(1),
                    "3" => Ok(2),
                    _ => Err(Error::UnsupportedWord(format!("bad axis in letter {t:?}"))),
                };
                match t {
                    "Dt" => Ok(Letter::Dt),
                    _ if t.starts_with('D') => axis(&t[1..]).map(Letter::D),
                    _ if t.starts_with('O') => axis(&t[1..]).map(Letter::Omega),
                    _ => Err(Error::UnsupportedWord(format!("unknown letter {t:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let w = Self(letters);
        w.check()?;
        Ok(w)
    }

    fn check(&self) -> Result<()> {
        if self.0.iter().filter(|l| **l == Letter::Dt).count() > 1 {
            return Err(Error::UnsupportedWord("at most one Dt per word".into()));
        }
        if let Some(bad) = self.0.iter().find(|l| matches!(l, Letter::D(i) | Letter::Omega(i) if *i > 2)) {
            return Err(Error::UnsupportedWord(format!("axis out of range in {bad:?}")));
        }
        Ok(())
    }
}

/// Separable cutoff in `[0, 1]`: `1` where every `|x_i| ≤ πL/2` and `0`
/// where some `|x_i| ≥ 0.9 πL`.
pub fn box_window(grid: &Grid3, x: [f64; 3]) -> f64 {
    let half = std::f64::consts::PI * grid.box_length();
    x.iter()
        .map(|xi| {
            let s = xi.abs() / half;
            Mollifier.eval(1.0 + (s - 0.5) / 0.4)
        })
        .product()
}

/// `f ↦ F(w x_j · F⁻¹(∂_k f))` on a scalar field.
fn weighted_derivative(f: &SpectralField, j: usize, k: usize) -> SpectralField {
    let grid = *f.grid();
    let mut data = f.differentiate(Axis::from_index(k), 1).to_physical();
    for (idx, z) in data.iter_mut().enumerate() {
        let [a, b, c] = grid.unflat(idx);
        let x = [grid.coord(a), grid.coord(b), grid.coord(c)];
        *z *= box_window(&grid, x) * x[j];
    }
    SpectralField::from_complex_physical(grid, data)
}

/// Windowed rotation `Ω_i f = (x ∧ ∇)_i f` on a scalar field.
pub fn rotation_scalar(f: &SpectralField, i: usize) -> SpectralField {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    &weighted_derivative(f, j, k) - &weighted_derivative(f, k, j)
}

/// `Ω̃_i u = Ω_i u + A_i u`, with `A_i u = e_i ∧ u` written as a matrix.
pub fn rotation_vector(u: &VectorField3, i: usize) -> VectorField3 {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    let mut out = u.map(|f| rotation_scalar(f, i));
    // A_i has +1 at (j, k) and -1 at (k, j).
    out.component_mut(j).axpy(1.0, u.component(k));
    out.component_mut(k).axpy(-1.0, u.component(j));
    out
}

/// `(Z^a u, Z^a Φ)` for the state. A `Dt` letter is resolved first using
/// the equations of motion, since it commutes with the spatial letters.
pub fn apply_word(c: &Coefficients, state: &SimulationState, word: &Word) -> Result<(VectorField3, [SpectralField; 2])> {
    word.check()?;
    let u = state.velocity();
    let (mut u, mut phi) = if word.0.contains(&Letter::Dt) {
        let k = rhs_angle_system_with_velocity(c, &state.angles(), &u)?;
        let phi = [0, 1].map(|a| {
            let mut d = abs_grad(&state.wave.phi[a]).scaled_complex(num_complex::Complex64::i());
            d += &k.wave_source[a];
            d
        });
        (k.du_dt, phi)
    } else {
        (u, state.wave.phi.clone())
    };
    for letter in word.0.iter().rev() {
        match *letter {
            Letter::Dt => {}
            Letter::D(i) => {
                let ax = Axis::from_index(i);
                u = u.map(|f| f.differentiate(ax, 1));
                phi = phi.map(|f| f.differentiate(ax, 1));
            }
            Letter::Omega(i) => {
                u = rotation_vector(&u, i);
                phi = phi.map(|f| rotation_scalar(&f, i));
            }
        }
    }
    Ok((u, phi))
}

/// Instantaneous parts of `E^a_v` and `E^a_φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordEnergy {
    /// `½ Σ‖∂ⁿv^{(a)}‖²`
    pub flow: f64,
    /// `Σ‖∂ⁿL^{1/2}v^{(a)}‖²`, the integrand of the dissipation part.
    pub dissipation_rate: f64,
    /// `½ Σ‖∂ⁿΦ^{(a)}‖²`
    pub wave: f64,
}

/// `E^a` for one word, with `v^{(a)} = 𝕌 Z^a u`.
pub fn energy_ea(c: &Coefficients, state: &SimulationState, word: &Word, diag_order: u32) -> Result<WordEnergy> {
    let (u, phi) = apply_word(c, state, word)?;
    let v = apply_diagonalizer(&u);
    Ok(WordEnergy {
        flow: 0.5 * velocity_sum(&v, diag_order),
        dissipation_rate: dissipation_rate(c, &v, diag_order),
        wave: 0.5 * wave_sum(&phi, diag_order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_words() {
        let w = Word::parse("Dt D1 O3").unwrap();
        assert_eq!(w.0, vec![Letter::Dt, Letter::D(0), Letter::Omega(2)]);
        assert!(Word::parse("Dt Dt").is_err());
        assert!(Word::parse("S").is_err());
        assert!(Word::parse("D4").is_err());
        assert!(Word::parse("").unwrap().is_empty());
    }

    #[test]
    fn window_is_one_inside_and_zero_outside() {
        let g = Grid3::new(16, 1.0).unwrap();
        let pi = std::f64::consts::PI;
        assert_eq!(box_window(&g, [0.4 * pi, -0.5 * pi, 0.0]), 1.0);
        assert_eq!(box_window(&g, [0.0, 0.95 * pi, 0.0]), 0.0);
        let mid = box_window(&g, [0.7 * pi, 0.0, 0.0]);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn rotation_annihilates_radial_functions_and_swirl() {
        // Narrow enough to vanish where the window turns off, wide enough
        // to be resolved.
        let g = Grid3::new(64, 2.0).unwrap();
        let bump = |x: [f64; 3]| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 0.32).exp();
        let f = SpectralField::from_fn(g, bump);
        for i in 0..3 {
            let r = rotation_scalar(&f, i).sup_norm();
            assert!(r < 1e-8, "Ω{i}: {r}");
        }
        // u = f(r)·(-x2, x1, 0) is invariant under rotations about x3.
        let u = VectorField3::from_fn(g, |x| {
            let b = bump(x);
            [-x[1] * b, x[0] * b, 0.0]
        });
        let r = rotation_vector(&u, 2).sup_norm();
        assert!(r < 1e-8, "{r}");
        assert!(rotation_vector(&u, 0).sup_norm() > 1e-2);
    }

    #[test]
    fn derivative_word_matches_closed_form() {
        // Single real mode: ½‖∂_1 Φ‖² = ½ ξ1² ‖Φ‖² with no N-derivatives.
        let g = Grid3::new(16, 1.0).unwrap();
        let c = Coefficients::new(0.0, 1.0, 0.0).unwrap();
        let mut s = SimulationState::equilibrium(g);
        s.wave.phi[0] = SpectralField::from_fn(g, |x| (2.0 * x[0] + x[2]).cos());
        let e = energy_ea(&c, &s, &Word::parse("D1").unwrap(), 0).unwrap();
        let want = 0.5 * 4.0 * s.wave.phi[0].l2_norm().powi(2);
        assert!((e.wave - want).abs() < 1e-10 * want);
        assert_eq!(e.flow, 0.0);
    }
}

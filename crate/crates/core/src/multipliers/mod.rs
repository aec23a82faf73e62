//! Fourier multipliers: Leray projection, the diagonalizer, the viscous
//! operators and their semigroup, the half-wave group and Littlewood–Paley
//! projections.

mod coefficients;
pub mod littlewood_paley;
pub mod operators;
pub mod symbols;

pub use coefficients::Coefficients;
pub use littlewood_paley::{
    localization_cutoff, lp_project, lp_project_gt, lp_project_leq, q_project, resolved_shells, DyadicProjector,
    Mollifier, ShellRange,
};
pub use operators::{
    abs_grad, abs_grad_inverse, apply_diagonalizer, apply_l, apply_lbar, apply_ltilde, apply_sqrt_l, halfwave_apply,
    leray_project, semigroup_apply,
};
pub use symbols::{
    operator_l, operator_lbar, operator_ltilde, operator_sqrt_l, u_diagonalizer, FourierSymbol, Mat3, SymbolKind,
    SymbolValue,
};

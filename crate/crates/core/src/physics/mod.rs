//! Model nonlinearities and the maps between the director, angle and
//! diagonalized formulations.

mod angle;
mod director;
mod state;
mod tensor;

pub use angle::{
    err11, err11_with_nodes, err12, err2, gauss_legendre_unit, pullback_director_tendency, quadrature_nodes_for, quadratic_coupling,
    rhs_angle_system, AngleTendency, DEFAULT_QUADRATURE_NODES,
};
#[allow(unused_imports)]
pub(crate) use angle::rhs_angle_system_with_velocity;
pub use director::{director_rk4_step, lagrange_gamma, rhs_director, DirectorFlow, DirectorTendency};
pub use state::{
    angles_to_director, director_to_angles, AngleState, DirectorState, FlowState, NormalizedWave,
    DEFAULT_CHART_MARGIN,
};
pub use tensor::{strain_tensors, stress_sigma, TensorField3};

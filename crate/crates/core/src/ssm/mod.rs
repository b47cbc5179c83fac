//! Split-step integrators and the linearized-error propagator.
//!
//! One step of the first-order scheme is a pointwise nonlinear phase rotation
//! `u -> u exp(i gamma |u|^2 dt)` followed by a dispersive step solving
//! `i u_t = beta u_xx` over `dt`. Both sub-steps conserve the discrete L2 norm.

mod linearized;
mod operators;
mod run;

pub use linearized::{propagate_linearized_error, Background};
pub use operators::{
    dispersive_step_fd_dirichlet, dispersive_step_fd_periodic, dispersive_step_fd_periodic_direct,
    dispersive_step_spectral, nonlinear_step, nonlinear_step_in_place, DispersiveKind, StepOperators,
};
pub use run::{run_split_step, BlowUp, RunOutcome, SimulationRun, Snapshot};

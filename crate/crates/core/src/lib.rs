//! Split-step integrators for the one-dimensional nonlinear Schrödinger equation
//!
//! ```text
//! i u_t - beta u_xx + gamma u |u|^2 = 0
//! ```
//!
//! together with the machinery used to study the numerical instability of the
//! finite-difference (Crank–Nicolson) split-step method on a soliton background:
//!
//! * [`numerics`]: grids, complex fields, FFTs, tridiagonal and banded solvers,
//!   seeded noise and initial-condition factories.
//! * [`ssm`]: the spectral and finite-difference split-step integrators and the
//!   propagator of the linearized numerical error.
//! * [`diagnostics`]: spectra, growth-rate estimates, unstable-mode extraction
//!   and soliton drift tracking.
//! * [`theory`]: closed-form phase symbols, stability thresholds, plane-wave
//!   growth curves and the rescaling onto the envelope eigenproblem.
//! * [`eigen`]: Numerov discretization of the envelope eigenproblem and a
//!   shift-and-invert Krylov–Schur eigensolver over a banded factorization.
//! * [`wkb`]: turning points, Bohr–Sommerfeld quantization and mode-birth scans.
//! * [`cli`]: configuration files, data emitters and the `sslab` subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod eigen;
pub mod error;
pub mod numerics;
pub mod ssm;
pub mod theory;
pub mod wkb;

pub use config::{Boundary, FdPath, NoiseKind, Scheme, SimConfig, Splitting};
pub use error::{Error, Result};
pub use numerics::{ComplexField, Grid1D};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

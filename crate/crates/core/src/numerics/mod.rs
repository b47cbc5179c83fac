//! Grids, fields, transforms, linear solvers and initial-condition factories.

mod banded;
mod fourier;
mod grid;
mod initial;
mod noise;
mod tridiagonal;

pub use banded::{BandedLu, BandedMatrix};
pub use fourier::{dft, idft, Fourier};
pub use grid::{ComplexField, Grid1D};
pub use initial::{make_plane_wave, make_soliton, make_soliton_at};
pub use noise::make_noise;
pub use tridiagonal::{solve_cyclic_tridiagonal, solve_tridiagonal, CyclicTridiagonal, Tridiagonal};

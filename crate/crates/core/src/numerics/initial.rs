use std::sync::Arc;

use super::grid::{ComplexField, Grid1D};
use crate::error::{Error, Result};
use crate::C64;

/// Soliton `A sqrt(2/gamma) sech(A x / sqrt(-beta))` at `t = 0`, centred at the origin.
pub fn make_soliton(grid: Arc<Grid1D>, amplitude: f64, beta: f64, gamma: f64) -> Result<ComplexField> {
    make_soliton_at(grid, amplitude, beta, gamma, 0.0)
}

/// Soliton centred at `x0`. Periodic images are ignored; the profile is
/// assumed to have decayed well inside the domain.
pub fn make_soliton_at(
    grid: Arc<Grid1D>,
    amplitude: f64,
    beta: f64,
    gamma: f64,
    x0: f64,
) -> Result<ComplexField> {
    if !(beta < 0.0) {
        return Err(Error::domain(format!("solitons require beta < 0, got beta = {beta}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("gamma must be positive, got {gamma}")));
    }
    let peak = amplitude * (2.0 / gamma).sqrt();
    let inv_width = amplitude / (-beta).sqrt();
    Ok(ComplexField::from_fn(grid, |x| {
        C64::new(peak / ((x - x0) * inv_width).cosh(), 0.0)
    }))
}

/// Constant plane wave `A / sqrt(gamma)` at `t = 0`.
pub fn make_plane_wave(grid: Arc<Grid1D>, amplitude: f64, gamma: f64) -> Result<ComplexField> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("gamma must be positive, got {gamma}")));
    }
    let value = C64::new(amplitude / gamma.sqrt(), 0.0);
    Ok(ComplexField::from_fn(grid, |_| value))
}

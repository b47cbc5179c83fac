//! The three dispersive sub-steps on one random field: spectral exponential,
//! Crank–Nicolson by Fourier multiplier, Crank–Nicolson by cyclic tridiagonal
//! solve, and the Dirichlet variant.
//!
//! ```bash
//! cargo run --release --example dispersive_steps
//! ```

use std::sync::Arc;

use sslab::numerics::make_noise;
use sslab::ssm::{
    dispersive_step_fd_dirichlet, dispersive_step_fd_periodic, dispersive_step_fd_periodic_direct,
    dispersive_step_spectral,
};
use sslab::{ComplexField, Grid1D, NoiseKind, C64};

fn main() -> sslab::Result<()> {
    let grid = Arc::new(Grid1D::new(40.0, 512)?);
    let (beta, dt) = (-1.0, 0.08);
    let mut u = make_noise(grid.clone(), 1.0, 42, NoiseKind::Complex)?;
    u.values_mut()[0] = C64::new(0.0, 0.0);
    let n0 = u.norm();

    let spectral = dispersive_step_spectral(&u, beta, dt);
    let multiplier = dispersive_step_fd_periodic(&u, beta, dt);
    let direct = dispersive_step_fd_periodic_direct(&u, beta, dt)?;
    let dirichlet = dispersive_step_fd_dirichlet(&u, beta, dt)?;

    let rel = |a: &ComplexField| (a.norm() - n0).abs() / n0;
    println!("relative norm change: spectral {:.2e}, multiplier {:.2e}, direct {:.2e}, Dirichlet {:.2e}",
        rel(&spectral), rel(&multiplier), rel(&direct), rel(&dirichlet));
    println!("multiplier vs direct: {:.2e}", multiplier.sub(&direct)?.max_abs() / u.max_abs());
    println!("Crank-Nicolson vs spectral: {:.2e}", multiplier.sub(&spectral)?.max_abs() / u.max_abs());
    Ok(())
}

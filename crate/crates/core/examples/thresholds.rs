//! Closed-form stability thresholds, the Crank–Nicolson phase symbol and the
//! spectral-scheme resonances for the default soliton setup.
//!
//! ```bash
//! cargo run --release --example thresholds
//! ```

use sslab::theory::{
    phase_symbol, phase_symbol_large_r, resonance_wavenumbers, threshold_fd_planewave, threshold_fd_soliton,
    threshold_ssm_spectral,
};
use sslab::SimConfig;

fn main() -> sslab::Result<()> {
    let cfg = SimConfig::default();
    let dx = cfg.dx();
    println!("dx = {dx}, k_max = {:.4}", std::f64::consts::PI / dx);
    println!("s-SSM: unstable for dt > {:.6e}", threshold_ssm_spectral(cfg.beta, dx)?);
    println!("fd-SSM plane wave, beta = -1: {:?}", threshold_fd_planewave(-1.0, 1.0, dx)?);
    println!("fd-SSM plane wave, beta = +1: {:?}", threshold_fd_planewave(1.0, 1.0, dx)?);
    println!("fd-SSM soliton: unstable for C > {}", threshold_fd_soliton(cfg.beta, cfg.amplitude)?);

    let k_max = std::f64::consts::PI / dx;
    for r in [1.0, 10.0, 100.0] {
        println!(
            "r = {r:5}: P(k_max) = {:+.8}, large-r form {:+.8}",
            phase_symbol(k_max, cfg.beta, r, dx),
            phase_symbol_large_r(k_max, cfg.beta, r, dx)
        );
    }
    println!("spectral resonances at dt = {:.4}: {:.3?}", cfg.dt(), resonance_wavenumbers(cfg.beta, cfg.dt(), 4)?);
    Ok(())
}

//! Linearized fd-SSM error on a plane-wave background: bounded for
//! `beta < 0` at any time step, unstable beyond `dx / sqrt(2 beta A^2)` for
//! `beta > 0`. Compares measured amplification with the monodromy theory.
//!
//! ```bash
//! cargo run --release --example planewave_stability
//! ```

use sslab::numerics::make_noise;
use sslab::ssm::{propagate_linearized_error, Background};
use sslab::theory::{planewave_growth_curve, threshold_fd_planewave, PlaneWaveThreshold};
use sslab::{ComplexField, Scheme, SimConfig, C64};

/// Largest `||u~(t)|| / ||u~(0)||` over the run.
fn amplification(cfg: &SimConfig) -> sslab::Result<f64> {
    let grid = cfg.grid()?;
    let noise = make_noise(grid.clone(), 1.0, 7, cfg.noise_kind)?;
    // drop the k = 0 component
    let mean = noise.values().iter().sum::<C64>() / grid.len() as f64;
    let seed = ComplexField::new(grid, noise.values().iter().map(|z| z - mean).collect())?;
    let run = propagate_linearized_error(cfg, Background::PlaneWave, &seed)?;
    let n0 = seed.norm();
    Ok(run.snapshots.iter().map(|s| s.field.norm() / n0).fold(0.0, f64::max))
}

fn main() -> sslab::Result<()> {
    let base = SimConfig { t_final: 200.0, snapshot_interval: 1.0, noise_std: 0.0, ..SimConfig::default() };

    let focusing = SimConfig { beta: -1.0, length: 4.0, n_points: 64, ..base.clone() };
    println!("beta = -1, L = 4, N = 64 (lowest k above the modulational band)");
    for c in [0.5, 1.0, 2.0, 4.0] {
        let cfg = SimConfig { ratio_c: c, ..focusing.clone() };
        println!("  C = {c:3}  max amplification over t <= 200: {:.4}", amplification(&cfg)?);
    }

    let defocusing = SimConfig { beta: 1.0, length: 6.4, n_points: 64, ..base };
    let dx = defocusing.dx();
    let PlaneWaveThreshold::Conditional(dt_th) = threshold_fd_planewave(1.0, 1.0, dx)? else {
        unreachable!("beta > 0 has a threshold")
    };
    println!("beta = +1, L = 6.4, N = 64, predicted onset dt = {dt_th:.6}");
    for f in [0.9, 0.95, 0.98, 1.0, 1.02, 1.05, 1.1] {
        let cfg = defocusing.clone().with_dt(f * dt_th);
        let ks: Vec<f64> = cfg.grid()?.wavenumbers().to_vec();
        let theory = planewave_growth_curve(Scheme::FiniteDifference, 1.0, cfg.gamma, 1.0, cfg.dt(), dx, &ks)
            .iter()
            .map(|p| p.rate)
            .fold(0.0, f64::max);
        println!("  dt = {f:.2} x onset  amplification {:.3e}  max theory rate {theory:.4e}", amplification(&cfg)?);
    }
    Ok(())
}

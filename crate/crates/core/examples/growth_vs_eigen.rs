//! Measured growth rate of the high-wavenumber band against the rate of the
//! dominant localized eigenmode.
//!
//! ```bash
//! cargo run --release --example growth_vs_eigen -- 1.05 512
//! ```

use sslab::diagnostics::{band_amplification, growth_rate, linear_stage_end, KBand, DEFAULT_BAND_FRACTION};
use sslab::eigen::{growth_rate_physical, solve_auto, EigenProblem};
use sslab::numerics::{make_noise, make_soliton};
use sslab::ssm::run_split_step;
use sslab::theory::{d_from_c, rescale_params};
use sslab::SimConfig;

fn main() -> sslab::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let c: f64 = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(1.05);
    let n: usize = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(512);
    let ceiling: f64 = args.get(3).and_then(|a| a.parse().ok()).unwrap_or(1e-3);
    let mut cfg = SimConfig { ratio_c: c, n_points: n, ..SimConfig::default() };

    let t0 = std::time::Instant::now();
    let d = d_from_c(c, cfg.beta, cfg.amplitude);
    let problem = EigenProblem::for_soliton(d, cfg.beta, cfg.amplitude, cfg.length, cfg.dx(), 0.1)?;
    let report = solve_auto(&problem, 24)?;
    let lambda_eig = growth_rate_physical(&report, &rescale_params(&cfg)?)?;
    println!("D = {d:.4}  lambda_eig = {lambda_eig:.6e}  ({:.1} s)", t0.elapsed().as_secs_f64());

    cfg.t_final = (30.0 / lambda_eig).min(3000.0);
    let grid = cfg.grid()?;
    let u0 = make_soliton(grid.clone(), cfg.amplitude, cfg.beta, cfg.gamma)?
        .add(&make_noise(grid.clone(), cfg.noise_std, cfg.rng_seed, cfg.noise_kind)?)?;
    let t0 = std::time::Instant::now();
    let run = run_split_step(&cfg, &u0)?;
    println!("simulated to t = {:.0} in {:.1} s", run.last().time, t0.elapsed().as_secs_f64());
    let band = KBand::near_k_max(grid.k_max(), DEFAULT_BAND_FRACTION);
    let t_lin = linear_stage_end(&run, band, ceiling).unwrap_or(0.0);
    let est = growth_rate(&run, band, t_lin)?;
    println!(
        "linear stage ends t = {t_lin:.0}, amplification {:.2e}, lambda_sim = {:.6e}, rel err {:+.3}",
        est.amplification(),
        est.rate,
        est.rate / lambda_eig - 1.0
    );
    let amps = band_amplification(&run, band)?;
    for (t, a) in amps.iter().step_by((amps.len() / 12).max(1)) {
        println!("  t = {t:7.1}  amp = {a:.3e}  ln/t = {:.5e}", a.ln() / t.max(1e-9));
    }
    Ok(())
}

//! Extracts the slow envelope of the growing high-wavenumber disturbance from
//! an unstable run and compares the location of its peak with the dominant
//! localized eigenmode.
//!
//! ```bash
//! cargo run --release --example unstable_mode -- 1.4
//! ```

use sslab::cli::initial_condition;
use sslab::diagnostics::{extract_unstable_mode, linear_stage_end, KBand, DEFAULT_BAND_FRACTION, DEFAULT_CUTOFF_FRACTION};
use sslab::eigen::{solve_auto, EigenProblem, DEFAULT_COUNT};
use sslab::ssm::run_split_step;
use sslab::theory::d_from_c;
use sslab::SimConfig;

fn main() -> sslab::Result<()> {
    let c: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.4);
    let cfg = SimConfig { ratio_c: c, t_final: 600.0, ..SimConfig::default() };
    let run = run_split_step(&cfg, &initial_condition(&cfg)?)?;
    let band = KBand::near_k_max(run.first().field.grid().k_max(), DEFAULT_BAND_FRACTION);
    let t = linear_stage_end(&run, band, 1e-3).unwrap_or(run.last().time);
    let profile = extract_unstable_mode(&run.at_time(t).field, DEFAULT_CUTOFF_FRACTION)?;
    println!("C = {c}, t = {t:.0}, soliton centre {:.4}", profile.center);
    for (name, p) in [("left", profile.left), ("right", profile.right)] {
        println!("  {name:5} peak at x = {:8.4} (offset {:+.4}), amplitude {:.3e}", p.x, p.offset, p.amplitude);
    }

    let d = d_from_c(c, cfg.beta, cfg.amplitude);
    let problem = EigenProblem::for_soliton(d, cfg.beta, cfg.amplitude, cfg.length, cfg.dx(), 0.1)?;
    let report = solve_auto(&problem, DEFAULT_COUNT)?;
    let Some(mode) = report.dominant_pair() else {
        println!("no localized unstable eigenmode at D = {d}");
        return Ok(());
    };
    // X = (A / sqrt(-beta)) x / eps
    let x_peak = mode.peak_x * (cfg.dx() / 2.0) * (-cfg.beta).sqrt() / cfg.amplitude;
    let measured = profile.peak().offset.abs();
    println!(
        "eigenmode Lambda = {:.6e} peaks at |x| = {x_peak:.4}; measured {measured:.4}, difference {:.3} soliton widths",
        mode.lambda.re,
        (measured - x_peak).abs() * cfg.amplitude / (-cfg.beta).sqrt()
    );
    Ok(())
}

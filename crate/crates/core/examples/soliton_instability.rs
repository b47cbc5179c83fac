//! Soliton runs on either side of the threshold `dt = dx`: the spectrum near
//! `k_max` stays at the noise floor for `C < 1` and grows for `C > 1`.
//!
//! ```bash
//! cargo run --release --example soliton_instability
//! ```

use sslab::cli::initial_condition;
use sslab::diagnostics::{band_amplification, spectrum, KBand, DEFAULT_BAND_FRACTION};
use sslab::ssm::run_split_step;
use sslab::theory::threshold_fd_soliton;
use sslab::SimConfig;

fn main() -> sslab::Result<()> {
    let base = SimConfig { t_final: 1400.0, snapshot_interval: 100.0, ..SimConfig::default() };
    println!("stable for C <= {}", threshold_fd_soliton(base.beta, base.amplitude)?);
    for c in [0.8, 0.9, 1.05] {
        let cfg = SimConfig { ratio_c: c, ..base.clone() };
        let run = run_split_step(&cfg, &initial_condition(&cfg)?)?;
        let grid = run.first().field.grid().clone();
        let band = KBand::near_k_max(grid.k_max(), DEFAULT_BAND_FRACTION);
        println!("C = {c}: {} steps in {:.2} s", run.last().step, run.wall_time);
        for (t, a) in band_amplification(&run, band)?.iter().step_by(2) {
            println!("  t = {t:6.0}  band max / noise floor = {a:.3e}");
        }
        let last = spectrum(&run.last().field, run.last().time);
        let k_peak = grid
            .wavenumbers()
            .iter()
            .zip(&last.magnitudes)
            .filter(|(k, _)| band.contains(**k))
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| *k)
            .unwrap_or(0.0);
        println!("  final band peak at k = {k_peak:.3} (k_max = {:.3})", grid.k_max());
    }
    Ok(())
}

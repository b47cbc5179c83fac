//! Soliton centre over a long run: stationary below the threshold, drifting
//! once the instability saturates above it.
//!
//! ```bash
//! cargo run --release --example soliton_drift
//! ```

use sslab::cli::initial_condition;
use sslab::diagnostics::track_drift;
use sslab::ssm::run_split_step;
use sslab::SimConfig;

fn main() -> sslab::Result<()> {
    for c in [0.8, 1.05] {
        let cfg = SimConfig { ratio_c: c, t_final: 2000.0, snapshot_interval: 10.0, ..SimConfig::default() };
        let track = track_drift(&run_split_step(&cfg, &initial_condition(&cfg)?)?)?;
        println!(
            "C = {c}: max displacement {:.3e}, onset {:?}, late velocity {:?}, truncated {}",
            track.max_displacement(),
            track.onset_time,
            track.velocity,
            track.truncated
        );
        for j in (0..track.times.len()).step_by(20) {
            println!("  t = {:6.0}  centre {:+.5}  peak {:.4}", track.times[j], track.centers[j], track.peaks[j]);
        }
    }
    Ok(())
}

//! Localized growth modes of the envelope eigenproblem at a few values of D.
//!
//! ```bash
//! cargo run --release --example eigen_modes -- 0.017 0.05 0.2
//! ```

use sslab::eigen::{solve_auto, EigenProblem};

fn main() -> sslab::Result<()> {
    let ds: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ds = if ds.is_empty() { vec![0.017, 0.05, 0.2] } else { ds };
    for d in ds {
        let t = std::time::Instant::now();
        let report = solve_auto(&EigenProblem::reference(d)?, 24)?;
        println!("D = {d}  ({:.1} s, shifts {:?})", t.elapsed().as_secs_f64(), report.shifts);
        for p in report.pairs.iter().filter(|p| p.lambda.re > 1e-8).take(8) {
            println!(
                "  Lambda = {:+.8e} {:+.3e}i  peak X = {:+7.1}  loc = {:.2}  parity {:+}  res {:.1e}",
                p.lambda.re, p.lambda.im, p.peak_x, p.localization, p.parity, p.residual
            );
        }
    }
    Ok(())
}

//! Semiclassical mode counts of the two decoupled zero-eigenvalue equations,
//! mode-birth values and the critical-detuning hypothesis.
//!
//! ```bash
//! cargo run --release --example wkb_scan
//! ```

use sslab::wkb::{hypothesize_c_cr, n_of_d, predict_birth_values, Method, WkbParams};

fn main() -> sslab::Result<()> {
    let params = WkbParams::default();
    println!("      D      n(nu=1) integral  closed form  n(nu=3)   difference");
    for d in [0.001, 0.005, 0.01, 0.012134, 0.012928, 0.01375, 0.02, 0.03] {
        let exact = n_of_d(d, 1.0, &params, Method::Integral)?.n_continuous;
        let n1 = n_of_d(d, 1.0, &params, Method::ClosedForm)?.n_continuous;
        let n3 = n_of_d(d, 3.0, &params, Method::ClosedForm)?.n_continuous;
        println!("  {d:9.6}  {exact:14.4}  {n1:11.4}  {n3:8.4}  {:9.4}", n1 - n3);
    }
    for b in predict_birth_values([0, 1, 2, 5, 10, 29], 1.0, &params)? {
        println!("  mode n = {:2} is born at D = {:.6e}", b.n, b.d);
    }
    for method in [Method::Integral, Method::ClosedForm] {
        if let Some(h) = hypothesize_c_cr(&params, method, 0.001, 0.03, 0.0005)? {
            println!("  {method:?}: difference exceeds 1 at D = {:.6} (C = {:.6}), unverified", h.d_cr, h.c_cr);
        }
    }
    Ok(())
}

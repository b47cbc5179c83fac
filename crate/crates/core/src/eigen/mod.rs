//! Envelope eigenproblem for errors near `k_max` on a soliton background:
//!
//! ```text
//! sigma_3 (d^2/dX^2 + D - V(eps X) [[2, 1], [1, 2]]) phi = i Lambda sigma_3 phi
//! ```
//!
//! with `V(y) = 2 C beta^2 sech^2(y)`, discretized by Numerov's method on the
//! periodic X-domain into the pencil `G f = i Lambda H f`.

mod krylov;
mod problem;
mod solve;

pub use krylov::{krylov_schur, KrylovOptions, RitzPairs};
pub use problem::{EigenProblem, NumerovSystem, PhysicalParams};
pub use solve::{
    classify_modes, dense_spectrum, growth_rate_physical, localization, solve_auto, solve_smallest,
    symmetry_check, EigenPair, EigenReport, PartnerStatus, SymmetryCheck, SymmetryEntry, DEFAULT_COUNT,
    LOCALIZATION_THRESHOLD, LADDER_CEILING, LOCALIZATION_WINDOW, MAX_LADDER_RUNGS, RESIDUAL_TOL, TOL_REAL,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use std::f64::consts::PI;

    fn small(d: f64, n: usize) -> EigenProblem {
        // sech^2 well on a short periodic domain
        let dx = 0.25;
        let x: Vec<f64> = (0..n).map(|m| (m as f64 - (n / 2) as f64) * dx).collect();
        let v = x.iter().map(|&xx| 2.0 / (0.3 * xx).cosh().powi(2)).collect();
        EigenProblem::with_potential(d, dx, x, v).unwrap()
    }

    #[test]
    fn numerov_symbol_on_plane_waves() {
        let n = 32;
        let x: Vec<f64> = (0..n).map(|m| m as f64 * 0.1).collect();
        let p = EigenProblem::with_potential(0.0, 0.1, x.clone(), vec![0.0; n]).unwrap();
        let sys = p.assemble();
        for j in [1usize, 3, 7, 16] {
            let kappa = 2.0 * PI * j as f64 / (n as f64 * 0.1);
            let mut f: Vec<C64> = x.iter().map(|&xx| C64::from_polar(1.0, kappa * xx)).collect();
            f.extend(vec![C64::new(0.0, 0.0); n]);
            let gf = sys.apply_g(&f);
            let hf = sys.apply_h(&f);
            let s2 = (kappa * 0.1 / 2.0).sin().powi(2);
            let symbol = -(4.0 / 0.01) * s2 / (1.0 - s2 / 3.0);
            for m in 0..n {
                assert!((gf[m] - symbol * hf[m]).norm() < 1e-12 * symbol.abs().max(1.0), "j={j}");
            }
        }
    }

    #[test]
    fn h_is_positive_definite() {
        for n in [8usize, 9, 40, 64] {
            let h = small(0.1, n).assemble().dense_h();
            let re = h.map(|z| z.re);
            assert!(h.iter().all(|z| z.im == 0.0));
            assert!((re.clone() - re.transpose()).norm() == 0.0);
            assert!(re.cholesky().is_some(), "n={n}");
        }
    }

    #[test]
    fn conjugating_g_maps_spectrum_to_minus_conjugate() {
        let p = small(0.3, 40);
        let lambdas = dense_spectrum(&p).unwrap();
        // G is real, so Lambda and -conj(Lambda) come together
        for l in &lambdas {
            let partner = -l.conj();
            assert!(lambdas.iter().any(|q| (q - partner).norm() < 1e-9 * l.norm().max(1.0)));
        }
    }

    #[test]
    fn krylov_matches_dense_oracle() {
        for (d, n) in [(0.3, 40usize), (-0.2, 40), (0.8, 64)] {
            let p = small(d, n);
            let dense = dense_spectrum(&p).unwrap();
            let report = solve_smallest(&p, 12).unwrap();
            let mut by_mag = dense.clone();
            by_mag.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
            for pair in &report.pairs {
                assert!(pair.residual < RESIDUAL_TOL, "{}", pair.residual);
                let nearest = dense.iter().map(|l| (l - pair.lambda).norm()).fold(f64::MAX, f64::min);
                assert!(nearest < 1e-9, "d={d} n={n} {} off by {nearest}", pair.lambda);
            }
            let kth = by_mag[11].norm();
            assert!(report.pairs.iter().all(|p| p.lambda.norm() <= kth * (1.0 + 1e-9)));
        }
    }

    #[test]
    fn asymmetric_potential_uses_full_space() {
        let n = 40;
        let x: Vec<f64> = (0..n).map(|m| m as f64 * 0.25 - 5.0).collect();
        let v = x.iter().map(|&xx| 2.0 / (0.3 * (xx - 1.3)).cosh().powi(2)).collect();
        let p = EigenProblem::with_potential(0.3, 0.25, x, v).unwrap();
        assert!(!p.is_mirror_symmetric());
        let dense = dense_spectrum(&p).unwrap();
        let report = solve_smallest(&p, 8).unwrap();
        for pair in &report.pairs {
            assert_eq!(pair.parity, 0);
            assert!(dense.iter().any(|l| (l - pair.lambda).norm() < 1e-9));
        }
    }

    #[test]
    fn shifted_window_targets_lambda0() {
        let p = small(0.8, 64);
        let dense = dense_spectrum(&p).unwrap();
        let target = C64::new(0.0, 3.0);
        let report = solve_smallest(&p.clone().with_shift(target), 6).unwrap();
        let mut by_dist = dense.clone();
        by_dist.sort_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()));
        for pair in &report.pairs {
            assert!((pair.lambda - target).norm() <= (by_dist[5] - target).norm() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(EigenProblem::with_potential(0.1, 0.1, vec![0.0; 4], vec![0.0; 4]).is_err());
    }

    #[test]
    fn reference_grid_layout() {
        let p = EigenProblem::reference(0.05).unwrap();
        assert_eq!(p.n_points, 10240);
        assert_eq!(p.dim(), 20480);
        assert!((p.x[0] + 512.0).abs() < 1e-12);
        assert!(p.x[5120].abs() < 1e-12);
        assert!(p.is_mirror_symmetric());
        assert!(p.potential.iter().all(|&v| v > 0.0));
        assert!((p.potential[5120] - 2.1).abs() < 1e-12);
    }
}

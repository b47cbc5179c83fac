//! Property suites over randomized inputs.
//!
//! ```bash
//! cargo test --release --test properties
//! ```

mod common;

use proptest::prelude::*;

use sslab::diagnostics::{growth_rate, spectral_peak, KBand};
use sslab::numerics::{make_noise, make_plane_wave};
use sslab::ssm::{
    dispersive_step_fd_dirichlet, dispersive_step_fd_periodic, dispersive_step_spectral, propagate_linearized_error,
    run_split_step, Background,
};
use sslab::{ComplexField, NoiseKind, Scheme, SimConfig, Splitting, C64};

fn random_field(n: usize, seed: u64) -> ComplexField {
    make_noise(common::grid(40.0, n), 1.0, seed, NoiseKind::Complex).unwrap()
}

fn rel_norm_change(a: &ComplexField, b: &ComplexField) -> f64 {
    (a.norm() - b.norm()).abs() / a.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dispersive_steps_are_unitary(seed in 0u64..1000, beta in prop::sample::select(vec![-1.0, 1.0]), dt in 1e-3f64..2.0) {
        let u = random_field(128, seed);
        prop_assert!(rel_norm_change(&u, &dispersive_step_spectral(&u, beta, dt)) < 1e-12);
        prop_assert!(rel_norm_change(&u, &dispersive_step_fd_periodic(&u, beta, dt)) < 1e-12);
        let mut values = u.values().to_vec();
        values[0] = C64::new(0.0, 0.0);
        let pinned = ComplexField::new(u.grid().clone(), values).unwrap();
        let stepped = dispersive_step_fd_dirichlet(&pinned, beta, dt).unwrap();
        prop_assert!(rel_norm_change(&pinned, &stepped) < 1e-12);
    }

    #[test]
    fn cn_paths_agree(seed in 0u64..1000, n in prop::sample::select(vec![64usize, 256, 1024]), dt in 1e-3f64..1.0) {
        prop_assert!(common::cn_path_difference(n, -1.0, dt, seed) < 1e-11);
        prop_assert!(common::cn_path_difference(n, 1.0, dt, seed) < 1e-11);
    }

    #[test]
    fn linearized_propagator_is_real_linear(seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        prop_assume!(a.abs() + b.abs() > 0.1);
        prop_assert!(common::linearity_defect(a, b, seed) < 1e-12);
    }

    #[test]
    fn growth_rate_ignores_global_phase(seed in 0u64..1000, phase in 0.0f64..std::f64::consts::TAU) {
        let cfg = SimConfig { n_points: 128, ratio_c: 1.4, t_final: 50.0, noise_std: 1e-6, rng_seed: seed, ..SimConfig::default() };
        let u0 = common::noisy_soliton(cfg.length, cfg.n_points, cfg.noise_std, seed);
        let mut run = run_split_step(&cfg, &u0).unwrap();
        let band = KBand::near_k_max(u0.grid().k_max(), 0.9);
        let before = growth_rate(&run, band, 50.0).unwrap();
        for s in &mut run.snapshots {
            s.field = s.field.scaled(C64::from_polar(1.0, phase));
        }
        let after = growth_rate(&run, band, 50.0).unwrap();
        // rotation roundoff in the band coefficients, relative to the floor
        let tol = 64.0 * f64::EPSILON * spectral_peak(&u0) / before.noise_floor / before.t_measure;
        prop_assert!((before.rate - after.rate).abs() < tol, "{} vs {}", before.rate, after.rate);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn split_step_conserves_norm_per_step(c in 0.3f64..4.0, spectral in any::<bool>()) {
        let scheme = if spectral { Scheme::Spectral } else { Scheme::FiniteDifference };
        prop_assert!(common::norm_drift_per_step(scheme, c, 256, 100) < 1e-12);
    }

    #[test]
    fn spectrum_has_quadruplet_symmetry(d in 0.01f64..0.8, m in prop::sample::select(vec![16usize, 24, 32, 48, 64])) {
        prop_assert!(common::quadruplet_defect(d, m) < 1e-8);
    }

    #[test]
    fn krylov_matches_dense_spectrum(d in 0.01f64..0.8, m in prop::sample::select(vec![16usize, 32, 64])) {
        prop_assert!(common::numerov_oracle_gap(d, m) < 1e-9);
    }
}

#[test]
fn splitting_orders() {
    let first = common::splitting_order(Splitting::FirstOrder);
    let strang = common::splitting_order(Splitting::Strang);
    assert!((first - 1.0).abs() <= 0.2, "{first}");
    assert!((strang - 2.0).abs() <= 0.2, "{strang}");
}

/// Nonlinear run on `background + eps xi` minus the background run, over
/// `eps`, against the linearized propagator applied to `xi`. The plane wave is
/// an exact solution of both split-step schemes, so the two agree to `O(eps)`.
#[test]
fn small_amplitude_consistency_on_plane_wave() {
    let eps = 1e-8;
    for (beta, scheme) in [(-1.0, Scheme::FiniteDifference), (1.0, Scheme::FiniteDifference), (-1.0, Scheme::Spectral)] {
        let cfg = SimConfig {
            beta,
            scheme,
            length: 20.0,
            n_points: 64,
            ratio_c: 0.5,
            t_final: 5.0,
            snapshot_interval: 1.0,
            ..SimConfig::default()
        };
        let grid = cfg.grid().unwrap();
        let background = make_plane_wave(grid.clone(), cfg.amplitude, cfg.gamma).unwrap();
        let xi = make_noise(grid, 1.0, 17, NoiseKind::Complex).unwrap();
        let perturbed = background.add(&xi.scaled(C64::new(eps, 0.0))).unwrap();
        let full = run_split_step(&cfg, &perturbed).unwrap();
        let base = run_split_step(&cfg, &background).unwrap();
        let linear = propagate_linearized_error(&cfg, Background::PlaneWave, &xi).unwrap();
        for ((f, b), l) in full.snapshots.iter().zip(&base.snapshots).zip(&linear.snapshots) {
            let diff = f.field.sub(&b.field).unwrap().scaled(C64::new(1.0 / eps, 0.0));
            let rel = diff.sub(&l.field).unwrap().norm() / l.field.norm();
            assert!(rel < 1e-6, "beta = {beta}, {scheme:?}, t = {}: {rel:e}", f.time);
        }
    }
}

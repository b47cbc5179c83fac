//! Checks shared by the property suites and the acceptance run. Each returns
//! the measured quantity so callers can apply and print their own bound.

#![allow(dead_code)]

use std::sync::Arc;

use sslab::eigen::{dense_spectrum, solve_smallest, EigenProblem};
use sslab::numerics::{make_noise, make_soliton, Grid1D};
use sslab::ssm::{
    dispersive_step_fd_periodic, dispersive_step_fd_periodic_direct, dispersive_step_spectral,
    propagate_linearized_error, run_split_step, Background,
};
use sslab::{ComplexField, NoiseKind, Scheme, SimConfig, Splitting, C64};

pub fn grid(length: f64, n: usize) -> Arc<Grid1D> {
    Arc::new(Grid1D::new(length, n).unwrap())
}

pub fn noisy_soliton(length: f64, n: usize, noise: f64, seed: u64) -> ComplexField {
    let g = grid(length, n);
    make_soliton(g.clone(), 1.0, -1.0, 2.0)
        .unwrap()
        .add(&make_noise(g, noise, seed, NoiseKind::Complex).unwrap())
        .unwrap()
}

/// Largest relative change of the discrete L2 norm over single steps of a
/// soliton-plus-noise run.
pub fn norm_drift_per_step(scheme: Scheme, ratio_c: f64, n: usize, steps: usize) -> f64 {
    let base = SimConfig { scheme, ratio_c, n_points: n, noise_std: 1e-3, ..SimConfig::default() };
    let cfg = SimConfig { t_final: steps as f64 * base.dt(), snapshot_interval: base.dt(), ..base };
    let u0 = noisy_soliton(cfg.length, n, cfg.noise_std, 3);
    let run = run_split_step(&cfg, &u0).unwrap();
    run.snapshots
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].field.norm(), w[1].field.norm());
            (b - a).abs() / a / (w[1].step - w[0].step) as f64
        })
        .fold(0.0, f64::max)
}

/// Largest difference between the cyclic tridiagonal solve and the Fourier
/// multiplier for the Crank–Nicolson step, relative to the field maximum.
pub fn cn_path_difference(n: usize, beta: f64, dt: f64, seed: u64) -> f64 {
    let g = grid(40.0, n);
    let u = make_noise(g, 1.0, seed, NoiseKind::Complex).unwrap();
    let a = dispersive_step_fd_periodic(&u, beta, dt);
    let b = dispersive_step_fd_periodic_direct(&u, beta, dt).unwrap();
    a.sub(&b).unwrap().max_abs() / u.max_abs()
}

/// `sech^2` well on a short periodic domain with `m` points per component.
pub fn small_problem(d: f64, m: usize) -> EigenProblem {
    let dx = 12.0 / m as f64;
    let x: Vec<f64> = (0..m).map(|j| (j as f64 - (m / 2) as f64) * dx).collect();
    let v = x.iter().map(|&xx| 2.1 / (0.5 * xx).cosh().powi(2)).collect();
    EigenProblem::with_potential(d, dx, x, v).unwrap()
}

/// Largest distance from a shift-invert eigenvalue to the dense spectrum.
pub fn numerov_oracle_gap(d: f64, m: usize) -> f64 {
    let p = small_problem(d, m);
    let dense = dense_spectrum(&p).unwrap();
    let report = solve_smallest(&p, (m / 2).min(16)).unwrap();
    report
        .pairs
        .iter()
        .map(|pair| dense.iter().map(|l| (l - pair.lambda).norm()).fold(f64::MAX, f64::min))
        .fold(0.0, f64::max)
}

/// Largest relative distance from any of `-L`, `conj L`, `-conj L` to the
/// dense spectrum, over all eigenvalues `L`.
pub fn quadruplet_defect(d: f64, m: usize) -> f64 {
    let lambdas = dense_spectrum(&small_problem(d, m)).unwrap();
    let nearest = |t: C64| lambdas.iter().map(|l| (l - t).norm()).fold(f64::MAX, f64::min);
    lambdas
        .iter()
        .map(|&l| {
            let worst = [-l, l.conj(), -l.conj()].into_iter().map(nearest).fold(0.0, f64::max);
            worst / l.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// `|P(a x + b y) - a P(x) - b P(y)|` relative to `|P(a x + b y)|` for the
/// linearized propagator `P` on a soliton background, real `a`, `b`.
pub fn linearity_defect(a: f64, b: f64, seed: u64) -> f64 {
    let cfg = SimConfig { n_points: 128, t_final: 5.0, snapshot_interval: 5.0, ..SimConfig::default() };
    let g = cfg.grid().unwrap();
    let x = make_noise(g.clone(), 1.0, seed, NoiseKind::Complex).unwrap();
    let y = make_noise(g, 1.0, seed + 1, NoiseKind::Complex).unwrap();
    let combo = x.scaled(C64::new(a, 0.0)).add(&y.scaled(C64::new(b, 0.0))).unwrap();
    let last = |u: &ComplexField| propagate_linearized_error(&cfg, Background::Soliton, u).unwrap().last().field.clone();
    let lhs = last(&combo);
    let rhs = last(&x).scaled(C64::new(a, 0.0)).add(&last(&y).scaled(C64::new(b, 0.0))).unwrap();
    lhs.sub(&rhs).unwrap().norm() / lhs.norm()
}

/// Least-squares slope of `ln(error)` against `ln(dt)` for the spectral
/// split-step on the exact soliton `sech(x) exp(i t)` at `t = 1`.
pub fn splitting_order(splitting: Splitting) -> f64 {
    let points: Vec<(f64, f64)> = [50usize, 100, 200, 400]
        .iter()
        .map(|&steps| {
            let dt = 1.0 / steps as f64;
            let cfg = SimConfig {
                scheme: Scheme::Spectral,
                splitting,
                n_points: 256,
                noise_std: 0.0,
                t_final: 1.0,
                snapshot_interval: 1.0,
                ..SimConfig::default()
            }
            .with_dt(dt);
            let u0 = noisy_soliton(cfg.length, cfg.n_points, 0.0, 0);
            let run = run_split_step(&cfg, &u0).unwrap();
            let last = run.last();
            let phase = C64::from_polar(1.0, last.time);
            let err = last
                .field
                .grid()
                .points()
                .iter()
                .zip(last.field.values())
                .map(|(x, u)| (u - phase / x.cosh()).norm())
                .fold(0.0, f64::max);
            (dt.ln(), err.ln())
        })
        .collect();
    slope(&points)
}

pub fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    sxy / sxx
}

/// Relative norm change of one bare dispersive step, spectral or finite
/// difference, whichever is larger.
pub fn dispersive_norm_defect(n: usize, beta: f64, dt: f64) -> f64 {
    let u = make_noise(grid(40.0, n), 1.0, 11, NoiseKind::Complex).unwrap();
    let a = dispersive_step_spectral(&u, beta, dt).norm();
    let b = dispersive_step_fd_periodic(&u, beta, dt).norm();
    ((a - u.norm()).abs()).max((b - u.norm()).abs()) / u.norm()
}

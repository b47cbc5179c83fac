use std::sync::Arc;

use crate::config::{Boundary, FdPath, Scheme, SimConfig};
use crate::error::{Error, Result};
use crate::numerics::{ComplexField, CyclicTridiagonal, Fourier, Grid1D, Tridiagonal};
use crate::theory::phase_symbol;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Pointwise phase rotation `u exp(i gamma |u|^2 dt)`.
pub fn nonlinear_step(u: &ComplexField, gamma: f64, dt: f64) -> ComplexField {
    let mut out = u.clone();
    nonlinear_step_in_place(out.values_mut(), gamma, dt);
    out
}

pub fn nonlinear_step_in_place(values: &mut [C64], gamma: f64, dt: f64) {
    for z in values.iter_mut() {
        *z *= C64::from_polar(1.0, gamma * z.norm_sqr() * dt);
    }
}

/// Exact Fourier solution of `i u_t = beta u_xx` over `dt`.
pub fn dispersive_step_spectral(u: &ComplexField, beta: f64, dt: f64) -> ComplexField {
    let ops = StepOperators::with_kind(u.grid().clone(), DispersiveKind::Spectral, beta, dt);
    let mut out = u.clone();
    ops.dispersive_in_place(out.values_mut()).expect("spectral step is infallible");
    out
}

/// Periodic Crank–Nicolson step evaluated as the Fourier multiplier `exp(i P(k))`.
pub fn dispersive_step_fd_periodic(u: &ComplexField, beta: f64, dt: f64) -> ComplexField {
    let ops = StepOperators::with_kind(u.grid().clone(), DispersiveKind::FdPeriodic, beta, dt);
    let mut out = u.clone();
    ops.dispersive_in_place(out.values_mut()).expect("multiplier step is infallible");
    out
}

/// Periodic Crank–Nicolson step evaluated by a cyclic tridiagonal solve in
/// physical space.
pub fn dispersive_step_fd_periodic_direct(u: &ComplexField, beta: f64, dt: f64) -> Result<ComplexField> {
    let ops = StepOperators::with_kind(u.grid().clone(), DispersiveKind::FdPeriodic, beta, dt)
        .with_fd_path(FdPath::DirectSolve);
    let mut out = u.clone();
    ops.dispersive_in_place(out.values_mut())?;
    Ok(out)
}

/// Crank–Nicolson step with zero Dirichlet values at grid index 0 and at the
/// (implicit) right end point. Sample 0 of `u` must vanish.
pub fn dispersive_step_fd_dirichlet(u: &ComplexField, beta: f64, dt: f64) -> Result<ComplexField> {
    let ops = StepOperators::with_kind(u.grid().clone(), DispersiveKind::FdDirichlet, beta, dt);
    let mut out = u.clone();
    ops.dispersive_in_place(out.values_mut())?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersiveKind {
    Spectral,
    FdPeriodic,
    FdDirichlet,
}

/// Precomputed dispersive operator for one grid and time step.
#[derive(Debug, Clone)]
pub struct StepOperators {
    kind: DispersiveKind,
    path: FdPath,
    beta: f64,
    dt: f64,
    r: f64,
    grid: Arc<Grid1D>,
    fourier: Fourier,
    multipliers: Vec<C64>,
    cyclic_lhs: Option<CyclicTridiagonal>,
    cyclic_rhs: Option<CyclicTridiagonal>,
    dirichlet_lhs: Option<Tridiagonal>,
    dirichlet_rhs: Option<Tridiagonal>,
}

impl StepOperators {
    pub fn from_config(config: &SimConfig, grid: Arc<Grid1D>) -> Self {
        let kind = match (config.scheme, config.boundary) {
            (Scheme::Spectral, _) => DispersiveKind::Spectral,
            (Scheme::FiniteDifference, Boundary::Periodic) => DispersiveKind::FdPeriodic,
            (Scheme::FiniteDifference, Boundary::DirichletZero) => DispersiveKind::FdDirichlet,
        };
        Self::with_kind(grid, kind, config.beta, config.dt()).with_fd_path(config.fd_path)
    }

    pub fn with_kind(grid: Arc<Grid1D>, kind: DispersiveKind, beta: f64, dt: f64) -> Self {
        let dx = grid.dx();
        let r = dt / (dx * dx);
        let n = grid.len();
        let multipliers = match kind {
            DispersiveKind::Spectral => grid
                .wavenumbers()
                .iter()
                .map(|&k| C64::from_polar(1.0, beta * k * k * dt))
                .collect(),
            DispersiveKind::FdPeriodic => grid
                .wavenumbers()
                .iter()
                .map(|&k| C64::from_polar(1.0, phase_symbol(k, beta, r, dx)))
                .collect(),
            DispersiveKind::FdDirichlet => Vec::new(),
        };
        let half = I * (beta * r / 2.0);
        let one = C64::new(1.0, 0.0);
        // (I + i beta r / 2 A) u' = (I - i beta r / 2 A) u, A = tridiag(1, -2, 1)
        let (cyclic_lhs, cyclic_rhs) = if kind == DispersiveKind::FdPeriodic {
            (
                Some(CyclicTridiagonal::circulant(n, one - 2.0 * half, half)),
                Some(CyclicTridiagonal::circulant(n, one + 2.0 * half, -half)),
            )
        } else {
            (None, None)
        };
        let (dirichlet_lhs, dirichlet_rhs) = if kind == DispersiveKind::FdDirichlet {
            let m = n - 1;
            (
                Some(Tridiagonal {
                    sub: vec![half; m - 1],
                    diag: vec![one - 2.0 * half; m],
                    sup: vec![half; m - 1],
                }),
                Some(Tridiagonal {
                    sub: vec![-half; m - 1],
                    diag: vec![one + 2.0 * half; m],
                    sup: vec![-half; m - 1],
                }),
            )
        } else {
            (None, None)
        };
        Self {
            kind,
            path: FdPath::Multiplier,
            beta,
            dt,
            r,
            fourier: Fourier::new(n),
            grid,
            multipliers,
            cyclic_lhs,
            cyclic_rhs,
            dirichlet_lhs,
            dirichlet_rhs,
        }
    }

    pub fn with_fd_path(mut self, path: FdPath) -> Self {
        self.path = path;
        self
    }

    pub fn kind(&self) -> DispersiveKind {
        self.kind
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `r = dt / dx^2`.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn fourier(&self) -> &Fourier {
        &self.fourier
    }

    /// Per-bin multipliers in DFT layout; empty for the Dirichlet operator,
    /// which acts in the sine basis.
    pub fn multipliers(&self) -> &[C64] {
        &self.multipliers
    }

    pub fn dispersive_in_place(&self, values: &mut [C64]) -> Result<()> {
        match (self.kind, self.path) {
            (DispersiveKind::Spectral, _) | (DispersiveKind::FdPeriodic, FdPath::Multiplier) => {
                self.fourier.forward(values);
                values.iter_mut().zip(&self.multipliers).for_each(|(z, m)| *z *= m);
                self.fourier.inverse(values);
                Ok(())
            }
            (DispersiveKind::FdPeriodic, FdPath::DirectSolve) => {
                let rhs = self.cyclic_rhs.as_ref().expect("periodic operator").apply(values);
                let sol = self.cyclic_lhs.as_ref().expect("periodic operator").solve(&rhs)?;
                values.copy_from_slice(&sol);
                Ok(())
            }
            (DispersiveKind::FdDirichlet, _) => {
                if values[0] != C64::new(0.0, 0.0) {
                    return Err(Error::Precondition(format!(
                        "Dirichlet step needs u = 0 at the boundary, found {}",
                        values[0]
                    )));
                }
                let interior = &mut values[1..];
                let rhs = self.dirichlet_rhs.as_ref().expect("dirichlet operator").apply(interior);
                let sol = self.dirichlet_lhs.as_ref().expect("dirichlet operator").solve(&rhs)?;
                interior.copy_from_slice(&sol);
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid(l: f64, n: usize) -> Arc<Grid1D> {
        Arc::new(Grid1D::new(l, n).unwrap())
    }

    fn random_field(g: Arc<Grid1D>, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..g.len())
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexField::new(g, v).unwrap()
    }

    fn max_diff(a: &ComplexField, b: &ComplexField) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn nonlinear_step_examples() {
        let g = grid(10.0, 16);
        let zero = ComplexField::zeros(g.clone());
        assert_eq!(nonlinear_step(&zero, 2.0, 0.1), zero);

        let c = ComplexField::from_fn(g.clone(), |_| C64::new(0.5f64.sqrt(), 0.0));
        let out = nonlinear_step(&c, 2.0, 0.1);
        for (a, b) in out.values().iter().zip(c.values()) {
            assert!((a - b * C64::from_polar(1.0, 0.1)).norm() < 1e-15);
        }

        let u = random_field(g, 5);
        let full = nonlinear_step(&u, 2.0, 0.1);
        let halves = nonlinear_step(&nonlinear_step(&u, 2.0, 0.05), 2.0, 0.05);
        assert!(max_diff(&full, &halves) < 1e-14);
        for (a, b) in full.values().iter().zip(u.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn spectral_step_on_single_mode() {
        let g = grid(2.0 * PI, 32);
        let (beta, dt) = (-1.0, 0.3);
        for j in [1i32, 5, -7] {
            let k = j as f64;
            let u = ComplexField::from_fn(g.clone(), |x| C64::from_polar(1.0, k * x));
            let out = dispersive_step_spectral(&u, beta, dt);
            let factor = C64::from_polar(1.0, beta * k * k * dt);
            for (a, b) in out.values().iter().zip(u.values()) {
                assert!((a - b * factor).norm() < 1e-13);
            }
        }
        let u = random_field(g, 1);
        assert!(max_diff(&dispersive_step_spectral(&u, beta, 0.0), &u) < 1e-15);
    }

    #[test]
    fn spectral_step_matches_free_gaussian() {
        // i u_t = beta u_xx; for u0 = exp(-x^2/(2 s^2)) the exact solution is
        // u = s / sqrt(s^2 - 2 i beta t) * exp(-x^2 / (2 (s^2 - 2 i beta t)))
        let g = grid(80.0, 1024);
        let (beta, dt, s) = (-1.0, 0.01, 2.0);
        let mut u = ComplexField::from_fn(g.clone(), |x| C64::new((-x * x / (2.0 * s * s)).exp(), 0.0));
        for _ in 0..100 {
            u = dispersive_step_spectral(&u, beta, dt);
        }
        let t = 1.0;
        let w = C64::new(s * s, -2.0 * beta * t);
        let exact = ComplexField::from_fn(g, |x| (C64::new(s, 0.0) / w.sqrt()) * (-x * x / (2.0 * w)).exp());
        assert!(max_diff(&u, &exact) < 1e-8, "{}", max_diff(&u, &exact));
    }

    #[test]
    fn fd_multiplier_on_single_mode() {
        let g = grid(4.0, 64);
        let (beta, dt) = (-1.0, 0.05);
        let dx = g.dx();
        let r = dt / (dx * dx);
        for j in [1i32, 9, 31, 32] {
            let k = 2.0 * PI * j as f64 / g.length();
            let u = ComplexField::from_fn(g.clone(), |x| C64::from_polar(1.0, k * x));
            let s2 = (k * dx / 2.0).sin().powi(2);
            let factor = C64::from_polar(1.0, 2.0 * (2.0 * beta * r * s2).atan());
            for out in [
                dispersive_step_fd_periodic(&u, beta, dt),
                dispersive_step_fd_periodic_direct(&u, beta, dt).unwrap(),
            ] {
                for (a, b) in out.values().iter().zip(u.values()) {
                    assert!((a - b * factor).norm() < 1e-12, "j={j}");
                }
            }
        }
    }

    #[test]
    fn fd_paths_agree() {
        for &n in &[64usize, 256, 1024] {
            let g = grid(40.0, n);
            let u = random_field(g, n as u64);
            let a = dispersive_step_fd_periodic(&u, -1.0, 0.08);
            let b = dispersive_step_fd_periodic_direct(&u, -1.0, 0.08).unwrap();
            assert!(max_diff(&a, &b) < 1e-11 * u.max_abs(), "n={n}");
        }
    }

    #[test]
    fn fd_phase_matches_spectral_for_small_k() {
        let dx = 1e-3;
        let (beta, dt) = (-1.0, 1e-4);
        let r = dt / (dx * dx);
        let k = 1.0;
        let ratio = phase_symbol(k, beta, r, dx) / (beta * k * k * dt);
        assert!((ratio - 1.0).abs() < 1e-5);
    }

    #[test]
    fn dirichlet_sine_mode_multiplier() {
        let n = 32; // M = 32, interior points 1..31
        let g = grid(4.0, n);
        let (beta, dt) = (-1.0, 0.02);
        let r = dt / (g.dx() * g.dx());
        for j in [1usize, 4, 17, 31] {
            let vals: Vec<C64> =
                (0..n).map(|m| C64::new((PI * (j * m) as f64 / n as f64).sin(), 0.0)).collect();
            let mut u = ComplexField::new(g.clone(), vals).unwrap();
            u.values_mut()[0] = C64::new(0.0, 0.0);
            let lambda = -4.0 * (PI * j as f64 / (2.0 * n as f64)).sin().powi(2);
            let factor = (C64::new(1.0, 0.0) - I * beta * r * lambda / 2.0)
                / (C64::new(1.0, 0.0) + I * beta * r * lambda / 2.0);
            let out = dispersive_step_fd_dirichlet(&u, beta, dt).unwrap();
            for (a, b) in out.values().iter().zip(u.values()) {
                assert!((a - b * factor).norm() < 1e-12, "j={j}");
            }
        }
    }

    #[test]
    fn dirichlet_step_matches_dense_solve() {
        let n = 32;
        let g = grid(4.0, n);
        let (beta, dt) = (-1.0, 0.02);
        let r = dt / (g.dx() * g.dx());
        let mut u = random_field(g, 9);
        u.values_mut()[0] = C64::new(0.0, 0.0);
        let out = dispersive_step_fd_dirichlet(&u, beta, dt).unwrap();

        let m = n - 1;
        let a = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                C64::new(-2.0, 0.0)
            } else if i.abs_diff(j) == 1 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let id = DMatrix::<C64>::identity(m, m);
        let lhs = &id + &a * (I * beta * r / 2.0);
        let rhs = (&id - &a * (I * beta * r / 2.0)) * DVector::from_column_slice(&u.values()[1..]);
        let x = lhs.lu().solve(&rhs).unwrap();
        for (p, q) in out.values()[1..].iter().zip(x.iter()) {
            assert!((p - q).norm() < 1e-12);
        }
        assert_eq!(out.values()[0], C64::new(0.0, 0.0));
        let interior = |f: &ComplexField| f.values()[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert!((interior(&out) - interior(&u)).abs() < 1e-12 * interior(&u));
    }

    #[test]
    fn dirichlet_rejects_nonzero_boundary() {
        let u = random_field(grid(4.0, 16), 2);
        assert!(matches!(dispersive_step_fd_dirichlet(&u, -1.0, 0.01), Err(Error::Precondition(_))));
        let zero = ComplexField::zeros(grid(4.0, 16));
        assert_eq!(dispersive_step_fd_dirichlet(&zero, -1.0, 0.01).unwrap(), zero);
    }

    #[test]
    fn multipliers_are_unimodular() {
        let g = grid(40.0, 512);
        for kind in [DispersiveKind::Spectral, DispersiveKind::FdPeriodic] {
            let ops = StepOperators::with_kind(g.clone(), kind, -1.0, 0.08);
            assert!(ops.multipliers().iter().all(|m| (m.norm() - 1.0).abs() < 1e-15));
        }
    }
}

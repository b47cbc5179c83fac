//! Simulation parameters shared by the integrators and the command line.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Grid1D;

/// Implementation of the dispersive sub-step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Exact Fourier multiplier `exp(i beta k^2 dt)`.
    Spectral,
    /// Crank–Nicolson with the central second difference.
    #[default]
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
    /// `u = 0` at `x = -L/2` (grid index 0) and at its periodic image `x = L/2`.
    DirichletZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    /// Nonlinear step followed by dispersive step, every step.
    #[default]
    FirstOrder,
    /// Order of the two sub-steps alternates between consecutive steps.
    Strang,
}

/// How the periodic finite-difference step is evaluated. Both give the same
/// operator; the multiplier is `O(N log N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FdPath {
    #[default]
    Multiplier,
    DirectSolve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// Circular complex Gaussian.
    #[default]
    Complex,
    Real,
}

/// Physical and numerical parameters of a run.
///
/// The time step is not stored: it follows from `ratio_c = (dt/dx)^2` and the
/// grid, so the two can never disagree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub beta: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub length: f64,
    pub n_points: usize,
    pub ratio_c: f64,
    pub scheme: Scheme,
    pub boundary: Boundary,
    pub splitting: Splitting,
    pub fd_path: FdPath,
    pub noise_std: f64,
    pub noise_kind: NoiseKind,
    pub rng_seed: u64,
    pub t_final: f64,
    pub snapshot_interval: f64,
}

impl Default for SimConfig {
    /// Soliton run with `beta = -1`, `gamma = 2`, `A = 1`, `L = 40`, `N = 512`
    /// and `C = 1.05`.
    fn default() -> Self {
        Self {
            beta: -1.0,
            gamma: 2.0,
            amplitude: 1.0,
            length: 40.0,
            n_points: 512,
            ratio_c: 1.05,
            scheme: Scheme::FiniteDifference,
            boundary: Boundary::Periodic,
            splitting: Splitting::FirstOrder,
            fd_path: FdPath::Multiplier,
            noise_std: 1e-10,
            noise_kind: NoiseKind::Complex,
            rng_seed: 1,
            t_final: 1400.0,
            snapshot_interval: 10.0,
        }
    }
}

impl SimConfig {
    pub fn dx(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn dt(&self) -> f64 {
        self.ratio_c.sqrt() * self.dx()
    }

    /// `r = dt / dx^2`.
    pub fn r(&self) -> f64 {
        self.dt() / (self.dx() * self.dx())
    }

    /// Sets the time step directly, updating `ratio_c` accordingly.
    pub fn with_dt(mut self, dt: f64) -> Self {
        let dx = self.dx();
        self.ratio_c = (dt / dx).powi(2);
        self
    }

    pub fn grid(&self) -> Result<Arc<Grid1D>> {
        Ok(Arc::new(Grid1D::new(self.length, self.n_points)?))
    }

    /// Number of steps whose end time is nearest `t_final`.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt()).round().max(0.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("gamma", self.gamma)?;
        positive("length", self.length)?;
        positive("ratio_c", self.ratio_c)?;
        positive("snapshot_interval", self.snapshot_interval)?;
        if !self.beta.is_finite() || !self.amplitude.is_finite() {
            return Err(Error::config("beta and amplitude must be finite"));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::config(format!("t_final must be >= 0, got {}", self.t_final)));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::config(format!("noise_std must be >= 0, got {}", self.noise_std)));
        }
        if self.scheme == Scheme::Spectral && self.boundary != Boundary::Periodic {
            return Err(Error::config("the spectral dispersive step requires periodic boundaries"));
        }
        Grid1D::new(self.length, self.n_points)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_and_step_are_consistent() {
        let cfg = SimConfig { ratio_c: 1.05, ..SimConfig::default() };
        let dx = 40.0 / 512.0;
        assert!((cfg.dt() - 1.05f64.sqrt() * dx).abs() < 1e-15);
        assert!(((cfg.dt() / cfg.dx()).powi(2) - cfg.ratio_c).abs() < 1e-14);
        let other = cfg.clone().with_dt(0.05);
        assert!((other.dt() - 0.05).abs() < 1e-15);
        assert!((other.r() - 0.05 / (dx * dx)).abs() < 1e-9);
    }

    #[test]
    fn gamma_must_be_positive() {
        let cfg = SimConfig { gamma: 0.0, ..SimConfig::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn spectral_dirichlet_combination_rejected() {
        let cfg = SimConfig {
            scheme: Scheme::Spectral,
            boundary: Boundary::DirichletZero,
            ..SimConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = toml::from_str::<SimConfig>("beta = -1.0\nbogus_key = 3\n").unwrap_err();
        assert!(err.to_string().contains("bogus_key"));
    }
}

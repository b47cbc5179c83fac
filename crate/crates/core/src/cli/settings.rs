use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::diagnostics::{DEFAULT_BAND_FRACTION, DEFAULT_LINEAR_CEILING};
use crate::eigen::DEFAULT_COUNT;
use crate::error::{Error, Result};
use crate::wkb::{Method, WkbParams};

/// Contents of a run file. Every section is optional and falls back to its
/// defaults; unknown keys anywhere are rejected.
///
/// ```toml
/// [simulation]
/// ratio_c = 1.05
/// t_final = 1400.0
///
/// [growth]
/// c_values = [1.05, 1.2, 1.4]
///
/// [eigen]
/// d = 0.05
///
/// [wkb]
/// d_start = 0.001
/// d_end = 0.03
/// d_step = 0.0005
/// ```
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub simulation: SimConfig,
    pub growth: GrowthSettings,
    pub eigen: EigenSettings,
    pub wkb: WkbSettings,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.simulation.validate()?;
        self.growth.validate()?;
        self.eigen.validate()?;
        self.wkb.validate()
    }

    /// Epsilon of the envelope problem, `dx / 2` unless overridden.
    pub fn epsilon(&self) -> f64 {
        self.eigen.epsilon.unwrap_or(self.simulation.dx() / 2.0)
    }

    pub fn wkb_params(&self) -> WkbParams {
        WkbParams {
            epsilon: self.epsilon(),
            length: self.simulation.length,
            beta: self.simulation.beta,
            amplitude: self.simulation.amplitude,
        }
    }
}

/// C-scan comparing simulated and eigenproblem growth rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthSettings {
    pub c_values: Vec<f64>,
    /// Grid sizes to scan; the simulation's `n_points` when empty.
    pub n_points: Vec<usize>,
    pub band_fraction: f64,
    /// End of the linear stage, as a fraction of the initial spectral peak.
    pub linear_ceiling: f64,
    pub dx_big: f64,
    pub count: usize,
}

impl Default for GrowthSettings {
    fn default() -> Self {
        Self {
            c_values: vec![1.05, 1.2, 1.4],
            n_points: Vec::new(),
            band_fraction: DEFAULT_BAND_FRACTION,
            linear_ceiling: DEFAULT_LINEAR_CEILING,
            dx_big: 0.1,
            count: DEFAULT_COUNT,
        }
    }
}

impl GrowthSettings {
    fn validate(&self) -> Result<()> {
        if self.c_values.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::config("growth.c_values must be positive"));
        }
        if !(self.band_fraction > 0.0 && self.band_fraction < 1.0) {
            return Err(Error::config(format!("growth.band_fraction must lie in (0, 1), got {}", self.band_fraction)));
        }
        if !(self.linear_ceiling > 0.0) {
            return Err(Error::config("growth.linear_ceiling must be positive"));
        }
        if !(self.dx_big > 0.0) || self.count == 0 {
            return Err(Error::config("growth.dx_big and growth.count must be positive"));
        }
        Ok(())
    }
}

/// One envelope eigenproblem. Exactly one of `d` and `c` selects the detuning;
/// with neither, the simulation's `ratio_c` is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenSettings {
    pub d: Option<f64>,
    pub c: Option<f64>,
    /// Defaults to half the simulation mesh.
    pub epsilon: Option<f64>,
    pub dx_big: f64,
    pub count: usize,
    /// Target `[Re, Im]` of `Lambda_0`; absent selects the automatic ladder.
    pub shift: Option<[f64; 2]>,
    /// Largest number of localized modes written as profiles.
    pub max_profiles: usize,
    pub symmetry_tolerance: f64,
}

impl Default for EigenSettings {
    fn default() -> Self {
        Self {
            d: None,
            c: None,
            epsilon: None,
            dx_big: 0.1,
            count: DEFAULT_COUNT,
            shift: None,
            max_profiles: 4,
            symmetry_tolerance: 1e-8,
        }
    }
}

impl EigenSettings {
    fn validate(&self) -> Result<()> {
        if self.d.is_some() && self.c.is_some() {
            return Err(Error::config("eigen.d and eigen.c are mutually exclusive"));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0) {
                return Err(Error::config(format!("eigen.epsilon must be positive, got {eps}")));
            }
        }
        if !(self.dx_big > 0.0) || self.count == 0 {
            return Err(Error::config("eigen.dx_big and eigen.count must be positive"));
        }
        Ok(())
    }
}

/// Quantization scan over `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WkbSettings {
    pub d_start: f64,
    pub d_end: f64,
    pub d_step: f64,
    pub method: Method,
    /// Mode indices whose birth values are listed, for both `nu = 1` and `nu = 3`.
    pub births: Vec<usize>,
}

impl Default for WkbSettings {
    fn default() -> Self {
        Self { d_start: 0.001, d_end: 0.03, d_step: 0.0005, method: Method::Integral, births: (0..=30).collect() }
    }
}

impl WkbSettings {
    fn validate(&self) -> Result<()> {
        if !(self.d_step > 0.0) {
            return Err(Error::config(format!("wkb.d_step must be positive, got {}", self.d_step)));
        }
        if !(self.d_start.is_finite() && self.d_end.is_finite()) {
            return Err(Error::config("wkb.d_start and wkb.d_end must be finite"));
        }
        Ok(())
    }

    /// Scan points `d_start, d_start + d_step, ...` up to `d_end`; empty when
    /// `d_end < d_start`.
    pub fn points(&self) -> Vec<f64> {
        if self.d_end < self.d_start {
            return Vec::new();
        }
        let n = ((self.d_end - self.d_start) / self.d_step + 1e-9).floor() as usize;
        (0..=n).map(|j| self.d_start + j as f64 * self.d_step).collect()
    }
}

//! Closed-form symbols, stability thresholds and the rescalings that map the
//! fd-SSM error dynamics near `k_max` onto the eigenproblem in `eigen`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::{Scheme, SimConfig};
use crate::error::{Error, Result};
use crate::C64;

/// Phase `P(k) = 2 arctan(2 beta r sin^2(k dx / 2))` applied per step by the
/// Crank–Nicolson dispersive step to `exp(i k x)`. Lies in `(-pi, pi)`.
pub fn phase_symbol(k: f64, beta: f64, r: f64, dx: f64) -> f64 {
    let s = (0.5 * k * dx).sin();
    2.0 * (2.0 * beta * r * s * s).atan()
}

/// Large-`r` expansion `pi - 1 / (beta r sin^2(k dx / 2))`, reduced to
/// `(-pi, pi]`.
pub fn phase_symbol_large_r(k: f64, beta: f64, r: f64, dx: f64) -> f64 {
    let s = (0.5 * k * dx).sin();
    principal_value(PI - 1.0 / (beta * r * s * s))
}

/// Reduces an angle to `(-pi, pi]`.
pub fn principal_value(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Wavenumbers `k` with `|beta| k^2 dt = m pi`, `m = 1..=m_max`, where the
/// spectral step's phase wraps around.
pub fn resonance_wavenumbers(beta: f64, dt: f64, m_max: usize) -> Result<Vec<f64>> {
    if beta == 0.0 || !(dt > 0.0) {
        return Err(Error::domain(format!("need beta != 0 and dt > 0, got beta = {beta}, dt = {dt}")));
    }
    Ok((1..=m_max).map(|m| (m as f64 * PI / (beta.abs() * dt)).sqrt()).collect())
}

/// Approximate s-SSM threshold `dx^2 / (pi |beta|)`.
pub fn threshold_ssm_spectral(beta: f64, dx: f64) -> Result<f64> {
    if beta == 0.0 {
        return Err(Error::domain("beta = 0 has no dispersive threshold"));
    }
    Ok(dx * dx / (PI * beta.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "dt", rename_all = "snake_case")]
pub enum PlaneWaveThreshold {
    /// Unstable for time steps above this value.
    Conditional(f64),
    /// No time-step restriction.
    Unconditional,
}

/// fd-SSM threshold on the plane-wave background: `dx / sqrt(2 beta A^2)` for
/// `beta > 0`, unconditionally stable for `beta < 0`.
pub fn threshold_fd_planewave(beta: f64, amplitude: f64, dx: f64) -> Result<PlaneWaveThreshold> {
    if beta == 0.0 {
        return Err(Error::domain("beta = 0 has no dispersive threshold"));
    }
    if beta < 0.0 || amplitude == 0.0 {
        return Ok(PlaneWaveThreshold::Unconditional);
    }
    Ok(PlaneWaveThreshold::Conditional(dx / (2.0 * beta * amplitude * amplitude).sqrt()))
}

/// Largest stable `C = (dt/dx)^2` on the soliton background, `1 / (|beta| A^2)`.
/// Above it `D > 0` and unstable modes may exist.
pub fn threshold_fd_soliton(beta: f64, amplitude: f64) -> Result<f64> {
    if !(beta < 0.0) || amplitude == 0.0 {
        return Err(Error::domain(format!("soliton threshold needs beta < 0 and A != 0, got {beta}, {amplitude}")));
    }
    Ok(1.0 / (beta.abs() * amplitude * amplitude))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub k: f64,
    /// Per unit time.
    pub rate: f64,
}

/// One-step map acting on `(a, conj(b))` for a plane-wave error
/// `a exp(i k x) + conj(b) exp(-i k x)` in the frame rotating with the
/// background.
pub fn planewave_monodromy(scheme: Scheme, beta: f64, gamma: f64, amplitude: f64, dt: f64, dx: f64, k: f64) -> [[C64; 2]; 2] {
    let _ = gamma; // gamma |u_b|^2 = A^2 for the plane wave of amplitude A / sqrt(gamma)
    let g = amplitude * amplitude * dt;
    let phase = match scheme {
        Scheme::Spectral => beta * k * k * dt,
        Scheme::FiniteDifference => phase_symbol(k, beta, dt / (dx * dx), dx),
    };
    let m = C64::from_polar(1.0, phase);
    let ig = C64::new(0.0, g);
    let one = C64::new(1.0, 0.0);
    [[m * (one + ig), m * ig], [-m.conj() * ig, m.conj() * (one - ig)]]
}

/// Spectral radius of a 2x2 complex matrix.
pub fn spectral_radius_2x2(m: &[[C64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) * 0.5).norm().max(((tr - disc) * 0.5).norm())
}

/// Growth rate `ln(rho) / dt` of the discrete plane-wave error map at each `k`.
///
/// With `gamma = 0` the background vanishes and every rate is zero.
pub fn planewave_growth_curve(
    scheme: Scheme,
    beta: f64,
    gamma: f64,
    amplitude: f64,
    dt: f64,
    dx: f64,
    wavenumbers: &[f64],
) -> Vec<GrowthPoint> {
    let amplitude = if gamma == 0.0 { 0.0 } else { amplitude };
    wavenumbers
        .iter()
        .map(|&k| {
            let rho = spectral_radius_2x2(&planewave_monodromy(scheme, beta, gamma, amplitude, dt, dx, k));
            GrowthPoint { k, rate: rho.ln() / dt }
        })
        .collect()
}

/// Modulational-instability rate of the continuous NLS plane wave,
/// `Re sqrt(-beta k^2 (beta k^2 + 2 A^2))`; nonzero only for `beta < 0`.
pub fn continuum_mi_rate(beta: f64, amplitude: f64, k: f64) -> f64 {
    let bk2 = beta * k * k;
    (-bk2 * (bk2 + 2.0 * amplitude * amplitude)).max(0.0).sqrt()
}

/// Parameters of the rescaled eigenproblem for the fd-SSM on a soliton.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RescaledParams {
    pub epsilon: f64,
    pub d: f64,
    /// `Lambda = lambda_scale * lambda`.
    pub lambda_scale: f64,
    /// Peak of `V(y) = v_amplitude sech^2(y)`.
    pub v_amplitude: f64,
    pub delta: f64,
    /// `X = x_scale * chi`.
    pub x_scale: f64,
    pub c: f64,
    pub beta: f64,
    pub amplitude: f64,
    pub length: f64,
}

impl RescaledParams {
    /// `lambda = Lambda A^2 / (C beta^2)`.
    pub fn physical_rate(&self, big_lambda: f64) -> f64 {
        big_lambda / self.lambda_scale
    }

    /// Half-width of the periodic X-domain.
    pub fn x_half_length(&self) -> f64 {
        self.x_scale * self.length / (2.0 * self.epsilon)
    }

    /// `V(eps X)`.
    pub fn potential(&self, x_big: f64) -> f64 {
        let s = 1.0 / (self.epsilon * x_big).cosh();
        self.v_amplitude * s * s
    }
}

/// `D = beta^2 (C + 1 / (beta A^2))`.
pub fn d_from_c(c: f64, beta: f64, amplitude: f64) -> f64 {
    beta * beta * (c + 1.0 / (beta * amplitude * amplitude))
}

/// Inverse of [`d_from_c`].
pub fn c_from_d(d: f64, beta: f64, amplitude: f64) -> f64 {
    d / (beta * beta) - 1.0 / (beta * amplitude * amplitude)
}

pub fn rescale_params(config: &SimConfig) -> Result<RescaledParams> {
    rescale(config.ratio_c, config.beta, config.amplitude, config.length, config.dx())
}

pub fn rescale(c: f64, beta: f64, amplitude: f64, length: f64, dx: f64) -> Result<RescaledParams> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("C must be positive, got {c}")));
    }
    if !(beta < 0.0) || amplitude == 0.0 {
        return Err(Error::domain(format!("soliton background needs beta < 0 and A != 0, got {beta}, {amplitude}")));
    }
    let a2 = amplitude * amplitude;
    Ok(RescaledParams {
        epsilon: dx / 2.0,
        d: d_from_c(c, beta, amplitude),
        lambda_scale: c * beta * beta / a2,
        v_amplitude: 2.0 * c * beta * beta,
        delta: -a2 - 1.0 / (c * beta),
        x_scale: amplitude / (-beta).sqrt(),
        c,
        beta,
        amplitude,
        length,
    })
}

//! Semiclassical analysis of the zero-eigenvalue equations of the envelope
//! problem: turning points of `D - nu V(eps X)`, the Bohr–Sommerfeld index
//! `n(D)`, mode-birth values and the hypothesis for the critical `C`.
//!
//! The action over the two outer classically allowed regions is
//!
//! ```text
//! 2 * integral_{X_r}^{L'/(2 eps)} sqrt(D - nu V(eps X)) dX = pi (n + 1/2)
//! ```
//!
//! with `L'` the rescaled domain length. `nu = 1` and `nu = 3` label the two
//! decoupled equations.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::c_from_d;

/// Geometry and physical constants entering the quantization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbParams {
    /// `dx / 2`.
    pub epsilon: f64,
    /// Physical domain length.
    pub length: f64,
    pub beta: f64,
    pub amplitude: f64,
}

impl Default for WkbParams {
    /// `L = 40`, `dx = 40/512`, `beta = -1`, `A = 1`.
    fn default() -> Self {
        Self { epsilon: 40.0 / 1024.0, length: 40.0, beta: -1.0, amplitude: 1.0 }
    }
}

impl WkbParams {
    pub fn c_of(&self, d: f64) -> f64 {
        c_from_d(d, self.beta, self.amplitude)
    }

    /// Peak `2 C beta^2` of the potential at detuning `d`.
    pub fn v_amplitude(&self, d: f64) -> f64 {
        2.0 * self.c_of(d) * self.beta * self.beta
    }

    pub fn x_scale(&self) -> f64 {
        self.amplitude.abs() / (-self.beta).sqrt()
    }

    /// Rescaled domain length `L' = x_scale * L`, so that `X` spans
    /// `[-L'/(2 eps), L'/(2 eps))`.
    pub fn scaled_length(&self) -> f64 {
        self.x_scale() * self.length
    }

    pub fn x_half(&self) -> f64 {
        self.scaled_length() / (2.0 * self.epsilon)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta < 0.0) || self.amplitude == 0.0 || !(self.epsilon > 0.0) || !(self.length > 0.0) {
            return Err(Error::domain(format!("invalid WKB parameters {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Action integral with the exact `sech^2` potential.
    Integral,
    /// Action integral with the tail form `4 V_0 exp(-2 eps X)`.
    IntegralExponential,
    /// Closed-form evaluation of the exponential-tail action.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    /// Root of `D = nu V(eps X)` with the exact potential.
    pub exact: f64,
    /// `ln(8 nu C beta^2 / D) / (2 eps)`.
    pub exponential: f64,
}

/// Right turning point, by bisection on the exact potential and from the
/// exponential tail. Requires `0 < D <= nu V_0`.
pub fn turning_point(d: f64, nu: f64, params: &WkbParams) -> Result<TurningPoint> {
    params.validate()?;
    let v0 = nu * params.v_amplitude(d);
    if !(d > 0.0) || d > v0 {
        return Err(Error::NoTurningPoint(format!("D = {d} outside (0, {v0}]")));
    }
    let f = |x: f64| {
        let s = 1.0 / (params.epsilon * x).cosh();
        d - v0 * s * s
    };
    let (mut lo, mut hi) = (0.0, 1.0 / params.epsilon);
    while f(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoTurningPoint(format!("no root for D = {d}")));
        }
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let exact = if f(lo) == 0.0 { lo } else { 0.5 * (lo + hi) };
    let exponential = (8.0 * nu * params.c_of(d) * params.beta * params.beta / d).ln() / (2.0 * params.epsilon);
    Ok(TurningPoint { exact, exponential })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WkbQuantization {
    pub d: f64,
    pub nu: f64,
    pub n_continuous: f64,
    /// Turning point used by `method`.
    pub x_turning: f64,
    pub method: Method,
}

/// One-sided action `integral_{X_r}^{X_half} sqrt(D - nu V) dX`, with
/// `X = X_r + t^2` removing the square-root endpoint behaviour.
fn one_sided_action(d: f64, nu: f64, params: &WkbParams, x_r: f64, exponential: bool) -> f64 {
    let v0 = nu * params.v_amplitude(d);
    let eps = params.epsilon;
    let potential = |x: f64| {
        if exponential {
            4.0 * v0 * (-2.0 * eps * x).exp()
        } else {
            let s = 1.0 / (eps * x).cosh();
            v0 * s * s
        }
    };
    let t_max = (params.x_half() - x_r).sqrt();
    let integrand = |t: f64| 2.0 * t * (d - potential(x_r + t * t)).max(0.0).sqrt();
    let tol = 1e-13 * d.sqrt() * params.x_half();
    quadrature::double_exponential::integrate(integrand, 0.0, t_max, tol).integral
}

fn check_inside(x_r: f64, params: &WkbParams, d: f64) -> Result<()> {
    if x_r >= params.x_half() {
        return Err(Error::NoTurningPoint(format!(
            "turning point {x_r} for D = {d} lies outside the half-domain {}",
            params.x_half()
        )));
    }
    Ok(())
}

/// `n(D)` from the action integral with the exact `sech^2` potential.
pub fn n_of_d_integral(d: f64, nu: f64, params: &WkbParams) -> Result<WkbQuantization> {
    let tp = turning_point(d, nu, params)?;
    check_inside(tp.exact, params, d)?;
    let action = 2.0 * one_sided_action(d, nu, params, tp.exact, false);
    Ok(WkbQuantization { d, nu, n_continuous: action / PI - 0.5, x_turning: tp.exact, method: Method::Integral })
}

/// `n(D)` from the action integral with the exponential tail potential.
pub fn n_of_d_integral_exponential(d: f64, nu: f64, params: &WkbParams) -> Result<WkbQuantization> {
    params.validate()?;
    if !(d > 0.0) {
        return Err(Error::NoTurningPoint(format!("D = {d} must be positive")));
    }
    let x_r = (8.0 * nu * params.c_of(d) * params.beta * params.beta / d).ln() / (2.0 * params.epsilon);
    check_inside(x_r, params, d)?;
    let action = 2.0 * one_sided_action(d, nu, params, x_r.max(0.0), true);
    Ok(WkbQuantization { d, nu, n_continuous: action / PI - 0.5, x_turning: x_r, method: Method::IntegralExponential })
}

/// `n = sqrt(D) (L' - ln(8 nu C beta^2 / D) - 2 (1 - ln 2)) / (eps pi) - 1/2`.
pub fn n_of_d_closed_form(d: f64, nu: f64, params: &WkbParams) -> Result<WkbQuantization> {
    params.validate()?;
    if !(d > 0.0) {
        return Err(Error::domain(format!("D = {d} must be positive")));
    }
    let log = (8.0 * nu * params.c_of(d) * params.beta * params.beta / d).ln();
    let bracket = params.scaled_length() - log - 2.0 * (1.0 - 2f64.ln());
    if !(bracket > 0.0) {
        return Err(Error::domain(format!("domain too small for D = {d}: bracket {bracket}")));
    }
    Ok(WkbQuantization {
        d,
        nu,
        n_continuous: d.sqrt() * bracket / (params.epsilon * PI) - 0.5,
        x_turning: log / (2.0 * params.epsilon),
        method: Method::ClosedForm,
    })
}

pub fn n_of_d(d: f64, nu: f64, params: &WkbParams, method: Method) -> Result<WkbQuantization> {
    match method {
        Method::Integral => n_of_d_integral(d, nu, params),
        Method::IntegralExponential => n_of_d_integral_exponential(d, nu, params),
        Method::ClosedForm => n_of_d_closed_form(d, nu, params),
    }
}

/// `n(D)`, extended by `-1/2` where no outer allowed region exists yet.
fn n_extended(d: f64, nu: f64, params: &WkbParams, method: Method) -> Result<f64> {
    match n_of_d(d, nu, params, method) {
        Ok(q) => Ok(q.n_continuous.max(-0.5)),
        Err(Error::NoTurningPoint(_)) | Err(Error::Domain(_)) if d > 0.0 => Ok(-0.5),
        Err(e) => Err(e),
    }
}

/// Smallest `D` with `n(D) = n`, by bisection to `1e-12` relative.
pub fn invert_n(n: f64, nu: f64, params: &WkbParams, method: Method) -> Result<f64> {
    params.validate()?;
    if !(n > -0.5) {
        return Err(Error::domain(format!("n = {n} must exceed -1/2")));
    }
    let mut lo = 1e-14;
    let mut hi = 1e-6;
    while n_extended(hi, nu, params, method)? < n {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NotConverged(format!("no D found with n = {n}")));
        }
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if n_extended(mid, nu, params, method)? < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BirthValue {
    pub n: usize,
    pub nu: f64,
    pub d: f64,
}

/// Values of `D` where the integral-method `n(D)` reaches each integer in
/// `ns`.
pub fn predict_birth_values(ns: impl IntoIterator<Item = usize>, nu: f64, params: &WkbParams) -> Result<Vec<BirthValue>> {
    ns.into_iter()
        .map(|n| Ok(BirthValue { n, nu, d: invert_n(n as f64, nu, params, Method::Integral)? }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub d: f64,
    pub n_nu1: f64,
    pub n_nu3: f64,
    pub difference: f64,
}

/// `n` for both equations at each `D`.
pub fn scan(ds: &[f64], params: &WkbParams, method: Method) -> Result<Vec<ScanRow>> {
    ds.iter()
        .map(|&d| {
            let n1 = n_of_d(d, 1.0, params, method)?.n_continuous;
            let n3 = n_of_d(d, 3.0, params, method)?.n_continuous;
            Ok(ScanRow { d, n_nu1: n1, n_nu3: n3, difference: n1 - n3 })
        })
        .collect()
}

/// Result of the critical-detuning hypothesis: the first `D` where
/// `n|nu=1 - n|nu=3` exceeds one. Unverified by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcrHypothesis {
    /// Scan points bracketing the first crossing.
    pub bracket: (f64, f64),
    /// Crossing refined by bisection.
    pub d_cr: f64,
    pub c_cr: f64,
    pub method: Method,
    /// Always `false`: the criterion is a conjecture.
    pub verified: bool,
}

/// Scans `D` over `[d_start, d_end]` with step `d_step` for the first point where
/// `n|nu=1 - n|nu=3 > 1`.
pub fn hypothesize_c_cr(params: &WkbParams, method: Method, d_start: f64, d_end: f64, d_step: f64) -> Result<Option<CcrHypothesis>> {
    params.validate()?;
    if !(d_step > 0.0) || !(d_start > 0.0) {
        return Err(Error::domain("scan needs positive start and step"));
    }
    let diff = |d: f64| -> Result<f64> { Ok(n_of_d(d, 1.0, params, method)?.n_continuous - n_of_d(d, 3.0, params, method)?.n_continuous) };
    let steps = ((d_end - d_start) / d_step).floor() as usize;
    let mut prev = d_start;
    if diff(prev)? > 1.0 {
        return Ok(None);
    }
    for j in 1..=steps {
        let d = d_start + j as f64 * d_step;
        if diff(d)? > 1.0 {
            let (mut lo, mut hi) = (prev, d);
            while hi - lo > 1e-12 * hi {
                let mid = 0.5 * (lo + hi);
                if diff(mid)? > 1.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let d_cr = 0.5 * (lo + hi);
            return Ok(Some(CcrHypothesis { bracket: (prev, d), d_cr, c_cr: params.c_of(d_cr), method, verified: false }));
        }
        prev = d;
    }
    Ok(None)
}

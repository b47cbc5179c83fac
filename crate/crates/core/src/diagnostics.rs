//! Measurements on simulation runs: spectra, the high-wavenumber growth rate,
//! extraction of the unstable envelope near `k_max`, and soliton drift.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{dft, idft, ComplexField};
use crate::ssm::SimulationRun;
use crate::C64;

/// Default lower edge of the growth band as a fraction of `k_max`.
pub const DEFAULT_BAND_FRACTION: f64 = 0.9;
/// Default high-pass cutoff as a fraction of `k_max`.
pub const DEFAULT_CUTOFF_FRACTION: f64 = 0.5;
/// Default ceiling on the band-to-background spectral ratio for the linear stage.
pub const DEFAULT_LINEAR_CEILING: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSnapshot {
    pub time: f64,
    /// Wavenumbers in ascending order.
    pub k: Vec<f64>,
    /// `|F[u]|` at each entry of `k`.
    pub magnitudes: Vec<f64>,
}

/// `|F[u]|` in ascending wavenumber order.
pub fn spectrum(field: &ComplexField, time: f64) -> SpectrumSnapshot {
    let coeffs = dft(field);
    let grid = field.grid();
    let (k, magnitudes) = grid.ascending_order().map(|j| (grid.wavenumbers()[j], coeffs[j].norm())).unzip();
    SpectrumSnapshot { time, k, magnitudes }
}

/// Band of wavenumbers `|k| >= k_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KBand {
    pub k_min: f64,
}

impl KBand {
    pub fn near_k_max(k_max: f64, fraction: f64) -> Self {
        Self { k_min: fraction * k_max }
    }

    pub fn contains(&self, k: f64) -> bool {
        k.abs() >= self.k_min
    }
}

/// Largest `|F[u]|` inside `band`; 0 when no bin falls in the band.
pub fn band_max(field: &ComplexField, band: KBand) -> f64 {
    let coeffs = dft(field);
    field
        .grid()
        .wavenumbers()
        .iter()
        .zip(&coeffs)
        .filter(|(k, _)| band.contains(**k))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

/// Largest `|F[u]|` over the whole spectrum.
pub fn spectral_peak(field: &ComplexField) -> f64 {
    dft(field).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRateEstimate {
    /// `[ln(band max at t) - ln(noise floor)] / t`.
    pub rate: f64,
    pub k_band: KBand,
    pub t_measure: f64,
    /// Band maximum of the initial spectrum.
    pub noise_floor: f64,
    pub band_max: f64,
}

impl GrowthRateEstimate {
    /// Band maximum over the noise floor.
    pub fn amplification(&self) -> f64 {
        self.band_max / self.noise_floor
    }
}

/// Growth rate of the high-wavenumber band between the initial snapshot and
/// the snapshot nearest `t`.
pub fn growth_rate(run: &SimulationRun, k_band: KBand, t: f64) -> Result<GrowthRateEstimate> {
    let first = run.first();
    let noise_floor = band_max(&first.field, k_band);
    if !(noise_floor > 0.0) {
        return Err(Error::ZeroNoiseFloor);
    }
    let snap = run.at_time(t);
    if !(snap.time > first.time) {
        return Err(Error::Precondition(format!("no snapshot after t = {} near t = {t}", first.time)));
    }
    let t_measure = snap.time - first.time;
    let bm = band_max(&snap.field, k_band);
    Ok(GrowthRateEstimate { rate: (bm.ln() - noise_floor.ln()) / t_measure, k_band, t_measure, noise_floor, band_max: bm })
}

/// Band maximum over the noise floor for every snapshot, as `(time, ratio)`.
pub fn band_amplification(run: &SimulationRun, k_band: KBand) -> Result<Vec<(f64, f64)>> {
    let floor = band_max(&run.first().field, k_band);
    if !(floor > 0.0) {
        return Err(Error::ZeroNoiseFloor);
    }
    Ok(run.snapshots.iter().map(|s| (s.time, band_max(&s.field, k_band) / floor)).collect())
}

/// Latest snapshot time at which the band maximum is still below `ceiling`
/// times the spectral peak of the initial field, i.e. the perturbation is
/// still small enough to evolve linearly. `None` if even the first snapshot
/// after `t = 0` exceeds it.
pub fn linear_stage_end(run: &SimulationRun, k_band: KBand, ceiling: f64) -> Option<f64> {
    let reference = spectral_peak(&run.first().field);
    run.snapshots
        .iter()
        .skip(1)
        .take_while(|s| band_max(&s.field, k_band) < ceiling * reference)
        .last()
        .map(|s| s.time)
}

/// Growth rate measured at the end of the linear stage.
pub fn growth_rate_linear_stage(run: &SimulationRun, k_band: KBand, ceiling: f64) -> Result<GrowthRateEstimate> {
    let t = linear_stage_end(run, k_band, ceiling).unwrap_or_else(|| run.snapshots.get(1).map_or(0.0, |s| s.time));
    growth_rate(run, k_band, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidePeak {
    pub x: f64,
    /// Signed distance from the soliton center.
    pub offset: f64,
    pub amplitude: f64,
}

/// Slow envelope of the high-wavenumber part of a field.
#[derive(Debug, Clone)]
pub struct ModeProfile {
    /// `w` in `high_pass(u) = exp(i k_max x) w`.
    pub envelope: ComplexField,
    /// Content below the cutoff, kept for reconstruction.
    pub low_pass: ComplexField,
    pub center: f64,
    pub left: SidePeak,
    pub right: SidePeak,
    pub cutoff_fraction: f64,
}

impl ModeProfile {
    /// Side holding the larger envelope peak.
    pub fn side(&self) -> Side {
        if self.left.amplitude > self.right.amplitude {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn peak(&self) -> SidePeak {
        match self.side() {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    /// `exp(i k_max x) w + low_pass`.
    pub fn reconstruct(&self) -> ComplexField {
        let k_max = self.envelope.grid().k_max();
        let values = self
            .envelope
            .values()
            .iter()
            .zip(self.envelope.grid().points())
            .zip(self.low_pass.values())
            .map(|((w, &x), l)| C64::from_polar(1.0, k_max * x) * w + l)
            .collect();
        ComplexField::new(self.envelope.grid().clone(), values).expect("same grid")
    }
}

/// Splits `field` at `cutoff_fraction * k_max`, demodulates the high part by
/// `exp(-i k_max x)` and locates the envelope peak on each side of the
/// soliton, whose center is the maximum of the low-pass part.
pub fn extract_unstable_mode(field: &ComplexField, cutoff_fraction: f64) -> Result<ModeProfile> {
    let grid = field.grid().clone();
    let k_max = grid.k_max();
    let coeffs = dft(field);
    let (mut high, mut low) = (coeffs.clone(), coeffs);
    for (j, &k) in grid.wavenumbers().iter().enumerate() {
        if k.abs() < cutoff_fraction * k_max {
            high[j] = C64::new(0.0, 0.0);
        } else {
            low[j] = C64::new(0.0, 0.0);
        }
    }
    let high = idft(grid.clone(), &high)?;
    let low_pass = idft(grid.clone(), &low)?;
    if !(high.max_abs() > 1e-14 * field.max_abs()) {
        return Err(Error::NoModeFound);
    }
    let envelope = ComplexField::new(
        grid.clone(),
        high.values().iter().zip(grid.points()).map(|(h, &x)| C64::from_polar(1.0, -k_max * x) * h).collect(),
    )?;
    let center = refined_argmax(&low_pass.values().iter().map(|z| z.norm()).collect::<Vec<_>>(), grid.points(), grid.dx());
    let length = grid.length();
    let mut left = SidePeak { x: center, offset: 0.0, amplitude: 0.0 };
    let mut right = left;
    for (w, &x) in envelope.values().iter().zip(grid.points()) {
        let offset = wrap(x - center, length);
        let a = w.norm();
        let slot = if offset < 0.0 { &mut left } else { &mut right };
        if a > slot.amplitude {
            *slot = SidePeak { x, offset, amplitude: a };
        }
    }
    Ok(ModeProfile { envelope, low_pass, center, left, right, cutoff_fraction })
}

/// Signed periodic distance in `[-L/2, L/2)`.
fn wrap(d: f64, length: f64) -> f64 {
    (d + 0.5 * length).rem_euclid(length) - 0.5 * length
}

/// Location of the maximum of periodic samples, refined by a parabola through
/// the neighbouring samples.
fn refined_argmax(values: &[f64], points: &[f64], dx: f64) -> f64 {
    let n = values.len();
    let (j, _) = values.iter().enumerate().fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let (a, b, c) = (values[(j + n - 1) % n], values[j], values[(j + 1) % n]);
    let denom = a - 2.0 * b + c;
    let shift = if denom < 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    points[j] + shift.clamp(-0.5, 0.5) * dx
}

/// Soliton center history.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftTrack {
    pub times: Vec<f64>,
    /// Unwrapped centers; may leave the domain after periodic wrap-around.
    pub centers: Vec<f64>,
    /// Peak of the low-pass modulus at each time.
    pub peaks: Vec<f64>,
    /// Soliton width `sqrt(-beta) / A`, the onset threshold.
    pub width: f64,
    /// First time the center moved more than one width from its start.
    pub onset_time: Option<f64>,
    /// Least-squares slope of the center over the second half of the track.
    pub velocity: Option<f64>,
    /// Set when tracking stopped because the soliton peak fell below half its
    /// initial value.
    pub truncated: bool,
}

impl DriftTrack {
    pub fn max_displacement(&self) -> f64 {
        self.centers.iter().map(|c| (c - self.centers[0]).abs()).fold(0.0, f64::max)
    }

    /// Largest displacement over snapshots with `t0 < t <= t1`.
    pub fn max_displacement_in(&self, t0: f64, t1: f64) -> f64 {
        self.times
            .iter()
            .zip(&self.centers)
            .filter(|(t, _)| **t > t0 && **t <= t1)
            .map(|(_, c)| (c - self.centers[0]).abs())
            .fold(0.0, f64::max)
    }
}

/// Tracks the soliton center as the refined maximum of the low-pass modulus
/// (content below half of `k_max`).
pub fn track_drift(run: &SimulationRun) -> Result<DriftTrack> {
    let config = &run.config;
    if !(config.beta < 0.0) || config.amplitude == 0.0 {
        return Err(Error::domain("drift tracking needs a soliton background (beta < 0)"));
    }
    let width = (-config.beta).sqrt() / config.amplitude.abs();
    let grid = run.first().field.grid().clone();
    let length = grid.length();
    let k_cut = DEFAULT_CUTOFF_FRACTION * grid.k_max();
    let mut track = DriftTrack {
        times: Vec::new(),
        centers: Vec::new(),
        peaks: Vec::new(),
        width,
        onset_time: None,
        velocity: None,
        truncated: false,
    };
    for snap in &run.snapshots {
        let mut coeffs = dft(&snap.field);
        for (c, &k) in coeffs.iter_mut().zip(grid.wavenumbers()) {
            if k.abs() >= k_cut {
                *c = C64::new(0.0, 0.0);
            }
        }
        let low = idft(grid.clone(), &coeffs)?;
        let modulus: Vec<f64> = low.values().iter().map(|z| z.norm()).collect();
        let peak = modulus.iter().cloned().fold(0.0, f64::max);
        if let Some(&p0) = track.peaks.first() {
            if peak < 0.5 * p0 {
                track.truncated = true;
                break;
            }
        }
        let raw = refined_argmax(&modulus, grid.points(), grid.dx());
        let center = match track.centers.last() {
            Some(&prev) => prev + wrap(raw - prev, length),
            None => raw,
        };
        track.times.push(snap.time);
        track.centers.push(center);
        track.peaks.push(peak);
    }
    let c0 = track.centers[0];
    track.onset_time = track.times.iter().zip(&track.centers).find(|(_, c)| (**c - c0).abs() > width).map(|(t, _)| *t);
    let half = track.times.len() / 2;
    if track.times.len() - half >= 2 {
        track.velocity = Some(slope(&track.times[half..], &track.centers[half..]));
    }
    Ok(track)
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

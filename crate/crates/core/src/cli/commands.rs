use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::files::{fmt_f64, fmt_opt, OutputDir, RunManifest};
use super::settings::{EigenSettings, GrowthSettings, RunConfig};
use crate::config::SimConfig;
use crate::diagnostics::{
    band_amplification, band_max, growth_rate_linear_stage, spectrum, track_drift, DriftTrack, GrowthRateEstimate,
    KBand,
};
use crate::eigen::{
    growth_rate_physical, solve_auto, solve_smallest, symmetry_check, EigenProblem, EigenReport, SymmetryCheck,
};
use crate::error::{Error, Result};
use crate::numerics::{make_noise, make_plane_wave, make_soliton, ComplexField};
use crate::ssm::{run_split_step, RunOutcome, SimulationRun};
use crate::theory::{
    c_from_d, d_from_c, rescale, threshold_fd_planewave, threshold_fd_soliton, threshold_ssm_spectral,
    PlaneWaveThreshold,
};
use crate::wkb::{hypothesize_c_cr, invert_n, scan, CcrHypothesis, Method};
use crate::C64;

pub const EXIT_SUCCESS: u8 = 0;
/// I/O and other failures outside the documented contract.
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_BLOW_UP: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;

/// How a command ended when it produced its outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    /// The simulation blew up; outputs cover the run up to that point.
    BlowUp,
    /// Some eigenpairs missed the residual bound; the report is partial.
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => EXIT_SUCCESS,
            Status::BlowUp => EXIT_BLOW_UP,
            Status::NotConverged => EXIT_NOT_CONVERGED,
        }
    }
}

/// Exit code for an error that prevented a command from finishing.
pub fn error_exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Domain(_) | Error::Precondition(_) | Error::ZeroNoiseFloor => EXIT_CONFIG,
        Error::NotConverged(_) => EXIT_NOT_CONVERGED,
        _ => EXIT_FAILURE,
    }
}

#[derive(Debug)]
pub struct CommandOutput {
    pub status: Status,
    pub manifest: RunManifest,
}

/// Soliton plus seeded noise for `beta < 0`, plane wave plus noise otherwise.
pub fn initial_condition(config: &SimConfig) -> Result<ComplexField> {
    let grid = config.grid()?;
    let background = if config.beta < 0.0 {
        make_soliton(grid.clone(), config.amplitude, config.beta, config.gamma)?
    } else {
        make_plane_wave(grid.clone(), config.amplitude, config.gamma)?
    };
    background.add(&make_noise(grid, config.noise_std, config.rng_seed, config.noise_kind)?)
}

#[derive(Debug, Serialize)]
struct SimulationSummary<'a> {
    outcome: &'a RunOutcome,
    steps: usize,
    wall_time: f64,
    growth: Option<GrowthRateEstimate>,
    drift: Option<DriftSummary>,
}

#[derive(Debug, Serialize)]
struct DriftSummary {
    width: f64,
    onset_time: Option<f64>,
    velocity: Option<f64>,
    max_displacement: f64,
    truncated: bool,
}

/// Runs the split-step integrator and writes snapshots, spectra, the band
/// amplification and drift series, and a summary.
pub fn cmd_simulate(config: &RunConfig, out_dir: &Path) -> Result<CommandOutput> {
    let sim = &config.simulation;
    let mut out = OutputDir::create(out_dir)?;
    let run = run_split_step(sim, &initial_condition(sim)?)?;
    write_snapshots(&mut out, &run)?;

    let grid = run.first().field.grid().clone();
    let band = KBand::near_k_max(grid.k_max(), config.growth.band_fraction);
    let floor = band_max(&run.first().field, band);
    let rows: Vec<Vec<String>> = run
        .snapshots
        .iter()
        .map(|s| {
            let b = band_max(&s.field, band);
            vec![fmt_f64(s.time), fmt_f64(b), fmt_opt((floor > 0.0).then(|| b / floor))]
        })
        .collect();
    out.write_csv("band.csv", &["time", "band_max", "amplification"], &rows)?;

    let growth = growth_rate_linear_stage(&run, band, config.growth.linear_ceiling).ok();
    let drift = if sim.beta < 0.0 { Some(track_drift(&run)?) } else { None };
    if let Some(track) = &drift {
        write_drift(&mut out, track)?;
    }
    let summary = SimulationSummary {
        outcome: &run.outcome,
        steps: run.last().step,
        wall_time: run.wall_time,
        growth,
        drift: drift.as_ref().map(|t| DriftSummary {
            width: t.width,
            onset_time: t.onset_time,
            velocity: t.velocity,
            max_displacement: t.max_displacement(),
            truncated: t.truncated,
        }),
    };
    out.write_json("summary.json", &summary)?;
    let status = if run.completed() { Status::Success } else { Status::BlowUp };
    Ok(CommandOutput { status, manifest: out.finish("simulate", config)? })
}

fn write_snapshots(out: &mut OutputDir, run: &SimulationRun) -> Result<()> {
    for (j, snap) in run.snapshots.iter().enumerate() {
        let grid = snap.field.grid();
        let rows: Vec<Vec<String>> = grid
            .points()
            .iter()
            .zip(snap.field.values())
            .map(|(x, u)| vec![fmt_f64(*x), fmt_f64(u.re), fmt_f64(u.im)])
            .collect();
        out.write_csv(format!("snapshots/snapshot_{j:05}.csv"), &["x", "re_u", "im_u"], &rows)?;
        let spec = spectrum(&snap.field, snap.time);
        let rows: Vec<Vec<String>> =
            spec.k.iter().zip(&spec.magnitudes).map(|(k, m)| vec![fmt_f64(*k), fmt_f64(*m)]).collect();
        out.write_csv(format!("spectra/spectrum_{j:05}.csv"), &["k", "abs_u_hat"], &rows)?;
    }
    let rows: Vec<Vec<String>> =
        run.snapshots.iter().enumerate().map(|(j, s)| vec![j.to_string(), s.step.to_string(), fmt_f64(s.time)]).collect();
    out.write_csv("snapshots/index.csv", &["index", "step", "time"], &rows)?;
    Ok(())
}

fn write_drift(out: &mut OutputDir, track: &DriftTrack) -> Result<()> {
    let rows: Vec<Vec<String>> = (0..track.times.len())
        .map(|j| vec![fmt_f64(track.times[j]), fmt_f64(track.centers[j]), fmt_f64(track.peaks[j])])
        .collect();
    out.write_csv("drift.csv", &["time", "center", "peak"], &rows)?;
    Ok(())
}

/// One point of a C-scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub c: f64,
    pub n_points: usize,
    pub d: f64,
    /// Band growth rate measured at the end of the linear stage.
    pub lambda_sim: Option<f64>,
    /// `Lambda_R A^2 / (C beta^2)` of the dominant localized mode.
    pub lambda_eig: Option<f64>,
    pub t_measure: Option<f64>,
    pub amplification: Option<f64>,
    /// Least-squares slope of `ln(band max)` over the last decade of the
    /// linear stage.
    pub lambda_slope: Option<f64>,
    /// Failures of either half, empty when both succeeded.
    pub note: String,
}

/// Simulates at `c` and solves the matching eigenproblem.
pub fn growth_point(base: &SimConfig, settings: &GrowthSettings, c: f64, n_points: usize) -> GrowthRow {
    let sim = SimConfig { ratio_c: c, n_points, ..base.clone() };
    let d = d_from_c(c, sim.beta, sim.amplitude);
    let mut notes = Vec::new();
    let mut row = GrowthRow {
        c,
        n_points,
        d,
        lambda_sim: None,
        lambda_eig: None,
        t_measure: None,
        amplification: None,
        lambda_slope: None,
        note: String::new(),
    };

    match measure_growth(&sim, settings) {
        Ok((est, slope)) => {
            row.lambda_sim = Some(est.rate);
            row.t_measure = Some(est.t_measure);
            row.amplification = Some(est.amplification());
            row.lambda_slope = slope;
        }
        Err(e) => notes.push(format!("simulation: {e}")),
    }
    let eig = EigenProblem::for_soliton(d, sim.beta, sim.amplitude, sim.length, sim.dx(), settings.dx_big)
        .and_then(|p| solve_auto(&p, settings.count))
        .and_then(|r| growth_rate_physical(&r, &rescale(c, sim.beta, sim.amplitude, sim.length, sim.dx())?));
    match eig {
        Ok(l) => row.lambda_eig = Some(l),
        Err(Error::NoModeFound) => notes.push("no unstable mode".into()),
        Err(e) => notes.push(format!("eigen: {e}")),
    }
    row.note = notes.join("; ");
    row
}

pub fn measure_growth(sim: &SimConfig, settings: &GrowthSettings) -> Result<(GrowthRateEstimate, Option<f64>)> {
    let run = run_split_step(sim, &initial_condition(sim)?)?;
    let band = KBand::near_k_max(run.first().field.grid().k_max(), settings.band_fraction);
    let est = growth_rate_linear_stage(&run, band, settings.linear_ceiling)?;
    let series = band_amplification(&run, band)?;
    let late: Vec<(f64, f64)> = series
        .into_iter()
        .filter(|(t, a)| *t > 0.0 && *t <= est.t_measure && *a >= est.amplification() / 10.0)
        .map(|(t, a)| (t, a.ln()))
        .collect();
    Ok((est, fit_slope(&late)))
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (mt, my) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mt) * (p.1 - my), a.1 + (p.0 - mt).powi(2)));
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Scans `C` (and grid sizes) in parallel and writes `growth.csv`.
pub fn cmd_growth(config: &RunConfig, out_dir: &Path) -> Result<CommandOutput> {
    let settings = &config.growth;
    let ns = if settings.n_points.is_empty() { vec![config.simulation.n_points] } else { settings.n_points.clone() };
    let points: Vec<(usize, f64)> = ns.iter().flat_map(|&n| settings.c_values.iter().map(move |&c| (n, c))).collect();
    let rows: Vec<GrowthRow> =
        points.par_iter().map(|&(n, c)| growth_point(&config.simulation, settings, c, n)).collect();
    let mut out = OutputDir::create(out_dir)?;
    let csv: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.c),
                r.n_points.to_string(),
                fmt_f64(r.d),
                fmt_opt(r.lambda_sim),
                fmt_opt(r.lambda_eig),
                fmt_opt(r.t_measure),
                fmt_opt(r.amplification),
                fmt_opt(r.lambda_slope),
                csv_text(&r.note),
            ]
        })
        .collect();
    out.write_csv(
        "growth.csv",
        &["c", "n_points", "d", "lambda_sim", "lambda_eig", "t_measure", "amplification", "lambda_slope", "note"],
        &csv,
    )?;
    Ok(CommandOutput { status: Status::Success, manifest: out.finish("growth", config)? })
}

fn csv_text(s: &str) -> String {
    s.replace([',', '\n'], ";")
}

/// Detuning and problem described by the `[eigen]` section.
pub fn eigen_problem(config: &RunConfig) -> Result<EigenProblem> {
    let sim = &config.simulation;
    let EigenSettings { d, c, dx_big, shift, .. } = config.eigen;
    let d = d.unwrap_or_else(|| d_from_c(c.unwrap_or(sim.ratio_c), sim.beta, sim.amplitude));
    let problem = EigenProblem::for_soliton(d, sim.beta, sim.amplitude, sim.length, 2.0 * config.epsilon(), dx_big)?;
    Ok(match shift {
        Some([re, im]) => problem.with_shift(C64::new(re, im)),
        None => problem,
    })
}

#[derive(Debug, Serialize)]
struct EigenOutput<'a> {
    d: f64,
    c: f64,
    epsilon: f64,
    report: &'a EigenReport,
    no_unstable_mode: bool,
    dominant_lambda: Option<f64>,
    physical_growth_rate: Option<f64>,
    symmetry: SymmetryCheck,
    profiles: Vec<String>,
}

/// Solves the envelope eigenproblem and writes `eigen.json` and profiles of
/// the leading localized modes.
pub fn cmd_eigen(config: &RunConfig, out_dir: &Path) -> Result<CommandOutput> {
    let sim = &config.simulation;
    let problem = eigen_problem(config)?;
    let report = if config.eigen.shift.is_some() {
        solve_smallest(&problem, config.eigen.count)?
    } else {
        solve_auto(&problem, config.eigen.count)?
    };
    let c = c_from_d(problem.d, sim.beta, sim.amplitude);
    let epsilon = config.epsilon();
    let rescaled = rescale(c, sim.beta, sim.amplitude, sim.length, 2.0 * epsilon).ok();

    let mut out = OutputDir::create(out_dir)?;
    let mut profiles = Vec::new();
    for (j, pair) in report.localized_real().take(config.eigen.max_profiles).enumerate() {
        let (f1, f2) = (pair.component(0), pair.component(1));
        let rows: Vec<Vec<String>> = (0..problem.n_points)
            .map(|m| {
                vec![fmt_f64(problem.x[m]), fmt_f64(f1[m].re), fmt_f64(f1[m].im), fmt_f64(f2[m].re), fmt_f64(f2[m].im)]
            })
            .collect();
        let name = format!("modes/mode_{j:02}.csv");
        out.write_csv(&name, &["x_big", "re_phi1", "im_phi1", "re_phi2", "im_phi2"], &rows)?;
        profiles.push(name);
    }
    let dominant = report.dominant_pair().map(|p| p.lambda.re);
    let output = EigenOutput {
        d: problem.d,
        c,
        epsilon,
        report: &report,
        no_unstable_mode: dominant.is_none(),
        dominant_lambda: dominant,
        physical_growth_rate: rescaled.and_then(|r| growth_rate_physical(&report, &r).ok()),
        symmetry: symmetry_check(&report, config.eigen.symmetry_tolerance),
        profiles,
    };
    out.write_json("eigen.json", &output)?;
    let status = if report.all_converged { Status::Success } else { Status::NotConverged };
    Ok(CommandOutput { status, manifest: out.finish("eigen", config)? })
}

#[derive(Debug, Serialize)]
struct WkbOutput {
    method: Method,
    d_start: f64,
    d_end: f64,
    d_step: f64,
    hypothesis: Option<CcrHypothesis>,
}

/// Writes the `n(D)` scan, mode-birth values and the critical-`C` hypothesis.
pub fn cmd_wkb(config: &RunConfig, out_dir: &Path) -> Result<CommandOutput> {
    let w = &config.wkb;
    let params = config.wkb_params();
    let ds = w.points();
    let rows = scan(&ds, &params, w.method)?;
    let mut out = OutputDir::create(out_dir)?;
    let csv: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![fmt_f64(r.d), fmt_f64(r.n_nu1), fmt_f64(r.n_nu3), fmt_f64(r.difference)])
        .collect();
    out.write_csv("scan.csv", &["d", "n_nu1", "n_nu3", "difference"], &csv)?;

    let mut births = Vec::new();
    for nu in [1.0, 3.0] {
        for &n in &w.births {
            let d = invert_n(n as f64, nu, &params, w.method).ok();
            births.push(vec![fmt_f64(nu), n.to_string(), fmt_opt(d), fmt_opt(d.map(|d| params.c_of(d)))]);
        }
    }
    out.write_csv("births.csv", &["nu", "n", "d", "c"], &births)?;

    let hypothesis = if !ds.is_empty() && w.d_start > 0.0 {
        hypothesize_c_cr(&params, w.method, w.d_start, w.d_end, w.d_step)?
    } else {
        None
    };
    let summary = WkbOutput { method: w.method, d_start: w.d_start, d_end: w.d_end, d_step: w.d_step, hypothesis };
    out.write_json("hypothesis.json", &summary)?;
    Ok(CommandOutput { status: Status::Success, manifest: out.finish("wkb", config)? })
}

/// Stability thresholds for the simulation parameters, as printable lines.
pub fn thresholds_report(sim: &SimConfig) -> Vec<String> {
    let dx = sim.dx();
    let mut lines = vec![
        format!("beta = {}, A = {}, dx = {}", sim.beta, sim.amplitude, dx),
        format!("current dt = {}, C = (dt/dx)^2 = {}", sim.dt(), sim.ratio_c),
    ];
    match threshold_ssm_spectral(sim.beta, dx) {
        Ok(dt) => lines.push(format!("spectral SSM, plane wave: unstable for dt > {dt}")),
        Err(e) => lines.push(format!("spectral SSM, plane wave: {e}")),
    }
    match threshold_fd_planewave(sim.beta, sim.amplitude, dx) {
        Ok(PlaneWaveThreshold::Conditional(dt)) => {
            lines.push(format!("fd SSM, plane wave: unstable for dt > {dt} (C > {})", (dt / dx).powi(2)))
        }
        Ok(PlaneWaveThreshold::Unconditional) => lines.push("fd SSM, plane wave: stable for every dt".into()),
        Err(e) => lines.push(format!("fd SSM, plane wave: {e}")),
    }
    match threshold_fd_soliton(sim.beta, sim.amplitude) {
        Ok(c) => lines.push(format!(
            "fd SSM, soliton: unstable modes need C > {c} (dt > {}); here D = {}",
            c.sqrt() * dx,
            d_from_c(sim.ratio_c, sim.beta, sim.amplitude)
        )),
        Err(e) => lines.push(format!("fd SSM, soliton: {e}")),
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::files::parse_csv;

    fn small_sim() -> SimConfig {
        SimConfig { n_points: 64, length: 20.0, t_final: 2.0, snapshot_interval: 1.0, ..SimConfig::default() }
    }

    #[test]
    fn slope_of_exact_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|j| (j as f64, 0.3 * j as f64 - 1.0)).collect();
        assert!((fit_slope(&pts).unwrap() - 0.3).abs() < 1e-14);
        assert!(fit_slope(&pts[..1]).is_none());
    }

    #[test]
    fn simulate_writes_listed_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { simulation: small_sim(), ..RunConfig::default() };
        let out = cmd_simulate(&cfg, dir.path()).unwrap();
        assert_eq!(out.status, Status::Success);
        for p in &out.manifest.outputs {
            assert!(dir.path().join(p).is_file());
        }
        let text = std::fs::read_to_string(dir.path().join("snapshots/snapshot_00000.csv")).unwrap();
        let (header, rows) = parse_csv(&text);
        assert_eq!(header, ["x", "re_u", "im_u"]);
        assert_eq!(rows.len(), 64);
        let u0 = initial_condition(&cfg.simulation).unwrap();
        for (row, u) in rows.iter().zip(u0.values()) {
            assert_eq!(row[1], Some(u.re));
            assert_eq!(row[2], Some(u.im));
        }
    }

    #[test]
    fn seed_changes_noise_only() {
        let a = initial_condition(&small_sim()).unwrap();
        let b = initial_condition(&SimConfig { rng_seed: 99, ..small_sim() }).unwrap();
        let diff = a.sub(&b).unwrap();
        assert!(diff.max_abs() > 0.0 && diff.max_abs() < 1e-8);
    }

    #[test]
    fn empty_wkb_range_gives_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::default();
        cfg.wkb.d_start = 0.02;
        cfg.wkb.d_end = 0.01;
        cfg.wkb.births = vec![0];
        let out = cmd_wkb(&cfg, dir.path()).unwrap();
        assert_eq!(out.status, Status::Success);
        let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
        assert_eq!(text, "d,n_nu1,n_nu3,difference\n");
    }

    #[test]
    fn thresholds_for_defaults() {
        let lines = thresholds_report(&SimConfig::default());
        assert!(lines.iter().any(|l| l.contains("stable for every dt")));
        assert!(lines.iter().any(|l| l.contains("need C > 1")));
    }

    #[test]
    fn error_codes() {
        assert_eq!(error_exit_code(&Error::config("x")), EXIT_CONFIG);
        assert_eq!(error_exit_code(&Error::NotConverged("x".into())), EXIT_NOT_CONVERGED);
        assert_eq!(Status::BlowUp.exit_code(), EXIT_BLOW_UP);
    }
}

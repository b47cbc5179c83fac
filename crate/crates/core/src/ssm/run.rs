use std::time::Instant;

use serde::Serialize;

use super::operators::{nonlinear_step_in_place, StepOperators};
use crate::config::{SimConfig, Splitting};
use crate::error::{Error, Result};
use crate::numerics::ComplexField;

/// A run aborts once any sample exceeds this multiple of the initial maximum.
pub const BLOW_UP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub step: usize,
    pub field: ComplexField,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowUp {
    /// First step whose output was rejected.
    pub step: usize,
    pub time: f64,
    pub max_abs: f64,
    pub non_finite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RunOutcome {
    Completed,
    BlowUp(BlowUp),
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub config: SimConfig,
    pub snapshots: Vec<Snapshot>,
    /// Wall-clock seconds spent stepping.
    pub wall_time: f64,
    pub outcome: RunOutcome,
}

impl SimulationRun {
    pub fn completed(&self) -> bool {
        self.outcome == RunOutcome::Completed
    }

    pub fn first(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("a run holds at least the initial snapshot")
    }

    /// Snapshot whose time is closest to `t`.
    pub fn at_time(&self, t: f64) -> &Snapshot {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.time - t).abs().total_cmp(&(b.time - t).abs()))
            .expect("a run holds at least the initial snapshot")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }
}

/// Step indices at which snapshots are recorded: 0, the step nearest each
/// multiple of `snapshot_interval`, and the final step.
pub(crate) fn snapshot_steps(config: &SimConfig) -> Vec<usize> {
    let dt = config.dt();
    let n_steps = config.n_steps();
    let mut steps = vec![0];
    let mut j = 1usize;
    loop {
        let s = (j as f64 * config.snapshot_interval / dt).round() as usize;
        if s > n_steps {
            break;
        }
        if s > *steps.last().unwrap() {
            steps.push(s);
        }
        j += 1;
    }
    if *steps.last().unwrap() != n_steps {
        steps.push(n_steps);
    }
    steps
}

/// Integrates the NLS from `u0` with the split-step scheme selected by
/// `config`.
///
/// First-order splitting applies the nonlinear then the dispersive step each
/// step. Strang splitting alternates that order on consecutive steps.
pub fn run_split_step(config: &SimConfig, u0: &ComplexField) -> Result<SimulationRun> {
    config.validate()?;
    let grid = u0.grid().clone();
    if grid.len() != config.n_points || (grid.length() - config.length).abs() > 1e-12 * config.length {
        return Err(Error::config(format!(
            "initial field lives on a grid of {} points over {}, config asks for {} over {}",
            grid.len(),
            grid.length(),
            config.n_points,
            config.length
        )));
    }
    let ops = StepOperators::from_config(config, grid);
    let dt = config.dt();
    let n_steps = config.n_steps();
    let record = snapshot_steps(config);
    let limit = BLOW_UP_FACTOR * u0.max_abs().max(f64::MIN_POSITIVE);

    let start = Instant::now();
    let mut u = u0.clone();
    let mut snapshots = vec![Snapshot { time: 0.0, step: 0, field: u.clone() }];
    let mut next = 1;
    let mut outcome = RunOutcome::Completed;
    let mut trial = u.clone();
    for step in 1..=n_steps {
        trial.values_mut().copy_from_slice(u.values());
        let nonlinear_first = config.splitting == Splitting::FirstOrder || step % 2 == 1;
        if nonlinear_first {
            nonlinear_step_in_place(trial.values_mut(), config.gamma, dt);
            ops.dispersive_in_place(trial.values_mut())?;
        } else {
            ops.dispersive_in_place(trial.values_mut())?;
            nonlinear_step_in_place(trial.values_mut(), config.gamma, dt);
        }
        let finite = trial.is_finite();
        let max_abs = trial.max_abs();
        if !finite || max_abs > limit {
            outcome = RunOutcome::BlowUp(BlowUp { step, time: step as f64 * dt, max_abs, non_finite: !finite });
            if snapshots.last().map(|s| s.step) != Some(step - 1) {
                snapshots.push(Snapshot { time: (step - 1) as f64 * dt, step: step - 1, field: u.clone() });
            }
            break;
        }
        std::mem::swap(&mut u, &mut trial);
        if next < record.len() && record[next] == step {
            snapshots.push(Snapshot { time: step as f64 * dt, step, field: u.clone() });
            next += 1;
        }
    }
    Ok(SimulationRun { config: config.clone(), snapshots, wall_time: start.elapsed().as_secs_f64(), outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Boundary, Scheme};
    use crate::numerics::{make_plane_wave, make_soliton};
    use crate::C64;

    fn plane_wave_config() -> SimConfig {
        SimConfig { length: 20.0, n_points: 64, ratio_c: 0.5, t_final: 10.0, snapshot_interval: 1.0, ..Default::default() }
    }

    #[test]
    fn snapshot_times_follow_interval() {
        let config = plane_wave_config();
        let u0 = make_plane_wave(config.grid().unwrap(), 1.0, 2.0).unwrap();
        let run = run_split_step(&config, &u0).unwrap();
        let dt = config.dt();
        assert_eq!(run.snapshots.len(), 11);
        for (j, s) in run.snapshots.iter().enumerate().take(10) {
            assert!((s.time - j as f64).abs() <= dt);
        }
        assert!((run.last().time - 10.0).abs() <= dt);
    }

    #[test]
    fn plane_wave_keeps_modulus_and_rotates_at_a_squared() {
        let config = plane_wave_config();
        let u0 = make_plane_wave(config.grid().unwrap(), 1.0, 2.0).unwrap();
        let run = run_split_step(&config, &u0).unwrap();
        let last = run.last();
        for z in last.field.values() {
            assert!((z.norm() - 0.5f64.sqrt()).abs() < 1e-10);
            let expected = C64::from_polar(0.5f64.sqrt(), last.time);
            assert!((z - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn norm_is_conserved_for_every_path() {
        let base = SimConfig { t_final: 20.0, ratio_c: 1.05, ..Default::default() };
        let grid = base.grid().unwrap();
        let mut u0 = make_soliton(grid.clone(), 1.0, -1.0, 2.0).unwrap();
        u0.values_mut()[0] = C64::new(0.0, 0.0);
        let n0 = u0.norm();
        for (scheme, boundary, splitting) in [
            (Scheme::Spectral, Boundary::Periodic, Splitting::FirstOrder),
            (Scheme::FiniteDifference, Boundary::Periodic, Splitting::FirstOrder),
            (Scheme::FiniteDifference, Boundary::Periodic, Splitting::Strang),
            (Scheme::FiniteDifference, Boundary::DirichletZero, Splitting::FirstOrder),
        ] {
            let config = SimConfig { scheme, boundary, splitting, ..base.clone() };
            let run = run_split_step(&config, &u0).unwrap();
            for s in &run.snapshots {
                assert!((s.field.norm() - n0).abs() < 1e-10 * n0, "{scheme:?} {boundary:?} {splitting:?}");
            }
        }
    }

    #[test]
    fn blow_up_is_reported_with_last_finite_state() {
        // gamma * |u|^2 * dt overflows to a non-finite phase on the first step
        let config = SimConfig { n_points: 16, length: 4.0, t_final: 1.0, ..Default::default() };
        let u0 = ComplexField::from_fn(config.grid().unwrap(), |_| C64::new(1e200, 0.0));
        let run = run_split_step(&config, &u0).unwrap();
        match run.outcome {
            RunOutcome::BlowUp(b) => {
                assert_eq!(b.step, 1);
                assert!(b.non_finite);
            }
            RunOutcome::Completed => panic!("expected blow-up"),
        }
        assert!(run.last().field.is_finite());
    }

    #[test]
    fn grid_mismatch_is_a_config_error() {
        let config = SimConfig::default();
        let u0 = ComplexField::zeros(std::sync::Arc::new(crate::numerics::Grid1D::new(40.0, 256).unwrap()));
        assert!(matches!(run_split_step(&config, &u0), Err(Error::Config(_))));
    }
}

use serde::Serialize;

use super::krylov::{krylov_schur, KrylovOptions};
use super::problem::{EigenProblem, NumerovSystem};
use crate::error::{Error, Result};
use crate::theory::RescaledParams;
use crate::C64;

/// `|Im Lambda|` below this counts as real.
pub const TOL_REAL: f64 = 1e-10;
/// Localization above this counts as localized.
pub const LOCALIZATION_THRESHOLD: f64 = 0.5;
/// Window width for the localization metric, as a fraction of the domain.
pub const LOCALIZATION_WINDOW: f64 = 0.1;
/// Residual bound `||G f - mu H f|| / ||f||` for an accepted pair.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Upper bound on real targets tried by [`solve_auto`].
pub const MAX_LADDER_RUNGS: usize = 12;

/// Real range `[0, LADDER_CEILING * D]` certified by [`solve_auto`]; `1.1 / sqrt(3)`.
pub const LADDER_CEILING: f64 = 0.635;

/// Number of eigenvalues sought by default.
pub const DEFAULT_COUNT: usize = 24;

#[derive(Debug, Clone, Serialize)]
pub struct EigenPair {
    /// `Lambda` with `G f = i Lambda H f`.
    pub lambda: C64,
    /// `[phi_1; phi_2]`, unit Euclidean norm, largest entry real positive.
    #[serde(skip)]
    pub mode: Vec<C64>,
    /// Largest fraction of the mirror-folded mode density inside a window of
    /// `|X|` spanning 10% of the domain.
    pub localization: f64,
    /// `|X|` at the maximum of the mirror-folded density.
    pub peak_x: f64,
    pub is_real: bool,
    /// `||G f - i Lambda H f||` for the unit-norm mode.
    pub residual: f64,
    pub converged: bool,
    /// `+1` for even, `-1` for odd modes, `0` when parity was not used.
    pub parity: i8,
}

impl EigenPair {
    pub fn is_localized(&self) -> bool {
        self.localization > LOCALIZATION_THRESHOLD
    }

    pub fn component(&self, c: usize) -> &[C64] {
        let n = self.mode.len() / 2;
        &self.mode[c * n..(c + 1) * n]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenReport {
    pub problem: EigenProblem,
    /// Sorted by decreasing `Re Lambda`.
    pub pairs: Vec<EigenPair>,
    /// Greatest-`Re Lambda` pair that is real, localized and unstable.
    pub dominant: Option<usize>,
    /// Targets `Lambda_0` of the windows merged into this report.
    pub shifts: Vec<C64>,
    pub all_converged: bool,
}

impl EigenReport {
    pub fn dominant_pair(&self) -> Option<&EigenPair> {
        self.dominant.map(|i| &self.pairs[i])
    }

    pub fn max_abs_re(&self) -> f64 {
        self.pairs.iter().map(|p| p.lambda.re.abs()).fold(0.0, f64::max)
    }

    /// Real, localized, unstable pairs in decreasing `Lambda`.
    pub fn localized_real(&self) -> impl Iterator<Item = &EigenPair> {
        self.pairs.iter().filter(|p| p.is_real && p.is_localized() && p.lambda.re > TOL_REAL)
    }

    /// Whether the dominant mode peaks outside the soliton core `|eps X| < 1`.
    pub fn dominant_outside_core(&self) -> Option<bool> {
        let eps = self.problem.epsilon()?;
        self.dominant_pair().map(|p| eps * p.peak_x >= 1.0)
    }
}

fn parity_projector(problem: &EigenProblem, sign: f64) -> impl Fn(&mut [C64]) + '_ {
    let n = problem.n_points;
    move |v: &mut [C64]| {
        for c in 0..2 {
            let block = &mut v[c * n..(c + 1) * n];
            for m in 0..=n / 2 {
                let mm = problem.mirror(m);
                if mm < m {
                    continue;
                }
                let (a, b) = (block[m], block[mm]);
                block[m] = 0.5 * (a + sign * b);
                block[mm] = 0.5 * (b + sign * a);
            }
        }
    }
}

/// Factored `G - sigma H` acting on natural-order vectors.
struct ShiftInvert {
    lu: crate::numerics::BandedLu,
    to_folded: Vec<usize>,
}

impl ShiftInvert {
    fn new(problem: &EigenProblem, sigma: C64) -> Result<Self> {
        let (band, to_folded) = problem.shifted_banded(sigma);
        Ok(Self { lu: band.factor()?, to_folded })
    }

    fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut b = vec![C64::new(0.0, 0.0); rhs.len()];
        for (k, &f) in self.to_folded.iter().enumerate() {
            b[f] = rhs[k];
        }
        self.lu.solve_in_place(&mut b);
        self.to_folded.iter().map(|&f| b[f]).collect()
    }
}

fn normalize_mode(f: &mut [C64]) {
    let nrm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let big = f.iter().cloned().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(C64::new(1.0, 0.0));
    let phase = if big.norm() > 0.0 { big.conj() / big.norm() } else { C64::new(1.0, 0.0) };
    f.iter_mut().for_each(|z| *z *= phase / nrm);
}

/// Localization and peak `|X|` from the mirror-folded density.
pub fn localization(problem: &EigenProblem, mode: &[C64]) -> (f64, f64) {
    let n = problem.n_points;
    let rho: Vec<f64> = (0..n).map(|q| mode[q].norm_sqr() + mode[n + q].norm_sqr()).collect();
    let total: f64 = rho.iter().sum();
    // folded[j] collects |X| = j dX, j = 0..=n/2
    let centre = problem.x.iter().position(|x| x.abs() < 0.5 * problem.dx_big).unwrap_or(n / 2);
    let half = n / 2;
    let mut folded = vec![0.0; half + 1];
    for (q, r) in rho.iter().enumerate() {
        let j = (q as isize - centre as isize).unsigned_abs();
        let j = j.min(n - j);
        folded[j.min(half)] += r;
    }
    let width = ((LOCALIZATION_WINDOW * n as f64).round() as usize).max(1).min(half + 1);
    let mut acc: f64 = folded[..width].iter().sum();
    let mut best = acc;
    for j in width..=half {
        acc += folded[j] - folded[j - width];
        best = best.max(acc);
    }
    let peak = folded.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(j, _)| j).unwrap_or(0);
    (if total > 0.0 { best / total } else { 0.0 }, peak as f64 * problem.dx_big)
}

fn polish(problem: &EigenProblem, system: &NumerovSystem, mu: C64, f: &[C64]) -> Option<(C64, Vec<C64>)> {
    let si = ShiftInvert::new(problem, mu).ok()?;
    let mut v = si.solve(&system.apply_h(f));
    normalize_mode(&mut v);
    let gv = system.apply_g(&v);
    let hv = system.apply_h(&v);
    let num: C64 = v.iter().zip(&gv).map(|(a, b)| a.conj() * b).sum();
    let den: C64 = v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
    Some((num / den, v))
}

/// Eigenpairs nearest `problem.shift` by shift-and-invert Krylov–Schur on a
/// banded factorization of `G - i Lambda_0 H`.
///
/// When the potential is mirror-symmetric, even and odd modes are computed
/// separately and merged, so that pairs degenerate to roundoff are both
/// resolved.
pub fn solve_smallest(problem: &EigenProblem, count: usize) -> Result<EigenReport> {
    if count == 0 {
        return Err(Error::config("count must be at least 1"));
    }
    let system = problem.assemble();
    let sigma = C64::new(0.0, 1.0) * problem.shift;
    let si = ShiftInvert::new(problem, sigma)?;
    let op = |x: &[C64]| si.solve(&system.apply_h(x));
    let dim = problem.dim();

    let mut candidates: Vec<(C64, Vec<C64>, bool, i8)> = Vec::new();
    let sectors: Vec<i8> = if problem.is_mirror_symmetric() { vec![1, -1] } else { vec![0] };
    for &sector in &sectors {
        let sector_dim = if sector == 0 { dim } else { dim / 2 };
        let opts = KrylovOptions::for_count(count.min(sector_dim.saturating_sub(2)).max(1));
        let ritz = if sector == 0 {
            krylov_schur(dim, &op, &|_| {}, opts)
        } else {
            let proj = parity_projector(problem, sector as f64);
            krylov_schur(dim, &op, &proj, opts)
        };
        for ((theta, f), conv) in ritz.values.iter().zip(ritz.vectors).zip(ritz.converged) {
            candidates.push((sigma + 1.0 / theta, f, conv, sector));
        }
    }
    candidates.sort_by(|a, b| (a.0 - sigma).norm().total_cmp(&(b.0 - sigma).norm()));
    candidates.truncate(count);

    let mut pairs = Vec::with_capacity(candidates.len());
    for (mu, mut f, conv, parity) in candidates {
        normalize_mode(&mut f);
        let mut mu = mu;
        let mut residual = system.residual(mu, &f);
        if residual > 1e-3 * RESIDUAL_TOL {
            if let Some((mu2, f2)) = polish(problem, &system, mu, &f) {
                let r2 = system.residual(mu2, &f2);
                if r2 < residual {
                    (mu, f, residual) = (mu2, f2, r2);
                }
            }
        }
        let lambda = -C64::new(0.0, 1.0) * mu;
        let (loc, peak_x) = localization(problem, &f);
        pairs.push(EigenPair {
            lambda,
            localization: loc,
            peak_x,
            is_real: lambda.im.abs() < TOL_REAL,
            converged: conv && residual < RESIDUAL_TOL,
            residual,
            parity,
            mode: f,
        });
    }
    Ok(finish(problem.clone(), pairs, vec![problem.shift]))
}

fn finish(problem: EigenProblem, mut pairs: Vec<EigenPair>, shifts: Vec<C64>) -> EigenReport {
    pairs.sort_by(|a, b| b.lambda.re.total_cmp(&a.lambda.re));
    let all_converged = pairs.iter().all(|p| p.converged);
    let mut report = EigenReport { problem, pairs, dominant: None, shifts, all_converged };
    classify_modes(&mut report);
    report
}

/// Recomputes localization metadata and the dominant index.
pub fn classify_modes(report: &mut EigenReport) {
    for p in report.pairs.iter_mut() {
        let (loc, peak) = localization(&report.problem, &p.mode);
        p.localization = loc;
        p.peak_x = peak;
        p.is_real = p.lambda.im.abs() < TOL_REAL;
    }
    report.dominant = report
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_real && p.is_localized() && p.lambda.re > TOL_REAL)
        .max_by(|a, b| a.1.lambda.re.total_cmp(&b.1.lambda.re))
        .map(|(i, _)| i);
}

/// Solves at `Lambda_0 = 0`, then climbs a ladder of real targets
/// `Lambda_0 = D/32, D/16, ...` while `D > 0`. A window around target `t`
/// holding eigenvalues out to distance `rho` certifies the real interval
/// `[t - rho, t + rho]`; the ladder stops once the certified range reaches
/// [`LADDER_CEILING`]` * D`. Windows are merged without duplicates.
///
/// The ceiling rests on the frozen-coefficient rate: for constant `V` the
/// system gives `Lambda^2 = V^2 - (D - kappa^2 - 2V)^2`, whose maximum over
/// `kappa` and `V` is `D / sqrt(3)`.
pub fn solve_auto(problem: &EigenProblem, count: usize) -> Result<EigenReport> {
    let base = solve_smallest(problem, count)?;
    if problem.d <= 0.0 {
        return Ok(base);
    }
    let mut covered = window_radius(&base);
    let mut pairs = base.pairs;
    let mut shifts = base.shifts;
    let mut target = problem.d / 32.0;
    for _ in 0..MAX_LADDER_RUNGS {
        if covered >= LADDER_CEILING * problem.d {
            break;
        }
        // keep windows contiguous
        target = target.min(covered.max(problem.d / 32.0));
        let shifted = problem.clone().with_shift(C64::new(target, 0.0));
        let window = solve_smallest(&shifted, count)?;
        shifts.push(shifted.shift);
        let rho = window_radius(&window);
        if target - rho <= covered {
            covered = covered.max(target + rho);
        }
        merge(&mut pairs, window.pairs);
        target *= 2.0;
    }
    Ok(finish(problem.clone(), pairs, shifts))
}

/// Largest `|Lambda - Lambda_0|` in a window, zero when the window is empty.
fn window_radius(report: &EigenReport) -> f64 {
    let target = report.problem.shift;
    report.pairs.iter().map(|p| (p.lambda - target).norm()).fold(0.0, f64::max)
}

fn merge(into: &mut Vec<EigenPair>, new: Vec<EigenPair>) {
    for p in new {
        let duplicate = into.iter().any(|q| {
            (q.lambda - p.lambda).norm() <= 1e-8 * p.lambda.norm().max(1e-12) && {
                let overlap: C64 = q.mode.iter().zip(&p.mode).map(|(a, b)| a.conj() * b).sum();
                overlap.norm() > 0.9
            }
        });
        if !duplicate {
            into.push(p);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartnerStatus {
    Present,
    Missing,
    /// The partner lies outside the solved window.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryEntry {
    pub lambda: C64,
    /// Status of `-Lambda`, `conj(Lambda)` and `-conj(Lambda)`; the last two
    /// are `Present` trivially for real `Lambda`.
    pub partners: [PartnerStatus; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryCheck {
    pub entries: Vec<SymmetryEntry>,
    /// `||G s f + mu H s f|| / ||f||` with `s` swapping components, for the
    /// dominant mode.
    pub sigma1_residual: Option<f64>,
    pub tolerance: f64,
}

impl SymmetryCheck {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.partners.iter().all(|s| *s != PartnerStatus::Missing))
            && self.sigma1_residual.is_none_or(|r| r < 1e-8)
    }

    pub fn inconclusive(&self) -> usize {
        self.entries.iter().filter(|e| e.partners.contains(&PartnerStatus::Inconclusive)).count()
    }
}

/// Checks the quadruplet symmetry `{Lambda, -Lambda, conj Lambda, -conj Lambda}`
/// of the report's spectrum to `tolerance` relative.
pub fn symmetry_check(report: &EigenReport, tolerance: f64) -> SymmetryCheck {
    let reach = report
        .pairs
        .iter()
        .map(|p| (p.lambda - report.problem.shift).norm())
        .fold(0.0, f64::max);
    let status = |target: C64| {
        let scale = target.norm().max(1e-300);
        if report.pairs.iter().any(|q| (q.lambda - target).norm() <= tolerance * scale) {
            PartnerStatus::Present
        } else if (target - report.problem.shift).norm() >= reach * (1.0 - 1e-9) || report.shifts.len() > 1 {
            PartnerStatus::Inconclusive
        } else {
            PartnerStatus::Missing
        }
    };
    let entries = report
        .pairs
        .iter()
        .map(|p| {
            let l = p.lambda;
            let partners = if p.is_real {
                [status(C64::new(-l.re, 0.0)), PartnerStatus::Present, PartnerStatus::Present]
            } else {
                [status(-l), status(l.conj()), status(-l.conj())]
            };
            SymmetryEntry { lambda: l, partners }
        })
        .collect();
    let sigma1_residual = report.dominant_pair().map(|p| {
        let system = report.problem.assemble();
        let n = report.problem.n_points;
        let swapped: Vec<C64> = p.mode[n..].iter().chain(&p.mode[..n]).cloned().collect();
        let mu = C64::new(0.0, 1.0) * p.lambda;
        system.residual(-mu, &swapped)
    });
    SymmetryCheck { entries, sigma1_residual, tolerance }
}

/// `lambda = Lambda_R A^2 / (C beta^2)` of the dominant pair.
pub fn growth_rate_physical(report: &EigenReport, rescale: &RescaledParams) -> Result<f64> {
    report.dominant_pair().map(|p| rescale.physical_rate(p.lambda.re)).ok_or(Error::NoModeFound)
}

/// All eigenvalues of the pencil by a dense solve of `H^{-1} G`; for small
/// problems and as a test oracle.
pub fn dense_spectrum(problem: &EigenProblem) -> Result<Vec<C64>> {
    if problem.dim() > 2000 {
        return Err(Error::config(format!("dense solve refused for dimension {}", problem.dim())));
    }
    let system = problem.assemble();
    let h = system.dense_h();
    let g = system.dense_g();
    let a = h.lu().solve(&g).ok_or_else(|| Error::Singular { reason: "H".into(), pivot: 0.0, scale: 1.0 })?;
    let eig = nalgebra::linalg::Schur::new(a)
        .eigenvalues()
        .ok_or_else(|| Error::NotConverged("dense Schur decomposition".into()))?;
    let mut lambdas: Vec<C64> = eig.iter().map(|mu| -C64::new(0.0, 1.0) * mu).collect();
    lambdas.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    Ok(lambdas)
}

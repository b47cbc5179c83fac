use nalgebra_sparse::{coo::CooMatrix, csr::CsrMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::BandedMatrix;
use crate::theory::c_from_d;
use crate::C64;

/// Half-bandwidth of the shifted matrix in the folded, interleaved ordering.
pub(crate) const FOLDED_BANDWIDTH: usize = 5;

/// Discretized envelope eigenproblem on a periodic X-grid.
///
/// Unknowns are ordered `[phi_1(X_0..X_{n-1}), phi_2(X_0..X_{n-1})]` with
/// `X_m = -X_half + m dX`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenProblem {
    pub d: f64,
    pub dx_big: f64,
    /// Grid points per component; the periodic domain has `n_points` cells.
    pub n_points: usize,
    #[serde(skip)]
    pub x: Vec<f64>,
    #[serde(skip)]
    pub potential: Vec<f64>,
    /// Target `Lambda_0`: eigenvalues nearest it are sought.
    pub shift: C64,
    /// `C`, `beta`, `A` and `eps` when built from soliton parameters.
    pub physical: Option<PhysicalParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub c: f64,
    pub beta: f64,
    pub amplitude: f64,
    pub epsilon: f64,
    pub length: f64,
}

impl EigenProblem {
    /// Problem for a soliton with parameters `beta`, `A` on a domain of length
    /// `length` with mesh `dx`, at detuning `d`. The X-domain spans
    /// `[-X_half, X_half)` with `X_half = (A / sqrt(-beta)) length / dx`.
    pub fn for_soliton(d: f64, beta: f64, amplitude: f64, length: f64, dx: f64, dx_big: f64) -> Result<Self> {
        if !(beta < 0.0) || amplitude == 0.0 {
            return Err(Error::domain(format!("need beta < 0 and A != 0, got {beta}, {amplitude}")));
        }
        if !(dx > 0.0 && dx_big > 0.0 && length > 0.0) {
            return Err(Error::domain("dx, dX and length must be positive"));
        }
        let c = c_from_d(d, beta, amplitude);
        if !(c > 0.0) {
            return Err(Error::domain(format!("D = {d} maps to C = {c} <= 0")));
        }
        let epsilon = dx / 2.0;
        let x_half = amplitude.abs() / (-beta).sqrt() * length / (2.0 * epsilon);
        let n = (2.0 * x_half / dx_big).round() as usize;
        let n = n + n % 2;
        let dx_big = 2.0 * x_half / n as f64;
        let v0 = 2.0 * c * beta * beta;
        let x: Vec<f64> = (0..n).map(|m| -x_half + m as f64 * dx_big).collect();
        let potential = x.iter().map(|&xx| v0 / (epsilon * xx).cosh().powi(2)).collect();
        let problem = Self {
            d,
            dx_big,
            n_points: n,
            x,
            potential,
            shift: C64::new(0.0, 0.0),
            physical: Some(PhysicalParams { c, beta, amplitude, epsilon, length }),
        };
        problem.check()?;
        Ok(problem)
    }

    /// `beta = -1`, `A = 1`, `L = 40`, `dx = 40/512`, `dX = 1/10`.
    pub fn reference(d: f64) -> Result<Self> {
        Self::for_soliton(d, -1.0, 1.0, 40.0, 40.0 / 512.0, 0.1)
    }

    /// Problem with an arbitrary potential sampled on `n` points spaced `dx_big`.
    pub fn with_potential(d: f64, dx_big: f64, x: Vec<f64>, potential: Vec<f64>) -> Result<Self> {
        let problem = Self {
            d,
            dx_big,
            n_points: x.len(),
            x,
            potential,
            shift: C64::new(0.0, 0.0),
            physical: None,
        };
        problem.check()?;
        Ok(problem)
    }

    pub fn with_shift(mut self, shift: C64) -> Self {
        self.shift = shift;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n_points < 8 || self.potential.len() != self.n_points || self.x.len() != self.n_points {
            return Err(Error::config(format!(
                "eigenproblem needs at least 8 points and matching arrays, got {} / {} / {}",
                self.n_points,
                self.x.len(),
                self.potential.len()
            )));
        }
        Ok(())
    }

    /// Dimension `2 n` of the discretized system.
    pub fn dim(&self) -> usize {
        2 * self.n_points
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.physical.map(|p| p.epsilon)
    }

    /// Index of the mirror image `-X_m` of grid point `m`.
    pub fn mirror(&self, m: usize) -> usize {
        (self.n_points - m) % self.n_points
    }

    /// Whether the potential is even about `X = 0`, so parity is conserved.
    pub fn is_mirror_symmetric(&self) -> bool {
        let n = self.n_points;
        if !n.is_multiple_of(2) || self.x[n / 2].abs() > 1e-9 * self.dx_big {
            return false;
        }
        let scale = self.potential.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        (0..n).all(|m| (self.potential[m] - self.potential[self.mirror(m)]).abs() <= 1e-13 * scale)
    }

    /// Entries of row `(c, q)` of `G` (unshifted) as `(component, point, value)`,
    /// and the diagonal-block entries of `H`.
    fn stencil(&self, c: usize, q: usize) -> (RowG, RowH) {
        let n = self.n_points;
        let (qm, qp) = ((q + n - 1) % n, (q + 1) % n);
        let s = if c == 0 { 1.0 } else { -1.0 };
        let inv = 1.0 / (self.dx_big * self.dx_big);
        let d = self.d;
        let v = &self.potential;
        let other = 1 - c;
        (
            [
                (c, qm, s * (inv + d / 12.0 - 2.0 * v[qm] / 12.0)),
                (c, q, s * (-2.0 * inv + 10.0 * d / 12.0 - 20.0 * v[q] / 12.0)),
                (c, qp, s * (inv + d / 12.0 - 2.0 * v[qp] / 12.0)),
                (other, qm, -s * v[qm] / 12.0),
                (other, q, -s * 10.0 * v[q] / 12.0),
                (other, qp, -s * v[qp] / 12.0),
            ],
            [(qm, 1.0 / 12.0), (q, 10.0 / 12.0), (qp, 1.0 / 12.0)],
        )
    }

    /// Sparse `G = sigma_3 [A/dX^2 + D N - N V]` (without the shift) and `H = N`.
    pub fn assemble(&self) -> NumerovSystem {
        let n = self.n_points;
        let mut g = CooMatrix::new(2 * n, 2 * n);
        let mut h = CooMatrix::new(2 * n, 2 * n);
        for c in 0..2 {
            for q in 0..n {
                let (gs, hs) = self.stencil(c, q);
                for (cc, qq, val) in gs {
                    g.push(c * n + q, cc * n + qq, C64::new(val, 0.0));
                }
                for (qq, val) in hs {
                    h.push(c * n + q, c * n + qq, C64::new(val, 0.0));
                }
            }
        }
        NumerovSystem { g: CsrMatrix::from(&g), h: CsrMatrix::from(&h) }
    }

    /// Position of each grid point in the folded ordering `0, n-1, 1, n-2, ...`,
    /// which keeps periodic neighbours within two places of each other.
    pub(crate) fn folded_positions(&self) -> Vec<usize> {
        let n = self.n_points;
        let mut pos = vec![0; n];
        for i in 0..n {
            let q = if i % 2 == 0 { i / 2 } else { n - 1 - (i - 1) / 2 };
            pos[q] = i;
        }
        pos
    }

    /// `G - sigma H` as a banded matrix in the folded, interleaved ordering
    /// (`index = 2 pos[q] + c`), together with the map from natural to folded
    /// indices.
    pub(crate) fn shifted_banded(&self, sigma: C64) -> (BandedMatrix, Vec<usize>) {
        let n = self.n_points;
        let pos = self.folded_positions();
        let idx = |c: usize, q: usize| 2 * pos[q] + c;
        let mut band = BandedMatrix::zeros(2 * n, FOLDED_BANDWIDTH, FOLDED_BANDWIDTH);
        for c in 0..2 {
            for q in 0..n {
                let row = idx(c, q);
                let (gs, hs) = self.stencil(c, q);
                for (cc, qq, val) in gs {
                    band.add(row, idx(cc, qq), C64::new(val, 0.0));
                }
                for (qq, val) in hs {
                    band.add(row, idx(c, qq), -sigma * val);
                }
            }
        }
        let natural_to_folded = (0..2 * n).map(|k| idx(k / n, k % n)).collect();
        (band, natural_to_folded)
    }
}

/// Sparse matrices of the generalized problem `G f = mu H f`, `mu = i Lambda`.
#[derive(Debug, Clone)]
pub struct NumerovSystem {
    pub g: CsrMatrix<C64>,
    pub h: CsrMatrix<C64>,
}

impl NumerovSystem {
    pub fn apply_g(&self, f: &[C64]) -> Vec<C64> {
        spmv(&self.g, f)
    }

    pub fn apply_h(&self, f: &[C64]) -> Vec<C64> {
        spmv(&self.h, f)
    }

    /// `|| G f - mu H f ||_2`.
    pub fn residual(&self, mu: C64, f: &[C64]) -> f64 {
        let gf = self.apply_g(f);
        let hf = self.apply_h(f);
        gf.iter().zip(&hf).map(|(a, b)| (a - mu * b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dense_g(&self) -> nalgebra::DMatrix<C64> {
        dense(&self.g)
    }

    pub fn dense_h(&self) -> nalgebra::DMatrix<C64> {
        dense(&self.h)
    }
}

fn spmv(a: &CsrMatrix<C64>, x: &[C64]) -> Vec<C64> {
    a.row_iter()
        .map(|row| row.col_indices().iter().zip(row.values()).map(|(&j, v)| v * x[j]).sum())
        .collect()
}

/// `(component, point, value)` entries of one row of `G`.
type RowG = [(usize, usize, f64); 6];
/// `(point, value)` entries of one row of the diagonal block of `H`.
type RowH = [(usize, f64); 3];

fn dense(a: &CsrMatrix<C64>) -> nalgebra::DMatrix<C64> {
    let mut m = nalgebra::DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplet_iter() {
        m[(i, j)] += *v;
    }
    m
}

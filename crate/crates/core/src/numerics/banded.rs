#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};
use crate::C64;

/// Square complex band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl` columns
/// hold the fill produced by row interchanges during factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![C64::new(0.0, 0.0); n * width] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        // column j sits at offset j - (i - kl) within row i
        let offset = (j + self.kl).checked_sub(i)?;
        (offset < self.width).then(|| i * self.width + offset)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map_or(C64::new(0.0, 0.0), |s| self.data[s])
    }

    /// Adds `value` at `(i, j)`. Panics when the entry is outside the band.
    pub fn add(&mut self, i: usize, j: usize, value: C64) {
        assert!(
            i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band (kl={}, ku={})",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j).unwrap();
        self.data[s] += value;
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// LU factorization with partial pivoting.
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let reach = self.ku + kl;
        let scale = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut pivots = vec![0usize; n];
        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let last_col = (i + reach).min(n - 1);
            let mut p = i;
            let mut best = self.get(i, i).norm();
            for r in i + 1..=last_row {
                let v = self.get(r, i).norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            pivots[i] = p;
            if !(best > 1e-300 && best > f64::EPSILON * 1e-3 * scale) {
                return Err(Error::Singular {
                    reason: format!("zero pivot in column {i} of banded factorization"),
                    pivot: best,
                    scale,
                });
            }
            if p != i {
                for col in i..=last_col {
                    let a = self.slot(i, col).unwrap();
                    let b = self.slot(p, col).unwrap();
                    self.data.swap(a, b);
                }
            }
            let pivot = self.get(i, i);
            for r in i + 1..=last_row {
                let s = self.slot(r, i).unwrap();
                let l = self.data[s] / pivot;
                self.data[s] = l;
                if l == C64::new(0.0, 0.0) {
                    continue;
                }
                for col in i + 1..=last_col {
                    let u = self.data[self.slot(i, col).unwrap()];
                    let t = self.slot(r, col).unwrap();
                    self.data[t] -= l * u;
                }
            }
        }
        Ok(BandedLu { lu: self, pivots })
    }
}

/// Factorization produced by [`BandedMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandedLu {
    lu: BandedMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn len(&self) -> usize {
        self.lu.n
    }

    pub fn is_empty(&self) -> bool {
        self.lu.n == 0
    }

    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.lu.n;
        assert_eq!(b.len(), n);
        let kl = self.lu.kl;
        let reach = self.lu.ku + kl;
        for i in 0..n {
            let p = self.pivots[i];
            if p != i {
                b.swap(i, p);
            }
            let bi = b[i];
            for r in i + 1..=(i + kl).min(n - 1) {
                b[r] -= self.lu.get(r, i) * bi;
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for col in i + 1..=(i + reach).min(n - 1) {
                acc -= self.lu.get(i, col) * b[col];
            }
            b[i] = acc / self.lu.get(i, i);
        }
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut b = rhs.to_vec();
        self.solve_in_place(&mut b);
        b
    }
}

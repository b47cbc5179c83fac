use crate::error::{Error, Result};
use crate::C64;

const PIVOT_TOL: f64 = 1e-14;

/// Tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    /// Sub-diagonal, `sub[i] = A[i+1][i]`, length `n - 1`.
    pub sub: Vec<C64>,
    pub diag: Vec<C64>,
    /// Super-diagonal, `sup[i] = A[i][i+1]`, length `n - 1`.
    pub sup: Vec<C64>,
}

impl Tridiagonal {
    pub fn new(sub: Vec<C64>, diag: Vec<C64>, sup: Vec<C64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::config(format!(
                "tridiagonal sizes inconsistent: sub {}, diag {}, sup {}",
                sub.len(),
                n,
                sup.len()
            )));
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn scale(&self) -> f64 {
        self.sub
            .iter()
            .chain(&self.diag)
            .chain(&self.sup)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Thomas algorithm without pivoting.
    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::config(format!(
                "right-hand side has length {}, matrix is {n}x{n}",
                rhs.len()
            )));
        }
        let scale = self.scale();
        let mut gam = vec![C64::new(0.0, 0.0); n];
        let mut x = vec![C64::new(0.0, 0.0); n];
        let mut bet = self.diag[0];
        check_pivot(bet, scale, 0)?;
        x[0] = rhs[0] / bet;
        for j in 1..n {
            gam[j] = self.sup[j - 1] / bet;
            bet = self.diag[j] - self.sub[j - 1] * gam[j];
            check_pivot(bet, scale, j)?;
            x[j] = (rhs[j] - self.sub[j - 1] * x[j - 1]) / bet;
        }
        for j in (0..n - 1).rev() {
            let next = x[j + 1];
            x[j] -= gam[j + 1] * next;
        }
        Ok(x)
    }
}

fn check_pivot(pivot: C64, scale: f64, row: usize) -> Result<()> {
    if !(pivot.norm() > PIVOT_TOL * scale) {
        return Err(Error::Singular {
            reason: format!("vanishing pivot in row {row}"),
            pivot: pivot.norm(),
            scale,
        });
    }
    Ok(())
}

/// Tridiagonal matrix plus the two periodic corner entries
/// `A[0][n-1]` (`corner_upper`) and `A[n-1][0]` (`corner_lower`).
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicTridiagonal {
    pub band: Tridiagonal,
    pub corner_upper: C64,
    pub corner_lower: C64,
}

impl CyclicTridiagonal {
    pub fn new(band: Tridiagonal, corner_upper: C64, corner_lower: C64) -> Self {
        Self { band, corner_upper, corner_lower }
    }

    /// Circulant matrix with constant `diag` and `off` on both off-diagonals
    /// and both corners.
    pub fn circulant(n: usize, diag: C64, off: C64) -> Self {
        let band = Tridiagonal {
            sub: vec![off; n.saturating_sub(1)],
            diag: vec![diag; n],
            sup: vec![off; n.saturating_sub(1)],
        };
        Self::new(band, off, off)
    }

    pub fn len(&self) -> usize {
        self.band.len()
    }

    pub fn is_empty(&self) -> bool {
        self.band.is_empty()
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.len();
        let mut y = self.band.apply(x);
        if n > 1 {
            y[0] += self.corner_upper * x[n - 1];
            y[n - 1] += self.corner_lower * x[0];
        }
        y
    }

    /// Sherman–Morrison reduction onto two Thomas solves.
    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::config(format!(
                "right-hand side has length {}, matrix is {n}x{n}",
                rhs.len()
            )));
        }
        if n <= 2 {
            return self.solve_small(rhs);
        }
        let alpha = self.corner_lower;
        let beta = self.corner_upper;
        let b0 = self.band.diag[0];
        let gamma = if b0.norm() > 0.0 { -b0 } else { C64::new(-1.0, 0.0) };

        let mut modified = self.band.clone();
        modified.diag[0] = b0 - gamma;
        modified.diag[n - 1] = self.band.diag[n - 1] - alpha * beta / gamma;

        let x = modified.solve(rhs)?;
        let mut u = vec![C64::new(0.0, 0.0); n];
        u[0] = gamma;
        u[n - 1] = alpha;
        let z = modified.solve(&u)?;

        let denom = C64::new(1.0, 0.0) + z[0] + beta * z[n - 1] / gamma;
        if !(denom.norm() > PIVOT_TOL) {
            return Err(Error::Singular {
                reason: "Sherman-Morrison denominator vanishes".into(),
                pivot: denom.norm(),
                scale: self.band.scale(),
            });
        }
        let fact = (x[0] + beta * x[n - 1] / gamma) / denom;
        Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
    }

    fn solve_small(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let scale = self.band.scale().max(self.corner_upper.norm()).max(self.corner_lower.norm());
        if self.len() == 1 {
            let a = self.band.diag[0] + self.corner_upper + self.corner_lower;
            check_pivot(a, scale, 0)?;
            return Ok(vec![rhs[0] / a]);
        }
        let a = self.band.diag[0];
        let b = self.band.sup[0] + self.corner_upper;
        let c = self.band.sub[0] + self.corner_lower;
        let d = self.band.diag[1];
        let det = a * d - b * c;
        check_pivot(det, scale * scale, 0)?;
        Ok(vec![(d * rhs[0] - b * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det])
    }
}

/// Solves the symmetric cyclic system with diagonal `diag`, off-diagonals
/// `off_diag` (length `n - 1`) and the periodic `corner` in both corners.
pub fn solve_cyclic_tridiagonal(
    diag: &[C64],
    off_diag: &[C64],
    corner: C64,
    rhs: &[C64],
) -> Result<Vec<C64>> {
    let band = Tridiagonal::new(off_diag.to_vec(), diag.to_vec(), off_diag.to_vec())?;
    CyclicTridiagonal::new(band, corner, corner).solve(rhs)
}

/// Solves a plain tridiagonal system; `sub` and `sup` have length `n - 1`.
pub fn solve_tridiagonal(sub: &[C64], diag: &[C64], sup: &[C64], rhs: &[C64]) -> Result<Vec<C64>> {
    Tridiagonal::new(sub.to_vec(), diag.to_vec(), sup.to_vec())?.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn dense(m: &CyclicTridiagonal) -> DMatrix<C64> {
        let n = m.len();
        let mut a = DMatrix::from_element(n, n, c(0.0));
        for i in 0..n {
            a[(i, i)] = m.band.diag[i];
            if i + 1 < n {
                a[(i + 1, i)] = m.band.sub[i];
                a[(i, i + 1)] = m.band.sup[i];
            }
        }
        a[(0, n - 1)] += m.corner_upper;
        a[(n - 1, 0)] += m.corner_lower;
        a
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
        (0..n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn identity_returns_rhs() {
        let m = CyclicTridiagonal::circulant(6, c(1.0), c(0.0));
        let rhs: Vec<C64> = (0..6).map(|i| C64::new(i as f64, -1.0)).collect();
        assert_eq!(m.solve(&rhs).unwrap(), rhs);
    }

    #[test]
    fn periodic_laplacian_system_matches_dense_solve() {
        // shifted periodic Laplacian (the bare one is singular)
        let n = 8;
        let m = CyclicTridiagonal::circulant(n, C64::new(-2.0, 0.7), c(1.0));
        let rhs: Vec<C64> = (0..n).map(|i| C64::new((i as f64).sin(), (i as f64).cos())).collect();
        let x = m.solve(&rhs).unwrap();
        let oracle = dense(&m).lu().solve(&DVector::from_vec(rhs)).unwrap();
        for (a, b) in x.iter().zip(oracle.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn periodic_laplacian_symbol() {
        let n = 32;
        let dx = 0.1;
        let m = CyclicTridiagonal::circulant(n, c(-2.0 / (dx * dx)), c(1.0 / (dx * dx)));
        for j in [1usize, 3, 8, 16] {
            let k = 2.0 * std::f64::consts::PI * j as f64 / (n as f64 * dx);
            let u: Vec<C64> = (0..n).map(|m| C64::from_polar(1.0, k * m as f64 * dx)).collect();
            let au = m.apply(&u);
            let s = (k * dx / 2.0).sin();
            let eig = -4.0 * s * s / (dx * dx);
            for (a, b) in au.iter().zip(&u) {
                assert!((a - eig * b).norm() < 1e-10 * eig.abs());
            }
        }
    }

    #[test]
    fn random_diagonally_dominant_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3usize, 5, 17, 64] {
            let sub = random_vec(&mut rng, n - 1);
            let sup = random_vec(&mut rng, n - 1);
            let diag: Vec<C64> = random_vec(&mut rng, n).iter().map(|z| z + c(4.0)).collect();
            let cu = random_vec(&mut rng, 1)[0];
            let cl = random_vec(&mut rng, 1)[0];
            let m = CyclicTridiagonal::new(Tridiagonal::new(sub, diag, sup).unwrap(), cu, cl);
            let rhs = random_vec(&mut rng, n);
            let x = m.solve(&rhs).unwrap();
            let oracle = dense(&m).lu().solve(&DVector::from_vec(rhs.clone())).unwrap();
            let scale = oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in x.iter().zip(oracle.iter()) {
                assert!((a - b).norm() < 1e-11 * scale);
            }
            let res = m.apply(&x);
            let rmax = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in res.iter().zip(&rhs) {
                assert!((a - b).norm() < 1e-11 * rmax);
            }
        }
    }

    #[test]
    fn singular_system_is_reported() {
        // the bare periodic Laplacian annihilates constants
        let m = CyclicTridiagonal::circulant(8, c(-2.0), c(1.0));
        let err = m.solve(&[c(1.0); 8]).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }), "{err}");
    }

    #[test]
    fn plain_tridiagonal_dirichlet_laplacian() {
        let n = 5;
        let x = solve_tridiagonal(&[c(1.0); 4], &[c(-2.0); 5], &[c(1.0); 4], &[c(0.0), c(0.0), c(0.0), c(0.0), c(-6.0)])
            .unwrap();
        // A x = -6 e_n is solved by x_i = i + 1
        for (i, z) in x.iter().enumerate() {
            assert!((z - c((i + 1) as f64)).norm() < 1e-12, "{i}: {z}");
        }
        assert_eq!(x.len(), n);
    }
}

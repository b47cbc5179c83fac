//! Krylov–Schur iteration for the largest-magnitude eigenvalues of a linear
//! operator, used here on the shift-inverted pencil.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::C64;

#[derive(Debug, Clone, Copy)]
pub struct KrylovOptions {
    /// Number of wanted eigenvalues.
    pub nev: usize,
    /// Krylov subspace dimension.
    pub ncv: usize,
    /// Relative residual `|b^T y| / |theta|` for convergence.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl KrylovOptions {
    pub fn for_count(nev: usize) -> Self {
        Self { nev, ncv: (2 * nev + 10).max(40), tol: 1e-13, max_restarts: 400, seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct RitzPairs {
    /// Ritz values, largest magnitude first.
    pub values: Vec<C64>,
    /// Unit-norm Ritz vectors.
    pub vectors: Vec<Vec<C64>>,
    /// Residual estimates `||A x - theta x||`.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub restarts: usize,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthogonalizes `w` against `basis` twice (classical Gram–Schmidt with
/// reorthogonalization) and returns the accumulated coefficients.
fn orthogonalize(basis: &[Vec<C64>], w: &mut [C64]) -> Vec<C64> {
    let mut h = vec![C64::new(0.0, 0.0); basis.len()];
    for _ in 0..2 {
        for (hj, v) in h.iter_mut().zip(basis) {
            let c = dot(v, w);
            *hj += c;
            w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
        }
    }
    h
}

/// Swaps diagonal entries `j` and `j + 1` of the upper-triangular `t`,
/// updating the unitary `z` so that `A Z = Z T` is preserved.
fn swap_adjacent(t: &mut DMatrix<C64>, z: &mut DMatrix<C64>, j: usize) {
    let (t11, t12, t22) = (t[(j, j)], t[(j, j + 1)], t[(j + 1, j + 1)]);
    let (a, b) = (t12, t22 - t11);
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return;
    }
    let (z0, z1) = (a / r, b / r);
    // rotation with columns (z0, z1) and (-conj z1, conj z0)
    let m = t.nrows();
    for c in 0..m {
        let (x, y) = (t[(j, c)], t[(j + 1, c)]);
        t[(j, c)] = z0.conj() * x + z1.conj() * y;
        t[(j + 1, c)] = -z1 * x + z0 * y;
    }
    for r_ in 0..m {
        let (x, y) = (t[(r_, j)], t[(r_, j + 1)]);
        t[(r_, j)] = x * z0 + y * z1;
        t[(r_, j + 1)] = -x * z1.conj() + y * z0.conj();
    }
    t[(j + 1, j)] = C64::new(0.0, 0.0);
    for r_ in 0..z.nrows() {
        let (x, y) = (z[(r_, j)], z[(r_, j + 1)]);
        z[(r_, j)] = x * z0 + y * z1;
        z[(r_, j + 1)] = -x * z1.conj() + y * z0.conj();
    }
}

/// Reorders the Schur form so the diagonal is sorted by decreasing magnitude.
fn sort_schur(t: &mut DMatrix<C64>, z: &mut DMatrix<C64>) {
    let m = t.nrows();
    for p in 0..m {
        let best = (p..m).max_by(|&a, &b| t[(a, a)].norm().total_cmp(&t[(b, b)].norm())).unwrap();
        for j in (p..best).rev() {
            swap_adjacent(t, z, j);
        }
    }
}

/// Eigenvector of the leading `(i+1) x (i+1)` block of upper-triangular `t`
/// belonging to `t[i][i]`, unit norm.
fn triangular_eigenvector(t: &DMatrix<C64>, i: usize) -> Vec<C64> {
    let lam = t[(i, i)];
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut y = vec![C64::new(0.0, 0.0); i + 1];
    y[i] = C64::new(1.0, 0.0);
    for r in (0..i).rev() {
        let s: C64 = (r + 1..=i).map(|c| t[(r, c)] * y[c]).sum();
        let mut den = t[(r, r)] - lam;
        if den.norm() < 1e-15 * scale {
            den = C64::new(1e-15 * scale, 0.0);
        }
        y[r] = -s / den;
    }
    let nrm = norm(&y);
    y.iter_mut().for_each(|v| *v /= nrm);
    y
}

fn random_unit(n: usize, rng: &mut ChaCha20Rng, project: &dyn Fn(&mut [C64])) -> Vec<C64> {
    let mut v: Vec<C64> =
        (0..n).map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect();
    project(&mut v);
    let nrm = norm(&v);
    v.iter_mut().for_each(|z| *z /= nrm);
    v
}

/// Largest-magnitude eigenpairs of `op` restricted to the invariant subspace
/// onto which `project` maps (pass a no-op for the whole space).
pub fn krylov_schur(
    n: usize,
    op: &dyn Fn(&[C64]) -> Vec<C64>,
    project: &dyn Fn(&mut [C64]),
    opts: KrylovOptions,
) -> RitzPairs {
    let ncv = opts.ncv.min(n).max(opts.nev + 2).min(n);
    let nev = opts.nev.min(ncv.saturating_sub(1)).max(1);
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<C64>> = vec![random_unit(n, &mut rng, project)];
    let mut hm = DMatrix::<C64>::zeros(ncv + 1, ncv);
    let mut k = 0;
    let mut restarts = 0;
    loop {
        for j in k..ncv {
            let mut w = op(&basis[j]);
            project(&mut w);
            let h = orthogonalize(&basis, &mut w);
            for (i, hi) in h.iter().enumerate() {
                hm[(i, j)] = *hi;
            }
            let beta = norm(&w);
            let hnorm = norm(&h);
            if beta > 1e-12 * hnorm {
                hm[(j + 1, j)] = C64::new(beta, 0.0);
                w.iter_mut().for_each(|z| *z /= beta);
            } else {
                hm[(j + 1, j)] = C64::new(0.0, 0.0);
                w = random_unit(n, &mut rng, project);
                orthogonalize(&basis, &mut w);
                let nrm = norm(&w);
                w.iter_mut().for_each(|z| *z /= nrm);
            }
            basis.push(w);
        }
        let square = hm.rows(0, ncv).into_owned();
        let (mut z, mut t) = nalgebra::linalg::Schur::new(square).unpack();
        sort_schur(&mut t, &mut z);
        let beta_m = hm[(ncv, ncv - 1)];
        let b: Vec<C64> = (0..ncv).map(|i| beta_m * z[(ncv - 1, i)]).collect();

        let ritz_y: Vec<Vec<C64>> = (0..nev).map(|i| triangular_eigenvector(&t, i)).collect();
        let residuals: Vec<f64> =
            ritz_y.iter().map(|y| y.iter().zip(&b).map(|(yi, bi)| yi * bi).sum::<C64>().norm()).collect();
        let converged: Vec<bool> =
            (0..nev).map(|i| residuals[i] <= opts.tol * t[(i, i)].norm().max(f64::MIN_POSITIVE)).collect();
        let done = converged.iter().all(|&c| c) || restarts >= opts.max_restarts;
        if done {
            let vectors = ritz_y
                .iter()
                .map(|y| {
                    let coef: Vec<C64> = (0..ncv).map(|r| (0..y.len()).map(|c| z[(r, c)] * y[c]).sum()).collect();
                    let mut x = vec![C64::new(0.0, 0.0); n];
                    for (v, c) in basis.iter().zip(&coef) {
                        x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += c * vi);
                    }
                    let nrm = norm(&x);
                    x.iter_mut().for_each(|v| *v /= nrm);
                    x
                })
                .collect();
            return RitzPairs {
                values: (0..nev).map(|i| t[(i, i)]).collect(),
                vectors,
                residuals,
                converged,
                restarts,
            };
        }

        k = (nev + (ncv - nev) / 2).min(ncv - 1);
        let mut new_basis: Vec<Vec<C64>> = Vec::with_capacity(ncv + 1);
        for i in 0..k {
            let mut x = vec![C64::new(0.0, 0.0); n];
            for (r, v) in basis.iter().take(ncv).enumerate() {
                let c = z[(r, i)];
                x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += c * vi);
            }
            new_basis.push(x);
        }
        new_basis.push(basis.swap_remove(ncv));
        basis = new_basis;
        hm.fill(C64::new(0.0, 0.0));
        for i in 0..k {
            for j in i..k {
                hm[(i, j)] = t[(i, j)];
            }
            hm[(k, i)] = b[i];
        }
        restarts += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_preserves_similarity() {
        let a = DMatrix::from_fn(6, 6, |i, j| C64::new((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0));
        let (mut z, mut t) = nalgebra::linalg::Schur::new(a.clone()).unpack();
        sort_schur(&mut t, &mut z);
        let back = &z * &t * z.adjoint();
        assert!((back - &a).norm() < 1e-12 * a.norm());
        for i in 1..6 {
            assert!(t[(i - 1, i - 1)].norm() >= t[(i, i)].norm() - 1e-12);
            for j in 0..i {
                assert!(t[(i, j)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn finds_largest_eigenvalues_of_diagonal_operator() {
        let n = 300;
        let diag: Vec<C64> = (0..n).map(|j| C64::new(1.0 / (1.0 + j as f64), 0.01 * j as f64)).collect();
        let op = |x: &[C64]| x.iter().zip(&diag).map(|(a, b)| a * b).collect::<Vec<_>>();
        let res = krylov_schur(n, &op, &|_| {}, KrylovOptions::for_count(6));
        assert!(res.converged.iter().all(|&c| c));
        let mut want: Vec<C64> = diag.clone();
        want.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        for (got, w) in res.values.iter().zip(&want) {
            assert!((got - w).norm() < 1e-10, "{got} {w}");
        }
        for (v, x) in res.values.iter().zip(&res.vectors) {
            let ax = op(x);
            let r: f64 = ax.iter().zip(x).map(|(a, b)| (a - v * b).norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-10);
        }
    }
}

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use super::grid::{ComplexField, Grid1D};
use crate::config::NoiseKind;
use crate::error::{Error, Result};
use crate::C64;

/// Independent zero-mean Gaussian samples with per-sample standard deviation `std`.
///
/// The stream is ChaCha20 seeded through `SeedableRng::seed_from_u64`, which is
/// platform independent. For [`NoiseKind::Complex`] the real and imaginary parts
/// are drawn alternately, each with deviation `std / sqrt(2)`, so that
/// `E|xi|^2 = std^2`. For [`NoiseKind::Real`] only real parts are drawn.
pub fn make_noise(grid: Arc<Grid1D>, std: f64, seed: u64, kind: NoiseKind) -> Result<ComplexField> {
    if !(std.is_finite() && std >= 0.0) {
        return Err(Error::config(format!("noise standard deviation must be >= 0, got {std}")));
    }
    if std == 0.0 {
        return Ok(ComplexField::zeros(grid));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let values = match kind {
        NoiseKind::Complex => {
            let normal = Normal::new(0.0, std / 2f64.sqrt()).expect("finite deviation");
            (0..grid.len())
                .map(|_| {
                    let re = normal.sample(&mut rng);
                    let im = normal.sample(&mut rng);
                    C64::new(re, im)
                })
                .collect()
        }
        NoiseKind::Real => {
            let normal = Normal::new(0.0, std).expect("finite deviation");
            (0..grid.len()).map(|_| C64::new(normal.sample(&mut rng), 0.0)).collect()
        }
    };
    ComplexField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Arc<Grid1D> {
        Arc::new(Grid1D::new(40.0, n).unwrap())
    }

    #[test]
    fn zero_deviation_gives_zero_field() {
        let f = make_noise(grid(64), 0.0, 1, NoiseKind::Complex).unwrap();
        assert!(f.values().iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn sample_deviation_matches_request() {
        let f = make_noise(grid(512), 1e-10, 2024, NoiseKind::Complex).unwrap();
        let n = f.values().len() as f64;
        let mean: C64 = f.values().iter().sum::<C64>() / n;
        let var = f.values().iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        let std = var.sqrt();
        assert!((0.8e-10..=1.2e-10).contains(&std), "std = {std:e}");
        let real = make_noise(grid(512), 1e-10, 2024, NoiseKind::Real).unwrap();
        assert!(real.values().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = make_noise(grid(256), 1.0, 42, NoiseKind::Complex).unwrap();
        let b = make_noise(grid(256), 1.0, 42, NoiseKind::Complex).unwrap();
        assert_eq!(a.values(), b.values());
        let c = make_noise(grid(256), 1.0, 43, NoiseKind::Complex).unwrap();
        assert!(a.values().iter().zip(c.values()).all(|(x, y)| x != y));
    }

    #[test]
    fn negative_deviation_rejected() {
        assert!(make_noise(grid(8), -1.0, 0, NoiseKind::Complex).is_err());
    }
}

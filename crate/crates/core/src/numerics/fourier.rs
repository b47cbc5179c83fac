use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::grid::{ComplexField, Grid1D};
use crate::error::{Error, Result};
use crate::C64;

/// Cached forward/inverse FFT plans for one transform length.
///
/// The forward transform is unnormalized, `U_j = sum_m u_m e^{-2 pi i j m / N}`;
/// the inverse carries the `1/N` factor, so Parseval reads
/// `sum |u_m|^2 = (1/N) sum |U_j|^2`.
#[derive(Clone)]
pub struct Fourier {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl fmt::Debug for Fourier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fourier").field("len", &self.len).finish()
    }
}

impl Fourier {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self { len, forward, inverse, scratch_len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [C64]) {
        assert_eq!(data.len(), self.len, "transform length mismatch");
        let mut scratch = vec![C64::new(0.0, 0.0); self.scratch_len];
        self.forward.process_with_scratch(data, &mut scratch);
    }

    pub fn inverse(&self, data: &mut [C64]) {
        assert_eq!(data.len(), self.len, "transform length mismatch");
        let mut scratch = vec![C64::new(0.0, 0.0); self.scratch_len];
        self.inverse.process_with_scratch(data, &mut scratch);
        let scale = 1.0 / self.len as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }
}

/// Forward DFT of a field, in the grid's DFT bin layout.
pub fn dft(field: &ComplexField) -> Vec<C64> {
    let mut data = field.values().to_vec();
    Fourier::new(data.len()).forward(&mut data);
    data
}

/// Inverse DFT of spectral coefficients back onto `grid`.
pub fn idft(grid: Arc<Grid1D>, coefficients: &[C64]) -> Result<ComplexField> {
    if coefficients.len() != grid.len() {
        return Err(Error::config(format!(
            "spectrum has {} bins but the grid has {} points",
            coefficients.len(),
            grid.len()
        )));
    }
    let mut data = coefficients.to_vec();
    Fourier::new(data.len()).inverse(&mut data);
    ComplexField::new(grid, data)
}

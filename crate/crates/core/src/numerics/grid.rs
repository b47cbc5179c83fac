use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::C64;

/// Uniform periodic grid on `[-L/2, L/2)`.
///
/// Points are `x_m = -L/2 + m dx` for `m = 0..N`, so the left end point is on
/// the grid and the right one is its periodic image.
///
/// Wavenumbers follow the standard DFT layout: bin `j < N/2` holds
/// `k = 2 pi j / L`, bin `j >= N/2` holds `k = 2 pi (j - N) / L`. Bin `N/2`
/// is the Nyquist wavenumber, reported as `-pi/dx`; it is the same lattice mode
/// as `+pi/dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    length: f64,
    n_points: usize,
    dx: f64,
    points: Vec<f64>,
    wavenumbers: Vec<f64>,
}

impl Grid1D {
    pub fn new(length: f64, n_points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::config(format!("domain length must be positive, got {length}")));
        }
        if n_points < 2 || !n_points.is_multiple_of(2) {
            return Err(Error::config(format!(
                "number of grid points must be even and >= 2, got {n_points}"
            )));
        }
        let dx = length / n_points as f64;
        let points = (0..n_points).map(|m| -0.5 * length + m as f64 * dx).collect();
        let dk = 2.0 * PI / length;
        let wavenumbers = (0..n_points)
            .map(|j| {
                if j < n_points / 2 {
                    j as f64 * dk
                } else {
                    (j as f64 - n_points as f64) * dk
                }
            })
            .collect();
        Ok(Self { length, n_points, dx, points, wavenumbers })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Largest resolvable wavenumber `pi / dx`.
    pub fn k_max(&self) -> f64 {
        PI / self.dx
    }

    /// Index of the Nyquist bin.
    pub fn nyquist_index(&self) -> usize {
        self.n_points / 2
    }

    /// Bin indices in ascending physical wavenumber order.
    pub fn ascending_order(&self) -> impl Iterator<Item = usize> + '_ {
        let half = self.n_points / 2;
        (half..self.n_points).chain(0..half)
    }
}

/// Complex samples `u(x_m)` on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Arc<Grid1D>,
    values: Vec<C64>,
}

impl ComplexField {
    pub fn new(grid: Arc<Grid1D>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::config(format!(
                "field has {} samples but the grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        let values = vec![C64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.points().iter().map(|&x| f(x)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid1D> {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// Plain Euclidean norm `sqrt(sum |u_m|^2)`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Discrete L2 norm `sqrt(dx sum |u_m|^2)`.
    pub fn l2_norm(&self) -> f64 {
        self.norm() * self.grid.dx().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let values = self.values.iter().map(|&z| z * factor).collect();
        Self { grid: self.grid.clone(), values }
    }

    /// Pointwise sum; both fields must live on grids of equal size.
    pub fn add(&self, other: &ComplexField) -> Result<Self> {
        if other.values.len() != self.values.len() {
            return Err(Error::config("cannot add fields on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn sub(&self, other: &ComplexField) -> Result<Self> {
        self.add(&other.scaled(C64::new(-1.0, 0.0)))
    }
}

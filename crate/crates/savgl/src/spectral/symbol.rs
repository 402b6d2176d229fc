use ndarray::Array2;

use super::{SpectralField, SpectralGrid};
use crate::error::{Error, Result};

/// A diagonal Fourier multiplier, stored per mode in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSymbol {
    pub values: Array2<f64>,
    pub grid: SpectralGrid,
}

impl OperatorSymbol {
    /// Symbol `f(k, l)` in integer wavenumbers.
    pub fn from_fn(grid: &SpectralGrid, f: impl Fn(i64, i64) -> f64) -> Self {
        let n = grid.n();
        let values = Array2::from_shape_fn((n, n), |(i, j)| f(grid.wavenumber(i), grid.wavenumber(j)));
        OperatorSymbol { values, grid: grid.clone() }
    }

    /// `(2 pi / L)^2 (k^2 + l^2)` raised to `power`, times `sign`.
    fn radial(grid: &SpectralGrid, power: i32, sign: f64) -> Self {
        let c = grid.wavenumber_factor().powi(2);
        Self::from_fn(grid, |k, l| sign * (c * (k * k + l * l) as f64).powi(power))
    }

    pub fn laplacian(grid: &SpectralGrid) -> Self {
        Self::radial(grid, 1, -1.0)
    }

    pub fn biharmonic(grid: &SpectralGrid) -> Self {
        Self::radial(grid, 2, 1.0)
    }

    pub fn triharmonic(grid: &SpectralGrid) -> Self {
        Self::radial(grid, 3, -1.0)
    }

    pub fn identity(grid: &SpectralGrid) -> Self {
        Self::from_fn(grid, |_, _| 1.0)
    }

    pub fn negation(grid: &SpectralGrid) -> Self {
        Self::from_fn(grid, |_, _| -1.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        OperatorSymbol { values: self.values.mapv(|v| c * v), grid: self.grid.clone() }
    }

    /// Product of two symbols, i.e. the composed operator.
    pub fn compose(&self, other: &OperatorSymbol) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(OperatorSymbol { values: &self.values * &other.values, grid: self.grid.clone() })
    }

    /// Multiplier at integer wavenumber `(k, l)`.
    pub fn at(&self, k: i64, l: i64) -> f64 {
        self.values[[self.grid.index_of(k), self.grid.index_of(l)]]
    }
}

pub fn apply_symbol(op: &OperatorSymbol, s: &SpectralField) -> Result<SpectralField> {
    if op.grid != s.grid {
        return Err(Error::GridMismatch);
    }
    let mut coeffs = s.coeffs.clone();
    coeffs.zip_mut_with(&op.values, |z, m| *z *= *m);
    Ok(SpectralField { coeffs, grid: s.grid.clone() })
}

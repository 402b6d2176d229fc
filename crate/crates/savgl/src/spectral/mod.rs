//! Periodic Fourier pseudo-spectral machinery on `[0, L)^2`.
//!
//! Collocation points are `x_i = i L / N`, `i = 0..N`. The forward transform is
//! the unnormalized DFT `u_hat[k,l] = sum u[i,j] exp(-2 pi i (k i + l j)/N)` and
//! the inverse carries the `1/N^2` factor. Coefficient arrays are stored in FFT
//! order; index `i` holds the wavenumber `i` for `i <= N/2` and `i - N`
//! otherwise, so the stored set is `{-N/2+1, ..., N/2}^2`.

mod dealias;
mod symbol;

pub use dealias::{
    brute_force_truncated_convolution, conjugate_symmetry_defect, cubic_aliased, cubic_dealiased,
    cubic_dealiased_coeffs, cubic_dealiased_one_sided, hermitian_part, power_dealiased,
    BRUTE_FORCE_MAX_N,
};
pub use symbol::{apply_symbol, OperatorSymbol};

use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance of the conjugate-symmetry check before an inverse transform.
pub const SYMMETRY_TOL: f64 = 1e-10;

pub(crate) struct Fft2 {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 { fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    fn run(plan: &dyn Fft<f64>, a: &mut Array2<Complex64>) {
        plan.process(a.as_slice_mut().expect("standard layout"));
        let mut t = a.t().as_standard_layout().into_owned();
        plan.process(t.as_slice_mut().expect("standard layout"));
        a.assign(&t.t());
    }

    pub(crate) fn forward(&self, a: &mut Array2<Complex64>) {
        Self::run(self.fwd.as_ref(), a)
    }

    /// Unnormalized inverse.
    pub(crate) fn inverse(&self, a: &mut Array2<Complex64>) {
        Self::run(self.inv.as_ref(), a)
    }
}

struct GridInner {
    n: usize,
    length: f64,
    fft: Fft2,
    fft_padded: Fft2,
}

/// An `N x N` periodic grid on a square of edge `L`, with cached FFT plans.
///
/// Cloning is cheap and clones share plans.
#[derive(Clone)]
pub struct SpectralGrid {
    inner: Arc<GridInner>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid").field("n", &self.n()).field("length", &self.length()).finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n() && self.length() == other.length())
    }
}

impl SpectralGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(n));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidLength(length));
        }
        Ok(SpectralGrid {
            inner: Arc::new(GridInner { n, length, fft: Fft2::new(n), fft_padded: Fft2::new(2 * n) }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    /// Grid spacing `L/N`.
    pub fn spacing(&self) -> f64 {
        self.length() / self.n() as f64
    }

    /// Physical wavenumber per integer index, `2 pi / L`.
    pub fn wavenumber_factor(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length()
    }

    /// Integer wavenumber stored at array index `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n();
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Array index holding wavenumber `k`, for `k` in `-N/2+1 ..= N/2`.
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n() as i64) as usize
    }

    /// Collocation coordinate `x_i = i L / N`.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub(crate) fn fft(&self) -> &Fft2 {
        &self.inner.fft
    }

    pub(crate) fn fft_padded(&self) -> &Fft2 {
        &self.inner.fft_padded
    }

    pub fn zeros(&self) -> Field {
        Field { values: Array2::zeros((self.n(), self.n())), grid: self.clone() }
    }

    pub fn constant(&self, c: f64) -> Field {
        Field { values: Array2::from_elem((self.n(), self.n()), c), grid: self.clone() }
    }

    /// Field sampled from `f(x, y)` at the collocation points.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Field {
        let n = self.n();
        let values = Array2::from_shape_fn((n, n), |(i, j)| f(self.coordinate(i), self.coordinate(j)));
        Field { values, grid: self.clone() }
    }
}

/// Real collocation values on a grid. `values[[i, j]]` sits at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub values: Array2<f64>,
    pub grid: SpectralGrid,
}

impl Field {
    pub fn new(values: Array2<f64>, grid: &SpectralGrid) -> Result<Self> {
        if values.dim() != (grid.n(), grid.n()) {
            return Err(Error::GridMismatch);
        }
        Ok(Field { values: values.as_standard_layout().into_owned(), grid: grid.clone() })
    }

    pub fn forward(&self) -> SpectralField {
        forward(self)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mean value over the grid.
    pub fn mean(&self) -> f64 {
        self.values.mean().unwrap_or(0.0)
    }
}

/// Fourier coefficients in FFT order, unnormalized forward convention.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub coeffs: Array2<Complex64>,
    pub grid: SpectralGrid,
}

impl SpectralField {
    pub fn new(coeffs: Array2<Complex64>, grid: &SpectralGrid) -> Result<Self> {
        if coeffs.dim() != (grid.n(), grid.n()) {
            return Err(Error::GridMismatch);
        }
        Ok(SpectralField { coeffs: coeffs.as_standard_layout().into_owned(), grid: grid.clone() })
    }

    pub fn zeros(grid: &SpectralGrid) -> Self {
        SpectralField { coeffs: Array2::zeros((grid.n(), grid.n())), grid: grid.clone() }
    }

    /// Coefficient at integer wavenumber `(k, l)`.
    pub fn at(&self, k: i64, l: i64) -> Complex64 {
        self.coeffs[[self.grid.index_of(k), self.grid.index_of(l)]]
    }

    pub fn inverse(&self) -> Result<Field> {
        inverse(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Mean of the represented field, read from the zero mode.
    pub fn mean(&self) -> f64 {
        let n = self.grid.n() as f64;
        self.coeffs[[0, 0]].re / (n * n)
    }

    /// `a self + b other` on the same grid.
    pub fn combine(&self, a: f64, other: &SpectralField, b: f64) -> SpectralField {
        let mut coeffs = self.coeffs.clone();
        coeffs.zip_mut_with(&other.coeffs, |x, y| *x = a * *x + b * *y);
        SpectralField { coeffs, grid: self.grid.clone() }
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        SpectralField { coeffs: self.coeffs.mapv(|x| a * x), grid: self.grid.clone() }
    }
}

pub fn forward(f: &Field) -> SpectralField {
    let mut coeffs = f.values.mapv(|v| Complex64::new(v, 0.0));
    f.grid.fft().forward(&mut coeffs);
    SpectralField { coeffs, grid: f.grid.clone() }
}

/// Inverse transform of conjugate-symmetric coefficients to real values.
pub fn inverse(s: &SpectralField) -> Result<Field> {
    let scale = s.max_abs();
    let defect = conjugate_symmetry_defect(s);
    if defect > SYMMETRY_TOL * scale {
        return Err(Error::NotConjugateSymmetric { defect, scale });
    }
    Ok(inverse_unchecked(s))
}

/// Inverse transform that discards the imaginary part without checking it.
pub(crate) fn inverse_unchecked(s: &SpectralField) -> Field {
    let n = s.grid.n() as f64;
    let mut c = s.coeffs.clone();
    s.grid.fft().inverse(&mut c);
    let values = c.mapv(|z| z.re / (n * n));
    Field { values, grid: s.grid.clone() }
}

/// Collocation inner product `(L/N)^2 sum f g`.
pub fn inner(f: &Field, g: &Field) -> f64 {
    let h = f.grid.spacing();
    h * h * f.values.iter().zip(g.values.iter()).map(|(a, b)| a * b).sum::<f64>()
}

/// The same inner product evaluated from coefficients through Parseval.
pub fn spectral_inner(a: &SpectralField, b: &SpectralField) -> f64 {
    let h = a.grid.spacing();
    let n = a.grid.n() as f64;
    let sum: f64 = a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| (x * y.conj()).re).sum();
    h * h * sum / (n * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_transform() {
        let g = SpectralGrid::new(8, 2.0 * PI).unwrap();
        let s = forward(&g.constant(1.5));
        assert!((s.at(0, 0).re - 1.5 * 64.0).abs() < 1e-12);
        let rest: f64 = s.coeffs.iter().skip(1).map(|z| z.norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn single_mode() {
        let g = SpectralGrid::new(8, 3.0).unwrap();
        let f = g.sample(|x, _| (2.0 * PI * x / 3.0).cos());
        let s = forward(&f);
        for k in [1, -1] {
            assert!((s.at(k, 0) - Complex64::new(32.0, 0.0)).norm() < 1e-12);
        }
        let total: f64 = s.coeffs.iter().map(|z| z.norm()).sum();
        assert!((total - 64.0).abs() < 1e-11);

        let mut c = SpectralField::zeros(&g);
        c.coeffs[[1, 0]] = Complex64::new(32.0, 0.0);
        c.coeffs[[7, 0]] = Complex64::new(32.0, 0.0);
        let back = inverse(&c).unwrap();
        for ((i, _), v) in back.values.indexed_iter() {
            assert!((v - (2.0 * PI * i as f64 / 8.0).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_unit_zero_mode() {
        let g = SpectralGrid::new(6, 1.0).unwrap();
        let mut c = SpectralField::zeros(&g);
        c.coeffs[[0, 0]] = Complex64::new(36.0, 0.0);
        let f = inverse(&c).unwrap();
        assert!(f.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let g = SpectralGrid::new(8, 1.0).unwrap();
        let mut c = SpectralField::zeros(&g);
        c.coeffs[[1, 2]] = Complex64::new(1.0, 0.0);
        assert!(matches!(inverse(&c), Err(Error::NotConjugateSymmetric { .. })));
    }

    #[test]
    fn invalid_grids() {
        assert_eq!(SpectralGrid::new(7, 1.0).unwrap_err(), Error::InvalidGrid(7));
        assert_eq!(SpectralGrid::new(0, 1.0).unwrap_err(), Error::InvalidGrid(0));
        assert!(matches!(SpectralGrid::new(8, -1.0), Err(Error::InvalidLength(_))));
    }

    #[test]
    fn wavenumber_ordering() {
        let g = SpectralGrid::new(8, 1.0).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        for k in -3..=4 {
            assert_eq!(g.wavenumber(g.index_of(k)), k);
        }
    }

    #[test]
    fn inner_products_agree() {
        let g = SpectralGrid::new(16, 5.0).unwrap();
        let f = g.sample(|x, y| (x * 1.3).sin() + y * 0.1);
        let h = g.sample(|x, y| (x * y).cos());
        let a = inner(&f, &h);
        let b = spectral_inner(&forward(&f), &forward(&h));
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn mean_from_zero_mode() {
        let g = SpectralGrid::new(8, 2.0).unwrap();
        let f = g.sample(|x, y| 0.3 + (PI * x).sin() * (PI * y).cos());
        assert!((forward(&f).mean() - f.mean()).abs() < 1e-15);
    }
}

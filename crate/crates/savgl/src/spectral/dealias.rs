//! Cubic (and general power) nonlinearities with and without zero-padding.
//!
//! The padded transform places the retained coefficients `{-N/2+1, ..., N/2}^2`
//! into a `K x K` array with `K = 2N`, inverts with the `1/K^2` factor, cubes
//! pointwise, transforms forward, rescales by `(K/N)^4` and truncates. The
//! result equals the truncated convolution
//!
//! ```text
//! w[k] = N^-4 sum_{m, p, k-m-p in S_N} u[m] u[p] u[k-m-p]
//! ```
//!
//! exactly. Because the retained set is one-sided at the Nyquist index, that
//! sum is not conjugate symmetric for a general real field.
//! [`cubic_dealiased`] therefore returns its Hermitian part, which is still free
//! of aliased contributions and represents a real field.

use ndarray::Array2;
use num_complex::Complex64;

use super::{forward, Fft2, Field, SpectralField, SpectralGrid};
use crate::error::{Error, Result};

/// Largest grid accepted by [`brute_force_truncated_convolution`].
pub const BRUTE_FORCE_MAX_N: usize = 16;

/// Transform of the pointwise cube, with aliasing.
pub fn cubic_aliased(f: &Field) -> SpectralField {
    let cube = Field { values: f.values.mapv(|v| v * v * v), grid: f.grid.clone() };
    forward(&cube)
}

/// De-aliased cube of a real field, returned as conjugate-symmetric coefficients.
pub fn cubic_dealiased(f: &Field) -> SpectralField {
    cubic_dealiased_coeffs(&forward(f))
}

/// [`cubic_dealiased`] starting from coefficients.
pub fn cubic_dealiased_coeffs(s: &SpectralField) -> SpectralField {
    hermitian_part(&cubic_dealiased_one_sided(s))
}

/// The zero-padded cube exactly as described above, without symmetrization.
pub fn cubic_dealiased_one_sided(s: &SpectralField) -> SpectralField {
    let k = 2 * s.grid.n();
    padded_power(s, 3, k, s.grid.fft_padded())
}

/// De-aliased `u^p` for `p >= 2`, padded to `K = ceil((p+1) N / 2)` rounded up
/// to an even size. Returned as its Hermitian part.
pub fn power_dealiased(s: &SpectralField, p: u32) -> SpectralField {
    assert!(p >= 2, "power must be at least 2");
    let n = s.grid.n();
    let mut k = ((p as usize + 1) * n).div_ceil(2);
    k += k % 2;
    let out = if k == 2 * n {
        padded_power(s, p, k, s.grid.fft_padded())
    } else {
        padded_power(s, p, k, &Fft2::new(k))
    };
    hermitian_part(&out)
}

fn padded_power(s: &SpectralField, p: u32, k: usize, fft: &Fft2) -> SpectralField {
    let g = &s.grid;
    let n = g.n();
    let mut pad = Array2::<Complex64>::zeros((k, k));
    let wrap = |m: i64| m.rem_euclid(k as i64) as usize;
    for i in 0..n {
        let ki = wrap(g.wavenumber(i));
        for j in 0..n {
            pad[[ki, wrap(g.wavenumber(j))]] = s.coeffs[[i, j]];
        }
    }
    fft.inverse(&mut pad);
    let kk = (k * k) as f64;
    // the padded field is complex when Nyquist modes are present
    pad.mapv_inplace(|z| (z / kk).powu(p));
    fft.forward(&mut pad);
    let factor = (k as f64 / n as f64).powi(2 * (p as i32 - 1));
    let mut out = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        let ki = wrap(g.wavenumber(i));
        for j in 0..n {
            out[[i, j]] = factor * pad[[ki, wrap(g.wavenumber(j))]];
        }
    }
    SpectralField { coeffs: out, grid: g.clone() }
}

/// `(w[k] + conj(w[-k]))/2`, the coefficients of the real part of the field.
pub fn hermitian_part(s: &SpectralField) -> SpectralField {
    let n = s.grid.n();
    let neg = |i: usize| (n - i) % n;
    let c = &s.coeffs;
    let coeffs = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (c[[i, j]] + c[[neg(i), neg(j)]].conj()));
    SpectralField { coeffs, grid: s.grid.clone() }
}

/// `max |w[k] - conj(w[-k])|`.
pub fn conjugate_symmetry_defect(s: &SpectralField) -> f64 {
    let n = s.grid.n();
    let neg = |i: usize| (n - i) % n;
    let c = &s.coeffs;
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((c[[i, j]] - c[[neg(i), neg(j)]].conj()).norm());
        }
    }
    worst
}

/// Direct evaluation of the truncated triple convolution. Test oracle only.
pub fn brute_force_truncated_convolution(s: &SpectralField) -> Result<SpectralField> {
    let g: &SpectralGrid = &s.grid;
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::GridTooLarge(n));
    }
    let half = (n / 2) as i64;
    let inside = |k: i64| k > -half && k <= half;
    let ks: Vec<i64> = (0..n).map(|i| g.wavenumber(i)).collect();
    let mut out = Array2::<Complex64>::zeros((n, n));
    let norm = (n as f64).powi(4);
    for (ia, &ka) in ks.iter().enumerate() {
        for (ja, &la) in ks.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &m in &ks {
                for &q in &ks {
                    let u1 = s.coeffs[[g.index_of(m), g.index_of(q)]];
                    for &pk in &ks {
                        let rk = ka - m - pk;
                        if !inside(rk) {
                            continue;
                        }
                        for &pl in &ks {
                            let rl = la - q - pl;
                            if !inside(rl) {
                                continue;
                            }
                            acc += u1
                                * s.coeffs[[g.index_of(pk), g.index_of(pl)]]
                                * s.coeffs[[g.index_of(rk), g.index_of(rl)]];
                        }
                    }
                }
            }
            out[[ia, ja]] = acc / norm;
        }
    }
    Ok(SpectralField { coeffs: out, grid: g.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::inverse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(n: usize, seed: u64) -> Field {
        let g = SpectralGrid::new(n, 2.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
        Field::new(values, &g).unwrap()
    }

    fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs.iter().zip(b.coeffs.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn constant_cube() {
        let g = SpectralGrid::new(4, 1.0).unwrap();
        let w = cubic_dealiased(&g.constant(2.0));
        assert!((w.at(0, 0) - Complex64::new(128.0, 0.0)).norm() < 1e-12);
        assert!(w.coeffs.iter().skip(1).all(|z| z.norm() < 1e-12));
        assert!(max_diff(&w, &cubic_aliased(&g.constant(2.0))) < 1e-12);
    }

    #[test]
    fn cosine_cube() {
        let g = SpectralGrid::new(8, 2.0 * PI).unwrap();
        let f = g.sample(|x, _| x.cos());
        let w = cubic_dealiased(&f);
        for k in [1, -1] {
            assert!((w.at(k, 0).re - 3.0 * 64.0 / 8.0).abs() < 1e-10);
        }
        for k in [3, -3] {
            assert!((w.at(k, 0).re - 64.0 / 8.0).abs() < 1e-10);
        }
        let mut rest = w.clone();
        for (k, l) in [(1, 0), (-1, 0), (3, 0), (-3, 0)] {
            rest.coeffs[[g.index_of(k), g.index_of(l)]] = Complex64::new(0.0, 0.0);
        }
        assert!(rest.max_abs() <= 1e-10);
        assert!(max_diff(&w, &cubic_aliased(&f)) < 1e-10);
        let bf = brute_force_truncated_convolution(&forward(&f)).unwrap();
        assert!(max_diff(&hermitian_part(&bf), &w) < 1e-10);
    }

    #[test]
    fn nyquist_cosine_aliases() {
        let g = SpectralGrid::new(8, 1.0).unwrap();
        let f = g.sample(|x, _| (8.0 * PI * x).cos());
        assert!(max_diff(&cubic_aliased(&f), &cubic_dealiased(&f)) > 1.0);
    }

    #[test]
    fn one_sided_matches_oracle() {
        for seed in 0..5 {
            let s = forward(&random_field(8, seed));
            let fast = cubic_dealiased_one_sided(&s);
            let slow = brute_force_truncated_convolution(&s).unwrap();
            assert!(max_diff(&fast, &slow) <= 1e-9 * slow.max_abs());
            assert!(max_diff(&hermitian_part(&fast), &hermitian_part(&slow)) <= 1e-9 * slow.max_abs());
        }
    }

    #[test]
    fn one_sided_is_not_hermitian_but_projection_is() {
        let s = forward(&random_field(8, 42));
        let raw = cubic_dealiased_one_sided(&s);
        assert!(conjugate_symmetry_defect(&raw) > 1e-3 * raw.max_abs());
        let w = cubic_dealiased_coeffs(&s);
        assert!(conjugate_symmetry_defect(&w) <= 1e-12 * w.max_abs());
        assert!(inverse(&w).is_ok());
    }

    #[test]
    fn smooth_fields_agree_with_aliased() {
        // band-limited to |k| <= 2 at N = 16: the cube has |k| <= 6 < 8, no aliasing
        let g = SpectralGrid::new(16, 2.0 * PI).unwrap();
        let f = g.sample(|x, y| 0.3 * x.sin() + 0.5 * (2.0 * y).cos() + 0.2 * (x + 2.0 * y).sin());
        assert!(max_diff(&cubic_dealiased(&f), &cubic_aliased(&f)) < 1e-9);
    }

    #[test]
    fn general_power() {
        let g = SpectralGrid::new(16, 2.0 * PI).unwrap();
        let f = g.sample(|x, y| 0.3 * x.sin() + 0.5 * y.cos());
        let s = forward(&f);
        let cube = cubic_dealiased_coeffs(&s);
        assert!(max_diff(&power_dealiased(&s, 3), &cube) < 1e-9);
        let sq = power_dealiased(&s, 2);
        let direct = forward(&Field { values: f.values.mapv(|v| v * v), grid: g.clone() });
        assert!(max_diff(&sq, &direct) < 1e-9);
        let p5 = power_dealiased(&s, 5);
        let direct = forward(&Field { values: f.values.mapv(|v| v.powi(5)), grid: g.clone() });
        assert!(max_diff(&p5, &direct) < 1e-9);
    }

    #[test]
    fn brute_force_guards() {
        let g = SpectralGrid::new(32, 1.0).unwrap();
        assert_eq!(
            brute_force_truncated_convolution(&SpectralField::zeros(&g)).unwrap_err(),
            Error::GridTooLarge(32)
        );
        let g = SpectralGrid::new(8, 1.0).unwrap();
        let z = brute_force_truncated_convolution(&SpectralField::zeros(&g)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let c = forward(&g.constant(0.7));
        let bf = brute_force_truncated_convolution(&c).unwrap();
        assert!(max_diff(&bf, &cubic_dealiased_coeffs(&c)) < 1e-12);
    }
}

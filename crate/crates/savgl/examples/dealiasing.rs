//! Zero-padded evaluation of `u^3` against the brute-force truncated
//! convolution, and the aliasing error of the pointwise cube. Deviations are
//! relative to the largest coefficient.
//!
//!     cargo run --example dealiasing

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use savgl::spectral::{
    brute_force_truncated_convolution, cubic_aliased, cubic_dealiased, cubic_dealiased_one_sided, forward, hermitian_part,
    Field, SpectralField, SpectralGrid,
};

fn max_dev(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs.iter().zip(b.coeffs.iter()).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm())) / b.max_abs()
}

fn main() -> Result<(), savgl::error::Error> {
    let n = 8;
    let grid = SpectralGrid::new(n, 2.0 * std::f64::consts::PI)?;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Field::new(Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0)), &grid)?;
        let s = forward(&f);
        let exact = brute_force_truncated_convolution(&s)?;
        // the padded product keeps the one-sided Nyquist convention of the
        // truncated convolution; the solver uses its Hermitian part
        let one_sided = max_dev(&cubic_dealiased_one_sided(&s), &exact);
        let symmetric = max_dev(&cubic_dealiased(&f), &hermitian_part(&exact));
        let aliased = max_dev(&cubic_aliased(&f), &hermitian_part(&exact));
        println!("seed {seed}: one-sided {one_sided:.2e}, hermitian {symmetric:.2e}, pointwise cube {aliased:.2e}");
    }
    Ok(())
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{IcConfig, IcKind};
use crate::spectral::{Field, SpectralGrid};

/// Generator behind the random initial condition.
pub const RNG_NAME: &str = "ChaCha8Rng::seed_from_u64 (rand_chacha 0.3), row-major fill";

pub const POLYCRYSTAL_PHI0: f64 = 0.285;
pub const POLYCRYSTAL_B: f64 = 0.446;
pub const POLYCRYSTAL_THETA: f64 = 0.66;

/// Seed rectangles `[x0, x1] x [y0, y1]` on the reference `400 x 400` domain.
pub const POLYCRYSTAL_REGIONS: [[f64; 4]; 3] =
    [[130.0, 170.0, 130.0, 170.0], [230.0, 270.0, 130.0, 170.0], [180.0, 220.0, 230.0, 270.0]];

pub fn initial_condition(ic: &IcConfig, grid: &SpectralGrid) -> Field {
    match ic.kind {
        IcKind::Random => {
            let amp = ic.amplitude.unwrap_or(0.05);
            let off = ic.offset.unwrap_or(0.0);
            let mut rng = ChaCha8Rng::seed_from_u64(ic.seed);
            let n = grid.n();
            let values = ndarray::Array2::from_shape_fn((n, n), |_| off + amp * (2.0 * rng.gen::<f64>() - 1.0));
            Field { values, grid: grid.clone() }
        }
        IcKind::ProductSine => {
            let amp = ic.amplitude.unwrap_or(0.05);
            let off = ic.offset.unwrap_or(0.0);
            let w = grid.wavenumber_factor();
            grid.sample(|x, y| off + amp * (w * x).sin() * (w * y).sin())
        }
        IcKind::Constant => grid.constant(ic.offset.unwrap_or(0.0)),
        IcKind::Polycrystal => polycrystal(
            grid,
            ic.offset.unwrap_or(POLYCRYSTAL_PHI0),
            ic.amplitude.unwrap_or(POLYCRYSTAL_B),
            ic.theta.unwrap_or(POLYCRYSTAL_THETA),
        ),
    }
}

fn polycrystal(grid: &SpectralGrid, phi0: f64, b: f64, theta: f64) -> Field {
    let s = grid.length() / 400.0;
    let inside = |r: &[f64; 4], x: f64, y: f64| x >= r[0] * s && x <= r[1] * s && y >= r[2] * s && y <= r[3] * s;
    let (r6, r2, r3) = (6f64.sqrt(), 2f64.sqrt(), 3f64.sqrt());
    grid.sample(|x, y| {
        let lattice = if inside(&POLYCRYSTAL_REGIONS[0], x, y) {
            (r6 * theta / 6.0 * (y - x)).cos() * (r2 * theta / 2.0 * (x + y)).cos()
                - 0.5 * (r6 * theta / 3.0 * (y - x)).cos()
        } else if inside(&POLYCRYSTAL_REGIONS[1], x, y) {
            (r6 * theta / 6.0 * (x + y)).cos() * (r2 * theta / 2.0 * (y - x)).cos()
                - 0.5 * (r6 * theta / 3.0 * (x + y)).cos()
        } else if inside(&POLYCRYSTAL_REGIONS[2], x, y) {
            (theta / r3 * x).cos() * (theta * y).cos() - 0.5 * (2.0 * theta / r3 * x).cos()
        } else {
            return phi0;
        };
        phi0 + b * lattice
    })
}

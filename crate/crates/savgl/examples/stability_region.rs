//! Scans the semi-implicit test equation over a grid of `(tau xi, tau zeta)`
//! and draws the stable set as ASCII, then checks A-stability numerically.
//!
//!     cargo run --example stability_region

use savgl::gltd::{verify_a_stability_numerically, Preset, ScanGrid};
use savgl::stability::{is_stable_point, max_root_modulus};

fn main() -> Result<(), savgl::error::Error> {
    for preset in Preset::ALL {
        let p = preset.params();
        let scan = verify_a_stability_numerically(&p, &ScanGrid::standard())?;
        println!("{}: max root modulus over the left half-plane {:.12}", preset.name(), scan.max_modulus);
        // rows: tau*zeta from 4 down to -4, columns: tau*xi from -8 to 0
        for i in 0..=16 {
            let zeta = 4.0 - 0.5 * i as f64;
            let row: String = (0..=32)
                .map(|j| {
                    let xi = -8.0 + 0.25 * j as f64;
                    if is_stable_point(&p, xi, zeta) {
                        '#'
                    } else {
                        '.'
                    }
                })
                .collect();
            println!("  {zeta:>5.1} {row}");
        }
        let m = max_root_modulus(&p, -1.0, -0.5)?;
        println!("  at (-1, -0.5): max |root| = {m:.6}");
    }
    Ok(())
}

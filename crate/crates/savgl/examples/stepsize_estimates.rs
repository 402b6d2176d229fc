//! Linear-stability stepsize bounds for the three models and four preset
//! schemes.
//!
//!     cargo run --example stepsize_estimates

use std::f64::consts::PI;

use savgl::gltd::Preset;
use savgl::models::{build_model, ModelKind};
use savgl::spectral::SpectralGrid;
use savgl::stability::{estimate_for_model, Linearization, TauBound};

fn main() -> Result<(), savgl::error::Error> {
    let cases = [
        (ModelKind::AllenCahn, 128, 2.0 * PI, 0.1, 2.7),
        (ModelKind::CahnHilliard, 128, 2.0 * PI, 0.1, 2.6),
        (ModelKind::Pfc, 400, 400.0, 0.25, 0.5),
    ];
    for (kind, n, length, eps, psi) in cases {
        let grid = SpectralGrid::new(n, length)?;
        let model = build_model(kind, eps, &grid, 1.0, 0.0)?;
        println!("{kind:?}, N = {n}, L = {length:.4}, epsilon = {eps}, psi = {psi}");
        for preset in Preset::ALL {
            let r = estimate_for_model(&model, &preset.params(), psi, Linearization::Tabulated)?;
            let bound = match r.tau_max {
                TauBound::Bounded(t) => format!("{t:.6e}"),
                TauBound::Unbounded => "unbounded".into(),
                TauBound::NoStableStep => "none".into(),
            };
            print!("  {:<18} tau < {bound}", preset.name());
            if let Some((k, l)) = r.argmax_mode {
                print!("  limited by mode ({k}, {l})");
            }
            if r.growing_modes > 0 {
                print!(", {} growing modes skipped", r.growing_modes);
            }
            println!();
        }
    }
    Ok(())
}

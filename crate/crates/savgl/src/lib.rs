//! Linear, energy-stable time stepping for gradient flows `u_t = G mu`,
//! `mu = L u + V(u)`, with a scalar auxiliary variable.
//!
//! The time discretization is the general linear two-step family
//! `(alpha0, beta0, beta2)`; [`gltd`] classifies a triple and decides its
//! stability, [`identities`] solves for the energy-identity coefficients, and
//! [`steppers`] advances the SAV and generalized SAV schemes on a periodic
//! Fourier grid ([`spectral`]). Allen-Cahn, Cahn-Hilliard and phase field
//! crystal models live in [`models`], linear stepsize bounds in [`stability`],
//! and [`run`] drives JSON-configured simulations.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --example check_params
//! cargo run --example dealiasing
//! cargo run --example stability_region
//! cargo run --example stepsize_estimates
//! cargo run --release --example allen_cahn
//! cargo run --release --example cahn_hilliard
//! cargo run --release --example phase_field_crystal
//! ```
//!
//! A small step of backward Euler SAV for Allen-Cahn:
//!
//! ```
//! use std::sync::Arc;
//! use savgl::gltd::Preset;
//! use savgl::models::{build_model, ModelKind};
//! use savgl::spectral::SpectralGrid;
//! use savgl::steppers::{init_state, modified_energy, Family};
//!
//! let grid = SpectralGrid::new(16, 2.0 * std::f64::consts::PI).unwrap();
//! let model = Arc::new(build_model(ModelKind::AllenCahn, 0.1, &grid, 1.0, 0.0).unwrap());
//! let ic = grid.sample(|x, y| 0.5 * x.sin() * y.cos());
//! let s0 = init_state(model, Preset::BackwardEuler.params(), Family::Sav, ic, 0.1).unwrap();
//! let s1 = s0.step().unwrap().next_state;
//! assert!(modified_energy(&s1) <= modified_energy(&s0));
//! ```

pub mod error;
pub mod gltd;
pub mod identities;
pub mod spectral;
pub mod models;
pub mod steppers;
pub mod stability;
pub mod run;

//! Runs `configs/phase_field_crystal.json` and writes energies, snapshots and
//! `meta.json` under `out/phase_field_crystal`.
//!
//!     cargo run --release --example phase_field_crystal

use savgl::run::{check_monotone, read_energy_column, run_simulation, RunConfig};

fn main() -> Result<(), savgl::error::Error> {
    let cfg = RunConfig::from_json(include_str!("configs/phase_field_crystal.json"))?;
    let meta = run_simulation(&cfg)?;
    println!("{:?} after {} steps, t = {}", meta.status, meta.steps_completed, meta.final_time);
    println!("scheme: {:?}", meta.scheme.verdict);
    println!("stepsize bound at psi = {:.4}: {:?}", meta.stepsize.psi, meta.stepsize.report.tau_max);

    let energies = cfg.output.directory.join("energies.csv");
    let original = read_energy_column(&energies, "original_energy")?;
    let modified = read_energy_column(&energies, "modified_energy")?;
    println!("original energy {:.6} -> {:.6}", original[0], original[original.len() - 1]);
    let r = check_monotone(&modified, 1e-9);
    println!("modified energy non-increasing: {} (worst uptick {:.2e})", r.monotone, r.worst_uptick);
    Ok(())
}

//! Configured simulations with on-disk artifacts.
//!
//! A run directory holds `energies.csv`, optional field snapshots and a
//! `meta.json` written at the end of the run, including after an abort.

mod config;
mod ic;
mod output;

pub use config::{GridConfig, IcConfig, IcKind, ModelConfig, OutputConfig, RunConfig, SchemeConfig, TimeConfig};
pub use ic::{initial_condition, POLYCRYSTAL_B, POLYCRYSTAL_PHI0, POLYCRYSTAL_REGIONS, POLYCRYSTAL_THETA, RNG_NAME};
pub use output::{
    read_snapshot_text, snapshot_path, write_snapshot_binary, write_snapshot_text, EnergyWriter, SnapshotSidecar,
    ENERGY_HEADER,
};

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gltd::{verdict, GltdParams, StabilityVerdict};
use crate::models::EnergyRecord;
use crate::stability::{estimate_for_model, Linearization, StepsizeReport};
use crate::steppers::{energy_weights, init_state, psi, StepperState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Aborted,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeMeta {
    pub params: GltdParams,
    pub verdict: StabilityVerdict,
    /// Weights of `Q(u, z)`, `Q(u_prev, z_prev)` and the cross term in the modified energy.
    pub energy_weights: (f64, f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct StepsizeMeta {
    pub psi: f64,
    /// `config` or `initial_field`.
    pub psi_source: &'static str,
    pub report: StepsizeReport,
    /// Largest `psi` seen during the run and the bound it implies.
    pub psi_max_observed: Option<f64>,
    pub report_at_observed: Option<StepsizeReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub config: RunConfig,
    pub scheme: SchemeMeta,
    pub c0: f64,
    pub c0_defaulted: bool,
    pub ctilde0: f64,
    pub rng: &'static str,
    pub stepsize: StepsizeMeta,
    pub status: RunStatus,
    pub steps_completed: usize,
    pub final_time: f64,
    pub error: Option<String>,
}

/// Result of an in-memory run.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// One record per step, starting with the state after startup.
    pub records: Vec<EnergyRecord>,
    pub status: RunStatus,
    pub error: Option<Error>,
    pub final_state: Option<StepperState>,
}

/// Steps a configuration to completion, calling `each` on every finite state.
fn drive(cfg: &RunConfig, mut each: impl FnMut(&StepperState, &EnergyRecord) -> Result<()>) -> Result<RunResult> {
    let model = Arc::new(cfg.build_model()?);
    let params = cfg.params()?;
    let ic = initial_condition(&cfg.ic, &model.grid);
    let mut records = Vec::new();
    let abort = |records, error, state| Ok(RunResult { records, status: RunStatus::Aborted, error: Some(error), final_state: state });

    let mut state = match init_state(model, params, cfg.scheme.family, ic, cfg.time.tau) {
        Ok(s) => s,
        Err(e) if e.is_runtime() => return abort(records, e, None),
        Err(e) => return Err(e),
    };
    let first = crate::steppers::diagnostics(&state);
    if !(first.is_finite() && state.u_curr.values.is_finite()) {
        return abort(records, Error::NonFiniteState(state.step_index), None);
    }
    each(&state, &first)?;
    records.push(first);
    while state.step_index < cfg.time.steps {
        let out = match state.step() {
            Ok(o) => o,
            Err(e) if e.is_runtime() => return abort(records, e, Some(state)),
            Err(e) => return Err(e),
        };
        if !(out.record.is_finite() && out.next_state.u_curr.values.is_finite()) {
            return abort(records, Error::NonFiniteState(out.next_state.step_index), Some(state));
        }
        each(&out.next_state, &out.record)?;
        records.push(out.record);
        state = out.next_state;
    }
    Ok(RunResult { records, status: RunStatus::Completed, error: None, final_state: Some(state) })
}

/// Runs without touching the file system.
pub fn run_in_memory(cfg: &RunConfig) -> Result<RunResult> {
    cfg.validate()?;
    drive(cfg, |_, _| Ok(()))
}

/// Runs a configuration and writes its artifacts. Validation failures are
/// returned as errors; numerical aborts produce `Ok` with status `Aborted`.
pub fn run_simulation(cfg: &RunConfig) -> Result<RunMeta> {
    cfg.validate()?;
    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir)?;
    let model = cfg.build_model()?;
    let params = cfg.params()?;

    let ic_field = initial_condition(&cfg.ic, &model.grid);
    let (psi_used, psi_source) = match cfg.psi_estimate {
        Some(p) => (p, "config"),
        None => (psi(&ic_field), "initial_field"),
    };
    let report = estimate_for_model(&model, &params, psi_used, Linearization::default())?;

    let every_snap = cfg.output.snapshot_every;
    let binary = cfg.output.binary;
    let snap = |step: usize, f: &crate::spectral::Field, t: f64| -> Result<()> {
        let path = snapshot_path(dir, step, binary);
        if binary {
            write_snapshot_binary(&path, f, t)
        } else {
            write_snapshot_text(&path, f, t)
        }
    };
    if every_snap > 0 {
        snap(0, &ic_field, 0.0)?;
    }

    let mut energies = EnergyWriter::create(&dir.join("energies.csv"))?;
    let mut psi_max = f64::NEG_INFINITY;
    let mut first = true;
    let steps = cfg.time.steps;
    let result = drive(cfg, |s, r| {
        psi_max = psi_max.max(r.psi);
        let last = s.step_index == steps;
        if first || last || s.step_index % cfg.output.energy_every == 0 {
            energies.write(r)?;
        }
        first = false;
        if every_snap > 0 && s.step_index > 0 && (s.step_index % every_snap == 0 || last) {
            snap(s.step_index, &s.u_curr.values, s.time())?;
        }
        Ok(())
    })?;
    energies.finish()?;

    let steps_completed = result.records.last().map_or(0, |r| r.step);
    let report_at_observed = if psi_max.is_finite() {
        Some(estimate_for_model(&model, &params, psi_max, Linearization::default())?)
    } else {
        None
    };
    let (c0, c0_defaulted) = cfg.c0();
    let meta = RunMeta {
        config: cfg.clone(),
        scheme: SchemeMeta { params, verdict: verdict(&params), energy_weights: energy_weights(&params) },
        c0,
        c0_defaulted,
        ctilde0: model.ctilde0,
        rng: RNG_NAME,
        stepsize: StepsizeMeta {
            psi: psi_used,
            psi_source,
            report,
            psi_max_observed: psi_max.is_finite().then_some(psi_max),
            report_at_observed,
        },
        status: result.status,
        steps_completed,
        final_time: steps_completed as f64 * cfg.time.tau,
        error: result.error.map(|e| e.to_string()),
    };
    write_meta(dir, &meta)?;
    Ok(meta)
}

fn write_meta(dir: &Path, meta: &RunMeta) -> Result<()> {
    let text = serde_json::to_string_pretty(meta).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("meta.json"), text)?;
    Ok(())
}

/// Runs independent configurations in parallel. Output directories must differ.
pub fn run_sweep(cfgs: &[RunConfig]) -> Result<Vec<Result<RunMeta>>> {
    let mut dirs: Vec<_> = cfgs.iter().map(|c| &c.output.directory).collect();
    dirs.sort();
    if dirs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config("sweep entries must use distinct output directories".into()));
    }
    Ok(cfgs.par_iter().map(run_simulation).collect())
}

/// Outcome of [`check_monotone`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// Largest `(v[i+1] - v[i]) / |v[i]|`; negative for a strictly decreasing sequence.
    pub worst_uptick: f64,
    /// Index `i + 1` of the first value exceeding the tolerance.
    pub first_violation: Option<usize>,
}

/// Whether `values` is non-increasing up to a relative uptick of `rel_tol`.
pub fn check_monotone(values: &[f64], rel_tol: f64) -> MonotoneReport {
    let mut worst = f64::NEG_INFINITY;
    let mut first = None;
    for (i, w) in values.windows(2).enumerate() {
        let up = (w[1] - w[0]) / w[0].abs().max(f64::MIN_POSITIVE);
        let up = if up.is_nan() { f64::INFINITY } else { up };
        if up > rel_tol && first.is_none() {
            first = Some(i + 1);
        }
        worst = worst.max(up);
    }
    MonotoneReport { monotone: first.is_none(), worst_uptick: worst, first_violation: first }
}

/// One named column of an `energies.csv` file.
pub fn read_energy_column(path: &Path, column: &str) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Io(format!("{}: empty file", path.display())))?;
    let idx = header
        .split(',')
        .position(|h| h.trim() == column)
        .ok_or_else(|| Error::Config(format!("no column '{column}' in {}", path.display())))?;
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .nth(idx)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::Io(format!("{}: malformed row '{l}'", path.display())))
        })
        .collect()
}

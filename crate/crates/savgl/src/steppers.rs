//! SAV and generalized-SAV time stepping for the three-parameter family.
//!
//! Both schemes only ever invert the constant diagonal operator
//! `A = 1 - tau beta2 G L`. The SAV coupling between `u[n+1]` and the scalar
//! `z[n+kappa]` is resolved in closed form from two diagonal solves.
//!
//! Notation, with `gamma = 1/(1 - alpha0)`:
//!
//! ```text
//! D u       = gamma (u[n+1] - (1+alpha0) u[n] + alpha0 u[n-1])
//! u[n+kap]  = gamma (beta2 u[n+1] + beta1 u[n] + beta0 u[n-1])
//! u_bar     = (1 + kappa) u[n] - kappa u[n-1]
//! ```
//!
//! SAV: `D u = tau G (L u[n+kap] + z[n+kap] W(u_bar))`, `D z = (W(u_bar), D u)/2`
//! with `W = V/sqrt(E1 + C0)`.
//!
//! Generalized SAV: `D u = tau G (L u[n+kap] + V(u_bar))` with the history of `L u`
//! kept implicit only in the `beta2` slot, followed by the scalar update
//! `R[n+1] = R[n] / (1 - tau (mu, G mu)/(E(u[n+1]) + C~0))`, `mu = L u[n+1] + V(u[n+1])`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gltd::{classify, GltdParams, SchemeCase};
use crate::identities::{solve_coefficients, IdentityBranch};
use crate::models::{EnergyRecord, ModelSpec};
use crate::spectral::{forward, hermitian_part, inverse, spectral_inner, Field, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sav,
    Gsav,
}

/// A solution level kept both as values and as coefficients.
#[derive(Debug, Clone)]
pub struct Level {
    pub values: Field,
    pub coeffs: SpectralField,
}

impl Level {
    pub fn from_field(f: Field) -> Self {
        let coeffs = forward(&f);
        Level { values: f, coeffs }
    }

    /// Keeps the Hermitian part so round-off asymmetry cannot accumulate.
    fn from_coeffs(coeffs: SpectralField) -> Result<Self> {
        let coeffs = hermitian_part(&coeffs);
        let values = inverse(&coeffs)?;
        Ok(Level { values, coeffs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SavValue {
    Sav { z_prev: f64, z_curr: f64 },
    Gsav { r_curr: f64 },
}

/// Weights `(wa, wb, wd)` of the modified energy
/// `wa Q(u[n], z[n]) + wb Q(u[n-1], z[n-1]) + wd X`, where
/// `Q(u, z) = (L u, u)/2 + z^2` and `X = (L u[n], u[n-1])/2 + z[n] z[n-1]`.
///
/// One-step and second-order schemes use twice the canonical identity
/// coefficients, which yields `Q` itself in the one-step case. First-order
/// two-step schemes use the coefficients unscaled. Without an identity the
/// weights fall back to `(1, 0, 0)`.
pub fn energy_weights(p: &GltdParams) -> (f64, f64, f64) {
    if classify(p) == SchemeCase::OneStep {
        return (1.0, 0.0, 0.0);
    }
    let Ok(co) = solve_coefficients(p, IdentityBranch::CANONICAL) else {
        return (1.0, 0.0, 0.0);
    };
    let f = match classify(p) {
        SchemeCase::OneStep | SchemeCase::TwoStepSecondOrder => 2.0,
        SchemeCase::TwoStepFirstOrder => 1.0,
    };
    (f * co.a, f * co.b, f * co.d)
}

#[derive(Debug, Clone)]
pub struct StepperState {
    pub params: GltdParams,
    pub family: Family,
    pub model: Arc<ModelSpec>,
    pub tau: f64,
    pub u_prev: Level,
    pub u_curr: Level,
    pub sav: SavValue,
    pub step_index: usize,
    /// `z[n+kappa]/sqrt(E1(u_bar) + C0)` of the last SAV step, or `eta` of the
    /// last generalized step. 1 before any step.
    pub psi_bar: f64,
    weights: (f64, f64, f64),
}

#[derive(Debug, Clone)]
pub struct StepOutput {
    pub next_state: StepperState,
    pub record: EnergyRecord,
    /// `sqrt((mu, mu))` of the chemical potential used in the step.
    pub mu_norm: f64,
    /// `1 - g (W, q)` of the SAV scalar recovery; 1 for the generalized scheme.
    pub denominator: f64,
}

/// Starting state from an initial condition.
///
/// Two-step schemes get `u[1]` from one step of the one-step scheme with
/// `beta2 = 1` started from `u[-1] = u[0] = ic`; one-step schemes start at step 0
/// with both levels equal to `ic`.
pub fn init_state(
    model: Arc<ModelSpec>,
    params: GltdParams,
    family: Family,
    ic: Field,
    tau: f64,
) -> Result<StepperState> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {tau}")));
    }
    if ic.grid != model.grid {
        return Err(Error::GridMismatch);
    }
    let level = Level::from_field(ic);
    let sav = match family {
        Family::Sav => {
            let rad = model.e1_pair(&level.values, &level.coeffs) + model.c0;
            if rad <= 0.0 {
                return Err(Error::NonpositiveRadicand(rad));
            }
            SavValue::Sav { z_prev: rad.sqrt(), z_curr: rad.sqrt() }
        }
        Family::Gsav => {
            let r = model.original_energy_pair(&level.values, &level.coeffs) + model.ctilde0;
            if r <= 0.0 {
                return Err(Error::NonpositiveShiftedEnergy(r));
            }
            SavValue::Gsav { r_curr: r }
        }
    };
    let state = StepperState {
        params,
        family,
        model,
        tau,
        u_prev: level.clone(),
        u_curr: level,
        sav,
        step_index: 0,
        psi_bar: 1.0,
        weights: energy_weights(&params),
    };
    if classify(&params) == SchemeCase::OneStep {
        return Ok(state);
    }
    let startup = GltdParams::new(0.0, 0.0, 1.0)?;
    let first = StepperState { params: startup, weights: energy_weights(&startup), ..state };
    let mut next = first.step()?.next_state;
    next.params = params;
    next.weights = energy_weights(&params);
    Ok(next)
}

impl StepperState {
    pub fn step(&self) -> Result<StepOutput> {
        match self.family {
            Family::Sav => sav_step(self),
            Family::Gsav => gsav_step(self),
        }
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.tau
    }

    pub fn sav_value(&self) -> f64 {
        match self.sav {
            SavValue::Sav { z_curr, .. } => z_curr,
            SavValue::Gsav { r_curr } => r_curr,
        }
    }

    pub fn energy_weights(&self) -> (f64, f64, f64) {
        self.weights
    }
}

/// Ingredients shared by both schemes.
struct Common {
    gamma: f64,
    u_bar: Level,
    /// `1 - tau beta2 G L` per mode.
    a_sym: ndarray::Array2<f64>,
    /// `(1+alpha0) u - alpha0 u_prev + tau G L (beta1 u + beta0 u_prev)`.
    rhs: SpectralField,
}

fn common(s: &StepperState) -> Result<Common> {
    let p = &s.params;
    let m = &s.model;
    let (a0, b0, b1, b2) = (p.alpha0(), p.beta0(), p.beta1(), p.beta2());
    let k = p.kappa();
    let u = &s.u_curr;
    let up = &s.u_prev;

    let mut bar_values = u.values.values.clone();
    bar_values.zip_mut_with(&up.values.values, |x, y| *x = (1.0 + k) * *x - k * *y);
    let u_bar = Level {
        values: Field { values: bar_values, grid: m.grid.clone() },
        coeffs: u.coeffs.combine(1.0 + k, &up.coeffs, -k),
    };

    let tau = s.tau;
    let a_sym = m.gl_symbol.values.mapv(|gl| 1.0 - tau * b2 * gl);
    let scale = a_sym.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if let Some(bad) = a_sym.iter().find(|&&v| v <= 1e-14 * scale) {
        return Err(Error::SingularSolve(format!("implicit symbol {bad:e} is not positive")));
    }

    let mut rhs = u.coeffs.combine(1.0 + a0, &up.coeffs, -a0);
    let expl = u.coeffs.combine(b1, &up.coeffs, b0);
    ndarray::Zip::from(&mut rhs.coeffs)
        .and(&expl.coeffs)
        .and(&m.gl_symbol.values)
        .for_each(|r, e, gl| *r += tau * gl * *e);

    Ok(Common { gamma: 1.0 / (1.0 - a0), u_bar, a_sym, rhs })
}

fn solve(a_sym: &ndarray::Array2<f64>, mut v: SpectralField) -> SpectralField {
    v.coeffs.zip_mut_with(a_sym, |z, a| *z /= *a);
    v
}

/// One step of the SAV scheme.
pub fn sav_step(s: &StepperState) -> Result<StepOutput> {
    let SavValue::Sav { z_prev, z_curr } = s.sav else {
        return Err(Error::Config("sav_step called on a generalized-SAV state".into()));
    };
    let p = &s.params;
    let m = &s.model;
    let (a0, b0, b1, b2) = (p.alpha0(), p.beta0(), p.beta1(), p.beta2());
    let c = common(s)?;
    let gamma = c.gamma;

    let rad = m.e1_pair(&c.u_bar.values, &c.u_bar.coeffs) + m.c0;
    if rad <= 0.0 {
        return Err(Error::NonpositiveRadicand(rad));
    }
    let zb = rad.sqrt();
    let w = m.v_hat(&c.u_bar.values, &c.u_bar.coeffs).scaled(1.0 / zb);

    let pv = solve(&c.a_sym, c.rhs);
    let mut gw = w.clone();
    gw.coeffs.zip_mut_with(&m.g_symbol.values, |z, g| *z *= s.tau * (1.0 - a0) * g);
    let qv = solve(&c.a_sym, gw);
    let hist = s.u_curr.coeffs.combine(gamma * (1.0 + a0), &s.u_prev.coeffs, -gamma * a0);

    let w_p = spectral_inner(&w, &pv);
    let w_q = spectral_inner(&w, &qv);
    let w_h = spectral_inner(&w, &hist);

    let s1 = gamma * (b2 * ((1.0 + a0) * z_curr - a0 * z_prev) + b1 * z_curr + b0 * z_prev);
    let s2 = s1 - 0.5 * b2 * w_h;
    let g = 0.5 * b2 * gamma;
    let denominator = 1.0 - g * w_q;
    if !(denominator.is_finite() && denominator > 1e-12) || (b2 > 0.0 && denominator < 1.0 - 1e-12) {
        return Err(Error::SingularSolve(format!("scalar recovery denominator {denominator:e}")));
    }
    let z_kappa = (s2 + g * w_p) / denominator;

    let next_coeffs = pv.combine(1.0, &qv, z_kappa);
    let next = Level::from_coeffs(next_coeffs)?;
    let w_u = spectral_inner(&w, &next.coeffs);
    let w_du = gamma * w_u - w_h;
    let z_next = (1.0 + a0) * z_curr - a0 * z_prev + 0.5 * (1.0 - a0) * w_du;

    // mu at the stage n + kappa
    let stage = next.coeffs.combine(gamma * b2, &s.u_curr.coeffs, gamma * b1).combine(
        1.0,
        &s.u_prev.coeffs,
        gamma * b0,
    );
    let mut mu = stage;
    mu.coeffs.zip_mut_with(&m.l_symbol.values, |z, l| *z *= *l);
    let mu = mu.combine(1.0, &w, z_kappa);
    let mu_norm = spectral_inner(&mu, &mu).max(0.0).sqrt();

    let next_state = StepperState {
        u_prev: s.u_curr.clone(),
        u_curr: next,
        sav: SavValue::Sav { z_prev: z_curr, z_curr: z_next },
        step_index: s.step_index + 1,
        psi_bar: z_kappa / zb,
        ..s.clone()
    };
    let record = diagnostics(&next_state);
    Ok(StepOutput { next_state, record, mu_norm, denominator })
}

/// One step of the generalized SAV scheme.
pub fn gsav_step(s: &StepperState) -> Result<StepOutput> {
    let SavValue::Gsav { r_curr } = s.sav else {
        return Err(Error::Config("gsav_step called on a SAV state".into()));
    };
    let m = &s.model;
    let a0 = s.params.alpha0();
    let c = common(s)?;

    let mut rhs = c.rhs;
    let v_bar = m.v_hat(&c.u_bar.values, &c.u_bar.coeffs);
    ndarray::Zip::from(&mut rhs.coeffs)
        .and(&v_bar.coeffs)
        .and(&m.g_symbol.values)
        .for_each(|r, v, g| *r += s.tau * (1.0 - a0) * g * *v);
    let next = Level::from_coeffs(solve(&c.a_sym, rhs))?;

    let mut mu = next.coeffs.clone();
    mu.coeffs.zip_mut_with(&m.l_symbol.values, |z, l| *z *= *l);
    let mu = mu.combine(1.0, &m.v_hat(&next.values, &next.coeffs), 1.0);
    let mut gmu = mu.clone();
    gmu.coeffs.zip_mut_with(&m.g_symbol.values, |z, g| *z *= *g);
    let dissipation = spectral_inner(&mu, &gmu);

    let shifted = m.original_energy_pair(&next.values, &next.coeffs) + m.ctilde0;
    if shifted <= 0.0 {
        return Err(Error::NonpositiveShiftedEnergy(shifted));
    }
    let r_next = gsav_ratio_update(r_curr, s.tau, dissipation, shifted);
    let eta = r_next / shifted;
    let mu_norm = spectral_inner(&mu, &mu).max(0.0).sqrt();

    let next_state = StepperState {
        u_prev: s.u_curr.clone(),
        u_curr: next,
        sav: SavValue::Gsav { r_curr: r_next },
        step_index: s.step_index + 1,
        psi_bar: eta,
        ..s.clone()
    };
    let record = diagnostics(&next_state);
    Ok(StepOutput { next_state, record, mu_norm, denominator: 1.0 })
}

/// `R[n+1] = R[n] / (1 - tau (mu, G mu) / E~(u[n+1]))`.
pub fn gsav_ratio_update(r: f64, tau: f64, dissipation: f64, shifted_energy: f64) -> f64 {
    r / (1.0 - tau * dissipation / shifted_energy)
}

/// Modified energy of the current state. `R` for the generalized scheme.
pub fn modified_energy(s: &StepperState) -> f64 {
    match s.sav {
        SavValue::Gsav { r_curr } => r_curr,
        SavValue::Sav { z_prev, z_curr } => {
            let m = &s.model;
            let (wa, wb, wd) = s.weights;
            let q_curr = 0.5 * m.l_form(&s.u_curr.coeffs) + z_curr * z_curr;
            if wb == 0.0 && wd == 0.0 {
                return wa * q_curr;
            }
            let q_prev = 0.5 * m.l_form(&s.u_prev.coeffs) + z_prev * z_prev;
            let cross = 0.5 * m.l_bilinear(&s.u_curr.coeffs, &s.u_prev.coeffs) + z_curr * z_prev;
            wa * q_curr + wb * q_prev + wd * cross
        }
    }
}

/// `(3/N^2) sum u^2`.
pub fn psi(f: &Field) -> f64 {
    let n = f.values.len() as f64;
    3.0 * f.values.iter().map(|v| v * v).sum::<f64>() / n
}

pub fn diagnostics(s: &StepperState) -> EnergyRecord {
    let u = &s.u_curr;
    EnergyRecord {
        step: s.step_index,
        time: s.time(),
        original_energy: s.model.original_energy_pair(&u.values, &u.coeffs),
        modified_energy: modified_energy(s),
        sav_value: s.sav_value(),
        psi: psi(&u.values),
        psi_bar: s.psi_bar,
        mass: u.coeffs.mean(),
    }
}

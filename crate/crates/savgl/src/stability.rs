//! Linear stability of the semi-implicit schemes on `u' = xi u + zeta u`, where
//! `xi` is treated implicitly and `zeta` through the extrapolation `u_bar`.
//!
//! With `xi_bar = tau xi`, `zeta_bar = tau zeta` the characteristic polynomial is
//!
//! ```text
//! Q(x) = (1 - beta2 xi_bar) x^2
//!      - (1 + alpha0 + beta1 xi_bar + (1 - alpha0 + beta2 - beta0) zeta_bar) x
//!      + (alpha0 - beta0 xi_bar + (beta2 - beta0) zeta_bar)
//! ```
//!
//! and both roots lie in the closed unit disk iff
//!
//! ```text
//! 1 + alpha0 - (beta0 + beta2) xi_bar + (beta2 - beta0) zeta_bar                >= 0
//! 1 - alpha0 - (beta2 - beta0)(xi_bar + zeta_bar)                               >= 0
//! 2 (1 + alpha0) + (beta1 - beta0 - beta2) xi_bar
//!     + (1 - alpha0 + 2 beta2 - 2 beta0) zeta_bar                               >= 0
//! xi_bar + zeta_bar                                                             <= 0
//! ```

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gltd::{a_stability, classify, quadratic_roots, GltdParams, SchemeCase, CASE_TOL};
use crate::models::{ModelKind, ModelSpec};

/// Largest step tried by the bisection; stable there means unbounded.
pub const TAU_CAP: f64 = 1e6;

fn coefficients(p: &GltdParams, xi_bar: f64, zeta_bar: f64) -> (f64, f64, f64) {
    let (a0, b0, b1, b2) = (p.alpha0(), p.beta0(), p.beta1(), p.beta2());
    let c2 = 1.0 - b2 * xi_bar;
    let c1 = -(1.0 + a0 + b1 * xi_bar + (1.0 - a0 + b2 - b0) * zeta_bar);
    let c0 = a0 - b0 * xi_bar + (b2 - b0) * zeta_bar;
    (c2, c1, c0)
}

pub fn semi_implicit_roots(p: &GltdParams, xi_bar: f64, zeta_bar: f64) -> Result<(Complex64, Complex64)> {
    let (c2, c1, c0) = coefficients(p, xi_bar, zeta_bar);
    if c2 == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let c = |v: f64| Complex64::new(v, 0.0);
    Ok(quadratic_roots(c(c2), c(c1), c(c0)))
}

pub fn max_root_modulus(p: &GltdParams, xi_bar: f64, zeta_bar: f64) -> Result<f64> {
    let (r1, r2) = semi_implicit_roots(p, xi_bar, zeta_bar)?;
    Ok(r1.norm().max(r2.norm()))
}

/// Values of the four region inequalities, each required to be `>= 0`:
/// `Q(1) + ...` in the order `c2 + c0`, `c2 - c0`, `Q(-1)`, `Q(1)` with the
/// leading coefficient made positive.
pub fn region_margins(p: &GltdParams, xi_bar: f64, zeta_bar: f64) -> [f64; 4] {
    let (mut c2, mut c1, mut c0) = coefficients(p, xi_bar, zeta_bar);
    if c2 < 0.0 {
        c2 = -c2;
        c1 = -c1;
        c0 = -c0;
    }
    [c2 + c0, c2 - c0, c2 - c1 + c0, c2 + c1 + c0]
}

/// Whether both roots of `Q` lie in the closed unit disk. Points on the
/// boundary count as stable; see [`boundary_double_root`].
pub fn is_stable_point(p: &GltdParams, xi_bar: f64, zeta_bar: f64) -> bool {
    let (c2, _, _) = coefficients(p, xi_bar, zeta_bar);
    if c2 == 0.0 {
        return false;
    }
    let tol = 1e-14 * (1.0 + xi_bar.abs() + zeta_bar.abs());
    region_margins(p, xi_bar, zeta_bar).iter().all(|&m| m >= -tol)
}

/// A double root of unit modulus, where the closed-disk test and strict
/// stability disagree.
pub fn boundary_double_root(p: &GltdParams, xi_bar: f64, zeta_bar: f64) -> bool {
    match semi_implicit_roots(p, xi_bar, zeta_bar) {
        Ok((r1, r2)) => (r1 - r2).norm() < 1e-7 && (r1.norm() - 1.0).abs() < 1e-9,
        Err(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TauBound {
    Bounded(f64),
    Unbounded,
    /// The mode grows for every positive step (`xi + zeta > 0`).
    NoStableStep,
}

impl TauBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            TauBound::Bounded(t) => Some(*t),
            _ => None,
        }
    }

    /// Ordering key: smaller is more restrictive.
    fn key(&self) -> f64 {
        match self {
            TauBound::Bounded(t) => *t,
            TauBound::Unbounded => f64::INFINITY,
            TauBound::NoStableStep => 0.0,
        }
    }
}

/// Bound for a single `(xi, zeta)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointBound {
    pub bound: TauBound,
    pub expression: &'static str,
    /// Denominator of the closed-form bound, e.g. `xi - 3 zeta` for backward Euler.
    pub limiting_value: Option<f64>,
}

pub const EXPR_ONE_STEP: &str = "2/((2*beta2-1)*xi-(2*beta2+1)*zeta)";
pub const EXPR_SECOND_ORDER: &str = "(1+alpha0)/((2*beta0+alpha0)*xi-zeta)";
pub const EXPR_SECOND_ORDER_FLAT: &str = "-(1+alpha0)/zeta";
pub const EXPR_BISECTION: &str = "bisection";
pub const EXPR_UNCONDITIONAL: &str = "unconditional";
pub const EXPR_GROWING: &str = "xi+zeta>0";

/// Closed-form step bound for one-step and second-order schemes.
pub fn max_stepsize_closed_form(p: &GltdParams, xi: f64, zeta: f64) -> Result<PointBound> {
    if xi > 0.0 {
        return Err(Error::PreconditionViolated(format!("xi must be non-positive, got {xi}")));
    }
    if !a_stability(p) {
        return Err(Error::PreconditionViolated("scheme is not A-stable".into()));
    }
    let case = classify(p);
    if case == SchemeCase::TwoStepFirstOrder {
        return Err(Error::UnsupportedCase);
    }
    if xi + zeta > 0.0 {
        return Ok(PointBound { bound: TauBound::NoStableStep, expression: EXPR_GROWING, limiting_value: None });
    }
    let unconditional =
        PointBound { bound: TauBound::Unbounded, expression: EXPR_UNCONDITIONAL, limiting_value: None };
    let (a0, b0, b2) = (p.alpha0(), p.beta0(), p.beta2());
    if case == SchemeCase::OneStep {
        let den = (2.0 * b2 - 1.0) * xi - (2.0 * b2 + 1.0) * zeta;
        if den <= 0.0 {
            return Ok(unconditional);
        }
        return Ok(PointBound { bound: TauBound::Bounded(2.0 / den), expression: EXPR_ONE_STEP, limiting_value: Some(den) });
    }
    let g = 2.0 * b0 + a0;
    if g.abs() <= CASE_TOL {
        if zeta >= 0.0 {
            return Ok(unconditional);
        }
        return Ok(PointBound {
            bound: TauBound::Bounded(-(1.0 + a0) / zeta),
            expression: EXPR_SECOND_ORDER_FLAT,
            limiting_value: Some(-zeta),
        });
    }
    let den = g * xi - zeta;
    if den <= 0.0 {
        return Ok(unconditional);
    }
    Ok(PointBound { bound: TauBound::Bounded((1.0 + a0) / den), expression: EXPR_SECOND_ORDER, limiting_value: Some(den) })
}

/// Largest `tau <= TAU_CAP` keeping `(tau xi, tau zeta)` in the stability
/// region, by bisection to relative width `1e-10`.
pub fn numeric_max_stepsize(p: &GltdParams, xi: f64, zeta: f64) -> PointBound {
    let stable = |t: f64| is_stable_point(p, t * xi, t * zeta);
    let mk = |bound| PointBound { bound, expression: EXPR_BISECTION, limiting_value: None };
    if xi + zeta > 0.0 {
        return mk(TauBound::NoStableStep);
    }
    if stable(TAU_CAP) {
        return mk(TauBound::Unbounded);
    }
    let (mut lo, mut hi) = (0.0_f64, TAU_CAP);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * hi {
            break;
        }
    }
    if lo == 0.0 {
        return mk(TauBound::NoStableStep);
    }
    mk(TauBound::Bounded(lo))
}

/// Closed form where available, bisection otherwise.
pub fn max_stepsize(p: &GltdParams, xi: f64, zeta: f64) -> PointBound {
    match max_stepsize_closed_form(p, xi, zeta) {
        Ok(b) => b,
        Err(_) => numeric_max_stepsize(p, xi, zeta),
    }
}

/// How the explicit coefficient `zeta` is built from a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Linearization {
    /// `xi = G L`, `zeta = G (psi + V_lin)` from the model symbols, with `V_lin`
    /// the linear part of `V`.
    Consistent,
    /// As `Consistent` for Allen-Cahn and Cahn-Hilliard. For the crystal model
    /// the wavenumber enters as `q = (2 pi / L)(k^2 + l^2)` and the linear
    /// coefficient is halved: `xi = -q^3`, `zeta = -q (psi + (1 - eps)/2 - 2 q)`.
    /// This is the form behind the tabulated crystal stepsizes.
    #[default]
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeBound {
    pub k: i64,
    pub l: i64,
    pub xi: f64,
    pub zeta: f64,
    pub bound: PointBound,
}

/// `(xi, zeta)` for mode `(k, l)`.
pub fn mode_coefficients(m: &ModelSpec, psi: f64, lin: Linearization, k: i64, l: i64) -> (f64, f64) {
    let g = m.grid.wavenumber_factor();
    let s = (k * k + l * l) as f64;
    match (m.kind, lin) {
        (ModelKind::Pfc, Linearization::Tabulated) => {
            let q = g * s;
            (-q * q * q, -q * (psi + 0.5 * (1.0 - m.epsilon) - 2.0 * q))
        }
        _ => {
            let gs = m.g_symbol.at(k, l);
            (m.gl_symbol.at(k, l), gs * (psi + m.v_linear.at(k, l)))
        }
    }
}

/// Per-mode bounds over the whole retained wavenumber set.
pub fn mode_bounds(m: &ModelSpec, p: &GltdParams, psi: f64, lin: Linearization) -> Vec<ModeBound> {
    let n = m.grid.n();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let k = m.grid.wavenumber(i);
        for j in 0..n {
            let l = m.grid.wavenumber(j);
            let (xi, zeta) = mode_coefficients(m, psi, lin, k, l);
            out.push(ModeBound { k, l, xi, zeta, bound: max_stepsize(p, xi, zeta) });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepsizeReport {
    pub tau_max: TauBound,
    pub argmax_mode: Option<(i64, i64)>,
    pub limiting_expression: String,
    pub limiting_value: Option<f64>,
    pub xi: Option<f64>,
    pub zeta: Option<f64>,
    /// Modes with `xi + zeta > 0`, growing under the exact linear dynamics and
    /// left out of the minimum.
    pub growing_modes: usize,
    pub psi: f64,
    /// The bound is sufficient, not necessary, and assumes `psi_bar = 1`.
    pub note: &'static str,
}

pub const REPORT_NOTE: &str = "sufficient bound; assumes psi_bar = 1 and a frozen nonlinear coefficient";

/// Minimum of the per-mode bounds for a model at a given `psi`.
pub fn estimate_for_model(m: &ModelSpec, p: &GltdParams, psi: f64, lin: Linearization) -> Result<StepsizeReport> {
    if !(psi.is_finite() && psi >= 0.0) {
        return Err(Error::PreconditionViolated(format!("psi must be non-negative, got {psi}")));
    }
    let modes = mode_bounds(m, p, psi, lin);
    Ok(summarize(&modes, psi))
}

pub(crate) fn summarize(modes: &[ModeBound], psi: f64) -> StepsizeReport {
    let mut growing = 0;
    let mut best: Option<&ModeBound> = None;
    for mb in modes {
        if mb.bound.bound == TauBound::NoStableStep {
            growing += 1;
            continue;
        }
        if best.is_none_or(|b| mb.bound.bound.key() < b.bound.bound.key()) {
            best = Some(mb);
        }
    }
    match best {
        Some(b) if b.bound.bound != TauBound::Unbounded => StepsizeReport {
            tau_max: b.bound.bound,
            argmax_mode: Some((b.k, b.l)),
            limiting_expression: b.bound.expression.to_string(),
            limiting_value: b.bound.limiting_value,
            xi: Some(b.xi),
            zeta: Some(b.zeta),
            growing_modes: growing,
            psi,
            note: REPORT_NOTE,
        },
        _ => StepsizeReport {
            tau_max: TauBound::Unbounded,
            argmax_mode: None,
            limiting_expression: EXPR_UNCONDITIONAL.to_string(),
            limiting_value: None,
            xi: None,
            zeta: None,
            growing_modes: growing,
            psi,
            note: REPORT_NOTE,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gltd::Preset;

    fn p(a: f64, b0: f64, b2: f64) -> GltdParams {
        GltdParams::new(a, b0, b2).unwrap()
    }

    #[test]
    fn root_examples() {
        let (r1, r2) = semi_implicit_roots(&p(1.0 / 3.0, 0.0, 2.0 / 3.0), 0.0, 0.0).unwrap();
        let mut m = [r1.re, r2.re];
        m.sort_by(f64::total_cmp);
        assert!((m[0] - 1.0 / 3.0).abs() < 1e-15 && (m[1] - 1.0).abs() < 1e-15);
        let (r1, r2) = semi_implicit_roots(&p(0.0, 0.0, 1.0), -1.0, 0.0).unwrap();
        let mut m = [r1.re, r2.re];
        m.sort_by(f64::total_cmp);
        assert!(m[0].abs() < 1e-15 && (m[1] - 0.5).abs() < 1e-15);
        // x^2 + 3x - 2
        assert!(max_root_modulus(&p(0.0, 0.0, 1.0), 0.0, -2.0).unwrap() > 1.0);
        assert!(!is_stable_point(&p(0.0, 0.0, 1.0), 0.0, -2.0));
    }

    #[test]
    fn point_examples() {
        for preset in Preset::ALL {
            assert!(is_stable_point(&preset.params(), 0.0, 0.0));
        }
        assert!(is_stable_point(&p(0.0, 0.0, 1.0), -1.0, 0.5));
        assert!(!is_stable_point(&p(1.0 / 3.0, -1.0 / 6.0, 0.5), -10.0, -4.0 / 3.0 - 0.01));
        assert!(is_stable_point(&p(1.0 / 3.0, -1.0 / 6.0, 0.5), -10.0, -4.0 / 3.0 + 0.01));
    }

    #[test]
    fn closed_form_examples() {
        let b = max_stepsize_closed_form(&p(0.0, 0.0, 1.0), -1e-300, -1.7).unwrap();
        assert!((b.bound.value().unwrap() - 2.0 / 5.1).abs() < 1e-12);
        let b = max_stepsize_closed_form(&p(1.0 / 3.0, 0.0, 2.0 / 3.0), 0.0, -1.7).unwrap();
        assert!((b.bound.value().unwrap() - 4.0 / 5.1).abs() < 1e-12);
        let b = max_stepsize_closed_form(&p(0.0, 0.0, 1.0), -1.0, 0.0).unwrap();
        assert_eq!(b.bound, TauBound::Unbounded);
        assert_eq!(max_stepsize_closed_form(&p(0.5, 0.0, 1.0), -1.0, 0.0), Err(Error::UnsupportedCase));
        let b = max_stepsize_closed_form(&p(0.0, 0.0, 1.0), -1.0, 2.0).unwrap();
        assert_eq!(b.bound, TauBound::NoStableStep);
    }

    #[test]
    fn numeric_examples() {
        let b = numeric_max_stepsize(&p(1.0 / 3.0, -1.0 / 6.0, 0.5), -0.5, -1.0);
        assert!((b.bound.value().unwrap() - 4.0 / 3.0).abs() < 1e-6);
        for preset in Preset::ALL {
            assert_eq!(numeric_max_stepsize(&preset.params(), -3.0, 0.0).bound, TauBound::Unbounded);
        }
        let b = numeric_max_stepsize(&p(0.0, 0.0, 1.0), 0.0, -1.7);
        assert!((b.bound.value().unwrap() - 2.0 / 5.1).abs() < 1e-8);
    }

    #[test]
    fn first_order_case_uses_bisection() {
        let q = p(0.5, 0.0, 1.0);
        let b = max_stepsize(&q, -1.0, -0.8);
        assert_eq!(b.expression, EXPR_BISECTION);
        let t = b.bound.value().unwrap();
        assert!(is_stable_point(&q, -t, -0.8 * t));
        assert!(!is_stable_point(&q, -1.001 * t, -0.8 * 1.001 * t));
    }

    fn estimate(kind: ModelKind, n: usize, length: f64, eps: f64, psi: f64) -> Vec<StepsizeReport> {
        let g = crate::spectral::SpectralGrid::new(n, length).unwrap();
        let m = crate::models::build_model(kind, eps, &g, 1.0, 1.0).unwrap();
        Preset::ALL
            .iter()
            .map(|pr| estimate_for_model(&m, &pr.params(), psi, Linearization::Tabulated).unwrap())
            .collect()
    }

    fn close(r: &StepsizeReport, want: f64, rel: f64) -> bool {
        (r.tau_max.value().unwrap() / want - 1.0).abs() < rel
    }

    #[test]
    fn allen_cahn_estimates() {
        let r = estimate(ModelKind::AllenCahn, 128, 2.0 * std::f64::consts::PI, 0.1, 2.7);
        for (r, want) in r.iter().zip([2.0 / 5.1, 2.0 / 5.1, 4.0 / 5.1, 4.0 / 5.1]) {
            assert!(close(r, want, 1e-10), "{r:?}");
        }
    }

    #[test]
    fn cahn_hilliard_estimates() {
        let r = estimate(ModelKind::CahnHilliard, 128, 2.0 * std::f64::consts::PI, 0.1, 2.6);
        for (r, want) in r.iter().zip([3.4723e-3, 5.2083e-3, 6.9446e-3, 1.01725e-4]) {
            assert!(close(r, want, 1e-4), "{r:?}");
        }
        let (k, l) = r[0].argmax_mode.unwrap();
        let mut kl = [k.abs(), l.abs()];
        kl.sort();
        assert_eq!(kl, [4, 15]);
        assert!((r[0].limiting_value.unwrap() - 575.99).abs() < 0.01);
    }

    #[test]
    fn crystal_estimates() {
        let r = estimate(ModelKind::Pfc, 400, 400.0, 0.25, 0.5);
        for (r, want) in r.iter().zip([7.2118, 7.3242, 14.4235, 13.9939]) {
            assert!(close(r, want, 1e-4), "{r:?}");
        }
        let (k, l) = r[0].argmax_mode.unwrap();
        let mut kl = [k.abs(), l.abs()];
        kl.sort();
        assert_eq!(kl, [2, 3]);
        assert!((r[0].limiting_value.unwrap() - 0.27732).abs() < 1e-4);
    }

    #[test]
    fn bound_shrinks_with_psi() {
        let g = crate::spectral::SpectralGrid::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let m = crate::models::build_model(ModelKind::CahnHilliard, 0.1, &g, 1.0, 1.0).unwrap();
        let p = Preset::Bdf2.params();
        let mut last = f64::INFINITY;
        for i in 0..20 {
            let r = estimate_for_model(&m, &p, 1.0 + 0.2 * i as f64, Linearization::Tabulated).unwrap();
            let t = r.tau_max.value().unwrap_or(f64::INFINITY);
            assert!(t <= last * (1.0 + 1e-12));
            last = t;
        }
    }
}

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use savgl::gltd::{a_stability, GltdParams, Preset};
use savgl::models::{build_model, ModelKind};
use savgl::spectral::SpectralGrid;
use savgl::stability::{
    estimate_for_model, is_stable_point, max_root_modulus, max_stepsize_closed_form, numeric_max_stepsize, Linearization,
    TauBound, TAU_CAP,
};

/// Random A-stable triple: rejection sampling from a box around the region.
fn random_a_stable(rng: &mut ChaCha8Rng) -> GltdParams {
    loop {
        let a = rng.gen_range(-1.0..1.0);
        let b0 = rng.gen_range(-2.0..2.0);
        let b2 = rng.gen_range(0.0..3.0);
        if let Ok(p) = GltdParams::new(a, b0, b2) {
            if a_stability(&p) {
                return p;
            }
        }
    }
}

#[test]
fn inequalities_agree_with_root_modulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut checked, mut stable, mut skipped) = (0, 0, 0);
    for _ in 0..10_000 {
        let p = random_a_stable(&mut rng);
        let xi = rng.gen_range(-50.0..0.0);
        let zeta = rng.gen_range(-50.0..50.0);
        let Ok(m) = max_root_modulus(&p, xi, zeta) else {
            skipped += 1;
            continue;
        };
        if (m - 1.0).abs() < 1e-8 {
            skipped += 1;
            continue;
        }
        let by_roots = m <= 1.0 + 1e-10;
        assert_eq!(
            is_stable_point(&p, xi, zeta),
            by_roots,
            "p = {p:?}, xi = {xi}, zeta = {zeta}, max modulus {m}"
        );
        checked += 1;
        stable += by_roots as usize;
    }
    assert!(checked > 9_000, "only {checked} samples outside the band ({skipped} skipped)");
    // both outcomes must be exercised
    assert!(stable > 1_000 && checked - stable > 1_000, "{stable} stable of {checked}");
}

fn one_step() -> impl Strategy<Value = GltdParams> {
    (0.5..3.0f64).prop_map(|b2| GltdParams::new(0.0, 0.0, b2).unwrap())
}

/// Second-order triples parametrized by `alpha0` and `g = 2 beta0 + alpha0 >= 0`.
fn second_order() -> impl Strategy<Value = GltdParams> {
    (-0.99..0.99f64, 0.0..3.0f64).prop_map(|(a, g)| GltdParams::new(a, (g - a) / 2.0, (1.0 + g) / 2.0).unwrap())
}

fn decaying_pair() -> impl Strategy<Value = (f64, f64)> {
    (-1e3..0.0f64, 0.0..1.0f64).prop_map(|(xi, s)| {
        // zeta in [-1e3, -xi] keeps xi + zeta <= 0
        let zeta = -1e3 + s * (1e3 - xi);
        (xi, zeta)
    })
}

fn agree(p: &GltdParams, xi: f64, zeta: f64) -> Result<(), TestCaseError> {
    let closed = max_stepsize_closed_form(p, xi, zeta).unwrap().bound;
    let numeric = numeric_max_stepsize(p, xi, zeta).bound;
    match (closed, numeric) {
        (TauBound::Bounded(a), TauBound::Bounded(b)) => {
            prop_assert!((a - b).abs() <= 1e-5 * a, "closed {a} numeric {b}")
        }
        (TauBound::Bounded(a), TauBound::Unbounded) => prop_assert!(a >= TAU_CAP * (1.0 - 1e-5), "closed {a}"),
        (a, b) => prop_assert_eq!(a, b),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn one_step_closed_form_matches_bisection(p in one_step(), (xi, zeta) in decaying_pair()) {
        agree(&p, xi, zeta)?;
    }

    #[test]
    fn second_order_closed_form_matches_bisection(p in second_order(), (xi, zeta) in decaying_pair()) {
        agree(&p, xi, zeta)?;
    }
}

fn rank(b: TauBound) -> f64 {
    match b {
        TauBound::NoStableStep => 0.0,
        TauBound::Bounded(t) => t,
        TauBound::Unbounded => f64::INFINITY,
    }
}

#[test]
fn bound_never_relaxes_as_psi_grows() {
    let cases = [
        (ModelKind::AllenCahn, 64, 2.0 * std::f64::consts::PI, 0.1),
        (ModelKind::CahnHilliard, 64, 2.0 * std::f64::consts::PI, 0.1),
        (ModelKind::Pfc, 128, 400.0, 0.25),
    ];
    for (kind, n, length, eps) in cases {
        let grid = SpectralGrid::new(n, length).unwrap();
        let model = build_model(kind, eps, &grid, 1.0, 0.0).unwrap();
        for preset in Preset::ALL {
            for lin in [Linearization::Tabulated, Linearization::Consistent] {
                let mut last = f64::INFINITY;
                for i in 0..=6 {
                    let psi = 0.5 * i as f64;
                    let t = rank(estimate_for_model(&model, &preset.params(), psi, lin).unwrap().tau_max);
                    assert!(t <= last * (1.0 + 1e-9), "{kind:?} {preset:?} {lin:?} psi {psi}: {t} > {last}");
                    last = t;
                }
            }
        }
    }
}

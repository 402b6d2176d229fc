//! The three-parameter family of linear time discretizations.
//!
//! A member is fixed by `(alpha0, beta0, beta2)`. Applied to `u' = f(u)` it reads
//!
//! ```text
//! u[n+1] - (1+alpha0) u[n] + alpha0 u[n-1] = tau (beta2 f[n+1] + beta1 f[n] + beta0 f[n-1])
//! ```
//!
//! with `beta1 = 1 - alpha0 - beta0 - beta2`. The extrapolation weight
//! `kappa = (beta2 - beta0)/(1 - alpha0)` places the stage `n + kappa` used by
//! the SAV schemes.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance used when testing the second-order condition and the
/// closed inequalities of the stability region.
pub const CASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GltdParams {
    alpha0: f64,
    beta0: f64,
    beta1: f64,
    beta2: f64,
    kappa: f64,
}

impl GltdParams {
    /// Builds the parameter triple and its derived quantities.
    pub fn new(alpha0: f64, beta0: f64, beta2: f64) -> Result<Self> {
        if !(alpha0.is_finite() && beta0.is_finite() && beta2.is_finite()) {
            return Err(Error::DegenerateParams("parameters must be finite".into()));
        }
        if alpha0 == 1.0 {
            return Err(Error::DegenerateParams("alpha0 = 1".into()));
        }
        if beta2 == 0.0 {
            return Err(Error::DegenerateParams("beta2 = 0".into()));
        }
        Ok(GltdParams {
            alpha0,
            beta0,
            beta1: 1.0 - alpha0 - beta0 - beta2,
            beta2,
            kappa: (beta2 - beta0) / (1.0 - alpha0),
        })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }
    pub fn beta0(&self) -> f64 {
        self.beta0
    }
    pub fn beta1(&self) -> f64 {
        self.beta1
    }
    pub fn beta2(&self) -> f64 {
        self.beta2
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn case(&self) -> SchemeCase {
        classify(self)
    }
}

/// Four parameter sets used throughout the examples and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(0, 0, 1)`.
    BackwardEuler,
    /// `(-1/3, 5/12, 3/4)`, second order.
    DampedTwoStep,
    /// `(1/3, 0, 2/3)`.
    Bdf2,
    /// `(1/3, -1/6, 1/2)`, second order, A-stable but not algebraically stable.
    UndampedTwoStep,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::BackwardEuler,
        Preset::DampedTwoStep,
        Preset::Bdf2,
        Preset::UndampedTwoStep,
    ];

    pub fn params(self) -> GltdParams {
        let (a, b0, b2) = match self {
            Preset::BackwardEuler => (0.0, 0.0, 1.0),
            Preset::DampedTwoStep => (-1.0 / 3.0, 5.0 / 12.0, 3.0 / 4.0),
            Preset::Bdf2 => (1.0 / 3.0, 0.0, 2.0 / 3.0),
            Preset::UndampedTwoStep => (1.0 / 3.0, -1.0 / 6.0, 1.0 / 2.0),
        };
        GltdParams::new(a, b0, b2).expect("preset parameters are valid")
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::BackwardEuler => "backward-euler",
            Preset::DampedTwoStep => "damped-two-step",
            Preset::Bdf2 => "bdf2",
            Preset::UndampedTwoStep => "undamped-two-step",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeCase {
    OneStep,
    TwoStepSecondOrder,
    TwoStepFirstOrder,
}

pub fn classify(p: &GltdParams) -> SchemeCase {
    if p.alpha0 == 0.0 && p.beta0 == 0.0 {
        SchemeCase::OneStep
    } else if (p.beta2 - ((1.0 + p.alpha0) / 2.0 + p.beta0)).abs() <= CASE_TOL {
        SchemeCase::TwoStepSecondOrder
    } else {
        SchemeCase::TwoStepFirstOrder
    }
}

/// The four inequalities `-1 <= alpha0 < 1`, `beta2 > 0`, `|beta0| <= beta2`,
/// `1 - alpha0 - 2 beta0 - 2 beta2 <= 0`.
///
/// This region is necessary for A-stability but not sufficient in the
/// first-order two-step case; see [`a_stability`].
pub fn satisfies_parameter_region(p: &GltdParams) -> bool {
    let (a, b0, b2) = (p.alpha0, p.beta0, p.beta2);
    (-1.0 - CASE_TOL..1.0).contains(&a)
        && b2 > 0.0
        && b0.abs() <= b2 + CASE_TOL
        && 1.0 - a - 2.0 * b0 - 2.0 * b2 <= CASE_TOL
}

/// Exact A-stability test.
///
/// On the unit circle `x = e^{i theta}` the boundary locus satisfies
/// `Re[rho(x) conj(sigma(x))] = (c - 1)(2C(c + 1) + B)` with `c = cos theta`,
/// `B = -(1+alpha0)(2 beta0 + 2 beta2 + alpha0 - 1)` and
/// `C = beta0 + alpha0 beta2`. Non-positivity for all `c` in `[-1, 1]` adds the
/// condition `2 beta2 - 2 beta0 - alpha0 - 1 >= 0` to the parameter region.
/// The extra condition is automatic for one-step and second-order schemes.
pub fn a_stability(p: &GltdParams) -> bool {
    satisfies_parameter_region(p) && locus_margin(p) >= -CASE_TOL
}

/// `2 beta2 - 2 beta0 - alpha0 - 1`; negative values put part of the
/// left half-plane outside the stability region.
pub fn locus_margin(p: &GltdParams) -> f64 {
    2.0 * p.beta2 - 2.0 * p.beta0 - p.alpha0 - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlgebraicStability {
    Yes,
    No,
    Undetermined,
}

/// Algebraic stability verdict.
///
/// Methods that fail [`a_stability`] are reported `No`, since algebraic
/// stability implies A-stability. Among A-stable methods only the one-step
/// and second-order cases are decided.
pub fn algebraic_stability(p: &GltdParams) -> AlgebraicStability {
    if !a_stability(p) {
        return AlgebraicStability::No;
    }
    match classify(p) {
        SchemeCase::OneStep => AlgebraicStability::Yes,
        SchemeCase::TwoStepSecondOrder => {
            if 2.0 * p.beta0 + p.alpha0 > CASE_TOL {
                AlgebraicStability::Yes
            } else {
                AlgebraicStability::No
            }
        }
        SchemeCase::TwoStepFirstOrder => AlgebraicStability::Undetermined,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub case: SchemeCase,
    pub satisfies_parameter_region: bool,
    pub a_stable: bool,
    pub algebraically_stable: AlgebraicStability,
}

pub fn verdict(p: &GltdParams) -> StabilityVerdict {
    StabilityVerdict {
        case: classify(p),
        satisfies_parameter_region: satisfies_parameter_region(p),
        a_stable: a_stability(p),
        algebraically_stable: algebraic_stability(p),
    }
}

/// Roots of `a x^2 + b x + c` with `a != 0`, computed without cancellation.
pub(crate) fn quadratic_roots(
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> (Complex64, Complex64) {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids subtracting nearly equal numbers
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q == Complex64::new(0.0, 0.0) {
        // b = 0 and disc = 0, hence c = 0
        return (q, q);
    }
    (q / a, c / q)
}

/// Roots of `rho(x) - xi_bar sigma(x)`, i.e. of
/// `(1 - beta2 xi) x^2 - (1 + alpha0 + beta1 xi) x + (alpha0 - beta0 xi)`.
pub fn characteristic_roots(p: &GltdParams, xi_bar: Complex64) -> Result<(Complex64, Complex64)> {
    let lead = 1.0 - p.beta2 * xi_bar;
    if lead.norm() == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let mid = -(1.0 + p.alpha0 + p.beta1 * xi_bar);
    let tail = p.alpha0 - p.beta0 * xi_bar;
    Ok(quadratic_roots(lead, mid, tail))
}

/// Rectangle of the complex plane sampled on a uniform grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl ScanGrid {
    /// `[-100, 0] x [-100i, 100i]` on a 101 x 101 grid.
    pub fn standard() -> Self {
        ScanGrid {
            re_min: -100.0,
            re_max: 0.0,
            im_min: -100.0,
            im_max: 100.0,
            n_re: 101,
            n_im: 101,
        }
    }

    fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let step = |lo: f64, hi: f64, n: usize, i: usize| {
            if n <= 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        (0..self.n_re).flat_map(move |i| {
            let re = step(self.re_min, self.re_max, self.n_re, i);
            (0..self.n_im).map(move |j| Complex64::new(re, step(self.im_min, self.im_max, self.n_im, j)))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootScan {
    pub max_modulus: f64,
    pub worst_xi_bar: Complex64,
    /// A double root of unit modulus was met somewhere on the grid.
    pub double_root_on_boundary: bool,
}

/// Largest root modulus of the characteristic polynomial over a sample grid.
pub fn verify_a_stability_numerically(p: &GltdParams, grid: &ScanGrid) -> Result<RootScan> {
    let mut scan = RootScan {
        max_modulus: 0.0,
        worst_xi_bar: Complex64::new(0.0, 0.0),
        double_root_on_boundary: false,
    };
    for xi in grid.points() {
        let (r1, r2) = characteristic_roots(p, xi)?;
        let m = r1.norm().max(r2.norm());
        if m > scan.max_modulus {
            scan.max_modulus = m;
            scan.worst_xi_bar = xi;
        }
        if (r1 - r2).norm() < 1e-7 && (m - 1.0).abs() < 1e-9 {
            scan.double_root_on_boundary = true;
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b0: f64, b2: f64) -> GltdParams {
        GltdParams::new(a, b0, b2).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let q = p(1.0 / 3.0, 0.0, 2.0 / 3.0);
        assert!(q.beta1().abs() < 1e-15);
        assert!((q.kappa() - 1.0).abs() < 1e-15);
        let q = p(0.0, 0.0, 1.0);
        assert_eq!((q.beta1(), q.kappa()), (0.0, 1.0));
        let q = p(-1.0 / 3.0, 5.0 / 12.0, 3.0 / 4.0);
        assert!((q.beta1() - 1.0 / 6.0).abs() < 1e-15);
        assert!((q.kappa() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_params_rejected() {
        assert!(matches!(GltdParams::new(1.0, 0.0, 1.0), Err(Error::DegenerateParams(_))));
        assert!(matches!(GltdParams::new(0.5, 0.0, 0.0), Err(Error::DegenerateParams(_))));
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&p(0.0, 0.0, 1.0)), SchemeCase::OneStep);
        assert_eq!(classify(&p(1.0 / 3.0, -1.0 / 6.0, 0.5)), SchemeCase::TwoStepSecondOrder);
        assert_eq!(classify(&p(0.5, 0.0, 1.0)), SchemeCase::TwoStepFirstOrder);
        assert_eq!(classify(&p(1.0 / 3.0, 0.0, 2.0 / 3.0)), SchemeCase::TwoStepSecondOrder);
        assert_eq!(classify(&p(0.0, 0.0, 0.25)), SchemeCase::OneStep);
    }

    #[test]
    fn a_stability_examples() {
        assert!(a_stability(&p(0.0, 0.0, 1.0)));
        assert!(!a_stability(&p(0.0, 0.0, 0.25)));
        assert!(a_stability(&p(1.0 / 3.0, -1.0 / 6.0, 0.5)));
        for preset in Preset::ALL {
            assert!(a_stability(&preset.params()), "{preset:?}");
        }
    }

    #[test]
    fn region_alone_admits_unstable_methods() {
        // inside the four-inequality region yet not A-stable
        let q = p(0.5, 0.0, 2.0 / 3.0);
        assert!(satisfies_parameter_region(&q));
        assert!(!a_stability(&q));
        let (r1, r2) = characteristic_roots(&q, Complex64::new(0.0, 0.36)).unwrap();
        assert!(r1.norm().max(r2.norm()) > 1.005);

        let q = p(0.9035, -0.083, 0.1603);
        assert!(satisfies_parameter_region(&q));
        assert!(!a_stability(&q));
    }

    #[test]
    fn algebraic_stability_examples() {
        assert_eq!(algebraic_stability(&p(1.0 / 3.0, 0.0, 2.0 / 3.0)), AlgebraicStability::Yes);
        assert_eq!(algebraic_stability(&p(1.0 / 3.0, -1.0 / 6.0, 0.5)), AlgebraicStability::No);
        assert_eq!(algebraic_stability(&p(0.5, 0.0, 1.0)), AlgebraicStability::Undetermined);
        assert_eq!(algebraic_stability(&p(0.0, 0.0, 1.0)), AlgebraicStability::Yes);
        assert_eq!(algebraic_stability(&p(0.0, 0.0, 0.25)), AlgebraicStability::No);
        // algebraically unstable yet A-stable
        assert!(a_stability(&p(1.0 / 3.0, -1.0 / 6.0, 0.5)));
    }

    #[test]
    fn characteristic_root_examples() {
        let z = Complex64::new(0.0, 0.0);
        let (r1, r2) = characteristic_roots(&p(0.0, 0.0, 1.0), z).unwrap();
        let mut m = [r1.re, r2.re];
        m.sort_by(f64::total_cmp);
        assert_eq!(m, [0.0, 1.0]);

        let (r1, r2) = characteristic_roots(&p(1.0 / 3.0, 0.0, 2.0 / 3.0), z).unwrap();
        let mut m = [r1.re, r2.re];
        m.sort_by(f64::total_cmp);
        assert!((m[0] - 1.0 / 3.0).abs() < 1e-15 && (m[1] - 1.0).abs() < 1e-15);

        let (r1, r2) = characteristic_roots(&p(0.0, 0.0, 1.0), Complex64::new(-1.0, 0.0)).unwrap();
        let mut m = [r1.re, r2.re];
        m.sort_by(f64::total_cmp);
        assert!(m[0].abs() < 1e-15 && (m[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_leading_coefficient() {
        let q = p(0.0, 0.0, 0.5);
        assert_eq!(
            characteristic_roots(&q, Complex64::new(2.0, 0.0)),
            Err(Error::DegenerateLeadingCoefficient)
        );
    }

    #[test]
    fn consistency_root_at_origin() {
        for preset in Preset::ALL {
            let (r1, r2) = characteristic_roots(&preset.params(), Complex64::new(0.0, 0.0)).unwrap();
            assert_eq!(r1.norm().max(r2.norm()), 1.0);
        }
    }

    #[test]
    fn one_step_scan() {
        let s = verify_a_stability_numerically(&p(0.0, 0.0, 1.0), &ScanGrid::standard()).unwrap();
        assert!(s.max_modulus <= 1.0 + 1e-12);
        let s = verify_a_stability_numerically(&p(0.0, 0.0, 0.25), &ScanGrid::standard()).unwrap();
        assert!(s.max_modulus > 1.0);
    }

    #[test]
    fn simple_roots_on_standard_grid() {
        for preset in Preset::ALL {
            let s = verify_a_stability_numerically(&preset.params(), &ScanGrid::standard()).unwrap();
            assert!(!s.double_root_on_boundary, "{preset:?}");
        }
    }

    #[test]
    fn quadratic_roots_handle_zero() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(quadratic_roots(one, z, z), (z, z));
    }
}

//! Quadratic identities behind the modified energies.
//!
//! For scalars `chi[n+1], chi[n], chi[n-1]` the ansatz
//!
//! ```text
//! D chi * (beta2 chi[n+1] + beta1 chi[n] + beta0 chi[n-1]) / (1 - alpha0)
//!   = a chi[n+1]^2 + b chi[n]^2 + d chi[n+1] chi[n]
//!   - (a chi[n]^2 + b chi[n-1]^2 + d chi[n] chi[n-1])
//!   + (c1 chi[n+1] + c2 chi[n] + c3 chi[n-1])^2
//! ```
//!
//! with `D chi = (chi[n+1] - (1+alpha0) chi[n] + alpha0 chi[n-1])/(1 - alpha0)`
//! gives six equations in `(a, b, d, c1, c2, c3)`. With `s = (1 - alpha0)^2`:
//!
//! ```text
//! a + c1^2          = beta2 / s
//! b - a + c2^2      = -(1+alpha0) beta1 / s
//! c3^2 - b          = alpha0 beta0 / s
//! 2 c1 c2 + d       = (beta1 - (1+alpha0) beta2) / s
//! 2 c2 c3 - d       = (alpha0 beta1 - (1+alpha0) beta0) / s
//! 2 c1 c3           = (beta0 + alpha0 beta2) / s
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gltd::{satisfies_parameter_region, GltdParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCoefficients {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootOrder {
    /// `c1` takes the larger root.
    A,
    /// `c1` takes the smaller root.
    B,
}

/// Selects one solution: the sign of `c2` and which root of
/// `x^2 + c2 x + (beta0 + alpha0 beta2)/(2 s)` becomes `c1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IdentityBranch {
    pub sign: Sign,
    pub order: RootOrder,
}

impl IdentityBranch {
    /// Negative `c2`, larger root for `c1`.
    pub const CANONICAL: IdentityBranch = IdentityBranch { sign: Sign::Minus, order: RootOrder::A };

    pub const ALL: [IdentityBranch; 4] = [
        IdentityBranch { sign: Sign::Minus, order: RootOrder::A },
        IdentityBranch { sign: Sign::Minus, order: RootOrder::B },
        IdentityBranch { sign: Sign::Plus, order: RootOrder::A },
        IdentityBranch { sign: Sign::Plus, order: RootOrder::B },
    ];
}

impl Default for IdentityBranch {
    fn default() -> Self {
        Self::CANONICAL
    }
}

fn scale(p: &GltdParams) -> f64 {
    (1.0 - p.alpha0()).powi(2)
}

fn c2_squared(p: &GltdParams) -> f64 {
    let (a, b0, b2) = (p.alpha0(), p.beta0(), p.beta2());
    (1.0 + a) * (2.0 * b0 + 2.0 * b2 + a - 1.0) / (2.0 * scale(p))
}

/// `c2^2/4 - (beta0 + alpha0 beta2)/(2 s)`; real coefficients exist iff this
/// is non-negative.
pub fn discriminant(p: &GltdParams) -> f64 {
    let (a, b0, b2) = (p.alpha0(), p.beta0(), p.beta2());
    c2_squared(p) / 4.0 - (b0 + a * b2) / (2.0 * scale(p))
}

/// Solves the six-equation system on the requested branch.
pub fn solve_coefficients(p: &GltdParams, branch: IdentityBranch) -> Result<IdentityCoefficients> {
    if !satisfies_parameter_region(p) {
        return Err(Error::PreconditionViolated(
            "parameters lie outside the A-stability parameter region".into(),
        ));
    }
    let s = scale(p);
    let tol = 1e-12 / s;
    let disc = discriminant(p);
    if disc < -tol {
        return Err(Error::DiscriminantNegative(disc));
    }
    // values inside the tolerance band are a double root
    let root = if disc <= tol { 0.0 } else { disc.sqrt() };
    let (a0, b0, b1, b2) = (p.alpha0(), p.beta0(), p.beta1(), p.beta2());

    let mag = c2_squared(p).max(0.0).sqrt();
    let c2 = match branch.sign {
        Sign::Plus => mag,
        Sign::Minus => -mag,
    };
    let (big, small) = (-c2 / 2.0 + root, -c2 / 2.0 - root);
    let (c1, c3) = match branch.order {
        RootOrder::A => (big, small),
        RootOrder::B => (small, big),
    };
    Ok(IdentityCoefficients {
        a: b2 / s - c1 * c1,
        b: c3 * c3 - a0 * b0 / s,
        d: (b1 - (1.0 + a0) * b2) / s - 2.0 * c1 * c2,
        c1,
        c2,
        c3,
    })
}

/// Every branch that solves the system, with duplicates removed.
pub fn admissible_branches(p: &GltdParams) -> Result<Vec<(IdentityBranch, IdentityCoefficients)>> {
    let mut out: Vec<(IdentityBranch, IdentityCoefficients)> = Vec::new();
    for br in IdentityBranch::ALL {
        let co = solve_coefficients(p, br)?;
        let dup = out.iter().any(|(_, o)| {
            [o.a - co.a, o.b - co.b, o.d - co.d, o.c1 - co.c1, o.c2 - co.c2, o.c3 - co.c3]
                .iter()
                .all(|x| x.abs() < 1e-14 * (1.0 + co.a.abs()))
        });
        if !dup {
            out.push((br, co));
        }
    }
    Ok(out)
}

/// Maximum absolute residual over the six equations.
pub fn system_residual(p: &GltdParams, co: &IdentityCoefficients) -> f64 {
    let s = scale(p);
    let (a0, b0, b1, b2) = (p.alpha0(), p.beta0(), p.beta1(), p.beta2());
    let IdentityCoefficients { a, b, d, c1, c2, c3 } = *co;
    [
        a + c1 * c1 - b2 / s,
        b - a + c2 * c2 + (1.0 + a0) * b1 / s,
        c3 * c3 - b - a0 * b0 / s,
        2.0 * c1 * c2 + d - (b1 - (1.0 + a0) * b2) / s,
        2.0 * c2 * c3 - d - (a0 * b1 - (1.0 + a0) * b0) / s,
        2.0 * c1 * c3 - (b0 + a0 * b2) / s,
    ]
    .iter()
    .fold(0.0_f64, |m, r| m.max(r.abs()))
}

/// `|LHS - RHS|` of the identity at `chi = (chi[n+1], chi[n], chi[n-1])`.
pub fn identity_residual(p: &GltdParams, co: &IdentityCoefficients, chi: (f64, f64, f64)) -> f64 {
    let (x2, x1, x0) = chi;
    let a0 = p.alpha0();
    let diff = (x2 - (1.0 + a0) * x1 + a0 * x0) / (1.0 - a0);
    let stage = (p.beta2() * x2 + p.beta1() * x1 + p.beta0() * x0) / (1.0 - a0);
    let lhs = diff * stage;
    let sq = co.c1 * x2 + co.c2 * x1 + co.c3 * x0;
    let rhs = co.a * x2 * x2 + co.b * x1 * x1 + co.d * x2 * x1
        - (co.a * x1 * x1 + co.b * x0 * x0 + co.d * x1 * x0)
        + sq * sq;
    (lhs - rhs).abs()
}

/// Closed-form coefficients of the second-order case, where `c1 = c3 = -c2/2`
/// and the squared term is a multiple of the second difference.
///
/// Returns `(a, b, d, w)` with `w` the weight of `(chi[n+1] - 2 chi[n] + chi[n-1])^2`.
pub fn second_order_closed_form(p: &GltdParams) -> (f64, f64, f64, f64) {
    let a0 = p.alpha0();
    let b0 = p.beta0();
    let s = scale(p);
    let a = (2.0 + a0 - a0 * a0 - 2.0 * (1.0 + a0) * b0 + 4.0 * b0) / (4.0 * s);
    let b = (a0 + a0 * a0 + 2.0 * (1.0 + a0) * b0 - 4.0 * a0 * b0) / (4.0 * s);
    let d = ((a0 - 1.0) * (2.0 * b0 + a0 - 1.0) - (a0 + 1.0)) / (2.0 * s);
    let w = (1.0 + a0) * (2.0 * b0 + a0) / (4.0 * s);
    (a, b, d, w)
}

//! Gradient-flow models `u_t = G (L u + V(u))` with energy
//! `E(u) = (L u, u)/2 + E1(u)` and `V = dE1/du`.
//!
//! | model          | `L`          | `G`  | `E1`                                         |
//! |----------------|--------------|------|----------------------------------------------|
//! | Allen-Cahn     | `-eps^2 Lap` | `-1` | `int (u^2 - 1)^2 / 4`                        |
//! | Cahn-Hilliard  | `-eps^2 Lap` | `Lap`| `int (u^2 - 1)^2 / 4`                        |
//! | crystal (PFC)  | `Lap^2`      | `Lap`| `int u^4/4 + (1 - eps) u^2 / 2 - |grad u|^2` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    apply_symbol, cubic_aliased, cubic_dealiased_coeffs, forward, inverse_unchecked, spectral_inner,
    Field, OperatorSymbol, SpectralField, SpectralGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[serde(alias = "ac")]
    AllenCahn,
    #[serde(alias = "ch")]
    CahnHilliard,
    Pfc,
}

impl ModelKind {
    pub fn short_name(self) -> &'static str {
        match self {
            ModelKind::AllenCahn => "ac",
            ModelKind::CahnHilliard => "ch",
            ModelKind::Pfc => "pfc",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ac" | "allen_cahn" | "allen-cahn" => Ok(ModelKind::AllenCahn),
            "ch" | "cahn_hilliard" | "cahn-hilliard" => Ok(ModelKind::CahnHilliard),
            "pfc" => Ok(ModelKind::Pfc),
            other => Err(Error::Config(format!("unknown model '{other}'"))),
        }
    }
}

/// SAV shift used when none is given: 1 for the diffuse-interface models,
/// `100 L^2` for the crystal model whose `E1` can be negative.
/// One row of the energy history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub step: usize,
    pub time: f64,
    pub original_energy: f64,
    pub modified_energy: f64,
    /// `z[n]` for SAV, `R[n]` for the generalized scheme.
    pub sav_value: f64,
    pub psi: f64,
    pub psi_bar: f64,
    pub mass: f64,
}

impl EnergyRecord {
    pub fn is_finite(&self) -> bool {
        [self.time, self.original_energy, self.modified_energy, self.sav_value, self.psi, self.psi_bar, self.mass]
            .iter()
            .all(|v| v.is_finite())
    }
}

pub fn default_c0(kind: ModelKind, length: f64) -> f64 {
    match kind {
        ModelKind::AllenCahn | ModelKind::CahnHilliard => 1.0,
        ModelKind::Pfc => 100.0 * length * length,
    }
}

#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub epsilon: f64,
    /// SAV shift `C0`.
    pub c0: f64,
    /// Shift added to the full energy by the generalized scheme.
    pub ctilde0: f64,
    /// Evaluate the cubic with zero-padding.
    pub dealias: bool,
    pub grid: SpectralGrid,
    pub l_symbol: OperatorSymbol,
    pub g_symbol: OperatorSymbol,
    /// `G L`.
    pub gl_symbol: OperatorSymbol,
    /// Linear part of `V`: `-1` for AC/CH, `(1 - eps) + 2 Lap` for PFC.
    pub v_linear: OperatorSymbol,
    lap: OperatorSymbol,
}

pub fn build_model(
    kind: ModelKind,
    epsilon: f64,
    grid: &SpectralGrid,
    c0: f64,
    ctilde0: f64,
) -> Result<ModelSpec> {
    let eps_ok = match kind {
        ModelKind::AllenCahn | ModelKind::CahnHilliard => epsilon > 0.0 && epsilon < 1.0,
        ModelKind::Pfc => epsilon > 0.0 && epsilon.is_finite(),
    };
    if !eps_ok {
        return Err(Error::BadEpsilon(epsilon));
    }
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(Error::BadShift(c0));
    }
    if !(ctilde0.is_finite() && ctilde0 >= 0.0) {
        return Err(Error::BadShift(ctilde0));
    }
    let lap = OperatorSymbol::laplacian(grid);
    let (l_symbol, g_symbol, v_linear) = match kind {
        ModelKind::AllenCahn => (
            lap.scaled(-epsilon * epsilon),
            OperatorSymbol::negation(grid),
            OperatorSymbol::negation(grid),
        ),
        ModelKind::CahnHilliard => {
            (lap.scaled(-epsilon * epsilon), lap.clone(), OperatorSymbol::negation(grid))
        }
        ModelKind::Pfc => {
            let mut v = lap.scaled(2.0);
            v.values.mapv_inplace(|x| x + 1.0 - epsilon);
            (OperatorSymbol::biharmonic(grid), lap.clone(), v)
        }
    };
    let gl_symbol = g_symbol.compose(&l_symbol)?;
    Ok(ModelSpec {
        kind,
        epsilon,
        c0,
        ctilde0,
        dealias: true,
        grid: grid.clone(),
        l_symbol,
        g_symbol,
        gl_symbol,
        v_linear,
        lap,
    })
}

impl ModelSpec {
    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    fn check(&self, f: &Field) -> Result<()> {
        if f.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `E1` from values and their coefficients.
    pub(crate) fn e1_pair(&self, f: &Field, fh: &SpectralField) -> f64 {
        let h = self.grid.spacing();
        let h2 = h * h;
        match self.kind {
            ModelKind::AllenCahn | ModelKind::CahnHilliard => {
                h2 * f.values.iter().map(|&u| 0.25 * (u * u - 1.0).powi(2)).sum::<f64>()
            }
            ModelKind::Pfc => {
                let c = 0.5 * (1.0 - self.epsilon);
                let local: f64 = f.values.iter().map(|&u| 0.25 * u.powi(4) + c * u * u).sum();
                h2 * local - self.grad_norm_sq(fh)
            }
        }
    }

    /// `int |grad u|^2` computed spectrally.
    fn grad_norm_sq(&self, fh: &SpectralField) -> f64 {
        let h = self.grid.spacing();
        let n2 = (self.grid.n() * self.grid.n()) as f64;
        let s: f64 = fh.coeffs.iter().zip(self.lap.values.iter()).map(|(z, m)| -m * z.norm_sqr()).sum();
        h * h * s / n2
    }

    /// `(L u, u)`.
    pub(crate) fn l_form(&self, fh: &SpectralField) -> f64 {
        self.l_bilinear(fh, fh)
    }

    /// `(L u, v)`.
    pub(crate) fn l_bilinear(&self, uh: &SpectralField, vh: &SpectralField) -> f64 {
        let h = self.grid.spacing();
        let n2 = (self.grid.n() * self.grid.n()) as f64;
        let s: f64 = uh
            .coeffs
            .iter()
            .zip(vh.coeffs.iter())
            .zip(self.l_symbol.values.iter())
            .map(|((a, b), m)| m * (a * b.conj()).re)
            .sum();
        h * h * s / n2
    }

    /// Coefficients of `V(u)`.
    pub(crate) fn v_hat(&self, f: &Field, fh: &SpectralField) -> SpectralField {
        let mut cube = if self.dealias { cubic_dealiased_coeffs(fh) } else { cubic_aliased(f) };
        let lin = apply_symbol(&self.v_linear, fh).expect("same grid");
        cube.coeffs.zip_mut_with(&lin.coeffs, |c, l| *c += *l);
        cube
    }

    pub(crate) fn original_energy_pair(&self, f: &Field, fh: &SpectralField) -> f64 {
        0.5 * self.l_form(fh) + self.e1_pair(f, fh)
    }
}

/// Nonlinear energy `E1(u)` by collocation quadrature.
pub fn e1(m: &ModelSpec, f: &Field) -> Result<f64> {
    m.check(f)?;
    Ok(m.e1_pair(f, &forward(f)))
}

/// `(L u, u)/2 + E1(u)`.
pub fn original_energy(m: &ModelSpec, f: &Field) -> Result<f64> {
    m.check(f)?;
    Ok(m.original_energy_pair(f, &forward(f)))
}

/// `V(u) = dE1/du`, with the cubic de-aliased when the model asks for it.
pub fn variational_derivative_e1(m: &ModelSpec, f: &Field) -> Result<Field> {
    m.check(f)?;
    Ok(inverse_unchecked(&m.v_hat(f, &forward(f))))
}

/// `(V(u)/sqrt(E1(u) + C0), sqrt(E1(u) + C0))`.
pub fn w_of(m: &ModelSpec, f: &Field) -> Result<(Field, f64)> {
    m.check(f)?;
    let fh = forward(f);
    let radicand = m.e1_pair(f, &fh) + m.c0;
    if radicand <= 0.0 {
        return Err(Error::NonpositiveRadicand(radicand));
    }
    let z = radicand.sqrt();
    let v = inverse_unchecked(&m.v_hat(f, &fh));
    Ok((Field { values: v.values / z, grid: f.grid.clone() }, z))
}

/// `(L u, u)`, non-negative for every model.
pub fn l_quadratic_form(m: &ModelSpec, f: &Field) -> Result<f64> {
    m.check(f)?;
    Ok(m.l_form(&forward(f)))
}

/// `(G mu, mu)`, non-positive for every model.
pub fn g_quadratic_form(m: &ModelSpec, f: &Field) -> Result<f64> {
    m.check(f)?;
    let fh = forward(f);
    let gm = apply_symbol(&m.g_symbol, &fh)?;
    Ok(spectral_inner(&gm, &fh))
}

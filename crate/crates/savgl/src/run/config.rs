use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gltd::GltdParams;
use crate::models::{build_model, default_c0, ModelKind, ModelSpec};
use crate::spectral::SpectralGrid;
use crate::steppers::Family;

/// A simulation described as JSON. Unknown keys are rejected.
///
/// ```json
/// {
///   "model":  {"kind": "allen_cahn", "epsilon": 0.1},
///   "grid":   {"n": 64, "length": 6.283185307179586},
///   "scheme": {"family": "sav", "alpha0": 0.3333333333333333, "beta0": 0.0, "beta2": 0.6666666666666666},
///   "time":   {"tau": 1.0, "steps": 200},
///   "ic":     {"kind": "random", "seed": 7, "amplitude": 0.05},
///   "output": {"directory": "out/ac", "energy_every": 1, "snapshot_every": 50}
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub scheme: SchemeConfig,
    pub time: TimeConfig,
    pub ic: IcConfig,
    #[serde(default = "default_true")]
    pub dealias: bool,
    pub output: OutputConfig,
    /// `psi` fed to the stepsize estimator; `psi` of the initial field if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_estimate: Option<f64>,
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ctilde0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub family: Family,
    pub alpha0: f64,
    pub beta0: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub tau: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IcKind {
    /// `offset + amplitude (2 r - 1)`, `r` uniform on `[0, 1)`.
    Random,
    /// `offset + amplitude sin(2 pi x / L) sin(2 pi y / L)`.
    ProductSine,
    /// Three crystallites in a liquid, laid out for `L = 400` and scaled with `L`.
    Polycrystal,
    /// `offset` everywhere.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcConfig {
    pub kind: IcKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    /// Lattice parameter of the polycrystal seeds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// 0 disables snapshots.
    #[serde(default)]
    pub snapshot_every: usize,
    #[serde(default = "default_one")]
    pub energy_every: usize,
    /// Raw little-endian snapshots with a JSON sidecar instead of text.
    #[serde(default)]
    pub binary: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.grid.n < 8 || !self.grid.n.is_multiple_of(2) {
            return bad(format!("grid.n must be even and at least 8, got {}", self.grid.n));
        }
        if !(self.grid.length.is_finite() && self.grid.length > 0.0) {
            return bad(format!("grid.length must be positive, got {}", self.grid.length));
        }
        if !(self.time.tau.is_finite() && self.time.tau > 0.0) {
            return bad(format!("time.tau must be positive, got {}", self.time.tau));
        }
        if self.time.steps == 0 {
            return bad("time.steps must be at least 1".into());
        }
        if self.output.energy_every == 0 {
            return bad("output.energy_every must be at least 1".into());
        }
        for (name, v) in [("ic.amplitude", self.ic.amplitude), ("ic.offset", self.ic.offset), ("ic.theta", self.ic.theta)] {
            if v.is_some_and(|x| !x.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        if let Some(psi) = self.psi_estimate {
            if !(psi.is_finite() && psi >= 0.0) {
                return bad(format!("psi_estimate must be non-negative, got {psi}"));
            }
        }
        if self.model.kind == ModelKind::Pfc
            && self.scheme.family == Family::Gsav
            && !self.model.ctilde0.is_some_and(|c| c > 0.0)
        {
            return bad("the crystal model with the gsav family needs an explicit positive model.ctilde0".into());
        }
        self.params()?;
        self.build_model()?;
        Ok(())
    }

    pub fn params(&self) -> Result<GltdParams> {
        GltdParams::new(self.scheme.alpha0, self.scheme.beta0, self.scheme.beta2)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn c0(&self) -> (f64, bool) {
        match self.model.c0 {
            Some(c) => (c, false),
            None => (default_c0(self.model.kind, self.grid.length), true),
        }
    }

    pub fn build_model(&self) -> Result<ModelSpec> {
        let grid = SpectralGrid::new(self.grid.n, self.grid.length).map_err(|e| Error::Config(e.to_string()))?;
        let (c0, _) = self.c0();
        let m = build_model(self.model.kind, self.model.epsilon, &grid, c0, self.model.ctilde0.unwrap_or(0.0))
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(m.with_dealias(self.dealias))
    }
}

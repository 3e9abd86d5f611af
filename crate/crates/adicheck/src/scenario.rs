//! Scenario files: the JSON contract for a single validity check.
//!
//! A scenario names a Hamiltonian model, a window `[0, T]`, an error
//! budget `epsilon`, and optionally a grid size, gauge, integrator
//! tolerance, initial state, and requested output series:
//!
//! ```json
//! {
//!   "model": {"kind": "rotating_spin",
//!             "params": {"omega0": 1.0, "theta": 0.1, "omega": 0.995}},
//!   "T": 31.45,
//!   "epsilon": 0.05,
//!   "steps": 2000,
//!   "gauge": "aligned",
//!   "tol": 1e-10,
//!   "initial": {"basis_level": 0},
//!   "outputs": ["g", "drift"]
//! }
//! ```
//!
//! Tabulated models use `{"kind": "tabulated", "path": "samples.json"}`
//! with the path resolved relative to the scenario file. The initial
//! state is given in the instantaneous eigenbasis (a `basis_level` or
//! explicit coefficient amplitudes); when omitted, every basis level is
//! run in turn.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::flow::Gauge;
use crate::matrix::{C64, ComplexMatrix, StateVector};
use crate::model::{load_tabulated, HamiltonianModel};

/// Grid size used when a scenario does not specify one.
pub const DEFAULT_STEPS: usize = 2000;

/// Integrator tolerance used when a scenario does not specify one.
pub const DEFAULT_SCENARIO_TOL: f64 = 1e-10;

/// Series names a scenario may request.
pub const KNOWN_OUTPUTS: [&str; 4] = ["phases", "coupling", "g", "drift"];

/// Model selector: a kind plus either inline parameters or a file path.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModelSpec {
    /// One of `constant`, `rotating_spin`, `landau_zener`,
    /// `linear_interpolation`, `tabulated`.
    pub kind: String,
    /// Inline numeric parameters for the closed-form kinds.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
    /// Sample-file path for `tabulated`, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// Initial eigenbasis coefficients: a single basis level or explicit
/// amplitudes (which must be normalized).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum InitialState {
    /// Start exactly in eigenstate `basis_level`.
    Basis { basis_level: usize },
    /// Explicit coefficients `c_n(0)`; imaginary parts default to zero.
    Amplitudes {
        amplitudes_re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        amplitudes_im: Option<Vec<f64>>,
    },
}

/// A complete, validated check request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    /// Hamiltonian model to analyze.
    pub model: ModelSpec,
    /// Window length; the check runs over `[0, T]`.
    #[serde(rename = "T")]
    pub t_total: f64,
    /// Error budget the verdicts are judged against; must lie in (0, 1).
    pub epsilon: f64,
    /// Grid intervals (at least 100).
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Eigenvector gauge.
    #[serde(default = "default_gauge")]
    pub gauge: Gauge,
    /// Integrator tolerance per unit time.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Initial eigenbasis coefficients; `None` runs every basis level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
    /// Requested series (subset of [`KNOWN_OUTPUTS`]).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
    /// Directory the scenario was loaded from, for resolving relative
    /// tabulated-model paths. Not part of the JSON contract.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_gauge() -> Gauge {
    Gauge::Aligned
}

fn default_tol() -> f64 {
    DEFAULT_SCENARIO_TOL
}

impl Scenario {
    /// Check every scenario-level invariant, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_total.is_finite() && self.t_total > 0.0) {
            return Err(Error::invalid("T", "must be finite and positive"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid("epsilon", "must lie in (0, 1)"));
        }
        if self.steps < crate::flow::MIN_STEPS {
            return Err(Error::invalid(
                "steps",
                "must be at least 100 grid intervals",
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::invalid("tol", "must be finite and positive"));
        }
        for name in &self.outputs {
            if !KNOWN_OUTPUTS.contains(&name.as_str()) {
                return Err(Error::invalid(
                    "outputs",
                    format!(
                        "unknown series {name:?}; known: {}",
                        KNOWN_OUTPUTS.join(", ")
                    ),
                ));
            }
        }
        self.model.check_shape()?;
        if let Some(InitialState::Amplitudes {
            amplitudes_re,
            amplitudes_im,
        }) = &self.initial
        {
            if let Some(im) = amplitudes_im {
                if im.len() != amplitudes_re.len() {
                    return Err(Error::invalid(
                        "initial.amplitudes_im",
                        "must match amplitudes_re in length",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Instantiate the Hamiltonian model, resolving tabulated paths
    /// against the scenario's directory.
    pub fn build_model(&self) -> Result<HamiltonianModel> {
        self.model.build(self.t_total, self.base_dir.as_deref())
    }

    /// The labeled initial coefficient vectors to run: the requested one,
    /// or every basis level when the scenario leaves the choice open.
    pub fn initial_coefficients(&self, dim: usize) -> Result<Vec<(String, Vec<C64>)>> {
        match &self.initial {
            None => Ok((0..dim)
                .map(|n| (format!("basis_{n}"), basis_coeffs(dim, n)))
                .collect()),
            Some(InitialState::Basis { basis_level }) => {
                if *basis_level >= dim {
                    return Err(Error::LevelOutOfRange {
                        level: *basis_level,
                        dim,
                    });
                }
                Ok(vec![(
                    format!("basis_{basis_level}"),
                    basis_coeffs(dim, *basis_level),
                )])
            }
            Some(InitialState::Amplitudes {
                amplitudes_re,
                amplitudes_im,
            }) => {
                if amplitudes_re.len() != dim {
                    return Err(Error::DimensionMismatch {
                        left: amplitudes_re.len(),
                        right: dim,
                        context: "initial amplitudes vs model dimension",
                    });
                }
                let zeros = vec![0.0; dim];
                let im = amplitudes_im.as_deref().unwrap_or(&zeros);
                let c0: Vec<C64> = amplitudes_re
                    .iter()
                    .zip(im)
                    .map(|(re, im)| C64::new(*re, *im))
                    .collect();
                let norm = c0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-8 {
                    return Err(Error::invalid(
                        "initial.amplitudes",
                        format!("must be normalized to 1e-8 (norm = {norm})"),
                    ));
                }
                Ok(vec![("custom".to_string(), c0)])
            }
        }
    }
}

fn basis_coeffs(dim: usize, level: usize) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); dim];
    c[level] = C64::new(1.0, 0.0);
    c
}

/// Turn clean eigenbasis coefficients into the state vector they denote
/// at `t = 0` (where all adiabatic phases vanish):
/// `psi_0 = sum_n c_n v_n(0)`.
pub fn coefficients_to_state(frame0: &crate::matrix::EigenFrame, c0: &[C64]) -> StateVector {
    let dim = frame0.dim();
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (n, c) in c0.iter().enumerate() {
        for (i, amp) in amps.iter_mut().enumerate() {
            *amp += c * frame0.eigenvectors[n].get(i);
        }
    }
    StateVector::new(amps)
}

impl ModelSpec {
    fn check_shape(&self) -> Result<()> {
        match self.kind.as_str() {
            "constant" | "rotating_spin" | "landau_zener" | "linear_interpolation" => {
                if self.path.is_some() {
                    return Err(Error::invalid(
                        "model.path",
                        format!("not used by kind {:?}", self.kind),
                    ));
                }
                Ok(())
            }
            "tabulated" => {
                if self.path.is_none() {
                    return Err(Error::invalid(
                        "model.path",
                        "required for kind \"tabulated\"",
                    ));
                }
                Ok(())
            }
            other => Err(Error::invalid(
                "model.kind",
                format!(
                    "unknown kind {other:?}; known: constant, rotating_spin, \
                     landau_zener, linear_interpolation, tabulated"
                ),
            )),
        }
    }

    fn number(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .and_then(Value::as_f64)
            .ok_or_else(|| {
                Error::invalid(
                    format!("model.params.{name}"),
                    format!("kind {:?} needs numeric parameter {name:?}", self.kind),
                )
            })
    }

    fn matrix(&self, re_name: &str, im_name: &str) -> Result<ComplexMatrix> {
        let re: Vec<Vec<f64>> = self
            .params
            .get(re_name)
            .cloned()
            .map(serde_json::from_value)
            .transpose()
            .map_err(|e| {
                Error::invalid(
                    format!("model.params.{re_name}"),
                    format!("must be a matrix of numbers: {e}"),
                )
            })?
            .ok_or_else(|| {
                Error::invalid(
                    format!("model.params.{re_name}"),
                    format!("kind {:?} needs matrix parameter {re_name:?}", self.kind),
                )
            })?;
        let im: Option<Vec<Vec<f64>>> = self
            .params
            .get(im_name)
            .cloned()
            .map(serde_json::from_value)
            .transpose()
            .map_err(|e| {
                Error::invalid(
                    format!("model.params.{im_name}"),
                    format!("must be a matrix of numbers: {e}"),
                )
            })?;
        ComplexMatrix::from_re_im(&re, im.as_deref())
    }

    /// Build the model, resolving a relative tabulated path against
    /// `base_dir` when given.
    pub fn build(&self, t_total: f64, base_dir: Option<&Path>) -> Result<HamiltonianModel> {
        self.check_shape()?;
        match self.kind.as_str() {
            "constant" => HamiltonianModel::constant(self.matrix("h_re", "h_im")?),
            "rotating_spin" => HamiltonianModel::rotating_spin(
                self.number("omega0")?,
                self.number("theta")?,
                self.number("omega")?,
            ),
            "landau_zener" => HamiltonianModel::landau_zener(
                self.number("v")?,
                self.number("delta")?,
                self.number("t0")?,
            ),
            "linear_interpolation" => HamiltonianModel::linear_interpolation(
                self.matrix("h0_re", "h0_im")?,
                self.matrix("h1_re", "h1_im")?,
                t_total,
            ),
            "tabulated" => {
                let raw = Path::new(self.path.as_deref().unwrap());
                let resolved = match base_dir {
                    Some(dir) if raw.is_relative() => dir.join(raw),
                    _ => raw.to_path_buf(),
                };
                load_tabulated(&resolved)
            }
            _ => unreachable!("check_shape covers all kinds"),
        }
    }
}

/// Load and validate a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut scenario: Scenario = serde_json::from_str(&text).map_err(|e| Error::ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scenario.base_dir = path.parent().map(Path::to_path_buf);
    scenario.validate()?;
    Ok(scenario)
}

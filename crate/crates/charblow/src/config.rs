//! The JSON data model of experiments and sweeps.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use charblow_core::poly::{PolyField, Polynomial};
use charblow_core::profile::{make_barlin, make_bump, make_witness, BSpline};
use charblow_core::solver::SolveOptions;
use charblow_core::system::PolySystem;
use charblow_core::{Profile, SystemSpec, WitnessSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::presets;

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub system: SystemRef,
    pub data: ProfileConfig,
    pub grid: GridConfig,
    pub t_end: TEnd,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_blowup_factor")]
    pub blowup_factor: f64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub seed: u64,
    /// Relative level, in units of `sup|u₀|`, above which a node counts as
    /// part of the numerical support.
    #[serde(default = "default_support_threshold")]
    pub support_threshold: f64,
    /// Scalar runs only: integrate the exact characteristic from `z₀` to
    /// this time.
    #[serde(default)]
    pub characteristic_horizon: Option<f64>,
}

fn default_cfl() -> f64 {
    SolveOptions::default().cfl
}

fn default_blowup_factor() -> f64 {
    SolveOptions::default().blowup_factor
}

fn default_support_threshold() -> f64 {
    1e-4
}

/// A built-in system by name, or an inline description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SystemRef {
    Named(String),
    Inline(SystemConfig),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemConfig {
    Burgers {
        k: f64,
        delta1: f64,
    },
    PSystem {
        sigma: f64,
        delta1: f64,
    },
    /// Entries of `A` row by row and components of `g`, each a list of
    /// `[coefficient, [exponents...]]` monomials.
    Polynomial {
        n: usize,
        delta1: f64,
        a: Vec<Vec<(f64, Vec<u32>)>>,
        g: Vec<Vec<(f64, Vec<u32>)>>,
    },
}

impl SystemRef {
    pub fn resolve(&self) -> Result<SystemConfig> {
        match self {
            SystemRef::Inline(c) => Ok(c.clone()),
            SystemRef::Named(name) => match name.as_str() {
                "burgers" => Ok(SystemConfig::Burgers { k: 1.0, delta1: 0.5 }),
                "p-system" => Ok(SystemConfig::PSystem { sigma: 0.5, delta1: 0.5 }),
                other => Err(config_err(format!("unknown system '{other}'"))),
            },
        }
    }

    pub fn build(&self) -> Result<SystemSpec> {
        self.resolve()?.build()
    }
}

impl SystemConfig {
    pub fn build(&self) -> Result<SystemSpec> {
        match self {
            SystemConfig::Burgers { k, delta1 } => SystemSpec::burgers(*k, *delta1).map_err(config_err),
            SystemConfig::PSystem { sigma, delta1 } => SystemSpec::p_system(*sigma, *delta1).map_err(config_err),
            SystemConfig::Polynomial { n, delta1, a, g } => {
                let poly = |terms: &Vec<(f64, Vec<u32>)>| Polynomial::from_terms(terms.iter().cloned());
                let model = PolySystem::new(*n, a.iter().map(poly).collect(), g.iter().map(poly).collect())
                    .map_err(config_err)?;
                SystemSpec::new("polynomial", Arc::new(model), *delta1).map_err(config_err)
            }
        }
    }

    /// Source strength `k` when the system is the scalar law
    /// `u_t + u u_x = k u²`.
    pub fn scalar_k(&self) -> Option<f64> {
        match self {
            SystemConfig::Burgers { k, .. } => Some(*k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub center: f64,
    pub halfwidth: f64,
    pub amplitude: f64,
}

impl BumpConfig {
    fn build(&self) -> Result<Profile> {
        make_bump(self.center, self.halfwidth, self.amplitude).map_err(config_err)
    }
}

/// The polynomial field `U` of Barlin-type data.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldConfig {
    Identity,
    Linear { direction: Vec<f64> },
    /// `ξ r_i(0)`
    RightEigenvector { family: usize },
    /// Per component, coefficients of `ξ⁰, ξ¹, ...`.
    Polynomial { coeffs: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileConfig {
    Zero {
        lo: f64,
        hi: f64,
    },
    /// `amplitude · φ((x - center)/halfwidth)`, along `direction` for
    /// systems.
    Bump {
        center: f64,
        halfwidth: f64,
        amplitude: f64,
        #[serde(default)]
        direction: Option<Vec<f64>>,
    },
    /// `U(ε α(x/ε^ℓ))`
    Barlin {
        field: FieldConfig,
        bump: BumpConfig,
        eps: f64,
        ell: f64,
    },
    /// The mollified sharp-constant witness.
    Witness {
        alpha0: f64,
        beta0: f64,
        delta: f64,
        slope_m: f64,
        #[serde(default)]
        x0: Option<f64>,
        mollifier_eps: f64,
    },
    /// A cubic B-spline from its knot vector and coefficients.
    Spline {
        knots: Vec<f64>,
        coeffs: Vec<f64>,
    },
}

impl ProfileConfig {
    pub fn build(&self, sys: &SystemSpec) -> Result<Profile> {
        let n = sys.n();
        let p = match self {
            ProfileConfig::Zero { lo, hi } => Profile::zero(n, *lo, *hi).map_err(config_err)?,
            ProfileConfig::Bump { center, halfwidth, amplitude, direction } => {
                let b = make_bump(*center, *halfwidth, *amplitude).map_err(config_err)?;
                match direction {
                    None if n == 1 => b,
                    None => return Err(config_err("bump data for a system needs a direction")),
                    Some(d) => along(&b, d, n)?,
                }
            }
            ProfileConfig::Barlin { field, bump, eps, ell } => {
                let field = match field {
                    FieldConfig::Identity => PolyField::identity(),
                    FieldConfig::Linear { direction } => PolyField::linear(direction),
                    FieldConfig::RightEigenvector { family } => {
                        let anchor = sys.anchor().map_err(config_err)?;
                        let r = anchor
                            .right
                            .get(*family)
                            .ok_or_else(|| config_err("eigenvector family out of range"))?;
                        PolyField::linear(r)
                    }
                    FieldConfig::Polynomial { coeffs } => PolyField { coeffs: coeffs.clone() },
                };
                make_barlin(field, bump.build()?, *eps, *ell).map_err(config_err)?
            }
            ProfileConfig::Witness { alpha0, beta0, delta, slope_m, x0, mollifier_eps } => {
                let mut spec = WitnessSpec::sharp(*alpha0, *beta0, *delta, *slope_m, *mollifier_eps);
                if let Some(x0) = x0 {
                    spec.x0 = *x0;
                }
                make_witness(spec).and_then(|w| w.mollified()).map_err(config_err)?
            }
            ProfileConfig::Spline { knots, coeffs } => {
                Profile::spline(BSpline::new(knots.clone(), coeffs.clone()).map_err(config_err)?)
            }
        };
        if p.dim() != n {
            return Err(config_err(format!("data has {} components, the system {n}", p.dim())));
        }
        Ok(p)
    }
}

fn along(b: &Profile, d: &[f64], n: usize) -> Result<Profile> {
    if d.len() != n {
        return Err(config_err("direction length does not match the system"));
    }
    Profile::stack(d.iter().map(|c| b.scaled(*c)).collect()).map_err(config_err)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub m: usize,
    /// Cells of padding beyond the finite-speed envelope on each side.
    #[serde(default = "default_pad")]
    pub pad_cells: f64,
}

fn default_pad() -> f64 {
    16.0
}

/// Final time: absolute, or relative to a natural time scale of the data.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TEnd {
    Absolute(f64),
    Relative(RelativeTEnd),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RelativeTEnd {
    /// `c / (max_i γ_iii(0) · W₀⁺)`, multiples of the Riccati time scale.
    SlopeUnits(f64),
    /// Multiples of the scalar life span `1/(W₀ - a)` from `z₀`.
    LifespanFactor(f64),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "SolverConfig::default_hyperviscosity")]
    pub hyperviscosity: f64,
    #[serde(default = "SolverConfig::default_resolution_cells")]
    pub resolution_cells: f64,
    #[serde(default = "SolverConfig::default_stride")]
    pub snapshot_stride: usize,
}

impl SolverConfig {
    fn default_hyperviscosity() -> f64 {
        SolveOptions::default().hyperviscosity
    }
    fn default_resolution_cells() -> f64 {
        SolveOptions::default().resolution_cells
    }
    fn default_stride() -> usize {
        SolveOptions::default().snapshot_stride
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            hyperviscosity: Self::default_hyperviscosity(),
            resolution_cells: Self::default_resolution_cells(),
            snapshot_stride: Self::default_stride(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "yes")]
    pub monitor: bool,
    #[serde(default = "yes")]
    pub snapshots: bool,
    /// At most this many evenly spaced snapshots are written.
    #[serde(default = "default_max_snapshots")]
    pub max_snapshots: usize,
}

fn yes() -> bool {
    true
}

fn default_max_snapshots() -> usize {
    50
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { monitor: true, snapshots: true, max_snapshots: default_max_snapshots() }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            cfl: self.cfl,
            blowup_factor: self.blowup_factor,
            hyperviscosity: self.solver.hyperviscosity,
            snapshot_stride: self.solver.snapshot_stride,
            resolution_cells: self.solver.resolution_cells,
            ..SolveOptions::default()
        }
    }
}

/// A parameter sweep over an experiment template.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub name: String,
    /// Preset the template starts from.
    #[serde(default)]
    pub base: Option<String>,
    /// Inline template, used when `base` is absent.
    #[serde(default)]
    pub template: Option<Value>,
    /// Dotted paths set on the template before sweeping.
    #[serde(default)]
    pub set: BTreeMap<String, Value>,
    /// Dotted path of the swept parameter, e.g. `data.eps`.
    pub parameter: String,
    pub values: Vec<f64>,
    #[serde(default)]
    pub mode: SweepMode,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Initial-data statistics and predictions only.
    #[default]
    Stats,
    /// Full solver runs.
    Run,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Column name of the swept parameter: the last path segment.
    pub fn column(&self) -> &str {
        self.parameter.rsplit('.').next().unwrap_or(&self.parameter)
    }

    pub fn template(&self) -> Result<Value> {
        let mut v = match (&self.base, &self.template) {
            (Some(name), _) => serde_json::from_str(presets::experiment_json(name)?)?,
            (None, Some(t)) => t.clone(),
            (None, None) => return Err(config_err("sweep needs a base preset or an inline template")),
        };
        for (path, value) in &self.set {
            set_path(&mut v, path, value.clone())?;
        }
        Ok(v)
    }

    /// The experiment for one swept value.
    pub fn instantiate(&self, template: &Value, value: f64) -> Result<ExperimentConfig> {
        let mut v = template.clone();
        set_path(&mut v, &self.parameter, Value::from(value))?;
        Ok(serde_json::from_value(v)?)
    }
}

/// Sets `path` (dotted) inside `root`, requiring every parent to exist.
pub fn set_path(root: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut cur = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (q, part) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| config_err(format!("'{path}' does not address an object field")))?;
        if q + 1 == parts.len() {
            obj.insert((*part).to_string(), value);
            return Ok(());
        }
        cur = obj
            .get_mut(*part)
            .ok_or_else(|| config_err(format!("'{path}': no field '{part}'")))?;
    }
    unreachable!("split yields at least one part")
}

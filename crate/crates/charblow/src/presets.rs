//! Configurations shipped with the crate.

use crate::config::{ExperimentConfig, SweepConfig};
use crate::error::{CliError, Result};

const EXPERIMENTS: &[(&str, &str)] = &[
    ("zero", include_str!("../presets/zero.json")),
    ("theorem2-case1", include_str!("../presets/theorem2-case1.json")),
    ("theorem2-case2", include_str!("../presets/theorem2-case2.json")),
    ("theorem1-psystem", include_str!("../presets/theorem1-psystem.json")),
    ("theorem1-burgers", include_str!("../presets/theorem1-burgers.json")),
];

const SWEEPS: &[(&str, &str)] = &[
    ("sweep-theta-eps", include_str!("../presets/sweep-theta-eps.json")),
    ("sweep-scalar-s0", include_str!("../presets/sweep-scalar-s0.json")),
    ("sweep-psystem-eps", include_str!("../presets/sweep-psystem-eps.json")),
];

/// Experiments driven by structurally assumed smallness of the data rather
/// than the scalar classifier.
pub const SYSTEM_PRESETS: &[&str] = &["theorem1-psystem", "theorem1-burgers"];

pub fn experiment_names() -> impl Iterator<Item = &'static str> {
    EXPERIMENTS.iter().map(|(n, _)| *n)
}

pub fn sweep_names() -> impl Iterator<Item = &'static str> {
    SWEEPS.iter().map(|(n, _)| *n)
}

pub fn experiment_json(name: &str) -> Result<&'static str> {
    EXPERIMENTS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, j)| *j)
        .ok_or_else(|| CliError::Config(format!("unknown experiment preset '{name}'")))
}

pub fn experiment(name: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::from_json(experiment_json(name)?)
}

pub fn sweep(name: &str) -> Result<SweepConfig> {
    let json = SWEEPS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, j)| *j)
        .ok_or_else(|| CliError::Config(format!("unknown sweep preset '{name}'")))?;
    SweepConfig::from_json(json)
}

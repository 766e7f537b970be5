//! The witness table: raw and mollified quotients against `s₀ - 3δ` and
//! `s₀ - 4δ`.

use charblow_core::profile::make_witness;
use charblow_core::WitnessSpec;
use serde::Serialize;

use crate::error::{CliError, Result};

/// `δ/s₀` values of the default table.
pub const DEFAULT_FRACTIONS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct WitnessRow {
    pub delta_over_s0: f64,
    pub delta: f64,
    pub mollifier_eps: f64,
    pub x0: f64,
    pub cubic_a: f64,
    pub cubic_b: f64,
    /// `|f(x0)| / |f'(x0)|` of the raw function.
    pub raw_ratio: f64,
    pub s0_minus_3delta: f64,
    /// `|u₀(z₀)| / |u₀'(z₀)|` of the mollified profile.
    pub mollified_ratio: f64,
    pub s0_minus_4delta: f64,
}

impl WitnessRow {
    pub fn header() -> Vec<String> {
        [
            "delta_over_s0",
            "delta",
            "mollifier_eps",
            "x0",
            "A",
            "B",
            "raw_ratio",
            "s0_minus_3delta",
            "mollified_ratio",
            "s0_minus_4delta",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    pub fn fields(&self) -> Vec<String> {
        [
            self.delta_over_s0,
            self.delta,
            self.mollifier_eps,
            self.x0,
            self.cubic_a,
            self.cubic_b,
            self.raw_ratio,
            self.s0_minus_3delta,
            self.mollified_ratio,
            self.s0_minus_4delta,
        ]
        .iter()
        .map(|v| v.to_string())
        .collect()
    }
}

/// One row per `δ/s₀`, with the sharp junction `x0 = β₀ - 2δ` and a
/// mollifier radius of `eps_over_delta · δ`.
pub fn witness_table(
    alpha0: f64,
    beta0: f64,
    slope_m: f64,
    eps_over_delta: f64,
    fractions: &[f64],
) -> Result<Vec<WitnessRow>> {
    let s0 = beta0 - alpha0;
    let err = |e: charblow_core::Error| CliError::Config(e.to_string());
    fractions
        .iter()
        .map(|&frac| {
            let delta = frac * s0;
            let spec = WitnessSpec::sharp(alpha0, beta0, delta, slope_m, eps_over_delta * delta);
            let w = make_witness(spec).map_err(err)?;
            let raw_ratio = w.raw.eval(spec.x0, 0).abs() / w.raw.eval(spec.x0, 1).abs();
            let moll = w.mollified().map_err(err)?;
            let z = moll
                .argmin_derivative()
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let mollified_ratio = moll.scalar(z.x, 0).abs() / z.value.abs();
            Ok(WitnessRow {
                delta_over_s0: frac,
                delta,
                mollifier_eps: spec.mollifier_eps,
                x0: spec.x0,
                cubic_a: w.cubic_a,
                cubic_b: w.cubic_b,
                raw_ratio,
                s0_minus_3delta: s0 - 3.0 * delta,
                mollified_ratio,
                s0_minus_4delta: s0 - 4.0 * delta,
            })
        })
        .collect()
}

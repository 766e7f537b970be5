//! Parameter sweeps, one row per value, computed in parallel.
//!
//! `CHARBLOW_THREADS` caps the worker count. Rows keep the order of
//! `values` regardless of scheduling.

use charblow_core::exact::classify_theorem2;
use charblow_core::numeric::loglog_slope;
use charblow_core::theta::{inequality_suite, predict_blowup_window, stats};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{SweepConfig, SweepMode};
use crate::error::{CliError, Result};
use crate::experiment::{run, Experiment};
use crate::output::fmt_opt;

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub s0: Option<f64>,
    pub theta0: Option<f64>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    #[serde(rename = "W0")]
    pub w0: Option<f64>,
    #[serde(rename = "W0plus")]
    pub w0plus: Option<f64>,
    #[serde(rename = "T_pred")]
    pub t_pred: Option<f64>,
    pub verdict: Option<String>,
    #[serde(rename = "T_max")]
    pub t_max: Option<f64>,
    pub bound_w: Option<f64>,
    pub bound_theta2: Option<f64>,
    pub status: Option<String>,
    pub t_blow: Option<f64>,
    pub t0_obs: Option<f64>,
    pub s_obs: Option<f64>,
    pub margin: Option<f64>,
    pub error: Option<String>,
}

const COLUMNS: [&str; 17] = [
    "s0", "theta0", "theta1", "theta2", "W0", "W0plus", "T_pred", "verdict", "T_max", "bound_w", "bound_theta2",
    "status", "t_blow", "t0_obs", "s_obs", "margin", "error",
];

impl SweepRow {
    fn fields(&self) -> Vec<String> {
        let s = |v: &Option<String>| v.clone().unwrap_or_default();
        vec![
            self.value.to_string(),
            fmt_opt(self.s0),
            fmt_opt(self.theta0),
            fmt_opt(self.theta1),
            fmt_opt(self.theta2),
            fmt_opt(self.w0),
            fmt_opt(self.w0plus),
            fmt_opt(self.t_pred),
            s(&self.verdict),
            fmt_opt(self.t_max),
            fmt_opt(self.bound_w),
            fmt_opt(self.bound_theta2),
            s(&self.status),
            fmt_opt(self.t_blow),
            fmt_opt(self.t0_obs),
            fmt_opt(self.s_obs),
            fmt_opt(self.margin),
            s(&self.error),
        ]
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepOutcome {
    pub name: String,
    pub parameter: String,
    pub mode: SweepMode,
    pub rows: Vec<SweepRow>,
    /// Slope of `ln θ₀` against `ln value` over rows with a `θ₀`.
    pub theta0_slope: Option<f64>,
}

impl SweepOutcome {
    pub fn header(&self, column: &str) -> Vec<String> {
        std::iter::once(column.to_string()).chain(COLUMNS.iter().map(|c| c.to_string())).collect()
    }

    pub fn table(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(SweepRow::fields).collect()
    }
}

fn fill(row: &mut SweepRow, exp: &Experiment, mode: SweepMode) -> Result<()> {
    let num = |e: charblow_core::Error| CliError::Numerical(e.to_string());
    let sys = &exp.system;
    if !exp.data.is_zero() {
        let s = stats(sys, &exp.data).map_err(num)?;
        let ineq = inequality_suite(&s);
        row.s0 = Some(s.s0);
        row.theta0 = Some(s.theta0);
        row.theta1 = Some(s.theta1);
        row.theta2 = Some(s.theta2);
        row.w0 = Some(s.w0);
        row.w0plus = Some(s.w0plus);
        row.bound_w = Some(ineq.bound_w);
        row.bound_theta2 = Some(ineq.bound_theta2);
        row.t_pred = predict_blowup_window(sys, &s).ok();
        if let Some(k) = exp.system_config.scalar_k() {
            let r = classify_theorem2(k, &exp.data).map_err(num)?;
            row.verdict = Some(r.verdict.name().to_string());
            row.t_max = r.verdict.t_max();
        }
    }
    if mode == SweepMode::Run {
        let out = run(exp)?;
        let r = &out.report;
        row.status = Some(r.status.clone());
        row.t_blow = r.t_blow_measured;
        row.t0_obs = r.strips.as_ref().and_then(|s| s.t0_obs);
        row.s_obs = r.strips.as_ref().map(|s| s.s_obs);
        row.margin = r.margin;
        if let Some(e) = &r.error {
            return Err(CliError::Numerical(e.clone()));
        }
    }
    Ok(())
}

fn evaluate(cfg: &SweepConfig, template: &serde_json::Value, value: f64) -> SweepRow {
    let mut row = SweepRow { value, ..SweepRow::default() };
    let result = cfg
        .instantiate(template, value)
        .and_then(Experiment::new)
        .and_then(|exp| fill(&mut row, &exp, cfg.mode));
    if let Err(e) = result {
        log::warn!("{} = {value}: {e}", cfg.parameter);
        row.error = Some(e.to_string());
    }
    row
}

fn thread_count() -> Option<usize> {
    std::env::var("CHARBLOW_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs every value of the sweep. A failing value yields a row with its
/// error instead of aborting the sweep.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let template = cfg.template()?;
    let work = || -> Vec<SweepRow> { cfg.values.par_iter().map(|&v| evaluate(cfg, &template, v)).collect() };
    let rows = match thread_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(work),
        None => work(),
    };
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        rows.iter().filter_map(|r| r.theta0.map(|t| (r.value, t))).filter(|&(x, t)| x > 0.0 && t > 0.0).unzip();
    let theta0_slope = if xs.len() >= 2 { loglog_slope(&xs, &ys) } else { None };
    Ok(SweepOutcome {
        name: cfg.name.clone(),
        parameter: cfg.parameter.clone(),
        mode: cfg.mode,
        rows,
        theta0_slope,
    })
}

//! One experiment: statistics, solve, strips, monitors and the blow-up
//! report.

use charblow_core::diagnostics::{blowup_report, monitor, MonitorSeries};
use charblow_core::exact::{classify_theorem2, integrate_scalar_characteristic, ScalarReport, Verdict};
use charblow_core::ode::{OdeOptions, OdeStop};
use charblow_core::solver::{envelope, solve, strips, trace_characteristic, Grid, Trajectory};
use charblow_core::theta::{inequality_suite, predict_blowup_window, stats, InitialDataStats};
use charblow_core::{Profile, SystemSpec};
use serde::Serialize;

use crate::config::{ExperimentConfig, RelativeTEnd, SystemConfig, TEnd};
use crate::error::{CliError, Result};

/// Version of the `report.json` layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Allowed excess of the numerical support over the finite-speed envelope.
pub const SUPPORT_MARGIN_CELLS: f64 = 10.0;

/// Allowed early-time growth `max|w| / W₀` before the strips separate.
pub const EARLY_GROWTH_BOUND: f64 = 2.2;

/// Values beyond this count as blown up in the exact characteristic check.
const CHARACTERISTIC_CAP: f64 = 1e12;

/// A configuration with its system and data built.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub system_config: SystemConfig,
    pub system: SystemSpec,
    pub data: Profile,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let system_config = config.system.resolve()?;
        let system = system_config.build()?;
        let data = config.data.build(&system)?;
        Ok(Self { config, system_config, system, data })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SystemBlock {
    pub name: String,
    pub n: usize,
    pub delta1: f64,
    pub strictly_hyperbolic: bool,
    pub genuinely_nonlinear: bool,
    pub source_vanishes: bool,
    pub min_gap: f64,
    pub gamma_iii: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GridBlock {
    pub x_lo: f64,
    pub x_hi: f64,
    pub m: usize,
    pub dx: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct StatsBlock {
    pub s0: f64,
    pub sup_u: f64,
    pub sup_du: f64,
    pub sup_ddu: f64,
    #[serde(rename = "W0")]
    pub w0: f64,
    #[serde(rename = "W0plus")]
    pub w0plus: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub ordered: bool,
    pub small_theta: bool,
    pub bound_w: f64,
    pub bound_theta2: f64,
    pub sw1: f64,
    pub sw2: f64,
    pub sw3: f64,
}

impl StatsBlock {
    fn new(s: &InitialDataStats) -> Self {
        let r = inequality_suite(s);
        Self {
            s0: s.s0,
            sup_u: s.sup_u,
            sup_du: s.sup_du,
            sup_ddu: s.sup_ddu,
            w0: s.w0,
            w0plus: s.w0plus,
            theta0: s.theta0,
            theta1: s.theta1,
            theta2: s.theta2,
            ordered: r.ordered,
            small_theta: r.small_theta,
            bound_w: r.bound_w,
            bound_theta2: r.bound_theta2,
            sw1: r.sw1,
            sw2: r.sw2,
            sw3: r.sw3,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CharacteristicBlock {
    pub family: usize,
    pub z0: f64,
    pub t_blow_char: Option<f64>,
    pub calw_t0: Option<f64>,
    pub calw_t0_ok: bool,
    pub monotone_after_t0: bool,
    pub riccati_lower_ok: Option<bool>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct StripBlock {
    /// `null` when the strips never separate within the run.
    pub t0_obs: Option<f64>,
    pub s_obs: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MonitorBlock {
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub nondecreasing: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FiniteSpeedBlock {
    /// Absolute level defining the numerical support.
    pub threshold: f64,
    pub max_excess_cells: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EarlyTimeBlock {
    /// `max_{t ≤ t0_obs} max_{i,x}|w_i| / W₀`
    pub max_ratio: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScalarBlock {
    pub k: f64,
    pub s0: f64,
    pub z0: f64,
    #[serde(rename = "W0")]
    pub w0: f64,
    pub a: f64,
    pub u0z: f64,
    pub verdict: String,
    #[serde(rename = "T_max")]
    pub t_max: Option<f64>,
    pub t_u: Option<f64>,
    /// Extrapolated from `w` along the PDE characteristic from `z₀`.
    pub t_blow_on_z0: Option<f64>,
    pub horizon: Option<f64>,
    /// The exact characteristic ODE stayed finite up to `horizon`.
    pub bounded_on_z0: Option<bool>,
    pub max_abs_w_on_z0: Option<f64>,
    pub max_abs_u_on_z0: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub schema: u32,
    pub name: String,
    pub seed: u64,
    pub system: SystemBlock,
    pub grid: Option<GridBlock>,
    pub t_end: Option<f64>,
    pub cfl: f64,
    pub stats: Option<StatsBlock>,
    #[serde(rename = "T_pred")]
    pub t_pred: Option<f64>,
    pub verdict: Option<String>,
    pub status: String,
    pub trigger: Option<String>,
    pub steps: usize,
    pub t_final: f64,
    pub t_blow_measured: Option<f64>,
    pub margin: Option<f64>,
    pub strips: Option<StripBlock>,
    pub characteristic: Option<CharacteristicBlock>,
    pub monitor: Option<MonitorBlock>,
    pub finite_speed: Option<FiniteSpeedBlock>,
    pub early_time: Option<EarlyTimeBlock>,
    pub max_u: f64,
    pub left_ball: bool,
    pub scalar: Option<ScalarBlock>,
    pub error: Option<String>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub trajectory: Option<Trajectory>,
    pub monitor: Option<MonitorSeries>,
    /// `(t, 𝒲(t))` along the distinguished characteristic.
    pub calw: Option<(Vec<f64>, Vec<f64>)>,
}

impl Outcome {
    /// True when a numerical step failed.
    pub fn failed(&self) -> bool {
        self.report.error.is_some()
    }
}

fn system_block(sys: &SystemSpec) -> SystemBlock {
    let a = sys.check_assumptions();
    let gamma_iii = sys
        .gamma_tensor(&vec![0.0; sys.n()])
        .map(|g| (0..sys.n()).map(|i| g[(i, i, i)]).collect())
        .unwrap_or_default();
    SystemBlock {
        name: sys.name().to_string(),
        n: sys.n(),
        delta1: sys.delta1(),
        strictly_hyperbolic: a.strictly_hyperbolic,
        genuinely_nonlinear: a.genuinely_nonlinear,
        source_vanishes: a.source_vanishes,
        min_gap: a.min_gap,
        gamma_iii,
    }
}

fn scalar_block(k: f64, r: &ScalarReport) -> ScalarBlock {
    let (t_max, t_u) = match r.verdict {
        Verdict::Blowup { t_max } => (Some(t_max), None),
        Verdict::UBlowup { t_max, t_u } => (Some(t_max), Some(t_u)),
        Verdict::GlobalOnZ0 => (None, None),
    };
    ScalarBlock {
        k,
        s0: r.s0,
        z0: r.z0,
        w0: r.w0,
        a: r.a,
        u0z: r.u0z,
        verdict: r.verdict.name().to_string(),
        t_max,
        t_u,
        t_blow_on_z0: None,
        horizon: None,
        bounded_on_z0: None,
        max_abs_w_on_z0: None,
        max_abs_u_on_z0: None,
    }
}

fn finite(t: f64) -> Option<f64> {
    t.is_finite().then_some(t)
}

/// Runs the experiment. Configuration problems are errors; numerical
/// failures are recorded in the report and flagged by [`Outcome::failed`].
pub fn run(exp: &Experiment) -> Result<Outcome> {
    let cfg = &exp.config;
    let sys = &exp.system;
    let u0 = &exp.data;
    let mut report = RunReport {
        schema: REPORT_SCHEMA,
        name: cfg.name.clone(),
        seed: cfg.seed,
        system: system_block(sys),
        grid: None,
        t_end: None,
        cfl: cfg.cfl,
        stats: None,
        t_pred: None,
        verdict: None,
        status: "UNSTABLE".to_string(),
        trigger: None,
        steps: 0,
        t_final: 0.0,
        t_blow_measured: None,
        margin: None,
        strips: None,
        characteristic: None,
        monitor: None,
        finite_speed: None,
        early_time: None,
        max_u: 0.0,
        left_ball: false,
        scalar: None,
        error: None,
    };
    let mut outcome = Outcome { report: report.clone(), trajectory: None, monitor: None, calw: None };
    let fail = |mut report: RunReport, e: &dyn std::fmt::Display| {
        report.error = Some(e.to_string());
        report
    };

    let st = if u0.is_zero() {
        None
    } else {
        match stats(sys, u0) {
            Ok(s) => Some(s),
            Err(e) => {
                outcome.report = fail(report, &e);
                return Ok(outcome);
            }
        }
    };
    report.stats = st.as_ref().map(StatsBlock::new);
    report.t_pred = st.as_ref().and_then(|s| predict_blowup_window(sys, s).ok());

    let mut scalar = None;
    if let (Some(k), Some(_)) = (exp.system_config.scalar_k(), &st) {
        match classify_theorem2(k, u0) {
            Ok(r) => {
                let mut b = scalar_block(k, &r);
                if let Some(h) = cfg.characteristic_horizon {
                    let sol =
                        integrate_scalar_characteristic(&r.characteristic(), r.z0, h, CHARACTERISTIC_CAP, OdeOptions::default());
                    b.horizon = Some(h);
                    b.bounded_on_z0 = Some(sol.stop == OdeStop::Completed);
                    b.max_abs_u_on_z0 = Some(sol.y.iter().map(|y| y[1].abs()).fold(0.0, f64::max));
                    b.max_abs_w_on_z0 = Some(sol.y.iter().map(|y| y[2].abs()).fold(0.0, f64::max));
                }
                report.verdict = Some(b.verdict.clone());
                scalar = Some((r, b));
            }
            Err(e) => {
                outcome.report = fail(report, &e);
                return Ok(outcome);
            }
        }
    }

    let t_end = match cfg.t_end {
        TEnd::Absolute(t) => t,
        TEnd::Relative(RelativeTEnd::SlopeUnits(c)) => {
            let s = st
                .as_ref()
                .filter(|s| s.w0plus > 0.0)
                .ok_or_else(|| CliError::Config("slope_units needs data with W0+ > 0".into()))?;
            let gmax = report.system.gamma_iii.iter().cloned().fold(0.0, f64::max);
            if !(gmax > 0.0) {
                return Err(CliError::Config("slope_units needs gamma_iii(0) > 0".into()));
            }
            c / (gmax * s.w0plus)
        }
        TEnd::Relative(RelativeTEnd::LifespanFactor(f)) => {
            let t_max = scalar
                .as_ref()
                .and_then(|(_, b)| b.t_max)
                .ok_or_else(|| CliError::Config("lifespan_factor needs scalar data with a finite T_max".into()))?;
            f * t_max
        }
    };
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::Config("t_end must be positive and finite".into()));
    }
    report.t_end = Some(t_end);

    let (lo, hi) = u0.support();
    let grid = Grid::for_envelope(sys, lo, hi, t_end, cfg.grid.m, cfg.grid.pad_cells)
        .map_err(|e| CliError::Config(e.to_string()))?;
    report.grid = Some(GridBlock { x_lo: grid.x_lo, x_hi: grid.x_hi, m: grid.m, dx: grid.dx() });

    let traj = match solve(sys, u0, grid, t_end, cfg.solve_options()) {
        Ok(t) => t,
        Err(e) => {
            outcome.report = fail(report, &e);
            return Ok(outcome);
        }
    };
    report.status = traj.status.name().to_string();
    report.trigger = traj.trigger.map(|t| format!("{t:?}").to_lowercase());
    report.steps = traj.steps;
    report.t_final = traj.t_final();
    report.max_u = traj.max_u;
    report.left_ball = traj.left_ball;
    report.t_blow_measured = if traj.status == charblow_core::solver::Status::BlowupDetected {
        traj.t_blow
    } else {
        None
    };
    report.margin = match (report.t_blow_measured, report.t_pred) {
        (Some(t), Some(p)) => Some(t / p),
        _ => None,
    };

    let result = (|| -> charblow_core::Result<()> {
        let sup_u = u0.sup_norms().sup_f;
        let threshold = cfg.support_threshold * sup_u;
        let dx = grid.dx();
        let mut excess = 0.0f64;
        for (q, s) in traj.snapshots.iter().enumerate() {
            if let Some((a, b)) = traj.support_at(q, threshold) {
                let (elo, ehi) = envelope(sys, lo, hi, s.t)?;
                excess = excess.max((elo - a) / dx).max((b - ehi) / dx);
            }
        }
        report.finite_speed =
            Some(FiniteSpeedBlock { threshold, max_excess_cells: excess, ok: excess <= SUPPORT_MARGIN_CELLS });

        let strip = strips(&traj, sys, lo, hi)?;
        report.strips = Some(StripBlock { t0_obs: finite(strip.t0_obs), s_obs: strip.s_obs });
        let mon = monitor(&traj, sys, &strip)?;
        if let Some(k) = mon.len().checked_sub(1) {
            report.monitor = Some(MonitorBlock {
                w: mon.w[k],
                v: mon.v[k],
                u: mon.u[k],
                g: mon.g[k],
                s: mon.s[k],
                j: mon.j[k],
                nondecreasing: mon.nondecreasing(),
            });
        }

        if let Some(s) = st.as_ref().filter(|s| s.w0 > 0.0) {
            let t0 = strip.t0_obs;
            let early = traj
                .history
                .iter()
                .filter(|(t, _)| *t <= t0)
                .map(|(_, w)| *w)
                .fold(0.0, f64::max);
            let max_ratio = early / s.w0;
            report.early_time = Some(EarlyTimeBlock { max_ratio, ok: max_ratio <= EARLY_GROWTH_BOUND });
        }

        if let Some(s) = st.as_ref().filter(|s| s.w0plus > 0.0) {
            let r = blowup_report(&traj, sys, u0, s, &strip, Some(&mon))?;
            report.characteristic = Some(CharacteristicBlock {
                family: r.family,
                z0: r.z0,
                t_blow_char: r.t_blow_char,
                calw_t0: r.calw_t0,
                calw_t0_ok: r.calw_t0_ok,
                monotone_after_t0: r.monotone_after_t0,
                riccati_lower_ok: r.riccati_lower_ok,
            });
            outcome.calw = Some((r.calw_times, r.calw));
        }

        if let Some((r, b)) = scalar.as_mut() {
            if traj.status == charblow_core::solver::Status::BlowupDetected {
                b.t_blow_on_z0 = trace_characteristic(&traj, sys, 0, r.z0)?.t_blow();
            }
        }
        outcome.monitor = Some(mon);
        Ok(())
    })();
    report.scalar = scalar.map(|(_, b)| b);
    if let Err(e) = result {
        report.error = Some(e.to_string());
    }
    if traj.status == charblow_core::solver::Status::Unstable && report.error.is_none() {
        report.error = Some("non-finite values in the solution".into());
    }
    outcome.report = report;
    outcome.trajectory = Some(traj);
    Ok(outcome)
}

//! Running-supremum monitors of a computed solution and the blow-up report
//! comparing the predicted window with the measured blow-up.

use alloc::vec;
use alloc::vec::Vec;

use crate::exact::{riccati_eval, riccati_tmax, RiccatiParams};
use crate::linalg::{dot, norm};
use crate::math::Real;
use crate::numeric::sup_on;
use crate::profile::{Profile, SUP_SCAN_POINTS};
use crate::solver::{trace_characteristic, CharPath, Status, Strips, Trajectory};
use crate::system::SystemSpec;
use crate::theta::{predict_blowup_window, sup_w, w_initial, InitialDataStats};
use crate::{Error, Result};

/// Cells excluded on each side of a strip boundary when sampling `V`.
pub const STRIP_BUFFER_CELLS: f64 = 2.0;

/// Relative tolerance of the Riccati lower bound on `𝒲`.
pub const COMPARISON_TOL: f64 = 0.1;

/// Relative slack allowed when testing `𝒲` for monotone growth.
pub const MONOTONE_RTOL: f64 = 1e-9;

/// The six monitor functions at every snapshot time, each a running
/// supremum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonitorSeries {
    pub times: Vec<f64>,
    /// `sup_{τ ≤ t} max_{i,x} |w_i|`
    pub w: Vec<f64>,
    /// As `w`, restricted to points outside the strip of the same family.
    pub v: Vec<f64>,
    /// `sup |u|`
    pub u: Vec<f64>,
    /// `sup |g_ik(u)|`
    pub g: Vec<f64>,
    /// Largest strip width.
    pub s: Vec<f64>,
    /// `max_i ∫_{α_i}^{β_i} |w_i| dx`
    pub j: Vec<f64>,
}

impl MonitorSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// True when every series is nondecreasing.
    pub fn nondecreasing(&self) -> bool {
        [&self.w, &self.v, &self.u, &self.g, &self.s, &self.j]
            .iter()
            .all(|s| s.windows(2).all(|p| p[1] >= p[0]))
    }

    /// Running value of `series` at the last snapshot not after `t`.
    pub fn at(&self, series: &[f64], t: f64) -> Option<f64> {
        let k = self.times.partition_point(|&s| s <= t);
        (k > 0).then(|| series[k - 1])
    }
}

/// Trapezoid of `|w|` on `[a, b]` from nodal values, with the partial end
/// cells integrated against the linear interpolant.
fn integrate_abs(xs: impl Fn(usize) -> f64, ws: &[f64], dx: f64, a: f64, b: f64) -> f64 {
    let m = ws.len() - 1;
    if !(b > a) {
        return 0.0;
    }
    let x0 = xs(0);
    let cell = |x: f64| (((x - x0) / dx).floor().max(0.0) as usize).min(m - 1);
    let lin = |i: usize, x: f64| {
        let th = (x - xs(i)) / dx;
        ws[i] + th * (ws[i + 1] - ws[i])
    };
    let (ia, ib) = (cell(a), cell(b));
    if ia == ib {
        return 0.5 * (lin(ia, a) + lin(ia, b)) * (b - a);
    }
    let mut acc = 0.5 * (lin(ia, a) + ws[ia + 1]) * (xs(ia + 1) - a);
    for i in ia + 1..ib {
        acc += 0.5 * (ws[i] + ws[i + 1]) * dx;
    }
    acc + 0.5 * (ws[ib] + lin(ib, b)) * (b - xs(ib))
}

/// Computes the monitor series at every snapshot covered by the strips.
pub fn monitor(traj: &Trajectory, sys: &SystemSpec, strips: &Strips) -> Result<MonitorSeries> {
    let n = traj.n;
    let grid = traj.grid;
    let dx = grid.dx();
    let buffer = STRIP_BUFFER_CELLS * dx;
    let mut out = MonitorSeries::default();
    let (mut w_run, mut v_run, mut u_run, mut g_run, mut s_run, mut j_run) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut w_field = vec![vec![0.0; grid.nodes()]; n];
    for snap in &traj.snapshots {
        let t = snap.t;
        let intervals: Option<Vec<(f64, f64)>> = (0..n).map(|i| strips.interval(i, t)).collect();
        let Some(intervals) = intervals else { break };
        let mut w_now = 0.0f64;
        let mut v_now = 0.0f64;
        let mut u_now = 0.0f64;
        let mut g_now = 0.0f64;
        for q in 0..grid.nodes() {
            let ui = &snap.u[q * n..(q + 1) * n];
            let uxi = &snap.ux[q * n..(q + 1) * n];
            u_now = u_now.max(norm(ui));
            let x = grid.x(q);
            if ui.iter().all(|v| *v == 0.0) && uxi.iter().all(|v| *v == 0.0) {
                for f in w_field.iter_mut() {
                    f[q] = 0.0;
                }
                continue;
            }
            let frame = sys.eigenframe(ui)?;
            for i in 0..n {
                let w = dot(&frame.left[i], uxi);
                w_field[i][q] = w.abs();
                w_now = w_now.max(w.abs());
                let (a, b) = intervals[i];
                if x < a - buffer || x > b + buffer {
                    v_now = v_now.max(w.abs());
                }
            }
            if ui.iter().any(|v| *v != 0.0) {
                let coef = sys.coefficients_in(&frame);
                g_now = g_now.max(coef.gcoef.max_abs());
            }
        }
        let mut j_now = 0.0f64;
        let mut s_now = 0.0f64;
        for (i, &(a, b)) in intervals.iter().enumerate() {
            s_now = s_now.max(b - a);
            j_now = j_now.max(integrate_abs(|q| grid.x(q), &w_field[i], dx, a, b));
        }
        w_run = w_run.max(w_now);
        v_run = v_run.max(v_now);
        u_run = u_run.max(u_now);
        g_run = g_run.max(g_now);
        s_run = s_run.max(s_now);
        j_run = j_run.max(j_now);
        out.times.push(t);
        out.w.push(w_run);
        out.v.push(v_run);
        out.u.push(u_run);
        out.g.push(g_run);
        out.s.push(s_run);
        out.j.push(j_run);
    }
    Ok(out)
}

/// The family `i` and foot `z₀` where `w_i(0, ·)` attains `W₀⁺`.
///
/// Ties within [`TIE_RTOL`] go to the smallest family, then the smallest
/// `z`.
pub fn distinguished_characteristic(sys: &SystemSpec, u0: &Profile) -> Result<(usize, f64)> {
    let mut per_family = Vec::with_capacity(sys.n());
    for i in 0..sys.n() {
        per_family.push(sup_w(sys, u0, i, 1.0)?);
    }
    let best = per_family.iter().map(|p| p.0).fold(0.0, f64::max);
    if !(best > 0.0) {
        return Err(Error::NotApplicable("W0+ must be positive".into()));
    }
    let thr = best * (1.0 - TIE_RTOL);
    let (lo, hi) = u0.support();
    for (i, &(v, _)) in per_family.iter().enumerate() {
        if v < thr {
            continue;
        }
        // the leftmost sample that reaches the tie band, refined locally
        let h = (hi - lo) / SUP_SCAN_POINTS as f64;
        let mut first = None;
        for q in 0..=SUP_SCAN_POINTS {
            let x = lo + q as f64 * h;
            if w_initial(sys, u0, i, x)? >= best * (1.0 - 1e-3) {
                first = Some(x);
                break;
            }
        }
        let x = first.unwrap_or(per_family[i].1);
        let local = sup_on(
            |y| w_initial(sys, u0, i, y).unwrap_or(f64::NEG_INFINITY),
            (x - h).max(lo),
            (x + 2.0 * h).min(hi),
            64,
        );
        let z = if local.value >= thr { local.x } else { per_family[i].1 };
        return Ok((i, z));
    }
    unreachable!("the maximum family is always within the tie band")
}

/// Relative tolerance for ties in [`distinguished_characteristic`].
pub const TIE_RTOL: f64 = 1e-9;

/// Prediction against measurement for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupReport {
    pub status: Status,
    /// `max_i 17 / (γ_iii(0) W₀⁺)`
    pub t_pred: f64,
    /// Extrapolated from `max_{i,x}|w_i|`.
    pub t_blow_measured: Option<f64>,
    /// Extrapolated from `𝒲` along the distinguished characteristic.
    pub t_blow_char: Option<f64>,
    pub t0_obs: f64,
    pub s_obs: f64,
    pub family: usize,
    pub z0: f64,
    pub w0plus: f64,
    pub calw_times: Vec<f64>,
    /// `𝒲(t) = w_i(t, X_i(t, z₀))`
    pub calw: Vec<f64>,
    /// `𝒲(t₀)`, interpolated.
    pub calw_t0: Option<f64>,
    /// `𝒲(t₀) ≥ W₀⁺ / 2`
    pub calw_t0_ok: bool,
    /// `𝒲` nondecreasing from `t₀` on.
    pub monotone_after_t0: bool,
    /// `𝒲 ≥ (1 - tol) y` for the comparison Riccati solution
    /// `α = γ_iii(0)/4`, `β = 2 G`, `y₀ = W₀⁺/2` started at `t₀`.
    pub riccati_lower_ok: Option<bool>,
    /// `t_blow_measured / t_pred`
    pub margin: Option<f64>,
    /// `(m, t_blow)` pairs, filled by refinement studies.
    pub grid_convergence: Vec<(usize, f64)>,
}

pub fn blowup_report(
    traj: &Trajectory,
    sys: &SystemSpec,
    u0: &Profile,
    stats: &InitialDataStats,
    strips: &Strips,
    monitor: Option<&MonitorSeries>,
) -> Result<BlowupReport> {
    let t_pred = predict_blowup_window(sys, stats)?;
    let (family, z0) = distinguished_characteristic(sys, u0)?;
    let path: CharPath = trace_characteristic(traj, sys, family, z0)?;
    let t_blow_measured = if traj.status == Status::BlowupDetected { traj.t_blow } else { None };
    let t_blow_char = if traj.status == Status::BlowupDetected { path.t_blow() } else { None };
    let t0 = strips.t0_obs;
    let calw_t0 = if t0.is_finite() { path.w_at(t0) } else { None };
    let calw_t0_ok = calw_t0.is_some_and(|w| w >= 0.5 * stats.w0plus);
    let after: Vec<f64> = path
        .times
        .iter()
        .zip(&path.w_along)
        .filter(|(t, _)| **t >= t0)
        .map(|(_, w)| *w)
        .collect();
    let monotone_after_t0 = t0.is_finite()
        && !after.is_empty()
        && after.windows(2).all(|p| p[1] >= p[0] * (1.0 - MONOTONE_RTOL));

    let riccati_lower_ok = match (monitor, t0.is_finite()) {
        (Some(mon), true) => {
            let gamma = sys.gamma_tensor(&vec![0.0; sys.n()])?;
            let g_meas = mon.g.last().copied().unwrap_or(0.0);
            let p = RiccatiParams::new(0.25 * gamma[(family, family, family)], 2.0 * g_meas, 0.5 * stats.w0plus)?;
            let life = riccati_tmax(&p);
            let mut ok = true;
            for (t, w) in path.times.iter().zip(&path.w_along) {
                if *t < t0 || *t - t0 >= life {
                    continue;
                }
                if let Ok(y) = riccati_eval(&p, *t - t0) {
                    if *w < (1.0 - COMPARISON_TOL) * y {
                        ok = false;
                    }
                }
            }
            Some(ok)
        }
        _ => None,
    };

    Ok(BlowupReport {
        status: traj.status,
        t_pred,
        t_blow_measured,
        t_blow_char,
        t0_obs: t0,
        s_obs: strips.s_obs,
        family,
        z0,
        w0plus: stats.w0plus,
        calw_times: path.times.clone(),
        calw: path.w_along.clone(),
        calw_t0,
        calw_t0_ok,
        monotone_after_t0,
        riccati_lower_ok,
        margin: t_blow_measured.map(|t| t / t_pred),
        grid_convergence: Vec::new(),
    })
}

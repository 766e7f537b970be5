//! Method-of-lines integration of `u_t + A(u) u_x = g(u)` up to gradient
//! blow-up, and characteristic tracing on the computed field.
//!
//! Space: fourth-order central differences plus a small fourth-difference
//! damping term. Time: classical RK4 with `dt = CFL dx / max|λ|`. The grid
//! edges (two nodes on each side) are held at zero; data must stay inside
//! the finite-speed envelope.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, norm, real_eigen};
use crate::math::Real;
use crate::numeric::linear_fit;
use crate::profile::Profile;
use crate::system::SystemSpec;
use crate::{Error, Result};

/// Smallest admissible cell count.
pub const MIN_CELLS: usize = 64;

/// Required distance, in cells, between the envelope and the grid edges.
pub const ENVELOPE_MARGIN_CELLS: f64 = 10.0;

/// Number of trailing `1/max|w|` samples used by the blow-up extrapolation
/// when fewer fall inside the extrapolation band.
pub const EXTRAPOLATION_SAMPLES: usize = 20;

/// Uniform grid with nodes `x_i = x_lo + i dx`, `i = 0..=m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub m: usize,
}

impl Grid {
    pub fn new(x_lo: f64, x_hi: f64, m: usize) -> Result<Self> {
        if m < MIN_CELLS {
            return Err(Error::invalid("grid needs at least 64 cells"));
        }
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::invalid("grid needs finite x_lo < x_hi"));
        }
        Ok(Self { x_lo, x_hi, m })
    }

    /// Smallest grid with `m` cells containing the finite-speed envelope of
    /// `[lo, hi]` up to `t_end` with `pad_cells` of margin on each side.
    pub fn for_envelope(sys: &SystemSpec, lo: f64, hi: f64, t_end: f64, m: usize, pad_cells: f64) -> Result<Self> {
        let (elo, ehi) = envelope(sys, lo, hi, t_end)?;
        let (elo, ehi) = (elo.min(lo), ehi.max(hi));
        let width = ehi - elo;
        let mf = m as f64;
        if 2.0 * pad_cells >= mf {
            return Err(Error::invalid("padding exceeds the grid"));
        }
        let total = width / (1.0 - 2.0 * pad_cells / mf);
        let pad = 0.5 * (total - width);
        Self::new(elo - pad, ehi + pad, m)
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.m as f64
    }

    pub fn nodes(&self) -> usize {
        self.m + 1
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.m {
            self.x_hi
        } else {
            self.x_lo + i as f64 * self.dx()
        }
    }

    /// Shifted copy.
    pub fn shifted(&self, c: f64) -> Self {
        Self { x_lo: self.x_lo + c, x_hi: self.x_hi + c, m: self.m }
    }
}

/// `[lo + λ₁(0) t, hi + λ_n(0) t]`
pub fn envelope(sys: &SystemSpec, lo: f64, hi: f64, t: f64) -> Result<(f64, f64)> {
    let f = sys.anchor()?;
    let n = f.n();
    Ok((lo + f.lambdas[0] * t, hi + f.lambdas[n - 1] * t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub cfl: f64,
    /// Gradient trigger relative to the initial `max|w|`.
    pub blowup_factor: f64,
    /// Fourth-difference damping `σ` in `-σ (max|λ|/dx) δ⁴u`; zero disables it.
    pub hyperviscosity: f64,
    /// Keep every `snapshot_stride`-th step.
    pub snapshot_stride: usize,
    /// The step-size collapse trigger.
    pub dt_min: f64,
    /// Resolution trigger: stop once `max|w|` exceeds
    /// `osc(u) / (resolution_cells · dx)`, i.e. the steepest front is
    /// about this many cells wide. Zero disables it.
    pub resolution_cells: f64,
    pub max_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            blowup_factor: 1e3,
            hyperviscosity: 1e-3,
            snapshot_stride: 4,
            dt_min: 1e-12,
            resolution_cells: 16.0,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Completed,
    BlowupDetected,
    Unstable,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Running => "RUNNING",
            Status::Completed => "COMPLETED",
            Status::BlowupDetected => "BLOWUP-DETECTED",
            Status::Unstable => "UNSTABLE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    /// `max|w|` passed `blowup_factor · W₀`.
    Gradient,
    /// `max|w|` passed the resolution limit of the grid.
    Resolution,
    StepCollapse,
}

/// State and derivative on the grid at one time, node-major (`u[i*n + c]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub ux: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub n: usize,
    pub snapshots: Vec<Snapshot>,
    /// `(t, max_{i,x}|w_i|)` after every step, starting at `t = 0`.
    pub history: Vec<(f64, f64)>,
    pub status: Status,
    pub trigger: Option<Trigger>,
    /// Initial `max_{i,x}|w_i|` on the grid.
    pub w0_grid: f64,
    /// Extrapolated zero of `1/max|w|`.
    pub t_blow: Option<f64>,
    /// Largest `|u|` seen.
    pub max_u: f64,
    /// `|u|` exceeded `δ₁` at some step.
    pub left_ball: bool,
    pub steps: usize,
    pub options: SolveOptions,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn t_final(&self) -> f64 {
        self.snapshots.last().map_or(0.0, |s| s.t)
    }

    /// Outermost nodes where `|u|` exceeds `threshold`, as positions.
    pub fn support_at(&self, snap: usize, threshold: f64) -> Option<(f64, f64)> {
        let s = &self.snapshots[snap];
        let n = self.n;
        let big = |i: usize| norm(&s.u[i * n..(i + 1) * n]) > threshold;
        let first = (0..self.grid.nodes()).find(|&i| big(i))?;
        let last = (0..self.grid.nodes()).rev().find(|&i| big(i))?;
        Some((self.grid.x(first), self.grid.x(last)))
    }

    /// State and `u_x` at `(t, x)` by cubic Lagrange interpolation in time
    /// over four snapshots and cubic Hermite interpolation in space.
    pub fn sample(&self, t: f64, x: f64, u: &mut [f64], ux: &mut [f64]) {
        let k = self.snapshots.len();
        u.fill(0.0);
        ux.fill(0.0);
        if k == 1 {
            hermite(&self.grid, self.n, &self.snapshots[0], x, u, ux);
            return;
        }
        let j = self.snapshots.partition_point(|s| s.t <= t).clamp(1, k - 1) - 1;
        let start = j.saturating_sub(1).min(k.saturating_sub(4));
        let end = (start + 4).min(k);
        let ts: Vec<f64> = (start..end).map(|q| self.snapshots[q].t).collect();
        let mut su = vec![0.0; self.n];
        let mut sux = vec![0.0; self.n];
        for (a, q) in (start..end).enumerate() {
            let mut wgt = 1.0;
            for (b, &tb) in ts.iter().enumerate() {
                if b != a {
                    wgt *= (t - tb) / (ts[a] - tb);
                }
            }
            hermite(&self.grid, self.n, &self.snapshots[q], x, &mut su, &mut sux);
            for c in 0..self.n {
                u[c] += wgt * su[c];
                ux[c] += wgt * sux[c];
            }
        }
    }
}

/// Cubic Hermite interpolation of `(u, u_x)` between grid nodes.
fn hermite(grid: &Grid, n: usize, s: &Snapshot, x: f64, u: &mut [f64], ux: &mut [f64]) {
    let dx = grid.dx();
    let pos = (x - grid.x_lo) / dx;
    if !(pos >= 0.0 && pos <= grid.m as f64) {
        u.fill(0.0);
        ux.fill(0.0);
        return;
    }
    let i = (pos.floor() as usize).min(grid.m - 1);
    let th = pos - i as f64;
    let h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
    let h10 = th * (1.0 - th) * (1.0 - th);
    let h01 = th * th * (3.0 - 2.0 * th);
    let h11 = th * th * (th - 1.0);
    let d00 = 6.0 * th * (th - 1.0);
    let d10 = (1.0 - th) * (1.0 - 3.0 * th);
    let d01 = -d00;
    let d11 = th * (3.0 * th - 2.0);
    for c in 0..n {
        let (p0, p1) = (s.u[i * n + c], s.u[(i + 1) * n + c]);
        let (m0, m1) = (s.ux[i * n + c] * dx, s.ux[(i + 1) * n + c] * dx);
        u[c] = h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
        ux[c] = (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / dx;
    }
}

/// Largest `|λ|` of a row-major matrix.
fn spectral_radius(a: &[f64], n: usize) -> f64 {
    match n {
        1 => a[0].abs(),
        2 => {
            let ht = 0.5 * (a[0] + a[3]);
            let hd = 0.5 * (a[0] - a[3]);
            let disc = hd * hd + a[1] * a[2];
            if disc >= 0.0 {
                ht.abs() + disc.sqrt()
            } else {
                (ht * ht - disc).sqrt()
            }
        }
        _ => match real_eigen(a, n) {
            Ok(e) => e.values.iter().fold(0.0, |m, v| m.max(v.abs())),
            Err(_) => a.iter().fold(0.0, |m, v| m + v.abs()),
        },
    }
}

/// Fourth-order central first derivative at interior nodes; edges get zero.
fn derivative(u: &[f64], n: usize, m: usize, dx: f64, out: &mut [f64]) {
    out.fill(0.0);
    let s = 1.0 / (12.0 * dx);
    for i in 2..=m - 2 {
        for c in 0..n {
            let at = |q: usize| u[q * n + c];
            out[i * n + c] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) * s;
        }
    }
}

struct Workspace {
    a: Vec<f64>,
    g: Vec<f64>,
    tmp: Vec<f64>,
}

fn rhs(sys: &SystemSpec, grid: &Grid, n: usize, damping: f64, u: &[f64], out: &mut [f64], ws: &mut Workspace) {
    let m = grid.m;
    let dx = grid.dx();
    out.fill(0.0);
    let model = sys.model();
    let s = 1.0 / (12.0 * dx);
    for i in 2..=m - 2 {
        let ui = &u[i * n..(i + 1) * n];
        for c in 0..n {
            let at = |q: usize| u[q * n + c];
            ws.tmp[c] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) * s;
        }
        model.jacobian(ui, &mut ws.a);
        model.source(ui, &mut ws.g);
        for c in 0..n {
            let at = |q: usize| u[q * n + c];
            let d4 = at(i + 2) - 4.0 * at(i + 1) + 6.0 * at(i) - 4.0 * at(i - 1) + at(i - 2);
            out[i * n + c] = -dot(&ws.a[c * n..(c + 1) * n], &ws.tmp) + ws.g[c] - damping * d4;
        }
    }
}

/// `max_{i,x} |w_i|` where `w = ℓ(u) · u_x`.
fn max_w(sys: &SystemSpec, n: usize, u: &[f64], ux: &[f64]) -> Result<f64> {
    let mut best = 0.0f64;
    let mut a = vec![0.0; n * n];
    let mut left = vec![0.0; n * n];
    for (ui, uxi) in u.chunks_exact(n).zip(ux.chunks_exact(n)) {
        if uxi.iter().all(|v| *v == 0.0) {
            continue;
        }
        if n == 1 {
            best = best.max(uxi[0].abs());
            continue;
        }
        sys.left_into(ui, &mut a, &mut left)?;
        for l in left.chunks_exact(n) {
            best = best.max(dot(l, uxi).abs());
        }
    }
    Ok(best)
}

fn oscillation(u: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|c| {
            let (lo, hi) = u
                .iter()
                .skip(c)
                .step_by(n)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Integrates from `u0` to `t_end` or until blow-up is detected.
pub fn solve(sys: &SystemSpec, u0: &Profile, grid: Grid, t_end: f64, opts: SolveOptions) -> Result<Trajectory> {
    let n = sys.n();
    if u0.dim() != n {
        return Err(Error::invalid("profile dimension does not match the system"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid("t_end must be positive"));
    }
    if !(opts.cfl > 0.0 && opts.snapshot_stride > 0) {
        return Err(Error::invalid("cfl and snapshot stride must be positive"));
    }
    let report = sys.check_assumptions();
    if !report.all_pass() {
        return Err(Error::AssumptionViolated("system fails the structural assumptions at u = 0".into()));
    }
    let (lo, hi) = u0.support();
    let (elo, ehi) = envelope(sys, lo, hi, t_end)?;
    let margin = ENVELOPE_MARGIN_CELLS * grid.dx();
    if elo.min(lo) - margin < grid.x_lo || ehi.max(hi) + margin > grid.x_hi {
        return Err(Error::invalid("grid does not contain the finite-speed envelope with margin"));
    }

    let m = grid.m;
    let dx = grid.dx();
    let len = grid.nodes() * n;
    let mut u = vec![0.0; len];
    for i in 2..=m - 2 {
        u0.eval_into(grid.x(i), 0, &mut u[i * n..(i + 1) * n])?;
    }
    let mut ux = vec![0.0; len];
    derivative(&u, n, m, dx, &mut ux);
    let w0 = max_w(sys, n, &u, &ux)?;
    if opts.resolution_cells > 0.0 && w0 > 0.0 && w0 >= oscillation(&u, n) / (opts.resolution_cells * dx) {
        return Err(Error::invalid("grid too coarse: the initial data already trips the resolution trigger"));
    }

    let mut traj = Trajectory {
        grid,
        n,
        snapshots: vec![Snapshot { t: 0.0, u: u.clone(), ux: ux.clone() }],
        history: vec![(0.0, w0)],
        status: Status::Running,
        trigger: None,
        w0_grid: w0,
        t_blow: None,
        max_u: 0.0,
        left_ball: false,
        steps: 0,
        options: opts,
    };

    let mut ws = Workspace { a: vec![0.0; n * n], g: vec![0.0; n], tmp: vec![0.0; n] };
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut stage = vec![0.0; len];
    let mut a = vec![0.0; n * n];
    let mut t = 0.0;
    let dt_cap = t_end / 64.0;

    let update_u = |traj: &mut Trajectory, u: &[f64]| {
        for ui in u.chunks_exact(n) {
            let r = norm(ui);
            traj.max_u = traj.max_u.max(r);
            if r > sys.delta1() {
                traj.left_ball = true;
            }
        }
    };
    update_u(&mut traj, &u);

    while t < t_end {
        if traj.steps >= opts.max_steps {
            traj.status = Status::Unstable;
            break;
        }
        let mut speed = 0.0f64;
        for ui in u.chunks_exact(n) {
            sys.model().jacobian(ui, &mut a);
            speed = speed.max(spectral_radius(&a, n));
        }
        let mut dt = (opts.cfl * dx / speed.max(1e-12)).min(dt_cap);
        let last = t + dt >= t_end;
        if last {
            dt = t_end - t;
        }
        if dt < opts.dt_min && !last {
            traj.status = Status::BlowupDetected;
            traj.trigger = Some(Trigger::StepCollapse);
            break;
        }
        let damping = opts.hyperviscosity * speed / dx;

        rhs(sys, &grid, n, damping, &u, &mut k1, &mut ws);
        for q in 0..len {
            stage[q] = u[q] + 0.5 * dt * k1[q];
        }
        rhs(sys, &grid, n, damping, &stage, &mut k2, &mut ws);
        for q in 0..len {
            stage[q] = u[q] + 0.5 * dt * k2[q];
        }
        rhs(sys, &grid, n, damping, &stage, &mut k3, &mut ws);
        for q in 0..len {
            stage[q] = u[q] + dt * k3[q];
        }
        rhs(sys, &grid, n, damping, &stage, &mut k4, &mut ws);
        for q in 0..len {
            u[q] += dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        t = if last { t_end } else { t + dt };
        traj.steps += 1;

        if u.iter().any(|v| !v.is_finite()) {
            traj.status = Status::Unstable;
            break;
        }
        update_u(&mut traj, &u);
        derivative(&u, n, m, dx, &mut ux);
        let w = max_w(sys, n, &u, &ux)?;
        traj.history.push((t, w));

        let gradient_cap = opts.blowup_factor * w0;
        let resolution_cap = if opts.resolution_cells > 0.0 {
            oscillation(&u, n) / (opts.resolution_cells * dx)
        } else {
            f64::INFINITY
        };
        let trigger = if w0 > 0.0 && w > gradient_cap {
            Some(Trigger::Gradient)
        } else if w0 > 0.0 && w > resolution_cap {
            Some(Trigger::Resolution)
        } else {
            None
        };
        let stride_hit = traj.steps.is_multiple_of(opts.snapshot_stride);
        if stride_hit || last || trigger.is_some() {
            traj.snapshots.push(Snapshot { t, u: u.clone(), ux: ux.clone() });
        }
        if let Some(tr) = trigger {
            traj.status = Status::BlowupDetected;
            traj.trigger = Some(tr);
            break;
        }
    }
    if traj.status == Status::Running {
        traj.status = Status::Completed;
    }
    if traj.status == Status::BlowupDetected {
        traj.t_blow = Some(extrapolate_blowup(&traj.history).unwrap_or(traj.t_final()));
    }
    Ok(traj)
}

/// Zero of the least-squares line through `(t, 1/w)` over the final samples:
/// those within a factor 4 of the last value, or the last
/// [`EXTRAPOLATION_SAMPLES`] if that band holds fewer.
pub fn extrapolate_blowup(history: &[(f64, f64)]) -> Option<f64> {
    let &(t_last, w_last) = history.last()?;
    if !(w_last > 0.0) {
        return None;
    }
    let band = history.iter().rev().take_while(|(_, w)| *w >= 0.25 * w_last).count();
    let take = band.max(EXTRAPOLATION_SAMPLES).min(history.len());
    let tail = &history[history.len() - take..];
    let ts: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| 1.0 / p.1).collect();
    let (b, s) = linear_fit(&ts, &ys)?;
    if !(s < 0.0) {
        return None;
    }
    let t_star = -b / s;
    (t_star.is_finite() && t_star >= t_last * 0.5).then_some(t_star.max(t_last))
}

/// A traced characteristic `X_i(t, z)` with the field sampled along it.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPath {
    pub family: usize,
    pub foot: f64,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    /// `w_i(t, X_i(t, z))`
    pub w_along: Vec<f64>,
    pub u_along: Vec<Vec<f64>>,
    /// The path left the grid interior before the end of the trajectory.
    pub truncated: bool,
}

impl CharPath {
    /// Position at `t` by linear interpolation between recorded times.
    pub fn position_at(&self, t: f64) -> Option<f64> {
        interp(&self.times, &self.positions, t)
    }

    /// `w_i` along the path at `t` by linear interpolation.
    pub fn w_at(&self, t: f64) -> Option<f64> {
        interp(&self.times, &self.w_along, t)
    }

    /// Zero of the line through `(t, 1/w)` over the final samples.
    pub fn t_blow(&self) -> Option<f64> {
        let hist: Vec<(f64, f64)> = self.times.iter().copied().zip(self.w_along.iter().map(|w| w.abs())).collect();
        extrapolate_blowup(&hist)
    }
}

fn interp(ts: &[f64], ys: &[f64], t: f64) -> Option<f64> {
    if ts.is_empty() || t < ts[0] || t > ts[ts.len() - 1] {
        return None;
    }
    let j = ts.partition_point(|&s| s <= t);
    if j == 0 {
        return Some(ys[0]);
    }
    if j >= ts.len() {
        return Some(ys[ts.len() - 1]);
    }
    let (t0, t1) = (ts[j - 1], ts[j]);
    let th = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
    Some(ys[j - 1] + th * (ys[j] - ys[j - 1]))
}

/// Integrates `dX/dt = λ_i(u(t, X))` from `X(0) = z` with RK4, two substeps
/// per snapshot interval, recording `w_i = ℓ_i(u) · u_x` at every snapshot
/// time.
pub fn trace_characteristic(traj: &Trajectory, sys: &SystemSpec, family: usize, z: f64) -> Result<CharPath> {
    let n = traj.n;
    if family >= n {
        return Err(Error::invalid("family index out of range"));
    }
    let g = traj.grid;
    let inner_lo = g.x_lo + 2.0 * g.dx();
    let inner_hi = g.x_hi - 2.0 * g.dx();
    if !(z >= inner_lo && z <= inner_hi) {
        return Err(Error::invalid("foot point lies outside the grid interior"));
    }
    let mut u = vec![0.0; n];
    let mut ux = vec![0.0; n];
    let probe = |t: f64, x: f64, u: &mut [f64], ux: &mut [f64]| -> Result<(f64, f64)> {
        traj.sample(t, x, u, ux);
        let f = sys.eigenframe(u)?;
        Ok((f.lambdas[family], dot(&f.left[family], ux)))
    };
    let mut path = CharPath {
        family,
        foot: z,
        times: Vec::new(),
        positions: Vec::new(),
        w_along: Vec::new(),
        u_along: Vec::new(),
        truncated: false,
    };
    let mut x = z;
    let times = traj.times();
    let (_, w) = probe(times[0], x, &mut u, &mut ux)?;
    path.times.push(times[0]);
    path.positions.push(x);
    path.w_along.push(w);
    path.u_along.push(u.clone());
    for win in times.windows(2) {
        let (ta, tb) = (win[0], win[1]);
        let h = 0.5 * (tb - ta);
        for sub in 0..2 {
            let t = ta + sub as f64 * h;
            let (k1, _) = probe(t, x, &mut u, &mut ux)?;
            let (k2, _) = probe(t + 0.5 * h, x + 0.5 * h * k1, &mut u, &mut ux)?;
            let (k3, _) = probe(t + 0.5 * h, x + 0.5 * h * k2, &mut u, &mut ux)?;
            let (k4, _) = probe(t + h, x + h * k3, &mut u, &mut ux)?;
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if !(x >= inner_lo && x <= inner_hi) || !x.is_finite() {
            path.truncated = true;
            break;
        }
        let (_, w) = probe(tb, x, &mut u, &mut ux)?;
        path.times.push(tb);
        path.positions.push(x);
        path.w_along.push(w);
        path.u_along.push(u.clone());
    }
    Ok(path)
}

/// Boundary characteristics of the strips `R_i` issued from `[α₀, β₀]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strips {
    pub alpha: Vec<CharPath>,
    pub beta: Vec<CharPath>,
    /// Time after which all strips are pairwise disjoint; infinite if they
    /// never separate within the traced horizon.
    pub t0_obs: f64,
    /// `sup_{i,t} (β_i(t) - α_i(t))`
    pub s_obs: f64,
}

impl Strips {
    /// `[α_i(t), β_i(t)]` when both boundaries reach `t`.
    pub fn interval(&self, family: usize, t: f64) -> Option<(f64, f64)> {
        Some((self.alpha[family].position_at(t)?, self.beta[family].position_at(t)?))
    }
}

pub fn strips(traj: &Trajectory, sys: &SystemSpec, alpha0: f64, beta0: f64) -> Result<Strips> {
    let n = traj.n;
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for i in 0..n {
        alpha.push(trace_characteristic(traj, sys, i, alpha0)?);
        beta.push(trace_characteristic(traj, sys, i, beta0)?);
    }
    let horizon = alpha
        .iter()
        .chain(&beta)
        .map(|p| p.times.len())
        .min()
        .unwrap_or(0);
    let times = &alpha[0].times[..horizon];
    let overlap = |q: usize| -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let lo = alpha[i].positions[q].max(alpha[j].positions[q]);
                let hi = beta[i].positions[q].min(beta[j].positions[q]);
                worst = worst.max(hi - lo);
            }
        }
        worst
    };
    let t0_obs = if n == 1 {
        0.0
    } else {
        let ov: Vec<f64> = (0..horizon).map(overlap).collect();
        match ov.iter().rposition(|v| *v >= 0.0) {
            None => times.first().copied().unwrap_or(0.0),
            Some(q) if q + 1 >= horizon => f64::INFINITY,
            Some(q) => {
                let (a, b) = (ov[q], ov[q + 1]);
                times[q] + (times[q + 1] - times[q]) * a / (a - b)
            }
        }
    };
    let mut s_obs = 0.0f64;
    for i in 0..n {
        for q in 0..alpha[i].times.len().min(beta[i].times.len()) {
            s_obs = s_obs.max(beta[i].positions[q] - alpha[i].positions[q]);
        }
    }
    Ok(Strips { alpha, beta, t0_obs, s_obs })
}

//! Adaptive Dormand–Prince 5(4) integration, the reference oracle for the
//! closed forms and for characteristic ODEs.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14, h0: 1e-4, h_max: f64::INFINITY, h_min: 1e-15, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeStop {
    /// Reached `t_end`.
    Completed,
    /// The caller's stop predicate fired.
    Event,
    /// The controller asked for a step below `h_min`.
    StepUnderflow,
    MaxSteps,
    NonFinite,
}

/// Accepted steps of an integration, starting with the initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub stop: OdeStop,
}

impl OdeSolution {
    pub fn last(&self) -> (f64, &[f64]) {
        let i = self.t.len() - 1;
        (self.t[i], &self.y[i])
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, stopping early when
/// `stop(t, y)` returns true after an accepted step.
pub fn dopri5(
    mut f: impl FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: OdeOptions,
    mut stop: impl FnMut(f64, &[f64]) -> bool,
) -> OdeSolution {
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut out = OdeSolution { t: vec![t0], y: vec![y.clone()], stop: OdeStop::Completed };
    let mut h = opts.h0.min(t_end - t0).min(opts.h_max);
    f(t, &y, &mut k[0]);
    let mut steps = 0;
    while t < t_end {
        if steps >= opts.max_steps {
            out.stop = OdeStop::MaxSteps;
            return out;
        }
        steps += 1;
        h = h.min(t_end - t);
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += h * A[s][j] * kj[i];
                }
                tmp[i] = acc;
            }
            let (_, tail) = k.split_at_mut(s);
            f(t + C[s] * h, &tmp, &mut tail[0]);
        }
        // tmp now holds the 5th-order solution (FSAL stage 7 input)
        let mut err = 0.0;
        for i in 0..n {
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
            let sc = opts.atol + opts.rtol * y[i].abs().max(tmp[i].abs());
            err += (e / sc) * (e / sc);
        }
        err = (err / n.max(1) as f64).sqrt();
        if !err.is_finite() || tmp.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            if h < opts.h_min {
                out.stop = OdeStop::NonFinite;
                return out;
            }
            continue;
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&tmp);
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            out.t.push(t);
            out.y.push(y.clone());
            if stop(t, &y) {
                out.stop = OdeStop::Event;
                return out;
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * fac).min(opts.h_max);
        if h < opts.h_min && t < t_end {
            out.stop = OdeStop::StepUnderflow;
            return out;
        }
    }
    out
}

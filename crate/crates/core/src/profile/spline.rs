//! Compactly supported cubic B-spline sums.

use alloc::vec::Vec;

use crate::{Error, Result};

/// `S(x) = Σ_j c_j B_{j,3}(x)` on a strictly increasing knot vector.
///
/// With `K` coefficients there are `K + 4` knots and `S` vanishes outside
/// `[t_0, t_{K+3}]` together with its first two derivatives, so the sum is
/// C² on the whole line.
#[derive(Debug, Clone, PartialEq)]
pub struct BSpline {
    knots: Vec<f64>,
    coeffs: Vec<f64>,
}

impl BSpline {
    pub fn new(knots: Vec<f64>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("spline needs at least one coefficient"));
        }
        if knots.len() != coeffs.len() + 4 {
            return Err(Error::invalid("cubic spline needs coefficients + 4 knots"));
        }
        if knots.iter().chain(&coeffs).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite spline payload"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("spline knots must be strictly increasing"));
        }
        Ok(Self { knots, coeffs })
    }

    /// Uniform knots on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, coeffs: Vec<f64>) -> Result<Self> {
        let n = coeffs.len() + 3;
        let knots = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        Self::new(knots, coeffs)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn eval(&self, x: f64, order: usize) -> f64 {
        let t = &self.knots;
        let (lo, hi) = self.support();
        if x < lo || x >= hi {
            return 0.0;
        }
        // span s with t[s] <= x < t[s+1]
        let s = t.partition_point(|&k| k <= x) - 1;
        let first = s.saturating_sub(3);
        let last = s.min(self.coeffs.len() - 1);
        (first..=last)
            .map(|j| {
                let b = match order {
                    0 => basis(t, j, 3, x),
                    1 => basis_d1(t, j, 3, x),
                    _ => basis_d2(t, j, x),
                };
                self.coeffs[j] * b
            })
            .sum()
    }
}

fn basis(t: &[f64], j: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        return if t[j] <= x && x < t[j + 1] { 1.0 } else { 0.0 };
    }
    let left = (x - t[j]) / (t[j + p] - t[j]) * basis(t, j, p - 1, x);
    let right = (t[j + p + 1] - x) / (t[j + p + 1] - t[j + 1]) * basis(t, j + 1, p - 1, x);
    left + right
}

fn basis_d1(t: &[f64], j: usize, p: usize, x: f64) -> f64 {
    let pf = p as f64;
    pf * (basis(t, j, p - 1, x) / (t[j + p] - t[j])
        - basis(t, j + 1, p - 1, x) / (t[j + p + 1] - t[j + 1]))
}

fn basis_d2(t: &[f64], j: usize, x: f64) -> f64 {
    3.0 * (basis_d1(t, j, 2, x) / (t[j + 3] - t[j]) - basis_d1(t, j + 1, 2, x) / (t[j + 4] - t[j + 1]))
}

//! Small numerical kernels shared by the profile, theta and solver modules:
//! Gauss–Legendre rules, golden-section refinement, dense scan maximization,
//! least-squares line fits.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::Real;

/// Golden ratio conjugate, `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f(x) dx` with the rule mapped onto `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Minimizes a unimodal `f` on `[a, b]` until the bracket is below `tol`.
/// Returns `(x, f(x))`.
pub fn golden_section_min(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// A point found by [`scan_extrema`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

/// Samples `f` at `n + 1` uniform points of `[lo, hi]`, refines the best
/// `keep` local minima by golden section to `tol`, and returns every refined
/// candidate together with the raw scan samples, sorted by value then `x`.
///
/// Returning all candidates lets callers apply their own tie-breaking among
/// near-equal minima.
pub fn scan_minima(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
    keep: usize,
    tol: f64,
) -> (Vec<Extremum>, Vec<Extremum>) {
    let n = n.max(2);
    let h = (hi - lo) / n as f64;
    let samples: Vec<Extremum> = (0..=n)
        .map(|i| {
            let x = if i == n { hi } else { lo + i as f64 * h };
            Extremum { x, value: f(x) }
        })
        .collect();

    let mut local: Vec<usize> = (0..=n)
        .filter(|&i| {
            let v = samples[i].value;
            let left = if i == 0 { f64::INFINITY } else { samples[i - 1].value };
            let right = if i == n { f64::INFINITY } else { samples[i + 1].value };
            v <= left && v <= right
        })
        .collect();
    local.sort_by(|&a, &b| {
        samples[a]
            .value
            .total_cmp(&samples[b].value)
            .then(samples[a].x.total_cmp(&samples[b].x))
    });
    local.truncate(keep.max(1));

    let mut refined: Vec<Extremum> = local
        .iter()
        .map(|&i| {
            let a = if i == 0 { lo } else { samples[i - 1].x };
            let b = if i == n { hi } else { samples[i + 1].x };
            let (x, value) = golden_section_min(&mut f, a, b, tol);
            if value <= samples[i].value {
                Extremum { x, value }
            } else {
                samples[i]
            }
        })
        .collect();
    refined.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.x.total_cmp(&b.x)));
    (refined, samples)
}

/// Supremum of `f` over `[lo, hi]`: dense scan plus golden-section refinement
/// of the best few local maxima.
pub fn sup_on(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, n: usize) -> Extremum {
    let (refined, samples) = scan_minima(|x| -f(x), lo, hi, n, 4, 1e-12 * (hi - lo).abs().max(1e-300));
    let best_scan = samples
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .copied()
        .unwrap_or(Extremum { x: lo, value: 0.0 });
    let best = refined
        .first()
        .copied()
        .filter(|r| r.value <= best_scan.value)
        .unwrap_or(best_scan);
    Extremum { x: best.x, value: -best.value }
}

/// Ordinary least-squares line `y = intercept + slope * x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs[..n].iter().zip(&ys[..n]) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((my - slope * mx, slope))
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).map(|(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        // degree 15 is the exactness limit of the 8-point rule
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(15) - 3.0 * x.powi(4));
        let exact = (2f64.powi(16) - 1.0) / 16.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-9 * exact.abs());
        let w: f64 = GaussLegendre::new(64).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-13);
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, v) = golden_section_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(v < 1e-18);
    }

    #[test]
    fn sup_on_refines_between_samples() {
        let e = sup_on(|x| -(x - 0.123_456_7).powi(2), 0.0, 1.0, 16);
        assert!((e.x - 0.123_456_7).abs() < 1e-8);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (b, m) = linear_fit(&xs, &ys).unwrap();
        assert!((b - 1.0).abs() < 1e-14 && (m - 2.0).abs() < 1e-14);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }
}

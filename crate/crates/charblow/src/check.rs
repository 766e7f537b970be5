//! Structural identity checks of the coefficient tensors at random states.

use charblow_core::numeric::loglog_slope;
use charblow_core::SystemSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Tolerance on raw `γ_ijk - γ_ikj`.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Tolerance on `γ_ijj` (`i ≠ j`), `γ_iii + c_iii` and `Γ_ijj`.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Allowed deviation of the `∇λ` error slope from 2.
pub const SLOPE_TOL: f64 = 0.1;
/// Increments for the `∇λ` convergence check.
pub const SLOPE_STEPS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
/// Below this the first-order expansion counts as exact.
const EXACT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IdentityReport {
    pub system: String,
    pub states: usize,
    pub seed: u64,
    pub max_raw_asymmetry: f64,
    pub max_gamma_ijj: f64,
    pub max_gamma_plus_c: f64,
    pub max_big_gamma_ijj: f64,
    pub min_gamma_iii: f64,
    pub max_biorthonormality: f64,
    /// Range of the fitted slopes; `None` when every expansion was exact.
    pub slope_min: Option<f64>,
    pub slope_max: Option<f64>,
    pub slope_exact_cases: usize,
    pub tensors_ok: bool,
    pub slope_ok: bool,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.tensors_ok && self.slope_ok
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Uniform sample of the open ball of radius `r`.
fn ball_point(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = dot(&v, &v);
        if s < 1.0 {
            return v.iter().map(|x| x * r).collect();
        }
    }
}

fn unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v = ball_point(rng, n, 1.0);
    let s = dot(&v, &v).sqrt();
    if s == 0.0 {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        return e;
    }
    v.iter().map(|x| x / s).collect()
}

/// Checks the tensor identities at `states` random points of the
/// `δ₁`-ball and the second-order convergence of `λ(u + du)` to its
/// first-order expansion.
pub fn identity_suite(sys: &SystemSpec, states: usize, seed: u64) -> Result<IdentityReport> {
    let n = sys.n();
    let num = |e: charblow_core::Error| CliError::Numerical(e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = IdentityReport {
        system: sys.name().to_string(),
        states,
        seed,
        max_raw_asymmetry: 0.0,
        max_gamma_ijj: 0.0,
        max_gamma_plus_c: 0.0,
        max_big_gamma_ijj: 0.0,
        min_gamma_iii: f64::INFINITY,
        max_biorthonormality: 0.0,
        slope_min: None,
        slope_max: None,
        slope_exact_cases: 0,
        tensors_ok: false,
        slope_ok: true,
    };
    let mut slopes = Vec::new();
    for _ in 0..states {
        let u = ball_point(&mut rng, n, sys.delta1());
        let f = sys.eigenframe(&u).map_err(num)?;
        let t = sys.coefficients_in(&f);
        let raw = sys.gamma_tensor_raw(&u).map_err(num)?;
        for i in 0..n {
            r.min_gamma_iii = r.min_gamma_iii.min(t.gamma[(i, i, i)]);
            r.max_gamma_plus_c = r.max_gamma_plus_c.max((t.gamma[(i, i, i)] + t.c[(i, i, i)]).abs());
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                r.max_biorthonormality = r.max_biorthonormality.max((dot(&f.left[i], &f.right[j]) - delta).abs());
                if j != i {
                    r.max_gamma_ijj = r.max_gamma_ijj.max(t.gamma[(i, j, j)].abs());
                }
                r.max_big_gamma_ijj = r.max_big_gamma_ijj.max(t.big_gamma[(i, j, j)].abs());
                for k in 0..n {
                    r.max_raw_asymmetry = r.max_raw_asymmetry.max((raw[(i, j, k)] - raw[(i, k, j)]).abs());
                }
            }
        }

        // λ_i(u + du) - λ_i(u) - Σ_k c_iik (ℓ_k·du) = O(|du|²)
        let dir = unit(&mut rng, n);
        let mut errs = vec![Vec::with_capacity(SLOPE_STEPS.len()); n];
        for &h in &SLOPE_STEPS {
            let du: Vec<f64> = dir.iter().map(|d| h * d).collect();
            let up: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + b).collect();
            let g = sys.eigenframe(&up).map_err(num)?;
            for (i, e) in errs.iter_mut().enumerate() {
                let lin: f64 = (0..n).map(|k| t.c[(i, i, k)] * dot(&f.left[k], &du)).sum();
                e.push((g.lambdas[i] - f.lambdas[i] - lin).abs());
            }
        }
        for e in errs {
            if e[0] <= EXACT_FLOOR {
                r.slope_exact_cases += 1;
                r.slope_ok &= e.iter().all(|&v| v <= EXACT_FLOOR);
            } else {
                match loglog_slope(&SLOPE_STEPS, &e) {
                    Some(s) => slopes.push(s),
                    None => r.slope_ok = false,
                }
            }
        }
    }
    if !slopes.is_empty() {
        let lo = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        r.slope_ok &= (lo - 2.0).abs() <= SLOPE_TOL && (hi - 2.0).abs() <= SLOPE_TOL;
        r.slope_min = Some(lo);
        r.slope_max = Some(hi);
    }
    r.tensors_ok = states > 0
        && r.max_raw_asymmetry <= SYMMETRY_TOL
        && r.max_gamma_ijj <= IDENTITY_TOL
        && r.max_gamma_plus_c <= IDENTITY_TOL
        && r.max_big_gamma_ijj <= IDENTITY_TOL
        && r.min_gamma_iii > 0.0;
    Ok(r)
}

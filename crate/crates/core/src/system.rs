//! Spectral and interaction-coefficient engine for `u_t + A(u) u_x = g(u)`.
//!
//! Eigenframes follow one sign convention throughout: at `u = 0` each pair
//! `(ℓ_i, r_i)` is oriented so that `γ_iii(0) > 0`; at any other state the
//! orientation maximizing `ℓ_i(u) · ℓ_i(0)` is used.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::math::Real;
use crate::linalg::{bilinear, dot, mat_vec, norm, real_eigen, EIGEN_GAP_TOL};
use crate::poly::Polynomial;
use crate::{Error, Result};

/// Relative step of the central differences used when a model has no
/// analytic derivatives: `h = FD_STEP · (1 + |u|)`.
pub const FD_STEP: f64 = 1e-6;

/// Tolerance on `|g(0)|` and `|∇g(0)|`.
pub const SOURCE_ORIGIN_TOL: f64 = 1e-10;

/// Genuine nonlinearity requires `|∇λ_i · r_i| (0)` above this.
pub const GNL_TOL: f64 = 1e-10;

/// The coefficient functions of a balance law.
///
/// Matrices are row-major `n × n` slices. Derivative hooks return `false`
/// when the model does not provide them; finite differences are used then.
pub trait FluxModel: Send + Sync {
    fn dim(&self) -> usize;

    /// `A(u)`
    fn jacobian(&self, u: &[f64], out: &mut [f64]);

    /// `g(u)`
    fn source(&self, u: &[f64], out: &mut [f64]);

    /// `∂A/∂u_m (u)`
    fn jacobian_partial(&self, _u: &[f64], _m: usize, _out: &mut [f64]) -> bool {
        false
    }

    /// `∇_u g(u)`, entry `(a, b)` is `∂g_a/∂u_b`.
    fn source_gradient(&self, _u: &[f64], _out: &mut [f64]) -> bool {
        false
    }
}

/// A system whose `A` entries and `g` components are polynomials in `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    pub n: usize,
    /// Row-major entries of `A`.
    pub a: Vec<Polynomial>,
    pub g: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(n: usize, a: Vec<Polynomial>, g: Vec<Polynomial>) -> Result<Self> {
        if n == 0 || a.len() != n * n || g.len() != n {
            return Err(Error::invalid("polynomial system needs n² entries of A and n of g"));
        }
        let bad = a
            .iter()
            .chain(&g)
            .flat_map(|p| &p.terms)
            .any(|t| t.powers.len() != n || !t.coef.is_finite());
        if bad {
            return Err(Error::invalid("every monomial needs n exponents and a finite coefficient"));
        }
        Ok(Self { n, a, g })
    }
}

impl FluxModel for PolySystem {
    fn dim(&self) -> usize {
        self.n
    }

    fn jacobian(&self, u: &[f64], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.a) {
            *o = p.eval(u);
        }
    }

    fn source(&self, u: &[f64], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.g) {
            *o = p.eval(u);
        }
    }

    fn jacobian_partial(&self, u: &[f64], m: usize, out: &mut [f64]) -> bool {
        for (o, p) in out.iter_mut().zip(&self.a) {
            *o = p.eval_partial(m, u);
        }
        true
    }

    fn source_gradient(&self, u: &[f64], out: &mut [f64]) -> bool {
        let n = self.n;
        for (a, p) in self.g.iter().enumerate() {
            for b in 0..n {
                out[a * n + b] = p.eval_partial(b, u);
            }
        }
        true
    }
}

/// How `∂A` and `∇g` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Derivatives {
    /// Use the model's hooks, falling back to finite differences.
    #[default]
    Analytic,
    /// Always use central finite differences.
    FiniteDifference,
}

/// `λ_i`, `ℓ_i`, `r_i` at one state, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFrame {
    pub state: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub left: Vec<Vec<f64>>,
    pub right: Vec<Vec<f64>>,
}

impl EigenFrame {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Smallest eigenvalue gap (infinite for `n = 1`).
    pub fn min_gap(&self) -> f64 {
        self.lambdas
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// `w_i = ℓ_i · v` for every family.
    pub fn project(&self, v: &[f64], out: &mut [f64]) {
        for (o, l) in out.iter_mut().zip(&self.left) {
            *o = dot(l, v);
        }
    }

    fn flip(&mut self, i: usize) {
        for v in self.left[i].iter_mut().chain(self.right[i].iter_mut()) {
            *v = -*v;
        }
    }
}

/// Dense `n × n × n` tensor, `t[(i, j, k)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n] }
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.data[(i * self.n + j) * self.n + k]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        &mut self.data[(i * self.n + j) * self.n + k]
    }
}

/// Dense `n × n` matrix, `m[(i, k)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2 {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Tensor2 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for Tensor2 {
    type Output = f64;
    fn index(&self, (i, k): (usize, usize)) -> &f64 {
        &self.data[i * self.n + k]
    }
}

impl IndexMut<(usize, usize)> for Tensor2 {
    fn index_mut(&mut self, (i, k): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + k]
    }
}

/// `c_ijk`, `γ_ijk`, `Γ_ijk` and `g_ik` at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensors {
    pub c: Tensor3,
    pub gamma: Tensor3,
    pub big_gamma: Tensor3,
    pub gcoef: Tensor2,
}

/// One concrete balance law with its validity radius `δ₁`.
#[derive(Clone)]
pub struct SystemSpec {
    name: String,
    model: Arc<dyn FluxModel>,
    delta1: f64,
    derivatives: Derivatives,
    anchor: Option<EigenFrame>,
}

impl fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemSpec")
            .field("name", &self.name)
            .field("n", &self.model.dim())
            .field("delta1", &self.delta1)
            .field("derivatives", &self.derivatives)
            .field("anchor", &self.anchor)
            .finish()
    }
}

impl SystemSpec {
    /// Wraps a model. The anchor frame at `u = 0` is computed here; systems
    /// that are not strictly hyperbolic at the origin are still accepted so
    /// that [`check_assumptions`](Self::check_assumptions) can report on them.
    pub fn new(name: impl Into<String>, model: Arc<dyn FluxModel>, delta1: f64) -> Result<Self> {
        if !(delta1 > 0.0 && delta1.is_finite()) {
            return Err(Error::invalid("delta1 must be positive"));
        }
        if model.dim() == 0 {
            return Err(Error::invalid("system dimension must be positive"));
        }
        let mut sys = Self {
            name: name.into(),
            model,
            delta1,
            derivatives: Derivatives::Analytic,
            anchor: None,
        };
        sys.anchor = sys.anchor_frame().ok();
        Ok(sys)
    }

    /// Scalar Burgers `u_t + u u_x = k u²`.
    pub fn burgers(k: f64, delta1: f64) -> Result<Self> {
        let a = vec![Polynomial::linear(1.0, 0, 1)];
        let g = vec![Polynomial::from_terms([(k, vec![2])])];
        Self::new("burgers", Arc::new(PolySystem::new(1, a, g)?), delta1)
    }

    /// The p-system `A(u, v) = [[0, -1], [-(1+u), 0]]` with source
    /// `g = (0, sigma u²)`.
    pub fn p_system(sigma: f64, delta1: f64) -> Result<Self> {
        if delta1 >= 1.0 {
            return Err(Error::invalid("the p-system loses hyperbolicity at u = -1; need delta1 < 1"));
        }
        let a = vec![
            Polynomial::zero(),
            Polynomial::constant(-1.0, 2),
            Polynomial::from_terms([(-1.0, vec![0, 0]), (-1.0, vec![1, 0])]),
            Polynomial::zero(),
        ];
        let g = vec![Polynomial::zero(), Polynomial::from_terms([(sigma, vec![2, 0])])];
        Self::new("p-system", Arc::new(PolySystem::new(2, a, g)?), delta1)
    }

    pub fn with_derivatives(mut self, d: Derivatives) -> Self {
        self.derivatives = d;
        self.anchor = self.anchor_frame().ok();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.model.dim()
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn model(&self) -> &dyn FluxModel {
        &*self.model
    }

    pub fn in_ball(&self, u: &[f64]) -> bool {
        norm(u) <= self.delta1
    }

    /// The oriented frame at `u = 0`.
    pub fn anchor(&self) -> Result<&EigenFrame> {
        self.anchor
            .as_ref()
            .ok_or_else(|| Error::hyperbolicity("A(0) is not strictly hyperbolic"))
    }

    pub fn jacobian(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut a = vec![0.0; n * n];
        self.model.jacobian(u, &mut a);
        a
    }

    pub fn source(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n()];
        self.model.source(u, &mut g);
        g
    }

    fn step(u: &[f64]) -> f64 {
        FD_STEP * (1.0 + norm(u))
    }

    /// `C_k = d/ds A(u + s r)` at `s = 0`.
    fn directional_jacobian(&self, u: &[f64], r: &[f64], out: &mut [f64]) {
        let n = self.n();
        out.fill(0.0);
        if self.derivatives == Derivatives::Analytic {
            let mut part = vec![0.0; n * n];
            let mut ok = true;
            for (m, &rm) in r.iter().enumerate() {
                if !self.model.jacobian_partial(u, m, &mut part) {
                    ok = false;
                    break;
                }
                for (o, p) in out.iter_mut().zip(&part) {
                    *o += rm * p;
                }
            }
            if ok {
                return;
            }
        }
        let h = Self::step(u);
        let plus: Vec<f64> = u.iter().zip(r).map(|(a, b)| a + h * b).collect();
        let minus: Vec<f64> = u.iter().zip(r).map(|(a, b)| a - h * b).collect();
        let ap = self.jacobian(&plus);
        let am = self.jacobian(&minus);
        for ((o, p), m) in out.iter_mut().zip(&ap).zip(&am) {
            *o = (p - m) / (2.0 * h);
        }
    }

    /// `∇g(u)`, entry `(a, b) = ∂g_a/∂u_b`.
    pub fn source_gradient(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        if self.derivatives == Derivatives::Analytic && self.model.source_gradient(u, &mut out) {
            return out;
        }
        let h = Self::step(u);
        let mut x = u.to_vec();
        for b in 0..n {
            x[b] = u[b] + h;
            let gp = self.source(&x);
            x[b] = u[b] - h;
            let gm = self.source(&x);
            x[b] = u[b];
            for a in 0..n {
                out[a * n + b] = (gp[a] - gm[a]) / (2.0 * h);
            }
        }
        out
    }

    fn raw_frame(&self, u: &[f64]) -> Result<EigenFrame> {
        if u.len() != self.n() {
            return Err(Error::invalid("state has the wrong dimension"));
        }
        let e = real_eigen(&self.jacobian(u), self.n())?;
        Ok(EigenFrame { state: u.to_vec(), lambdas: e.values, left: e.left, right: e.right })
    }

    fn anchor_frame(&self) -> Result<EigenFrame> {
        let zero = vec![0.0; self.n()];
        let mut f = self.raw_frame(&zero)?;
        let n = self.n();
        let mut ck = vec![0.0; n * n];
        for i in 0..n {
            self.directional_jacobian(&zero, &f.right[i], &mut ck);
            if bilinear(&f.left[i], &ck, &f.right[i]) > 0.0 {
                f.flip(i);
            }
        }
        Ok(f)
    }

    /// The oriented eigenframe at `u`.
    pub fn eigenframe(&self, u: &[f64]) -> Result<EigenFrame> {
        let mut f = self.raw_frame(u)?;
        let anchor = self.anchor()?;
        for i in 0..f.n() {
            if dot(&f.left[i], &anchor.left[i]) < 0.0 {
                f.flip(i);
            }
        }
        Ok(f)
    }

    /// Oriented left eigenvectors at `u`, row after row into `out` (`n²`
    /// entries), without building a full frame.
    pub fn left_into(&self, u: &[f64], a: &mut [f64], out: &mut [f64]) -> Result<()> {
        let n = self.n();
        let anchor = self.anchor()?;
        if n == 1 {
            out[0] = anchor.left[0][0];
            return Ok(());
        }
        if n > 2 {
            let f = self.eigenframe(u)?;
            for (row, l) in out.chunks_exact_mut(n).zip(&f.left) {
                row.copy_from_slice(l);
            }
            return Ok(());
        }
        self.model.jacobian(u, a);
        let (p, q, r, s) = (a[0], a[1], a[2], a[3]);
        let hd = 0.5 * (p - s);
        let disc = hd * hd + q * r;
        if !(disc >= 0.0) || 2.0 * disc.sqrt() < EIGEN_GAP_TOL {
            return Err(Error::hyperbolicity("A(u) is not strictly hyperbolic"));
        }
        let root = disc.sqrt();
        let ht = 0.5 * (p + s);
        for (i, lam) in [ht - root, ht + root].into_iter().enumerate() {
            // left eigenvector: rows of (A - λ)ᵀ annihilate it
            let c1 = [r, lam - p];
            let c2 = [lam - s, q];
            let v = if c1[0].hypot(c1[1]) >= c2[0].hypot(c2[1]) { c1 } else { c2 };
            let nv = v[0].hypot(v[1]);
            let mut l = [v[0] / nv, v[1] / nv];
            if l[0] * anchor.left[i][0] + l[1] * anchor.left[i][1] < 0.0 {
                l = [-l[0], -l[1]];
            }
            out[2 * i] = l[0];
            out[2 * i + 1] = l[1];
        }
        Ok(())
    }

    /// `c_ijk = ℓ_i C_k r_j`.
    pub fn c_tensor(&self, u: &[f64]) -> Result<Tensor3> {
        let f = self.eigenframe(u)?;
        Ok(self.c_tensor_in(&f))
    }

    fn c_tensor_in(&self, f: &EigenFrame) -> Tensor3 {
        let n = f.n();
        let mut c = Tensor3::zeros(n);
        let mut ck = vec![0.0; n * n];
        let mut tmp = vec![0.0; n];
        for k in 0..n {
            self.directional_jacobian(&f.state, &f.right[k], &mut ck);
            for j in 0..n {
                mat_vec(&ck, &f.right[j], &mut tmp);
                for i in 0..n {
                    c[(i, j, k)] = dot(&f.left[i], &tmp);
                }
            }
        }
        c
    }

    /// `γ_ijk`, assembled entry by entry and symmetrized in `(j, k)`.
    pub fn gamma_tensor(&self, u: &[f64]) -> Result<Tensor3> {
        let f = self.eigenframe(u)?;
        let c = self.c_tensor_in(&f);
        Ok(gamma_from(&f, &c, true))
    }

    /// `γ_ijk` with every ordered pair `(j, k)` assembled independently.
    pub fn gamma_tensor_raw(&self, u: &[f64]) -> Result<Tensor3> {
        let f = self.eigenframe(u)?;
        let c = self.c_tensor_in(&f);
        Ok(gamma_from(&f, &c, false))
    }

    /// `g_ik`.
    pub fn source_tensor(&self, u: &[f64]) -> Result<Tensor2> {
        let f = self.eigenframe(u)?;
        let c = self.c_tensor_in(&f);
        Ok(self.source_from(&f, &c))
    }

    fn source_from(&self, f: &EigenFrame, c: &Tensor3) -> Tensor2 {
        let n = f.n();
        let lam = &f.lambdas;
        let grad = self.source_gradient(&f.state);
        let g = self.source(&f.state);
        let lg: Vec<f64> = f.left.iter().map(|l| dot(l, &g)).collect();
        let mut out = Tensor2::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let base = bilinear(&f.left[i], &grad, &f.right[k]);
                out[(i, k)] = if k == i {
                    let mut s = 0.0;
                    for kk in (0..n).filter(|&kk| kk != i) {
                        let lk_li = dot(&f.left[kk], &f.left[i]);
                        for j in 0..n {
                            s += c[(i, kk, j)] * lg[j] * lk_li / (lam[kk] - lam[i]);
                        }
                    }
                    base + s
                } else {
                    let s: f64 = (0..n).map(|j| c[(i, k, j)] * lg[j]).sum::<f64>() / (lam[k] - lam[i]);
                    base - s
                };
            }
        }
        out
    }

    /// Every coefficient tensor at `u` from a single eigenframe.
    pub fn coefficients(&self, u: &[f64]) -> Result<CoefficientTensors> {
        let f = self.eigenframe(u)?;
        Ok(self.coefficients_in(&f))
    }

    pub fn coefficients_in(&self, f: &EigenFrame) -> CoefficientTensors {
        let c = self.c_tensor_in(f);
        let gamma = gamma_from(f, &c, true);
        let n = f.n();
        let mut big_gamma = gamma.clone();
        for i in 0..n {
            for k in 0..n {
                big_gamma[(i, i, k)] += c[(i, i, k)];
            }
        }
        let gcoef = self.source_from(f, &c);
        CoefficientTensors { c, gamma, big_gamma, gcoef }
    }

    /// `∇λ_i · r_i = c_iii` at `u`, for every family.
    pub fn genuine_nonlinearity(&self, u: &[f64]) -> Result<Vec<f64>> {
        let c = self.c_tensor(u)?;
        Ok((0..c.n).map(|i| c[(i, i, i)]).collect())
    }

    /// Structural assumptions at the origin, never failing.
    pub fn check_assumptions(&self) -> AssumptionReport {
        let n = self.n();
        let zero = vec![0.0; n];
        let g0 = norm(&self.source(&zero));
        let dg0 = norm(&self.source_gradient(&zero));
        let a3 = g0 <= SOURCE_ORIGIN_TOL && dg0 <= SOURCE_ORIGIN_TOL;
        let (a1, min_gap, gnl) = match self.anchor() {
            Ok(f) => {
                let c = self.c_tensor_in(f);
                (true, f.min_gap(), (0..n).map(|i| c[(i, i, i)]).collect())
            }
            Err(_) => (false, 0.0, Vec::new()),
        };
        let a2 = a1 && gnl.iter().all(|v: &f64| v.abs() > GNL_TOL);
        AssumptionReport {
            strictly_hyperbolic: a1,
            min_gap,
            genuinely_nonlinear: a2,
            gnl,
            source_vanishes: a3,
            source_norm: g0,
            source_gradient_norm: dg0,
        }
    }
}

/// Outcome of [`SystemSpec::check_assumptions`].
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    /// Real, simple eigenvalues of `A(0)`.
    pub strictly_hyperbolic: bool,
    pub min_gap: f64,
    /// `∇λ_i(0) · r_i(0) ≠ 0` for all `i`.
    pub genuinely_nonlinear: bool,
    /// `c_iii(0)` per family (empty when `A(0)` is not hyperbolic).
    pub gnl: Vec<f64>,
    /// `g(0) = 0` and `∇g(0) = 0`.
    pub source_vanishes: bool,
    pub source_norm: f64,
    pub source_gradient_norm: f64,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.strictly_hyperbolic && self.genuinely_nonlinear && self.source_vanishes
    }
}

fn gamma_entry(f: &EigenFrame, c: &Tensor3, i: usize, j: usize, k: usize) -> f64 {
    let n = f.n();
    let lam = &f.lambdas;
    if j == i && k == i {
        -c[(i, i, i)]
    } else if j == k {
        0.0
    } else if j == i || k == i {
        let j = if j == i { k } else { j };
        let mut s = 0.0;
        for m in (0..n).filter(|&m| m != i) {
            s += (lam[i] - lam[j]) / (lam[m] - lam[i]) * c[(i, m, j)] * dot(&f.left[m], &f.left[i]);
        }
        0.5 * (s - c[(i, i, j)] - c[(i, j, i)])
    } else {
        0.5 * (-(lam[j] - lam[k]) / (lam[j] - lam[i]) * c[(i, j, k)]
            - (lam[k] - lam[j]) / (lam[k] - lam[i]) * c[(i, k, j)])
    }
}

fn gamma_from(f: &EigenFrame, c: &Tensor3, symmetric: bool) -> Tensor3 {
    let n = f.n();
    let mut g = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if symmetric && k < j {
                    g[(i, j, k)] = g[(i, k, j)];
                } else {
                    g[(i, j, k)] = gamma_entry(f, c, i, j, k);
                }
            }
        }
    }
    g
}

/// Minimum eigenvalue gap below which the coefficient formulas are singular.
pub const GAP_TOL: f64 = EIGEN_GAP_TOL;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_frame_is_flipped_to_minus_one() {
        let sys = SystemSpec::burgers(1.0, 0.5).unwrap();
        let f = sys.eigenframe(&[0.2]).unwrap();
        assert_eq!(f.left[0], vec![-1.0]);
        assert_eq!(f.right[0], vec![-1.0]);
        let c = sys.c_tensor(&[0.2]).unwrap();
        assert_eq!(c[(0, 0, 0)], -1.0);
        assert_eq!(sys.gamma_tensor(&[0.2]).unwrap()[(0, 0, 0)], 1.0);
    }

    #[test]
    fn burgers_source_coefficient_is_2ku() {
        let sys = SystemSpec::burgers(1.5, 0.5).unwrap();
        let g = sys.source_tensor(&[0.3]).unwrap();
        assert!((g[(0, 0)] - 2.0 * 1.5 * 0.3).abs() < 1e-14);
    }

    #[test]
    fn fast_left_vectors_match_the_frame() {
        let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
        let mut a = [0.0; 4];
        let mut l = [0.0; 4];
        for u in [[0.0, 0.0], [0.3, -0.1], [-0.4, 0.2]] {
            sys.left_into(&u, &mut a, &mut l).unwrap();
            let f = sys.eigenframe(&u).unwrap();
            for i in 0..2 {
                assert!((l[2 * i] - f.left[i][0]).abs() < 1e-14);
                assert!((l[2 * i + 1] - f.left[i][1]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn p_system_speeds_at_origin() {
        let sys = SystemSpec::p_system(0.5, 0.5).unwrap();
        let f = sys.eigenframe(&[0.0, 0.0]).unwrap();
        assert!((f.lambdas[0] + 1.0).abs() < 1e-15 && (f.lambdas[1] - 1.0).abs() < 1e-15);
        let g = sys.gamma_tensor(&[0.0, 0.0]).unwrap();
        let expect = 1.0 / (2.0 * 2f64.sqrt());
        assert!((g[(1, 1, 1)] - expect).abs() < 1e-12, "{}", g[(1, 1, 1)]);
        assert!((g[(0, 0, 0)] - expect).abs() < 1e-12, "{}", g[(0, 0, 0)]);
    }
}

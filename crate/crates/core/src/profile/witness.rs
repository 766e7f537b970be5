//! The sharp-constant witness: a C¹ piecewise polynomial whose derivative
//! attains its minimum `-m` on a long flat stretch, and its mollification
//! into a C^∞ profile.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::bump_jet;
use crate::math::Real;
use crate::numeric::GaussLegendre;
use crate::{Error, Result};

/// Gauss–Legendre nodes used on every overlap of the mollifier support with
/// a polynomial piece.
pub const MOLLIFIER_NODES: usize = 64;

/// A function that is polynomial on each `[breaks[k], breaks[k+1])` and zero
/// outside `[breaks[0], breaks[last])`.
///
/// Piece `k` is `Σ_p coeffs[p] (x - origin)^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pub breaks: Vec<f64>,
    pub pieces: Vec<PolyPiece>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyPiece {
    pub origin: f64,
    pub coeffs: Vec<f64>,
}

impl PolyPiece {
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        let y = x - self.origin;
        let mut acc = 0.0;
        for (p, &c) in self.coeffs.iter().enumerate().skip(order).rev() {
            let falling: f64 = (0..order).map(|k| (p - k) as f64).product();
            acc = acc * y + c * falling;
        }
        acc
    }
}

impl Piecewise {
    pub fn new(breaks: Vec<f64>, pieces: Vec<PolyPiece>) -> Result<Self> {
        if breaks.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::invalid("piecewise function needs pieces + 1 breakpoints"));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        Ok(Self { breaks, pieces })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    /// Right-continuous evaluation of the `order`-th derivative of the
    /// polynomial pieces (distributional parts at the breaks are ignored).
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x >= hi {
            return 0.0;
        }
        let k = self.breaks.partition_point(|&b| b <= x) - 1;
        self.pieces[k].eval(x, order)
    }

    fn one_sided(&self, k: usize, order: usize) -> (f64, f64) {
        let b = self.breaks[k];
        let left = if k == 0 { 0.0 } else { self.pieces[k - 1].eval(b, order) };
        let right = if k == self.pieces.len() { 0.0 } else { self.pieces[k].eval(b, order) };
        (left, right)
    }

    /// Jump `f(b+) - f(b-)` of the `order`-th derivative at break `k`.
    pub fn jump(&self, k: usize, order: usize) -> f64 {
        let (l, r) = self.one_sided(k, order);
        r - l
    }

    /// `∫ f dx` over the support, exact for the polynomial pieces.
    pub fn integral(&self) -> f64 {
        self.pieces
            .iter()
            .zip(self.breaks.windows(2))
            .map(|(piece, w)| {
                let anti = |x: f64| {
                    let y = x - piece.origin;
                    piece
                        .coeffs
                        .iter()
                        .enumerate()
                        .rev()
                        .fold(0.0, |acc, (p, &c)| acc * y + c / (p as f64 + 1.0))
                        * y
                };
                anti(w[1]) - anti(w[0])
            })
            .sum()
    }
}

/// Parameters of the sharp witness on `[alpha0, beta0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSpec {
    pub alpha0: f64,
    pub beta0: f64,
    /// Inset of the raw construction from each end of the support.
    pub delta: f64,
    /// `-slope_m` is the minimum of the derivative.
    pub slope_m: f64,
    /// Junction between the linear and the cubic piece.
    pub x0: f64,
    pub mollifier_eps: f64,
}

impl WitnessSpec {
    /// The sharp choice `x0 = beta0 - 2 delta`, for which the raw quotient
    /// `|f(x0)| / |f'(x0)|` equals `s0 - 3 delta`.
    pub fn sharp(alpha0: f64, beta0: f64, delta: f64, slope_m: f64, mollifier_eps: f64) -> Self {
        Self {
            alpha0,
            beta0,
            delta,
            slope_m,
            x0: beta0 - 2.0 * delta,
            mollifier_eps,
        }
    }

    pub fn s0(&self) -> f64 {
        self.beta0 - self.alpha0
    }

    /// Inner support `[α0 + δ, β0 - δ]` of the raw function.
    pub fn inner(&self) -> (f64, f64) {
        (self.alpha0 + self.delta, self.beta0 - self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.alpha0, self.beta0, self.delta, self.slope_m, self.x0, self.mollifier_eps];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite witness parameter"));
        }
        if self.beta0 <= self.alpha0 {
            return Err(Error::invalid("witness needs alpha0 < beta0"));
        }
        if !(self.delta > 0.0 && self.delta < self.s0() / 4.0) {
            return Err(Error::invalid("witness needs 0 < delta < (beta0 - alpha0)/4"));
        }
        if self.slope_m <= 0.0 {
            return Err(Error::invalid("witness needs slope_m > 0"));
        }
        let (a, b) = self.inner();
        if !(a < self.x0 && self.x0 < b) {
            return Err(Error::invalid("witness needs alpha0 + delta < x0 < beta0 - delta"));
        }
        if !(self.mollifier_eps > 0.0 && self.mollifier_eps < self.delta) {
            return Err(Error::invalid("witness needs 0 < mollifier_eps < delta"));
        }
        Ok(())
    }
}

/// Raw witness together with its cubic coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub spec: WitnessSpec,
    pub raw: Piecewise,
    pub cubic_a: f64,
    pub cubic_b: f64,
}

impl Witness {
    /// The cubic `g(x) = A(x-β)³ + B(x-β)²` and its derivatives.
    pub fn cubic(&self, x: f64, order: usize) -> f64 {
        self.raw.pieces[1].eval(x, order)
    }

    /// The mollified witness with the spec's `mollifier_eps`.
    pub fn mollified(&self) -> Result<super::Profile> {
        mollify(&self.raw, self.spec.mollifier_eps)
    }
}

/// Builds the raw witness: `0` left of `α`, `-m(x-α)` on `[α, x0]`, the cubic
/// on `[x0, β]` and `0` right of `β`, where `α = α0 + δ`, `β = β0 - δ`.
/// The cubic coefficients make the function C¹ at `x0` and at `β`.
pub fn make_witness(spec: WitnessSpec) -> Result<Witness> {
    spec.validate()?;
    let (alpha, beta) = spec.inner();
    let m = spec.slope_m;
    let left = spec.x0 - alpha;
    let right = beta - spec.x0;
    let cubic_a = -m * (2.0 * left + right) / (right * right * right);
    let cubic_b = -m * (3.0 * left + right) / (right * right);
    let raw = Piecewise::new(
        vec![alpha, spec.x0, beta],
        vec![
            PolyPiece { origin: alpha, coeffs: vec![0.0, -m] },
            PolyPiece { origin: beta, coeffs: vec![0.0, 0.0, cubic_b, cubic_a] },
        ],
    )?;
    Ok(Witness { spec, raw, cubic_a, cubic_b })
}

/// Standard normalized bump `φ_ε(y) = exp(-1/(1-(y/ε)²)) / (Z ε)`.
#[derive(Debug, Clone)]
pub(crate) struct Mollifier {
    pub eps: f64,
    /// `Z = ∫_{-1}^{1} exp(-1/(1-s²)) ds`
    pub mass: f64,
    pub rule: Arc<GaussLegendre>,
}

impl Mollifier {
    pub fn new(eps: f64) -> Self {
        let rule = Arc::new(GaussLegendre::new(MOLLIFIER_NODES));
        // 16 panels of the same rule; far below the single-panel error
        let panels = 16;
        let mass = (0..panels)
            .map(|k| {
                let a = -1.0 + 2.0 * k as f64 / panels as f64;
                let b = a + 2.0 / panels as f64;
                rule.integrate(a, b, |s| bump_jet(s)[0])
            })
            .sum();
        Self { eps, mass, rule }
    }

    /// `φ_ε^{(order)}(y)`
    pub fn kernel(&self, y: f64, order: usize) -> f64 {
        let s = y / self.eps;
        if s <= -1.0 || s >= 1.0 {
            return 0.0;
        }
        let jet = bump_jet(s);
        jet[order] / (self.mass * self.eps.powi(order as i32 + 1))
    }
}

/// `φ_ε * raw` and its first two derivatives by Gauss–Legendre quadrature on
/// each overlap of `[-ε, ε]` with a polynomial piece; jumps of the raw
/// function and of its derivative enter as point terms.
#[derive(Debug, Clone)]
pub(crate) struct Mollified {
    pub raw: Piecewise,
    pub kernel: Mollifier,
}

impl Mollified {
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        let eps = self.kernel.eps;
        let mut acc = 0.0;
        for (k, piece) in self.raw.pieces.iter().enumerate() {
            // x - y in [b_k, b_{k+1}]  <=>  y in [x - b_{k+1}, x - b_k]
            let lo = (x - self.raw.breaks[k + 1]).max(-eps);
            let hi = (x - self.raw.breaks[k]).min(eps);
            if hi <= lo {
                continue;
            }
            acc += self
                .kernel
                .rule
                .integrate(lo, hi, |y| piece.eval(x - y, order) * self.kernel.kernel(y, 0));
        }
        if order >= 1 {
            for (k, &b) in self.raw.breaks.iter().enumerate() {
                let j0 = self.raw.jump(k, 0);
                if order == 1 {
                    acc += j0 * self.kernel.kernel(x - b, 0);
                } else {
                    let j1 = self.raw.jump(k, 1);
                    acc += j1 * self.kernel.kernel(x - b, 0) + j0 * self.kernel.kernel(x - b, 1);
                }
            }
        }
        acc
    }
}

/// Convolution of `raw` with the standard mollifier of radius `eps`.
pub fn mollify(raw: &Piecewise, eps: f64) -> Result<super::Profile> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("mollifier radius must be positive"));
    }
    let (lo, hi) = raw.support();
    let m = Mollified { raw: raw.clone(), kernel: Mollifier::new(eps) };
    Ok(super::Profile::from_shape(1, lo - eps, hi + eps, super::Shape::Mollified(m)))
}

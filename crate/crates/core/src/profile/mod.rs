//! Compactly supported C² initial data.
//!
//! A [`Profile`] is an immutable description of `u₀: ℝ → ℝⁿ` together with
//! a declared support `[lo, hi]`. Every evaluation outside the support returns
//! exact zeros, for every derivative order.

mod spline;
mod witness;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::Real;
use crate::numeric::{golden_section_min, scan_minima, sup_on, Extremum};
use crate::poly::PolyField;
use crate::{Error, Result};

pub use spline::BSpline;
pub use witness::{make_witness, mollify, Piecewise, PolyPiece, Witness, WitnessSpec, MOLLIFIER_NODES};

/// Highest derivative order every profile carries.
pub const SMOOTHNESS_ORDER: usize = 2;

/// Uniform scan resolution of [`argmin_derivative`](Profile::argmin_derivative).
pub const ARGMIN_SCAN_POINTS: usize = 8192;

/// Golden-section bracket width, in `x`, for the refined minimizer.
pub const ARGMIN_X_TOL: f64 = 1e-10;

/// Candidates whose derivative lies within this relative distance of the
/// minimum are treated as tied.
pub const ARGMIN_TIE_RTOL: f64 = 1e-12;

/// Uniform scan resolution of [`sup_norms`](Profile::sup_norms) before local
/// refinement.
pub const SUP_SCAN_POINTS: usize = 16384;

type CustomFn = dyn Fn(f64, usize, &mut [f64]) + Send + Sync;

#[derive(Clone)]
pub(crate) enum Shape {
    Zero,
    Bump { center: f64, halfwidth: f64, amplitude: f64 },
    Spline(BSpline),
    /// `x ↦ U(ε α(ε^{-ℓ} x))`
    Barlin { field: PolyField, bump: Box<Profile>, eps: f64, ell: f64 },
    Mollified(witness::Mollified),
    /// `scale · inner(x - shift)`
    Affine { inner: Arc<Profile>, shift: f64, scale: f64 },
    /// Scalar profiles stacked into the components of a vector profile.
    Stack(Vec<Profile>),
    Sum(Vec<Profile>),
    Custom(Arc<CustomFn>),
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Zero => f.write_str("Zero"),
            Shape::Bump { center, halfwidth, amplitude } => f
                .debug_struct("Bump")
                .field("center", center)
                .field("halfwidth", halfwidth)
                .field("amplitude", amplitude)
                .finish(),
            Shape::Spline(s) => f.debug_tuple("Spline").field(s).finish(),
            Shape::Barlin { field, bump, eps, ell } => f
                .debug_struct("Barlin")
                .field("field", field)
                .field("bump", bump)
                .field("eps", eps)
                .field("ell", ell)
                .finish(),
            Shape::Mollified(m) => f
                .debug_struct("Mollified")
                .field("raw", &m.raw)
                .field("eps", &m.kernel.eps)
                .finish(),
            Shape::Affine { inner, shift, scale } => f
                .debug_struct("Affine")
                .field("inner", inner)
                .field("shift", shift)
                .field("scale", scale)
                .finish(),
            Shape::Stack(p) => f.debug_tuple("Stack").field(p).finish(),
            Shape::Sum(p) => f.debug_tuple("Sum").field(p).finish(),
            Shape::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// A compactly supported, twice differentiable function `ℝ → ℝⁿ`.
#[derive(Debug, Clone)]
pub struct Profile {
    dim: usize,
    lo: f64,
    hi: f64,
    shape: Shape,
}

/// `(α₀, β₀, s₀)` of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportStats {
    pub alpha0: f64,
    pub beta0: f64,
    pub s0: f64,
}

/// Sup-norms of the Euclidean norm of `u₀`, `u₀'`, `u₀''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorms {
    pub sup_f: f64,
    pub sup_df: f64,
    pub sup_ddf: f64,
}

/// `φ(s) = exp(-1/(1-s²))` and its first two derivatives; zero for `|s| ≥ 1`.
pub(crate) fn bump_jet(s: f64) -> [f64; 3] {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        return [0.0; 3];
    }
    let iq = 1.0 / q;
    // exp(-700) is already below every derivative's polynomial growth
    if iq > 700.0 {
        return [0.0; 3];
    }
    let phi = (-iq).exp();
    let iq2 = iq * iq;
    let d1 = -2.0 * s * iq2;
    let d2 = 4.0 * s * s * iq2 * iq2 - 2.0 * iq2 - 8.0 * s * s * iq2 * iq;
    [phi, phi * d1, phi * d2]
}

fn check_support(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid("profile support needs finite lo < hi"));
    }
    Ok(())
}

impl Profile {
    pub(crate) fn from_shape(dim: usize, lo: f64, hi: f64, shape: Shape) -> Self {
        Self { dim, lo, hi, shape }
    }

    /// The zero function in `dim` components with nominal support `[lo, hi]`.
    pub fn zero(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        check_support(lo, hi)?;
        if dim == 0 {
            return Err(Error::invalid("profile dimension must be positive"));
        }
        Ok(Self::from_shape(dim, lo, hi, Shape::Zero))
    }

    /// A cubic B-spline with the support of its knot vector.
    pub fn spline(s: BSpline) -> Self {
        let (lo, hi) = s.support();
        Self::from_shape(1, lo, hi, Shape::Spline(s))
    }

    /// A user function `f(x, order, out)` writing the `order`-th derivative
    /// into `out`. It is only called for `lo < x < hi`.
    pub fn custom(
        dim: usize,
        lo: f64,
        hi: f64,
        f: impl Fn(f64, usize, &mut [f64]) + Send + Sync + 'static,
    ) -> Result<Self> {
        check_support(lo, hi)?;
        if dim == 0 {
            return Err(Error::invalid("profile dimension must be positive"));
        }
        Ok(Self::from_shape(dim, lo, hi, Shape::Custom(Arc::new(f))))
    }

    /// Stacks scalar profiles into one vector profile.
    pub fn stack(components: Vec<Profile>) -> Result<Self> {
        if components.is_empty() || components.iter().any(|p| p.dim != 1) {
            return Err(Error::invalid("stack needs at least one scalar component"));
        }
        let lo = components.iter().map(|p| p.lo).fold(f64::INFINITY, f64::min);
        let hi = components.iter().map(|p| p.hi).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self::from_shape(components.len(), lo, hi, Shape::Stack(components)))
    }

    /// Pointwise sum of profiles of equal dimension.
    pub fn sum(parts: Vec<Profile>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::invalid("sum needs at least one profile"));
        };
        let dim = first.dim;
        if parts.iter().any(|p| p.dim != dim) {
            return Err(Error::invalid("summands must share a dimension"));
        }
        let lo = parts.iter().map(|p| p.lo).fold(f64::INFINITY, f64::min);
        let hi = parts.iter().map(|p| p.hi).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self::from_shape(dim, lo, hi, Shape::Sum(parts)))
    }

    /// `x ↦ self(x - c)`.
    pub fn shifted(&self, c: f64) -> Self {
        self.affine(c, 1.0)
    }

    /// `x ↦ c · self(x)`.
    pub fn scaled(&self, c: f64) -> Self {
        self.affine(0.0, c)
    }

    fn affine(&self, shift: f64, scale: f64) -> Self {
        Self::from_shape(
            self.dim,
            self.lo + shift,
            self.hi + shift,
            Shape::Affine { inner: Arc::new(self.clone()), shift, scale },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn support_stats(&self) -> SupportStats {
        SupportStats { alpha0: self.lo, beta0: self.hi, s0: self.hi - self.lo }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, Shape::Zero)
    }

    /// The `order`-th derivative at `x`, componentwise.
    pub fn eval(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(x, order, &mut out)?;
        Ok(out)
    }

    pub fn eval_into(&self, x: f64, order: usize, out: &mut [f64]) -> Result<()> {
        if order > SMOOTHNESS_ORDER {
            return Err(Error::invalid("derivative order must be 0, 1 or 2"));
        }
        if out.len() != self.dim {
            return Err(Error::invalid("output buffer does not match the profile dimension"));
        }
        self.write(x, order, out);
        Ok(())
    }

    /// Component 0 of the `order`-th derivative. Intended for scalar
    /// profiles in inner loops; `order` must not exceed 2.
    pub fn scalar(&self, x: f64, order: usize) -> f64 {
        debug_assert!(order <= SMOOTHNESS_ORDER);
        if self.dim == 1 {
            let mut v = [0.0];
            self.write(x, order, &mut v);
            v[0]
        } else {
            let mut v = vec![0.0; self.dim];
            self.write(x, order, &mut v);
            v[0]
        }
    }

    fn write(&self, x: f64, order: usize, out: &mut [f64]) {
        out.fill(0.0);
        if x.is_nan() || x <= self.lo || x >= self.hi {
            return;
        }
        match &self.shape {
            Shape::Zero => {}
            Shape::Bump { center, halfwidth, amplitude } => {
                let s = (x - center) / halfwidth;
                out[0] = amplitude * bump_jet(s)[order] / halfwidth.powi(order as i32);
            }
            Shape::Spline(s) => out[0] = s.eval(x, order),
            Shape::Barlin { field, bump, eps, ell } => {
                let stretch = eps.powf(-ell);
                let y = x * stretch;
                let a = [bump.scalar(y, 0), bump.scalar(y, 1), bump.scalar(y, 2)];
                let xi = eps * a[0];
                let dxi = eps * stretch * a[1];
                let ddxi = eps * stretch * stretch * a[2];
                for (j, o) in out.iter_mut().enumerate() {
                    let u = field.jet(j, xi);
                    *o = match order {
                        0 => u[0],
                        1 => u[1] * dxi,
                        _ => u[2] * dxi * dxi + u[1] * ddxi,
                    };
                }
            }
            Shape::Mollified(m) => out[0] = m.eval(x, order),
            Shape::Affine { inner, shift, scale } => {
                inner.write(x - shift, order, out);
                for o in out.iter_mut() {
                    *o *= scale;
                }
            }
            Shape::Stack(parts) => {
                for (o, p) in out.iter_mut().zip(parts) {
                    *o = p.scalar(x, order);
                }
            }
            Shape::Sum(parts) => {
                let mut tmp = vec![0.0; self.dim];
                for p in parts {
                    p.write(x, order, &mut tmp);
                    for (o, t) in out.iter_mut().zip(&tmp) {
                        *o += t;
                    }
                }
            }
            Shape::Custom(f) => f(x, order, out),
        }
    }

    fn norm_at(&self, x: f64, order: usize, buf: &mut [f64]) -> f64 {
        self.write(x, order, buf);
        buf.iter().fold(0.0f64, |acc, v| acc.hypot(*v))
    }

    /// `sup |u₀|`, `sup |u₀'|`, `sup |u₀''|` in the Euclidean norm, by a dense
    /// scan with local golden-section refinement of the largest peaks.
    pub fn sup_norms(&self) -> SupNorms {
        if self.is_zero() {
            return SupNorms { sup_f: 0.0, sup_df: 0.0, sup_ddf: 0.0 };
        }
        let mut buf = vec![0.0; self.dim];
        let mut sup = |order: usize| {
            sup_on(|x| self.norm_at(x, order, &mut buf), self.lo, self.hi, SUP_SCAN_POINTS).value
        };
        SupNorms { sup_f: sup(0), sup_df: sup(1), sup_ddf: sup(2) }
    }

    /// A global minimizer of `u₀'` for a scalar profile, as `(x0, u₀'(x0))`.
    ///
    /// Among numerically tied minimizers the one with the largest `|u₀(x)|`
    /// is chosen, then the smallest `x`.
    pub fn argmin_derivative(&self) -> Result<Extremum> {
        if self.dim != 1 {
            return Err(Error::invalid("argmin_derivative needs a scalar profile"));
        }
        if self.is_zero() {
            return Err(Error::degenerate("identically zero profile"));
        }
        argmin_derivative_of(|x, order| self.scalar(x, order), self.lo, self.hi)
    }
}

/// Global minimizer of `f'` on `[lo, hi]` with the tie rule of
/// [`Profile::argmin_derivative`]. `f(x, order)` must return the value or
/// the first derivative.
pub fn argmin_derivative_of(f: impl Fn(f64, usize) -> f64, lo: f64, hi: f64) -> Result<Extremum> {
    let n = ARGMIN_SCAN_POINTS;
    let h = (hi - lo) / n as f64;
    let (refined, samples) = scan_minima(|x| f(x, 1), lo, hi, n, 16, ARGMIN_X_TOL);
    let best = refined
        .iter()
        .chain(&samples)
        .map(|e| e.value)
        .fold(f64::INFINITY, f64::min);
    if !(best < 0.0) {
        return Err(Error::degenerate("profile derivative is never negative"));
    }
    let thr = best + ARGMIN_TIE_RTOL * best.abs();
    let tied = |v: f64| v <= thr;

    let mut pick: Option<(Extremum, f64)> = None;
    for e in refined.iter().chain(&samples).filter(|e| tied(e.value)) {
        let mag = f(e.x, 0).abs();
        let better = match &pick {
            None => true,
            Some((p, pm)) => mag > *pm || (mag == *pm && e.x < p.x),
        };
        if better {
            pick = Some((*e, mag));
        }
    }
    let (mut x0, _) = pick.expect("the minimum itself is tied");

    // On a plateau the scan only brackets the end where |f| is largest;
    // bisect to the edge of the tied set in that direction.
    let dir = if f(x0.x, 0) < 0.0 { 1.0 } else { -1.0 };
    let behind = x0.x - dir * h;
    if behind > lo && behind < hi && tied(f(behind, 1)) {
        let mut inside = x0.x;
        let mut outside = (x0.x + dir * h).clamp(lo, hi);
        if tied(f(outside, 1)) {
            inside = outside;
        } else {
            for _ in 0..80 {
                let mid = 0.5 * (inside + outside);
                if mid == inside || mid == outside {
                    break;
                }
                if tied(f(mid, 1)) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
        }
        x0 = Extremum { x: inside, value: f(inside, 1) };
    } else if !refined.iter().any(|r| r.x == x0.x) {
        // a bare scan sample: polish it locally
        let (x, v) = golden_section_min(|x| f(x, 1), (x0.x - h).max(lo), (x0.x + h).min(hi), ARGMIN_X_TOL);
        if v <= x0.value {
            x0 = Extremum { x, value: v };
        }
    }
    Ok(x0)
}

/// The C^∞ bump `amplitude · exp(-1/(1-((x-center)/halfwidth)²))` with support
/// exactly `[center - halfwidth, center + halfwidth]`.
pub fn make_bump(center: f64, halfwidth: f64, amplitude: f64) -> Result<Profile> {
    if !(halfwidth > 0.0 && halfwidth.is_finite() && center.is_finite() && amplitude.is_finite()) {
        return Err(Error::invalid("bump needs a finite center, amplitude and halfwidth > 0"));
    }
    Ok(Profile::from_shape(
        1,
        center - halfwidth,
        center + halfwidth,
        Shape::Bump { center, halfwidth, amplitude },
    ))
}

/// Small-amplitude, short-support data `x ↦ U(ε α(ε^{-ℓ} x))` built from a
/// scalar bump `α` and a polynomial curve `U` with `U(0) = 0`.
pub fn make_barlin(field: PolyField, bump: Profile, eps: f64, ell: f64) -> Result<Profile> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("barlin data needs eps > 0"));
    }
    if !(ell >= 1.0 && ell.is_finite()) {
        return Err(Error::invalid("barlin data needs ell >= 1"));
    }
    if bump.dim() != 1 {
        return Err(Error::invalid("barlin data needs a scalar bump"));
    }
    if field.dim() == 0 || !field.vanishes_at_origin() {
        return Err(Error::invalid("barlin field must satisfy U(0) = 0"));
    }
    let (blo, bhi) = bump.support();
    let width = eps.powf(ell);
    let dim = field.dim();
    Ok(Profile::from_shape(
        dim,
        blo * width,
        bhi * width,
        Shape::Barlin { field, bump: Box::new(bump), eps, ell },
    ))
}

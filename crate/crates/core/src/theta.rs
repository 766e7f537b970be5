//! Initial-data functionals `s₀, W₀, W₀⁺, θ₀, θ₁, θ₂` and the predicted
//! blow-up window.

use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::math::Real;
use crate::numeric::sup_on;
use crate::profile::{Profile, SUP_SCAN_POINTS};
use crate::system::SystemSpec;
use crate::{Error, Result};

/// Default lower bound required of `‖u₀'‖_∞`.
pub const DEFAULT_DELTA_LOWER: f64 = 1e-3;

/// Numerator of the window `T = max_i 17 / (γ_iii(0) W₀⁺)`.
pub const WINDOW_CONSTANT: f64 = 17.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialDataStats {
    pub s0: f64,
    pub sup_u: f64,
    pub sup_du: f64,
    pub sup_ddu: f64,
    /// `sup_{i,x} |w_i(0, x)|`
    pub w0: f64,
    /// `sup_{i,x} w_i(0, x)`
    pub w0plus: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub delta_lower: f64,
}

impl InitialDataStats {
    /// Fills in the three θ functionals from the sup-norms.
    pub fn from_norms(s0: f64, sup_u: f64, sup_du: f64, sup_ddu: f64, w0: f64, w0plus: f64, delta_lower: f64) -> Self {
        let (theta0, theta1, theta2) = thetas(s0, sup_du, sup_ddu);
        Self { s0, sup_u, sup_du, sup_ddu, w0, w0plus, theta0, theta1, theta2, delta_lower }
    }
}

/// `(θ₀, θ₁, θ₂)` with `θ₂ = s₀² sup|u''|`, `θ₁ = (1 + 1/sup|u'|) θ₂` and
/// `θ₀ = (1 + s₀^{-1/2}) θ₁`.
pub fn thetas(s0: f64, sup_du: f64, sup_ddu: f64) -> (f64, f64, f64) {
    let theta2 = s0 * s0 * sup_ddu;
    let theta1 = (1.0 + 1.0 / sup_du) * theta2;
    let theta0 = (1.0 + 1.0 / s0.sqrt()) * theta1;
    (theta0, theta1, theta2)
}

/// `w_i(0, x) = ℓ_i(u₀(x)) · u₀'(x)`.
pub fn w_initial(sys: &SystemSpec, u0: &Profile, family: usize, x: f64) -> Result<f64> {
    let u = u0.eval(x, 0)?;
    let du = u0.eval(x, 1)?;
    let f = sys.eigenframe(&u)?;
    Ok(crate::linalg::dot(&f.left[family], &du))
}

/// Supremum of `sign · w_i(0, ·)` over the support, with its location.
pub(crate) fn sup_w(sys: &SystemSpec, u0: &Profile, family: usize, sign: f64) -> Result<(f64, f64)> {
    let (lo, hi) = u0.support();
    let err = RefCell::new(None);
    let e = sup_on(
        |x| match w_initial(sys, u0, family, x) {
            Ok(v) => sign * v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        SUP_SCAN_POINTS,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    // w vanishes outside the support, so the supremum is at least 0
    Ok(if e.value > 0.0 { (e.value, e.x) } else { (0.0, lo) })
}

/// Statistics of `u0` with the default `δ` lower bound.
pub fn stats(sys: &SystemSpec, u0: &Profile) -> Result<InitialDataStats> {
    stats_with(sys, u0, DEFAULT_DELTA_LOWER)
}

pub fn stats_with(sys: &SystemSpec, u0: &Profile, delta_lower: f64) -> Result<InitialDataStats> {
    if u0.dim() != sys.n() {
        return Err(Error::invalid("profile dimension does not match the system"));
    }
    if u0.is_zero() {
        return Err(Error::degenerate("identically zero data"));
    }
    let norms = u0.sup_norms();
    if norms.sup_df == 0.0 {
        return Err(Error::degenerate("identically zero data"));
    }
    if norms.sup_df < delta_lower {
        return Err(Error::AssumptionViolated("sup |u0'| is below the required lower bound".into()));
    }
    let mut w0 = 0.0f64;
    let mut w0plus = 0.0f64;
    for i in 0..sys.n() {
        let (p, _) = sup_w(sys, u0, i, 1.0)?;
        let (m, _) = sup_w(sys, u0, i, -1.0)?;
        w0plus = w0plus.max(p);
        w0 = w0.max(p).max(m);
    }
    Ok(InitialDataStats::from_norms(
        u0.support_stats().s0,
        norms.sup_f,
        norms.sup_df,
        norms.sup_ddf,
        w0,
        w0plus,
        delta_lower,
    ))
}

/// Hard checks and measured ratios of the θ inequalities.
///
/// The ratios compare the two sides of estimates that only hold up to
/// unspecified constants; they are reported, not judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    /// `θ₀ ≥ θ₁ ≥ θ₂`
    pub ordered: bool,
    /// `s₀ ≤ θ₀²`
    pub small_theta: bool,
    /// `s₀ W₀² / (θ₂ W₀⁺)`
    pub bound_w: f64,
    /// `θ₂ / (θ₀² W₀⁺)`
    pub bound_theta2: f64,
    /// `(s₀ W₀ + s₀ W₀²) / θ₀`
    pub sw1: f64,
    /// `(s₀ W₀ + s₀ W₀²) / (θ₁ W₀⁺)`
    pub sw2: f64,
    /// `(s₀ W₀ + s₀ W₀²) / (θ₀² (W₀⁺)²)`
    pub sw3: f64,
}

impl InequalityReport {
    pub fn hard_checks_pass(&self) -> bool {
        self.ordered && self.small_theta
    }
}

pub fn inequality_suite(s: &InitialDataStats) -> InequalityReport {
    let sw = s.s0 * s.w0 + s.s0 * s.w0 * s.w0;
    InequalityReport {
        ordered: s.theta0 >= s.theta1 && s.theta1 >= s.theta2,
        small_theta: s.s0 <= s.theta0 * s.theta0,
        bound_w: s.s0 * s.w0 * s.w0 / (s.theta2 * s.w0plus),
        bound_theta2: s.theta2 / (s.theta0 * s.theta0 * s.w0plus),
        sw1: sw / s.theta0,
        sw2: sw / (s.theta1 * s.w0plus),
        sw3: sw / (s.theta0 * s.theta0 * s.w0plus * s.w0plus),
    }
}

/// `T = max_i 17 / (γ_iii(0) W₀⁺)`.
pub fn predict_blowup_window(sys: &SystemSpec, s: &InitialDataStats) -> Result<f64> {
    if !(s.w0plus > 0.0) {
        return Err(Error::NotApplicable("W0+ must be positive for a blow-up window".into()));
    }
    let gamma = sys.gamma_tensor(&vec![0.0; sys.n()])?;
    let diag: Vec<f64> = (0..sys.n()).map(|i| gamma[(i, i, i)]).collect();
    if diag.iter().any(|g| !(*g > 0.0)) {
        return Err(Error::AssumptionViolated("gamma_iii(0) must be positive for every family".into()));
    }
    Ok(diag
        .iter()
        .map(|g| WINDOW_CONSTANT / (g * s.w0plus))
        .fold(f64::NEG_INFINITY, f64::max))
}

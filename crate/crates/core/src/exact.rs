//! Closed-form solutions: the comparison Riccati equation `y' = αy² - βy`
//! and the scalar law `u_t + u u_x = k u²` along one characteristic.

use crate::math::Real;
use crate::ode::{dopri5, OdeOptions, OdeSolution};
use crate::profile::Profile;
use crate::{Error, Result};

/// Absolute floor on denominators and on blow-up margins.
pub const GUARD: f64 = 1e-14;

/// `y' = α y² - β y`, `y(0) = y₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiParams {
    pub alpha: f64,
    pub beta: f64,
    pub y0: f64,
}

impl RiccatiParams {
    pub fn new(alpha: f64, beta: f64, y0: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta >= 0.0 && y0 > 0.0) || !(alpha.is_finite() && beta.is_finite() && y0.is_finite()) {
            return Err(Error::invalid("Riccati parameters need alpha > 0, beta >= 0, y0 > 0"));
        }
        Ok(Self { alpha, beta, y0 })
    }

    /// True iff `α y₀ > β`, i.e. the solution blows up.
    pub fn blows_up(&self) -> bool {
        self.alpha * self.y0 - self.beta > GUARD
    }
}

/// Life span `-ln(1 - β/(α y₀)) / β`; infinite when `α y₀ ≤ β`.
pub fn riccati_tmax(p: &RiccatiParams) -> f64 {
    if !p.blows_up() {
        return f64::INFINITY;
    }
    let ay = p.alpha * p.y0;
    if p.beta == 0.0 {
        return 1.0 / ay;
    }
    -(-p.beta / ay).ln_1p() / p.beta
}

/// The bound `2/(α y₀)` on the life span, available when `β/(α y₀) < 1/2`.
pub fn riccati_tmax_bound(p: &RiccatiParams) -> Option<f64> {
    let ay = p.alpha * p.y0;
    (p.beta / ay < 0.5).then(|| 2.0 / ay)
}

/// `y(t) = β / (α - e^{βt}(α - β/y₀))`, evaluated as
/// `1 / (e^{βt}/y₀ - α (e^{βt} - 1)/β)`.
pub fn riccati_eval(p: &RiccatiParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain("Riccati time must be nonnegative".into()));
    }
    if t >= riccati_tmax(p) {
        return Err(Error::Domain("time is past the Riccati life span".into()));
    }
    let bt = p.beta * t;
    let den = if p.beta == 0.0 {
        1.0 / p.y0 - p.alpha * t
    } else {
        bt.exp() / p.y0 - p.alpha * bt.exp_m1() / p.beta
    };
    if den <= GUARD {
        return Err(Error::Domain("time is past the Riccati life span".into()));
    }
    Ok(1.0 / den)
}

/// Data of the scalar characteristic issued from `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCharacteristic {
    pub k: f64,
    /// `u₀(z)`
    pub u0z: f64,
    /// `W₀ = -u₀'(z)`
    pub w0: f64,
    /// `a = -k u₀(z)`
    pub a: f64,
}

impl ScalarCharacteristic {
    pub fn new(k: f64, u0z: f64, w0: f64) -> Self {
        Self { k, u0z, w0, a: -k * u0z }
    }

    /// `1/(W₀ - a)`, infinite when `a ≥ W₀`.
    pub fn gradient_lifespan(&self) -> f64 {
        if self.w0 - self.a > GUARD {
            1.0 / (self.w0 - self.a)
        } else {
            f64::INFINITY
        }
    }

    /// `1/(k u₀(z))`, infinite when `u₀(z) ≤ 0`.
    pub fn value_lifespan(&self) -> f64 {
        let ku = self.k * self.u0z;
        if ku > GUARD {
            1.0 / ku
        } else {
            f64::INFINITY
        }
    }
}

/// `U(t) = u₀(z) / (1 - k u₀(z) t)`.
pub fn scalar_u(c: &ScalarCharacteristic, t: f64) -> Result<f64> {
    if c.u0z == 0.0 {
        return Ok(0.0);
    }
    let den = 1.0 - c.k * c.u0z * t;
    if den <= GUARD {
        return Err(Error::BlownUp { t: 1.0 / (c.k * c.u0z) });
    }
    Ok(c.u0z / den)
}

/// `W(t) = W₀ / ((1 + a t)(1 + (a - W₀) t))`.
pub fn scalar_w(c: &ScalarCharacteristic, t: f64) -> Result<f64> {
    let f1 = 1.0 + c.a * t;
    let f2 = 1.0 + (c.a - c.w0) * t;
    if f1 <= GUARD || f2 <= GUARD {
        let t_blow = c.gradient_lifespan().min(c.value_lifespan());
        return Err(Error::BlownUp { t: t_blow });
    }
    Ok(c.w0 / (f1 * f2))
}

/// `V = 1/W = V(0)(1 + a t)² - (1 + a t) t`.
pub fn scalar_v(c: &ScalarCharacteristic, t: f64) -> f64 {
    let g = 1.0 + c.a * t;
    g * g / c.w0 - g * t
}

/// Outcome of the scalar classification on the characteristic from `z₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// `u_x` blows up at `t_max = 1/(W₀ - a)`.
    Blowup { t_max: f64 },
    /// `u₀(z₀) > 0`: `U` itself blows up at `t_u = 1/(k u₀(z₀))`, after the
    /// gradient does at `t_max`.
    UBlowup { t_max: f64, t_u: f64 },
    /// `a ≥ W₀` and `u₀(z₀) ≤ 0`: `U` and `W` exist for all time.
    GlobalOnZ0,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Blowup { .. } => "BLOWUP",
            Verdict::UBlowup { .. } => "U-BLOWUP",
            Verdict::GlobalOnZ0 => "GLOBAL-ON-Z0",
        }
    }

    pub fn t_max(&self) -> Option<f64> {
        match *self {
            Verdict::Blowup { t_max } | Verdict::UBlowup { t_max, .. } => Some(t_max),
            Verdict::GlobalOnZ0 => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarReport {
    pub k: f64,
    pub s0: f64,
    pub z0: f64,
    pub w0: f64,
    pub u0z: f64,
    pub a: f64,
    pub verdict: Verdict,
}

impl ScalarReport {
    pub fn characteristic(&self) -> ScalarCharacteristic {
        ScalarCharacteristic::new(self.k, self.u0z, self.w0)
    }
}

/// Classifies `u_t + u u_x = k u²` with data `u0` on the characteristic from
/// the global minimizer `z₀` of `u₀'`.
pub fn classify_theorem2(k: f64, u0: &Profile) -> Result<ScalarReport> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid("source strength k must be positive"));
    }
    let e = u0.argmin_derivative()?;
    let u0z = u0.scalar(e.x, 0);
    let c = ScalarCharacteristic::new(k, u0z, -e.value);
    let verdict = if u0z > 0.0 {
        Verdict::UBlowup { t_max: c.gradient_lifespan(), t_u: c.value_lifespan() }
    } else if c.w0 - c.a > GUARD {
        Verdict::Blowup { t_max: c.gradient_lifespan() }
    } else {
        Verdict::GlobalOnZ0
    };
    Ok(ScalarReport {
        k,
        s0: u0.support_stats().s0,
        z0: e.x,
        w0: c.w0,
        u0z,
        a: c.a,
        verdict,
    })
}

/// Integrates `X' = U`, `U' = kU²`, `W' = W² + 2kUW` from `(z, u₀(z), W₀)`,
/// stopping once `|U|` or `|W|` exceeds `cap`.
pub fn integrate_scalar_characteristic(
    c: &ScalarCharacteristic,
    z: f64,
    t_end: f64,
    cap: f64,
    opts: OdeOptions,
) -> OdeSolution {
    let k = c.k;
    dopri5(
        |_, y, d| {
            d[0] = y[1];
            d[1] = k * y[1] * y[1];
            d[2] = y[2] * y[2] + 2.0 * k * y[1] * y[2];
        },
        0.0,
        &[z, c.u0z, c.w0],
        t_end,
        opts,
        |_, y| y[1].abs() > cap || y[2].abs() > cap,
    )
}

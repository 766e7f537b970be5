//! Gradient catastrophe for 1D hyperbolic balance laws `u_t + A(u) u_x = g(u)`.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`profile`]: compactly supported C² initial data, including the sharp
//!   witness construction and its mollification.
//! - [`system`]: eigenframes with a fixed sign convention, the interaction
//!   tensors `c_ijk`, `γ_ijk`, `Γ_ijk` and the source coefficients `g_ik`.
//! - [`theta`]: initial-data functionals and the predicted blow-up window.
//! - [`exact`]: closed-form Riccati solutions and the scalar classifier.
//! - [`solver`]: a method-of-lines integrator with characteristic tracing.
//! - [`diagnostics`]: running-supremum monitors and blow-up reports.
//!
//! IO, configuration and the command line live in the `charblow` crate.

#![no_std]
// When std is anywhere in the dependency graph its inherent float methods
// shadow the libm-backed `math::Real`, leaving the imports unused.
#![allow(unused_imports)]
#![cfg_attr(test, allow(dead_code))]
// `!(x > 0.0)` deliberately also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
mod error;
pub mod exact;
pub mod linalg;
mod math;
pub mod numeric;
pub mod ode;
pub mod poly;
pub mod profile;
pub mod solver;
pub mod system;
pub mod theta;

pub use error::{Error, Result};
pub use profile::{Profile, WitnessSpec};
pub use system::{EigenFrame, SystemSpec};

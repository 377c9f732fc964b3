//! Linearized Grad moment systems with Maxwell wall conditions.
//!
//! The crate assembles the moment equations, solves the Knudsen-layer
//! half-space problems that give velocity-slip and temperature-jump
//! coefficients, and checks the resulting second-order slip conditions on
//! unsteady Couette flow.
//!
//! Linear-algebra code is generic over [`Scalar`] (`f32` or `f64`); the
//! time-dependent Couette solvers work in `f64`. Aliases for the common
//! `f64` instantiations live at the crate root.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary_ops;
pub mod couette;
mod error;
pub mod general_slip_bc;
pub mod half_space;
pub mod moment_core;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type MomentSystemF64 = moment_core::MomentSystem<f64>;
pub type BoundaryOperatorF64 = boundary_ops::BoundaryOperator<f64>;
pub type SlipCoefficientsF64 = half_space::SlipCoefficientSet<f64>;
pub type CouetteSystemF64 = couette::CouetteSystem<f64>;

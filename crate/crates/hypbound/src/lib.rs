//! Hyperbolic geometry of the disc, half-planes and punctured disc, plus
//! numerical checks of displacement inequalities for holomorphic self-maps.
//!
//! The core is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar for the common cases.

// negated comparisons below are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod covering;
pub mod error;
pub mod harness;
pub mod holomaps;
pub mod mobius;
pub mod models;
pub mod parse;
pub mod quad;
pub mod sampling;
pub mod scalar;

pub use bounds::{BoundReport, Theorem, Witness};
pub use error::{HypError, Result};
pub use holomaps::HoloMap;
pub use mobius::{ExtPoint, Mobius, MobiusClass, MobiusKind};
pub use models::{HalfDistancePair, Model, ModelPoint};
pub use scalar::Real;

pub type Point64 = ModelPoint<f64>;
pub type Point32 = ModelPoint<f32>;
pub type Mobius64 = Mobius<f64>;
pub type Mobius32 = Mobius<f32>;
pub type HoloMap64 = HoloMap<f64>;
pub type HoloMap32 = HoloMap<f32>;
pub type Report64 = BoundReport<f64>;

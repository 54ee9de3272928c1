//! Quality metrics for multi-exposure image fusion.
//!
//! Every metric takes an under-exposed source `a`, an over-exposed source `b`
//! and a fused result `f` as [`GrayPlane`]s on the 8-bit scale and returns a
//! [`MetricValue`]. The math is generic over the scalar type through [`Real`];
//! [`Gray`] (`f64`) is what the harness uses.

pub mod error;
pub mod fusion;
pub mod image;
pub mod metrics;
pub mod scalar;
pub mod synthetic;

pub use error::{Error, Result};
pub use image::{ColorImage, GrayPlane, Plane};
pub use metrics::{MetricId, MetricParams, MetricValue, Orientation};
pub use scalar::Real;

/// Double-precision gray plane.
pub type Gray = GrayPlane<f64>;
/// Single-precision gray plane.
pub type GrayF32 = GrayPlane<f32>;
/// Double-precision metric result.
pub type Value = MetricValue<f64>;

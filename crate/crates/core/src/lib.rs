//! Numerical and exact verification tools for affine quermassintegrals of
//! convex bodies.

pub mod body;
pub mod error;
pub mod exact;
pub mod grassmann;
pub mod quadrature;
pub mod querm;
pub mod sphere;
pub mod stats;
pub mod tomo;

pub use error::{Error, Result};
pub use stats::Estimate;
/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

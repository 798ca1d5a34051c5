//! Floating-point scalar abstraction for the metrics layer.

use num_traits::{Float, FromPrimitive};

/// Floating point scalar: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from a match count.
    fn from_count(count: u64) -> Self {
        Self::from_u64(count).expect("count representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

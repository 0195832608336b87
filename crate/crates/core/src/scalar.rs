//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// A real scalar usable for beliefs and likelihoods: `f32` or `f64`.
///
/// The two tolerances are type dependent. `input_tolerance` bounds how far a
/// caller-supplied distribution may stray from summing to one;
/// `output_tolerance` is what every operation guarantees on the distributions
/// it returns.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn input_tolerance() -> Self;
    fn output_tolerance() -> Self;

    /// Lossy conversion from `f64`, used for literals and RNG draws.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }
}

impl Scalar for f64 {
    fn input_tolerance() -> Self {
        1e-9
    }

    fn output_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn input_tolerance() -> Self {
        1e-5
    }

    fn output_tolerance() -> Self {
        1e-5
    }
}

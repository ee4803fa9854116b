use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar backing every amplitude and probability in the crate.
///
/// Tolerances live on the scalar because what is attainable depends on the
/// precision: the `f64` values are the ones the protocol checks are stated in.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Bound on norm drift and on `‖U†U − I‖_max` for unitaries.
    fn unitary_tol() -> Self;

    /// Bound for normalization constraints, probability sums and end-to-end fidelity.
    fn norm_tol() -> Self;

    /// How far from unit norm an argument to a fidelity computation may be.
    fn input_norm_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f64 {
    fn unitary_tol() -> Self {
        1e-12
    }
    fn norm_tol() -> Self {
        1e-10
    }
    fn input_norm_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn unitary_tol() -> Self {
        1e-5
    }
    fn norm_tol() -> Self {
        1e-4
    }
    fn input_norm_tol() -> Self {
        1e-4
    }
}

//! Exact desk-scale simulation of probabilistic teleportation of an arbitrary
//! two-ion electronic state through two non-maximally entangled ion pairs.
//!
//! The crate is organised bottom-up:
//!
//! - [`hilbert`]: labeled registers (six ions plus one truncated phonon mode),
//!   dense state vectors, local operator embedding, inner products, fidelity.
//! - [`ops`]: the gates the protocol uses, including the red-sideband
//!   propagator and the collective phase correction.
//! - [`measure`]: projective measurements with full outcome distributions and
//!   reproducible seeded sampling.
//! - [`protocol`]: the end-to-end pipeline, exact branch enumeration and Monte
//!   Carlo runs.
//!
//! All of the numerical code is generic over [`Real`] (implemented for `f32`
//! and `f64`). The aliases below fix the scalar to `f64`, which is what the
//! stated tolerances assume.

pub mod error;
pub mod hilbert;
pub mod measure;
pub mod ops;
pub mod protocol;
pub mod scalar;

pub use error::{Error, Result};
pub use hilbert::{Level, Register};
pub use scalar::Real;

/// Complex amplitude in double precision.
pub type C64 = num_complex::Complex<f64>;

pub type StateVector = hilbert::StateVector<f64>;
pub type Operator = hilbert::Operator<f64>;
pub type ComplexMatrix = hilbert::ComplexMatrix<f64>;
pub type PulseConfig = ops::PulseConfig<f64>;
pub type ProtocolParams = protocol::ProtocolParams<f64>;
pub type RawParams = protocol::RawParams<f64>;
pub type PulseSchedule = protocol::PulseSchedule<f64>;
pub type ProtocolResult = protocol::ProtocolResult<f64>;
pub type BranchRecord = protocol::BranchRecord<f64>;
pub type BobStage = protocol::BobStage<f64>;

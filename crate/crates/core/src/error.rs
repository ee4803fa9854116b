use thiserror::Error;

use crate::hilbert::Register;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register {0} is not part of the layout")]
    UnknownRegister(Register),
    #[error("register {0} is listed more than once")]
    DuplicateRegister(Register),
    #[error("no basis index assigned to register {0}")]
    MissingRegister(Register),
    #[error("index {index} out of range for register {register} of dimension {dim}")]
    IndexOutOfRange {
        register: Register,
        index: usize,
        dim: usize,
    },
    #[error("mode dimension must be at least 2, got {0}")]
    ModeTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state layouts differ")]
    LayoutMismatch,
    #[error("{what} is not normalized (squared norm {norm_sqr})")]
    NotNormalized { what: &'static str, norm_sqr: f64 },
    #[error("{channel} violates the magnitude ordering (|{first}| < |{second}|)")]
    OrderingViolated {
        channel: &'static str,
        first: &'static str,
        second: &'static str,
    },
    #[error("{0} is not finite")]
    NonFinite(&'static str),
    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid pulse: {0}")]
    InvalidPulse(&'static str),
    #[error("unknown Alice outcome index {0}")]
    UnknownOutcome(usize),
    #[error("phonon leakage: amplitude {0:e} at the top Fock level")]
    PhononLeakage(f64),
    #[error("state does not factor over the requested registers (captured weight {0})")]
    NotProduct(f64),
    #[error("shot count must be at least 1")]
    NoShots,
}

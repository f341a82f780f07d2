use thiserror::Error;

use crate::exact_algebra::ThetaPoly;
use crate::poisson::JacobiDefect;

/// Errors raised by the engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {count} variables")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a polynomial")]
    NotPolynomial(String),

    #[error("Gaussian weight mismatch: {0} vs {1}")]
    WeightMismatch(u32, u32),

    #[error("integral of a function without Gaussian decay")]
    NotIntegrable,

    #[error("operand must be theta-free and momentum-free")]
    NotCoordinateFunction,

    #[error("operation requires momentum variables")]
    MissingMomenta,

    #[error("bivector is not Poisson ({} nonzero Jacobi components)", .0.nonzero_count())]
    NotPoisson(Box<JacobiDefect>),

    #[error("bivector entry ({i},{j}) is invalid: {reason}")]
    InvalidBivector { i: usize, j: usize, reason: String },

    #[error("measure is zero")]
    ZeroMeasure,

    #[error("measure violates the divergence condition")]
    MeasureViolation(Vec<ThetaPoly>),

    #[error("gauge correction is not polynomial: measure does not divide the numerator")]
    NonPolynomialGauge { numerator: Vec<ThetaPoly>, remainder: Vec<ThetaPoly> },

    #[error("order {requested} exceeds the supported maximum {max}")]
    UnsupportedOrder { requested: u32, max: u32 },

    #[error("quantum numbers out of range: l = {l} with n = {n}")]
    QuantumNumbers { n: u32, l: u32 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

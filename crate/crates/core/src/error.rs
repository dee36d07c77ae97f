//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong in the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A configured resource limit was hit; carries the name of the limit.
    ResourceLimit { limit: String, detail: String },
    /// Two values belong to different rings (or fields).
    RingMismatch(String),
    /// Parse failure with byte position in the input.
    Syntax { pos: usize, msg: String },
    /// A variable name not declared by the ring.
    UnknownVariable { pos: usize, name: String },
    /// Bad ring data (non-homogeneous relation, zero weight, bad characteristic...).
    InvalidRing(String),
    /// Module data violates the graded presentation contract.
    InvalidModule(String),
    /// The module is not finite length where finite length is required.
    NotFiniteLength(String),
    /// Strict-mode primality sanity check failed.
    NotPrime(String),
    /// A standing hypothesis was violated (e.g. generator degree shares a factor with n).
    HypothesisViolation(String),
    /// Matrix too large for the exact minor method.
    SizeLimit(String),
    /// Rank certification failed (randomized and deterministic methods disagree).
    RankCertification(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ResourceLimit { limit, detail } => {
                write!(f, "resource limit `{limit}` exceeded: {detail}")
            }
            Error::RingMismatch(msg) => write!(f, "ring mismatch: {msg}"),
            Error::Syntax { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
            Error::UnknownVariable { pos, name } => {
                write!(f, "unknown variable `{name}` at position {pos}")
            }
            Error::InvalidRing(msg) => write!(f, "invalid ring: {msg}"),
            Error::InvalidModule(msg) => write!(f, "invalid module: {msg}"),
            Error::NotFiniteLength(msg) => write!(f, "module is not finite length: {msg}"),
            Error::NotPrime(msg) => write!(f, "primality sanity check failed: {msg}"),
            Error::HypothesisViolation(msg) => write!(f, "hypothesis violation: {msg}"),
            Error::SizeLimit(msg) => write!(f, "size limit: {msg}"),
            Error::RankCertification(msg) => write!(f, "rank certification failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the monoid, factorization, cone, decay, zeta and
/// number-field routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KrullError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("class assignment out of range: {0}")]
    ClassOutOfRange(String),
    #[error("unknown divisor id {0}")]
    UnknownDivisor(u64),
    #[error("element does not belong to the monoid: {0}")]
    NotMember(String),
    #[error("element representation does not match the monoid family: {0}")]
    FamilyMismatch(String),
    #[error("the generated cone is not pointed")]
    NotPointed,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not an atom: {0}")]
    NotAnAtom(String),
    #[error("atom bound {bound} is below the element grade {grade}")]
    AtomBoundInsufficient { bound: u64, grade: u64 },
    #[error("trial division limit {limit} exceeded while factoring {value}")]
    FactorizationLimit { value: u128, limit: u64 },
    #[error("input exceeds desk-scale limits: {0}")]
    SizeLimit(String),
    #[error("exponent {m} is not a valid decay exponent for this element")]
    InvalidDecayExponent { m: u64 },
    #[error("scale value for {atom} must be > 1, got {value}")]
    ScaleBelowOne { atom: String, value: String },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl KrullError {
    /// True for errors caused by a search or size limit rather than by
    /// invalid input.
    pub fn is_bound_exceeded(&self) -> bool {
        matches!(
            self,
            KrullError::AtomBoundInsufficient { .. }
                | KrullError::FactorizationLimit { .. }
                | KrullError::SizeLimit(_)
                | KrullError::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, KrullError>;

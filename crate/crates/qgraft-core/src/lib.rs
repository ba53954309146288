//! Exact symbolic engine for quantum-group grafting.
//!
//! Everything is computed over the field ℚ(s) with s² = q: R-matrices of
//! the natural/dual sl_n modules and their tensor composites, Majid pairs
//! (R, R′), braided (co)vector algebras with their duality pairing and
//! radicals, a degree-bounded Diamond-Lemma rewriting engine, and the
//! grafting pipeline that assembles the Cartan data of the enlarged
//! quantum group and classifies it.
//!
//! No floating point is used anywhere; every identity is checked exactly,
//! with seeded random rational evaluation available as an independent
//! numeric oracle.

pub mod braided;
pub mod graft;
pub mod oracle;
pub mod qlinalg;
pub mod qscalar;
pub mod rewrite;
pub mod rmatrix;

use thiserror::Error;

/// Error type shared by all modules.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("pole at evaluation point: {0}")]
    PoleAtPoint(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not an eigenvalue of the braiding")]
    NotAnEigenvalue(String),
    #[error("Majid pair condition failed: {0}")]
    MajidConditionFailed(String),
    #[error("FRT condition violated: {0}")]
    FrtViolation(String),
    #[error("scalar is not a monomial in s: {0}")]
    NonMonomialScalar(String),
    #[error("pairing symmetry violated: {0}")]
    SymmetryViolation(String),
    #[error("pairing matrix not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("relation has no unique leading term: {0}")]
    NoLeadingTerm(String),
    #[error("completion exceeded degree bound: {0}")]
    BoundExceeded(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown generator `{name}` at {line}:{col}")]
    UnknownGenerator { line: usize, col: usize, name: String },
    #[error("malformed scalar at {line}:{col}: {msg}")]
    MalformedScalar { line: usize, col: usize, msg: String },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("{stage}: {inner}")]
    Stage { stage: String, inner: Box<QError> },
}

impl QError {
    /// Tags an error with the pipeline stage it came from.
    pub fn at_stage(self, stage: &str) -> QError {
        QError::Stage { stage: stage.into(), inner: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, QError>;

//! Error type shared by the whole crate.
//!
//! Variants are grouped by how a caller should react: `Precondition`-class
//! errors mean the input violated a documented contract, `Inconclusive`
//! means a numerical procedure ran out of budget or landed inside a
//! tolerance band where no sound verdict exists, and `Io`/`Parse` are
//! plain data-transport failures.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Vector or matrix sizes that cannot be combined.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix that was required to be symmetric is not.
    #[error("matrix is not symmetric: max |a_ij - a_ji| = {max_asymmetry:.3e} exceeds {tol:.3e}")]
    NotSymmetric { max_asymmetry: f64, tol: f64 },

    /// An order outside the supported range for the requested operation.
    #[error("unsupported order {n}: {reason}")]
    UnsupportedOrder { n: usize, reason: String },

    /// An index set violates a documented precondition.
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    /// The operation requires a copositive matrix and the input is not.
    #[error("matrix is not copositive: witness point has quadratic form {form:.6e}")]
    NotCopositive { form: f64 },

    /// A numerical procedure exhausted its budget or hit an ambiguous band.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// A catalog flag check failed (the zero set may not be fully described).
    #[error("incomplete zero catalog: {0}; inspect the catalog flags")]
    IncompleteCatalog(String),

    /// A vector that was required to be a zero of the matrix is not.
    #[error("vector is not a zero of the matrix: quadratic form = {form:.6e}")]
    NotAZero { form: f64 },

    /// A vector that cannot be normalized into a zero candidate
    /// (negative entries, all entries negligible, or nonfinite values).
    #[error("invalid zero vector: {0}")]
    InvalidZeroVector(String),

    /// The matrix does not span an exposed ray, so no maximal face exists.
    #[error("matrix is not certified exposed; no maximal face of the dual cone is cut out")]
    NotExposed,

    /// A construction self-check failed (two independent routes disagreed).
    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    /// An internal invariant did not hold; indicates a bug or severe
    /// ill-conditioning, never a user mistake.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// Tolerance values outside their valid ranges.
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    ///
    /// 2 = precondition failure, 3 = numerical inconclusiveness, 4 = i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Parse(_) => 4,
            Error::Inconclusive(_) | Error::InternalConsistency(_) => 3,
            _ => 2,
        }
    }
}

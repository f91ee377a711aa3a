//! Crate-wide error type.

/// Errors surfaced by validation, normalization, and scope-limited
/// constructions. Preconditions are reported in mathematical terms so a
/// caller can tell a bad input from an out-of-scope one.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degree bookkeeping is inconsistent: {0}")]
    DegreeInconsistent(String),

    #[error("the signed minors share a common factor; the ideal is not of height two")]
    NotHeightTwo,

    #[error("the signed minors are linearly dependent; the ideal is not minimally generated by three forms")]
    NotThreeGenerated,

    #[error("first-column normalization requires a quadratic field extension (the pencil discriminant is a non-residue mod p)")]
    ExtensionRequired,

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Typed errors shared across the crate.

use thiserror::Error;

/// All fallible operations in this crate return this error type.
///
/// The CLI maps [`Error::Usage`] and I/O-level failures to exit code 2 and
/// semantic validation failures to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    /// A finite group table failed validation.
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    /// A dga presentation failed validation.
    #[error("invalid dga presentation: {0}")]
    InvalidDga(String),

    /// Degrees of maps/elements do not line up.
    #[error("degree mismatch in {context}: expected {expected}, found {found}")]
    DegreeMismatch {
        expected: i64,
        found: i64,
        context: String,
    },

    /// A stated precondition of an operation failed on a sampled element.
    #[error("precondition of {op} failed: {reason}")]
    Precondition { op: String, reason: String },

    /// A cycle filler returned a chain whose boundary is not the input cycle.
    #[error("filler failed at degree {degree}: {witness}")]
    FillerFailed { degree: i64, witness: String },

    /// An element expected to be a cycle is not one.
    #[error("element is not a cycle: {witness}")]
    NotACycle { witness: String },

    /// The maximal-length component of a kernel element does not lie in the
    /// expected subgroup.
    #[error("maximal-length component escapes the kernel subcomplex: {witness}")]
    KernelComponent { witness: String },

    /// A degree beyond the truncation bound of a lazily evaluated complex was
    /// requested.
    #[error("degree {requested} exceeds the truncation bound {cap}")]
    TruncationExceeded { requested: i64, cap: i64 },

    /// A per-degree basis enumeration is required but absent.
    #[error("complex `{0}` has no basis enumeration")]
    MissingBasis(String),

    /// The ring has no augmentation but one is required.
    #[error("ring `{0}` has no augmentation")]
    MissingAugmentation(String),

    /// The operation is restricted to rings with zero differential.
    #[error("operation {op} requires a ring with zero differential; `{ring}` has one")]
    RingDifferentialNonzero { op: String, ring: String },

    /// A differential failed to square to zero.
    #[error("differential does not square to zero at degree {degree}: {witness}")]
    DifferentialSquare { degree: i64, witness: String },

    /// An input document is structurally ill-formed.
    #[error("document error: {0}")]
    Document(String),

    /// Command-line usage error.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error types shared by all modules.

use thiserror::Error;

/// Library-wide error type.
///
/// `IdentityFailed` carries a witness (degree plus basis element or simplex
/// label) so that reports can point at the first offending generator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degree bound exceeded: needed degree {needed}, bound {bound} ({context})")]
    Truncation {
        needed: i64,
        bound: i64,
        context: String,
    },

    #[error("identity `{identity}` failed in degree {degree} at `{witness}`: {detail}")]
    IdentityFailed {
        identity: String,
        degree: i64,
        witness: String,
        detail: String,
    },

    #[error("series failed to terminate within bound {bound} at `{witness}`")]
    NonTermination { bound: i64, witness: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn identity(identity: &str, degree: i64, witness: &str, detail: &str) -> Self {
        Error::IdentityFailed {
            identity: identity.to_string(),
            degree,
            witness: witness.to_string(),
            detail: detail.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

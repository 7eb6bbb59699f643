//! Error types shared across the library.
//!
//! Every fallible operation returns [`Result`]. The variants separate caller
//! mistakes (bad input, unsupported mode, resource guard) from internal
//! consistency failures, which indicate a bug and are never silently ignored.

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The caller supplied invalid input (out-of-range parameter, malformed
    /// syntax, duplicate branch point, ...). The message names the violated
    /// precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// The inputs are well formed but the requested value does not exist in
    /// the requested domain (division by zero, j-invariant of a degenerate
    /// parameter, arithmetic with the point at infinity, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this combination of modes
    /// (symbolic scalars where arithmetic is required, composite exponent
    /// where a prime is required, ...).
    #[error("unsupported mode: {0}")]
    Unsupported(String),

    /// A resource guard refused the computation before starting it.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An isogeny certificate that must hold by construction failed to
    /// verify. This is a hard error: the result would be meaningless.
    #[error("certificate failure: {0}")]
    Certificate(String),

    /// Internal consistency check failed; indicates a bug in this library.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the command line tool maps this error to.
    ///
    /// Input-side problems exit with 2, certificate or internal failures
    /// with 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Domain(_) | Error::Unsupported(_) | Error::Resource(_) => 2,
            Error::Certificate(_) | Error::Internal(_) => 3,
        }
    }
}

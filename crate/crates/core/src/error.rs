use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The input does not describe a probability distribution.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    /// A moment the formula needs is not present in the matrix.
    #[error("moment S[{i}][{j}] is not available (matrix holds orders up to ({kmax},{lmax}))")]
    MissingMoment {
        i: usize,
        j: usize,
        kmax: usize,
        lmax: usize,
    },
    /// The bound formula has a vanishing denominator for these parameters.
    #[error("bound undefined for these parameters: {0}")]
    UndefinedBound(String),
    /// A property selector named something the validator does not know.
    #[error("unknown property id `{0}`")]
    UnknownProperty(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Returns a domain error naming `constraint` unless `ok` holds.
pub(crate) fn ensure(ok: bool, constraint: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(constraint()))
    }
}

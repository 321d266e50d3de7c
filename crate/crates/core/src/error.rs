use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Matrix or vector shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Two independently computed quantities disagree; signals a formula bug.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    /// A square system has no unique solution.
    #[error("singular system: {0}")]
    Singular(String),
    /// A vector lies outside the subspace it was asked to be decomposed in.
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

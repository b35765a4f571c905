use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The formula divides by zero for these inputs.
    #[error("singularity: {0}")]
    Singularity(String),
    /// A solution exists in principle but falls outside the admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("no unique solution: {0}")]
    NoUniqueSolution(String),
    /// Position selection needs a nonzero field gradient.
    #[error("no spatial resolution: {0}")]
    NoResolution(String),
    /// A controlled-NOT cannot be built without coupling.
    #[error("no gate: {0}")]
    NoGate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

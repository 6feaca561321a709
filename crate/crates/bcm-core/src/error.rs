use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidParameter(&'static str),
    /// An exhaustive computation would exceed its enumeration budget.
    SizeLimit(&'static str),
    /// The round matrix is not ergodic (`lambda(M) >= 1`), so convergence
    /// bounds are undefined.
    NonErgodic { lambda: f64 },
    /// A figure of merit was requested for a run with zero load movements.
    UndefinedMerit,
    /// A numerical routine failed to converge.
    Numerical(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SizeLimit(msg) => write!(f, "size limit exceeded: {msg}"),
            Error::NonErgodic { lambda } => {
                write!(f, "round matrix is not ergodic: lambda(M) = {lambda} >= 1")
            }
            Error::UndefinedMerit => write!(f, "figure of merit undefined: no load movements"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

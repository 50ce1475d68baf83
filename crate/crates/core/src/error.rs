use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated a type invariant or an operation precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A point lies outside the domain where the function is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The characteristic polynomial has repeated or complex roots.
    #[error("unsupported roots: discriminant {discriminant} is not positive")]
    UnsupportedRoots { discriminant: f64 },

    /// The explicit scheme was asked to run with a mesh ratio above one half.
    #[error("stability violated (delta={delta:.3}>0.5): increase M or decrease dx")]
    Stability { delta: f64 },

    /// A zero pivot was met during tridiagonal elimination.
    #[error("singular tridiagonal system: zero pivot at row {row}")]
    Singular { row: usize },

    /// A query fell outside the tabulated surface.
    #[error("out of range: {0}")]
    Range(String),

    /// The target price lies outside the no-arbitrage band.
    #[error("no solution: target price {target} outside ({lower}, {upper})")]
    NoSolution { target: f64, lower: f64, upper: f64 },

    /// An iterative method ran out of iterations.
    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(msg()))
    }
}

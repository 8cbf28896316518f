use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the numerical layer.
///
/// Variants split into two families: invalid input (the caller asked for
/// something outside an operation's domain) and numerical failure (the input
/// was valid but a resolution, convergence or branch check did not pass).
/// The CLI maps the first family to exit status 1 and the second to 2.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("point {point} is within {distance:e} of the singular point {singular}")]
    Domain {
        point: String,
        singular: String,
        distance: f64,
    },

    #[error("evaluation point {point} lies within {distance:e} of the integration path")]
    Path { point: String, distance: f64 },

    #[error("evaluation point {point} lies within {distance:e} of the branch cut")]
    Cut { point: String, distance: f64 },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("Richardson extrapolation failed: successive estimates {0}")]
    Extrapolation(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iterate left the admissible family: {0}")]
    OutOfFamily(String),

    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("branch tracking failed: {0}")]
    Branch(String),
}

impl Error {
    /// True for failures of a numerical procedure on valid input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Parameter(_) | Error::Domain { .. } | Error::Path { .. } | Error::Cut { .. }
        )
    }
}

pub(crate) fn fmt_c(z: num_complex::Complex64) -> String {
    format!("({:.6e}, {:.6e})", z.re, z.im)
}

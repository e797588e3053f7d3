use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument of a gamma factor sits on (or within 1e-12 of) a pole.
    #[error("gamma pole at z = {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("no separating contour: {0}")]
    NoContour(String),

    #[error("Mellin-Barnes integral does not converge on a vertical line: {0}")]
    Divergent(String),

    #[error("quadrature did not reach rel_tol {rel_tol:e} (estimate {estimate:e}, error {error:e})")]
    Convergence {
        rel_tol: f64,
        estimate: f64,
        error: f64,
    },

    #[error("dimension {got} exceeds L_max={max}, use monte_carlo")]
    Dimension { got: usize, max: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An evaluator produced a value that cannot be a probability.
    #[error("probability {value} ({method}) outside [0, 1]")]
    ProbabilityRange { value: f64, method: String },

    #[error("dominant pole is not simple: poles {first} and {second} coincide")]
    MultiplePole { first: f64, second: f64 },

    #[error("unsupported model combination: {0}")]
    UnsupportedModel(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("negative average secrecy capacity {0:e} indicates numerical failure")]
    NegativeAsc(f64),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::Convergence { .. }
                | Error::Numerical(_)
                | Error::ProbabilityRange { .. }
                | Error::MultiplePole { .. }
                | Error::NegativeAsc(_)
        )
    }
}

use thiserror::Error;

/// Failures raised by the evaluation and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus out of range: k = {0} must lie in (0, 1)")]
    ModulusOutOfRange(f64),

    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("series failed to converge after {terms} terms at x = {x}")]
    NonConvergence { x: f64, terms: usize },

    #[error("quadrature did not reach tolerance {tol:e} within {refinements} refinements")]
    Quadrature { tol: f64, refinements: usize },

    #[error("u = {u} lies outside the principal range [-{u_max}, {u_max}]")]
    OutOfRange { u: f64, u_max: f64 },

    #[error("pole of {what} at z = {re} + {im}i")]
    Pole {
        what: &'static str,
        re: f64,
        im: f64,
    },

    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),

    #[error("invalid configuration: {0}")]
    Config(&'static str),

    #[error("root classification failed: {0}")]
    Classification(String),

    #[error("malformed grid spec {spec:?}: {reason}")]
    GridSpec { spec: String, reason: &'static str },

    #[error("unknown name {0:?}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error types shared across the crate.

use thiserror::Error;

/// Failure to turn text into an [`Expr`](crate::expr::Expr).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }
}

/// A sub-operation of an expression is undefined at the evaluation point.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("domain error in `{node}` at z = {re}{im:+}i: {reason}")]
pub struct EvalError {
    /// Printed form of the offending node.
    pub node: String,
    pub re: f64,
    pub im: f64,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("evaluation budget of {budget} exhausted; best estimate {best_re}{best_im:+}i with error estimate {error_estimate:e}")]
    BudgetExceeded {
        budget: usize,
        best_re: f64,
        best_im: f64,
        error_estimate: f64,
    },
    #[error("integrand is not finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("invalid quadrature request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Umbrella error for the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("invalid interval: {0}")]
    Interval(String),
    #[error("invalid exponent: {0}")]
    Exponent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

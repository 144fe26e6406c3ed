use thiserror::Error;

use crate::graphon::StepGraphon;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A brute-force evaluation would exceed its enumeration budget.
    #[error("instance too large: {what} ({size:.3e} exceeds the bound {bound:.3e})")]
    TooLarge { what: String, size: f64, bound: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid motif: {0}")]
    InvalidMotif(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("incompatible inputs: {0}")]
    Mismatch(String),

    /// The damped Euler–Lagrange iteration did not settle. The last iterate is kept
    /// so callers can inspect or restart from it.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        last: Box<StepGraphon>,
    },

    #[error("estimator collapse: {0}")]
    EstimatorCollapse(String),

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Whether the error comes from a numeric guard (size budget, domain, overflow,
    /// convergence) rather than from malformed input.
    pub fn is_numeric_guard(&self) -> bool {
        matches!(
            self,
            Error::TooLarge { .. }
                | Error::Domain(_)
                | Error::NoConvergence { .. }
                | Error::EstimatorCollapse(_)
                | Error::Overflow(_)
        )
    }
}

/// Budget for brute-force enumerations (homomorphism maps, block assignments).
pub const ENUMERATION_BUDGET: f64 = 1e9;

pub(crate) fn guard_enumeration(what: &str, base: usize, exponent: usize) -> Result<()> {
    let size = (base as f64).powi(exponent as i32);
    if size > ENUMERATION_BUDGET {
        return Err(Error::TooLarge {
            what: format!("{what}: {base}^{exponent} assignments"),
            size,
            bound: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

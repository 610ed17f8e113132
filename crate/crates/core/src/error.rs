use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("truncation did not converge: last tested n_bar = {last_n_bar}, max change {delta:e} > tol {tol:e}")]
    NotConverged {
        last_n_bar: usize,
        delta: f64,
        tol: f64,
    },

    #[error("quadrature did not converge at depth {depth}: value {value:e}, error estimate {err_estimate:e}")]
    QuadratureNotConverged {
        value: f64,
        err_estimate: f64,
        depth: u32,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for the errors that signal a failed convergence rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::QuadratureNotConverged { .. }
        )
    }
}

pub(crate) fn require_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite, got {value}")))
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("no real root: lambda_q = {lambda_q} exceeds (n/p)^p = {threshold}")]
    NoRealRoot { lambda_q: f64, threshold: f64 },

    #[error("Riccati solution blows up at s = {blow_up} (requested s = {s})")]
    BlowUp { s: f64, blow_up: f64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("Rayleigh quotient denominator vanishes")]
    ZeroDenominator,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular least-squares fit (condition number {condition:e})")]
    SingularFit { condition: f64 },

    #[error("profile is not positive at node {index}")]
    NonPositiveProfile { index: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::ParameterDomain(msg.into())
    }

    /// True for errors caused by invalid input rather than numerical failure.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::ParameterDomain(_)
                | Error::NoRealRoot { .. }
                | Error::BlowUp { .. }
                | Error::NonPositiveProfile { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `ParameterDomain` with `msg` unless `cond` holds.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ParameterDomain(msg()))
    }
}

//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building tables or evaluating an
/// identity.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the supported domain (negative order, modulus
    /// not prime, argument in the wrong half plane, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The convergence guard `q >= 2*beta - r - 3/2` for the Bessel series
    /// of a functional-equation instance is violated.
    #[error("convergence guard violated: {0}")]
    ConvergenceGuard(String),

    /// An adaptive routine exhausted its work budget before reaching the
    /// requested tolerance.
    #[error("work budget exhausted: {0}")]
    BudgetExhausted(String),

    /// An exact integer computation would overflow its fixed-width type.
    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Shorthand used across the crate for domain violations.
pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

//! Certified numerical evaluation of the classical Bessel-series identities
//! attached to sums of squares and character divisor sums.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] — exact integer/complex arithmetic coefficient tables
//!   (`r_k(n)` lattice counts, twisted divisor sums `d_chi(n)`),
//! * [`special`] — Bessel `J_nu`, exponentially scaled `I_nu`, and the real
//!   Gamma function, each returning a value together with a rigorous
//!   absolute error bound,
//! * [`characters`] — Dirichlet characters to prime moduli (plus the modulus
//!   4 case), Gauss sums and the `L(0, chi)`, `L(1, chi)` special values,
//! * [`summation`] — truncated series with certified exponential tail
//!   bounds, accelerated summation of conditionally convergent Bessel
//!   series, and adaptive Gauss–Kronrod quadrature,
//! * [`identities`] — the end-to-end identity verifiers that produce
//!   machine-readable [`report::IdentityReport`] records.
//!
//! Every numerical routine propagates an explicit error budget; an identity
//! "passes" only when the measured residual is below the budget implied by
//! the accumulated bounds.

// domain guards are written `!(x > 0.0)` on purpose: unlike `x <= 0.0`
// the negated form also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod characters;
pub mod error;
pub mod identities;
pub mod report;
pub mod special;
pub mod summation;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

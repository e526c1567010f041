//! Value-with-error-bound containers and the machine-readable record
//! emitted for every verified identity.

use num_complex::Complex64;
use serde::Serialize;

/// A computed value together with a rigorous absolute error bound.
///
/// The bound covers both truncation of the underlying series/asymptotic
/// expansion and an estimate of accumulated floating-point rounding
/// (tracked through the largest intermediate term when cancellation is
/// possible).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub abs_error_bound: f64,
}

impl<T> EvalResult<T> {
    pub fn new(value: T, abs_error_bound: f64) -> Self {
        EvalResult {
            value,
            abs_error_bound,
        }
    }
}

impl EvalResult<f64> {
    /// Widen a real result into a complex one (error bound unchanged).
    pub fn into_complex(self) -> EvalResult<Complex64> {
        EvalResult::new(Complex64::new(self.value, 0.0), self.abs_error_bound)
    }
}

/// A truncated infinite series: partial sum, certified bound on the
/// discarded tail, and the number of terms actually evaluated.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedSum {
    pub value: Complex64,
    /// Bound (or, for accelerated conditionally convergent series, a
    /// conservative estimate) of |exact - value|.
    pub tail_bound: f64,
    pub terms_used: u64,
}

impl TruncatedSum {
    pub fn zero() -> Self {
        TruncatedSum {
            value: Complex64::new(0.0, 0.0),
            tail_bound: 0.0,
            terms_used: 0,
        }
    }
}

/// Verdict of a single identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One verified identity instance, in the exact shape written by the CLI
/// (JSON object / CSV row). `elapsed_ms` is filled in by the caller and is
/// the only field excluded from determinism comparisons.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    /// Stable identifier, e.g. `"popov"`, `"voronoi"`, `"theta"`.
    pub identity_id: String,
    /// Canonical `key=value` rendering of the evaluation parameters.
    pub params: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    /// |lhs - rhs| in the complex absolute value.
    pub residual: f64,
    /// Total admissible error: sum of both sides' bounds plus a relative
    /// floating-point slack proportional to the magnitude of the sides.
    pub budget: f64,
    pub verdict: Verdict,
    pub terms_used: u64,
    pub elapsed_ms: f64,
}

impl IdentityReport {
    /// Assemble a report from the two sides. The budget is
    /// `lhs_bound + rhs_bound + 1e-13 * scale` where `scale` is the larger
    /// side magnitude (never below 1), so that identities whose sides are
    /// huge are not failed on pure rounding noise.
    pub fn from_sides(
        identity_id: &str,
        params: String,
        lhs: EvalResult<Complex64>,
        rhs: EvalResult<Complex64>,
        terms_used: u64,
    ) -> Self {
        let residual = (lhs.value - rhs.value).norm();
        let scale = lhs.value.norm().max(rhs.value.norm()).max(1.0);
        let budget = lhs.abs_error_bound + rhs.abs_error_bound + 1e-13 * scale;
        IdentityReport {
            identity_id: identity_id.to_string(),
            params,
            lhs_re: lhs.value.re,
            lhs_im: lhs.value.im,
            rhs_re: rhs.value.re,
            rhs_im: rhs.value.im,
            residual,
            budget,
            verdict: if residual <= budget {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            terms_used,
            elapsed_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

//! Convergence acceleration for the conditionally convergent Bessel-type
//! series `sum a(n) phi(n)` where `phi` oscillates with a slowly decaying
//! algebraic envelope and `a(n)` is a rough non-negative-mean coefficient
//! sequence.
//!
//! A direct worst-case envelope tail bound for these series diverges (or
//! reaches a given tolerance only at astronomically large truncation), so
//! the sum is instead computed as
//!
//! * the *smooth part* `sum rho(n) phi(n)` (with `rho` the mean density of
//!   the coefficients), summed by sign-change block partial sums and
//!   extrapolated (Wynn epsilon / repeated averaging);
//! * the *fluctuation part* `sum (a(n) - rho(n)) phi(n)`, rewritten by
//!   Abel summation as `-sum E(n) (phi(n+1) - phi(n))` with
//!   `E(n) = sum_{m<=n} (a(m) - rho(m))` computed exactly, then block
//!   partial sums and Wynn epsilon; a second, independent estimate applies
//!   Abel summation twice and extrapolates `sum E2(n) d2phi(n)`.
//!
//! The reported error estimate is the spread between the independent
//! extrapolations of each part. It is a validated heuristic, not a proof:
//! callers multiply it by a safety factor and must treat it as the
//! dominating budget contribution.

use num_complex::Complex64;

/// Result of the accelerated evaluation.
#[derive(Debug, Clone, Copy)]
pub struct AccelOutcome {
    pub value: Complex64,
    /// Raw spread between independent extrapolations (no safety factor).
    pub error_estimate: f64,
}

/// Repeated pairwise averaging (Euler-transform style) down to one value.
fn euler_limit(mut p: Vec<Complex64>) -> Complex64 {
    if p.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    while p.len() >= 2 {
        for i in 0..p.len() - 1 {
            p[i] = 0.5 * (p[i] + p[i + 1]);
        }
        p.pop();
    }
    p[0]
}

/// Wynn epsilon algorithm on a real sequence; returns the deepest
/// even-column estimate.
fn wynn_real(s: &[f64]) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    let mut e_prev = vec![0.0f64; s.len() + 1];
    let mut e_cur: Vec<f64> = s.to_vec();
    let mut best = *s.last().unwrap();
    // any sensible extrapolated limit is bounded by the sequence scale;
    // entries beyond this are epsilon-table blowups from near-ties
    let sane = 100.0 * s.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1e-30;
    let mut col = 1usize;
    while e_cur.len() >= 2 && col < 40 {
        let mut e_next = Vec::with_capacity(e_cur.len() - 1);
        for i in 0..e_cur.len() - 1 {
            let mut d = e_cur[i + 1] - e_cur[i];
            // once a value column has converged to rounding level, deeper
            // columns only amplify noise: accept the converged value
            let scale = e_cur[i].abs().max(e_cur[i + 1].abs());
            if col >= 3 && col % 2 == 1 && d.abs() <= 1e-14 * scale && e_cur[i + 1].abs() <= sane {
                return e_cur[i + 1];
            }
            if d == 0.0 {
                d = 1e-300;
            }
            e_next.push(e_prev[i + 1] + 1.0 / d);
        }
        e_prev = e_cur;
        e_cur = e_next;
        col += 1;
        if col % 2 == 1 {
            if let Some(&v) = e_cur.last() {
                if v.is_finite() && v.abs() <= sane {
                    best = v;
                }
            }
        }
    }
    best
}

fn wynn(p: &[Complex64]) -> Complex64 {
    let re: Vec<f64> = p.iter().map(|c| c.re).collect();
    let im: Vec<f64> = p.iter().map(|c| c.im).collect();
    Complex64::new(wynn_real(&re), wynn_real(&im))
}

/// Cumulative partial sums taken at the sign changes of `signs`.
/// `terms[i]` and `signs[i]` refer to index `i`; zero signs extend the
/// current block.
fn block_partials(terms: &[Complex64], signs: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut last_sign = 0.0f64;
    for (i, &t) in terms.iter().enumerate() {
        let s = signs[i];
        if s != 0.0 {
            if last_sign != 0.0 && s.signum() != last_sign {
                out.push(acc);
            }
            last_sign = s.signum();
        }
        acc += t;
    }
    out.push(acc);
    out
}

const WYNN_WINDOW: usize = 120;

fn tail(p: &[Complex64]) -> &[Complex64] {
    if p.len() > WYNN_WINDOW {
        &p[p.len() - WYNN_WINDOW..]
    } else {
        p
    }
}

/// Accelerated evaluation of `sum_{n=1}^{phi.len()} a(n) phi(n)` as an
/// estimate of the *infinite* series limit. `coeff(n)` and `mean(n)` are
/// 1-indexed; `mean` must be the smooth mean density of `coeff` (their
/// difference must have bounded, oscillating partial sums).
pub fn accelerated_oscillatory_sum(
    phi: &[f64],
    coeff: &mut dyn FnMut(u64) -> Complex64,
    mean: &dyn Fn(f64) -> Complex64,
) -> AccelOutcome {
    let n = phi.len();
    if n < 16 {
        // degenerate table: plain partial sum, spread by last term
        let mut acc = Complex64::new(0.0, 0.0);
        let mut last = 0.0;
        for (i, &p) in phi.iter().enumerate() {
            let t = coeff(i as u64 + 1) * p;
            acc += t;
            last = t.norm();
        }
        return AccelOutcome {
            value: acc,
            error_estimate: 10.0 * last,
        };
    }

    // smooth part: rho(n) phi(n), blocks on the sign of phi
    let smooth_terms: Vec<Complex64> = (0..n).map(|i| mean((i + 1) as f64) * phi[i]).collect();
    let ps = block_partials(&smooth_terms, phi);
    let s_euler = euler_limit(ps.clone());
    let s_wynn = wynn(tail(&ps));

    // exact fluctuation prefix sums E and their prefix sums E2
    let mut e = Vec::with_capacity(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        acc += coeff(i as u64 + 1) - mean((i + 1) as f64);
        e.push(acc);
    }
    let mut e2 = Vec::with_capacity(n);
    let mut acc2 = Complex64::new(0.0, 0.0);
    for v in &e {
        acc2 += v;
        e2.push(acc2);
    }

    // Abel once: -sum E(n) dphi(n)
    let dphi: Vec<f64> = (0..n - 1).map(|i| phi[i + 1] - phi[i]).collect();
    let t1: Vec<Complex64> = (0..n - 1).map(|i| -e[i] * dphi[i]).collect();
    let p1 = block_partials(&t1, &dphi);
    let f_abel1 = wynn(tail(&p1));

    // Abel twice: +sum E2(n) d2phi(n)
    let d2: Vec<f64> = (0..n - 2)
        .map(|i| phi[i + 2] - 2.0 * phi[i + 1] + phi[i])
        .collect();
    let t2: Vec<Complex64> = (0..n - 2).map(|i| e2[i] * d2[i]).collect();
    let p2 = block_partials(&t2, &d2);
    let f_abel2 = wynn(tail(&p2));

    let value = s_wynn + f_abel1;
    let error_estimate = (s_wynn - s_euler).norm() + (f_abel1 - f_abel2).norm();
    AccelOutcome {
        value,
        error_estimate,
    }
}

//! Evaluators for both sides of each verified identity.
//!
//! Every function returns an [`IdentityReport`] whose `budget` combines
//! the certified truncation/evaluation bounds of both sides (plus, for
//! the conditionally convergent Riesz-mean and Voronoi series, the
//! safety-scaled acceleration spread). A `pass` verdict means
//! `residual <= budget`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::arith::{d_chi_table, rk_table, sine_divisor_sum};
use crate::characters::{enumerate_characters, gauss_sum, l_one, l_zero, DirichletCharacter};
use crate::error::domain;
use crate::report::{EvalResult, IdentityReport};
use crate::special::{bessel_j, exp_weighted_bessel_i, gamma_real};
use crate::summation::{
    a_q, accel, d_q, quadrature, sum_double_exponential, sum_exponential, DoubleTailProfile,
    FunctionalEquationInstance, TailProfile, ACCEL_SAFETY,
};
use crate::Result;

/// Default coefficient-table length for the conditionally convergent
/// series (Riesz means and the Voronoi Bessel series).
pub const DEFAULT_TABLE_LEN: u64 = 1_000_000;

fn fmt_complex(t: Complex64) -> String {
    if t.im == 0.0 {
        format!("{}", t.re)
    } else if t.im > 0.0 {
        format!("{}+{}i", t.re, t.im)
    } else {
        format!("{}-{}i", t.re, -t.im)
    }
}

fn clamp_tol(tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !(tol < 1.0) {
        return Err(domain(format!("tolerance must be in (0, 1), got {tol}")));
    }
    Ok(tol.max(1e-14))
}

fn require_right_half_plane(t: Complex64, what: &str) -> Result<()> {
    if !(t.re > 0.0) || !t.im.is_finite() {
        return Err(domain(format!(
            "{what} must lie in the right half plane, got {t}"
        )));
    }
    Ok(())
}

/// Crude certified bound `r_k(n) <= 3^k n^{k/2}` (each of the `k`
/// coordinates is one of at most `2 sqrt(n) + 1 <= 3 sqrt(n)` values).
fn rk_envelope(k: u32) -> (f64, f64) {
    (3f64.powi(k as i32), k as f64 / 2.0)
}

/// The two-sided Bessel-kernel transformation for `r_k` (the sum-of-squares
/// generating identity with `J` on one side and `I` on the other):
///
/// `pi^{k/2-1} z^{k/4-1/2} / Gamma(k/2)
///   + sum_n r_k(n) J_{k/2-1}(2 pi sqrt(n z)) n^{-(k/4-1/2)} e^{-pi n t}`
/// `= (e^{-pi z/t}/t) { pi^{k/2-1} z^{k/4-1/2} / (t^{k/2-1} Gamma(k/2))
///   + sum_n r_k(n) I_{k/2-1}(2 pi sqrt(n z)/t) n^{-(k/4-1/2)} e^{-pi n/t} }`
///
/// for `z > 0` and `Re t > 0`.
pub fn popov_identity_residual(k: u32, z: f64, t: Complex64) -> Result<IdentityReport> {
    popov_identity_residual_with_tol(k, z, t, 1e-11)
}

/// [`popov_identity_residual`] with an explicit per-side series tolerance.
pub fn popov_identity_residual_with_tol(
    k: u32,
    z: f64,
    t: Complex64,
    tol: f64,
) -> Result<IdentityReport> {
    if k < 2 {
        return Err(domain("identity requires k >= 2"));
    }
    if !(z > 0.0) {
        return Err(domain(format!("z must be positive, got {z}")));
    }
    require_right_half_plane(t, "t")?;
    let tol = clamp_tol(tol)?;
    let start = Instant::now();
    let nu = k as f64 / 2.0 - 1.0;
    let gp = k as f64 / 4.0 - 0.5; // exponent of the n^{-gp} weight
    let gam = gamma_real(k as f64 / 2.0)?;
    let c0 = PI.powf(k as f64 / 2.0 - 1.0) * z.powf(gp) / gam.value;

    // LHS series
    let (cb, gb) = rk_envelope(k);
    let lhs_profile = TailProfile {
        coeff: cb,
        growth: gb - gp,
        sqrt_boost: 0.0,
        decay: PI * t.re,
    };
    let n_lhs = lhs_profile.required_terms(tol)?;
    let a = rk_table(k, n_lhs)?;
    let lhs_sum = sum_exponential(
        |n| {
            let nf = n as f64;
            let j = bessel_j(nu, 2.0 * PI * (nf * z).sqrt())?;
            let w = nf.powf(-gp);
            let e = (-PI * nf * t).exp();
            Ok(EvalResult::new(
                a.value(n) * j.value * w * e,
                a.value(n).norm() * w * e.norm() * j.abs_error_bound,
            ))
        },
        &lhs_profile,
        tol,
    )?;
    let lhs = EvalResult::new(
        Complex64::new(c0, 0.0) + lhs_sum.value,
        lhs_sum.tail_bound + c0 * (gam.abs_error_bound / gam.value + 4.0 * f64::EPSILON),
    );

    // RHS series (everything expressed through the overflow-safe combined
    // kernel e^{-pi(n+z)/t} I_nu(2 pi sqrt(nz)/t))
    let inv_t = t.inv();
    let alpha = PI * inv_t.re;
    if !(alpha > 0.0) {
        return Err(domain("1/t must have positive real part"));
    }
    let rhs_profile = TailProfile {
        coeff: cb,
        growth: gb - gp,
        sqrt_boost: 2.0 * PI * z.sqrt() * inv_t.norm(),
        decay: alpha,
    };
    let n_rhs = rhs_profile.required_terms(tol)?;
    let a2 = rk_table(k, n_rhs)?;
    let rhs_sum = sum_exponential(
        |n| {
            let nf = n as f64;
            let i = exp_weighted_bessel_i(nu, nf, z, inv_t)?;
            let w = nf.powf(-gp);
            Ok(EvalResult::new(
                a2.value(n) * i.value * w,
                a2.value(n).norm() * w * i.abs_error_bound,
            ))
        },
        &rhs_profile,
        tol,
    )?;
    let pref = inv_t; // 1/t
    let head = Complex64::new(c0, 0.0) * (-PI * z * inv_t).exp() / t.powf(k as f64 / 2.0 - 1.0);
    let rhs_val = pref * (head + rhs_sum.value);
    let rhs = EvalResult::new(
        rhs_val,
        inv_t.norm()
            * (rhs_sum.tail_bound
                + head.norm() * (gam.abs_error_bound / gam.value + 8.0 * f64::EPSILON)),
    );

    let mut report = IdentityReport::from_sides(
        "popov",
        format!("k={k} z={z} t={}", fmt_complex(t)),
        lhs,
        rhs,
        lhs_sum.terms_used + rhs_sum.terms_used,
    );
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Theta-function transformation: with
/// `theta_k(y) = sum_{n >= 0} r_k(n) e^{-pi n y}` (so `theta_k = theta_1^k`),
/// verify `theta_k(y) = y^{-k/2} theta_k(1/y)` for `Re y > 0`.
pub fn theta_transform_residual(k: u32, y: Complex64) -> Result<IdentityReport> {
    theta_transform_residual_with_tol(k, y, 1e-13)
}

/// [`theta_transform_residual`] with an explicit per-side series tolerance.
pub fn theta_transform_residual_with_tol(k: u32, y: Complex64, tol: f64) -> Result<IdentityReport> {
    if k < 1 {
        return Err(domain("theta transform requires k >= 1"));
    }
    require_right_half_plane(y, "y")?;
    let tol = clamp_tol(tol)?;
    let start = Instant::now();
    let (cb, gb) = rk_envelope(k);

    let theta = |arg: Complex64| -> Result<(EvalResult<Complex64>, u64)> {
        let profile = TailProfile {
            coeff: cb,
            growth: gb,
            sqrt_boost: 0.0,
            decay: PI * arg.re,
        };
        let n = profile.required_terms(tol)?;
        let a = rk_table(k, n)?;
        let s = sum_exponential(
            |m| {
                Ok(EvalResult::new(
                    a.value(m) * (-PI * m as f64 * arg).exp(),
                    0.0,
                ))
            },
            &profile,
            tol,
        )?;
        Ok((
            EvalResult::new(Complex64::new(1.0, 0.0) + s.value, s.tail_bound),
            s.terms_used,
        ))
    };

    let (lhs, n1) = theta(y)?;
    let inv_y = y.inv();
    let (th_inv, n2) = theta(inv_y)?;
    let scale = y.powf(-(k as f64) / 2.0);
    let rhs = EvalResult::new(
        scale * th_inv.value,
        scale.norm() * (th_inv.abs_error_bound + 8.0 * f64::EPSILON * th_inv.value.norm()),
    );
    let mut report = IdentityReport::from_sides(
        "theta",
        format!("k={k} y={}", fmt_complex(y)),
        lhs,
        rhs,
        n1 + n2,
    );
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Riesz-mean explicit formula `A_q(x) = Q_q(x) + D_q(x)` for a
/// functional-equation instance. The convergence guard on `q` is enforced
/// by [`d_q`]; violations surface as `Error::ConvergenceGuard`.
pub fn cn_identity_residual(
    inst: &FunctionalEquationInstance,
    q: f64,
    x: f64,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let lhs = a_q(inst, q, x)?;
    let qq = inst.q_q(q, x)?;
    let d = d_q(inst, q, x)?;
    let rhs = EvalResult::new(qq + d.value, d.tail_bound + 16.0 * f64::EPSILON * qq.norm());
    let mut report = IdentityReport::from_sides(
        "cn",
        format!("instance={} q={q} x={x}", inst.label),
        lhs,
        rhs,
        d.terms_used,
    );
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Kernel `phi(n) = pi n^{-nu/2} int_0^x u^{nu/2} J_nu(2 pi sqrt(n u))
/// e^{-pi s u} du` for the Voronoi summation formula, with a certified
/// evaluation error bound.
///
/// Small `n` uses adaptive quadrature directly. Larger `n` uses the exact
/// integration-by-parts expansion
/// `int = (e^{-pi s x}/pi) sum_{j>=1} s^{j-1} x^{(nu+j)/2} n^{-j/2}
///  J_{nu+j}(2 pi sqrt(n x))`,
/// whose weights decay geometrically with ratio `s sqrt(x/n) <= 1/2` once
/// `n >= 4 s^2 x`, so truncation is certified by `|J| <= 1` and no
/// cancellation occurs.
fn voronoi_kernel(nu: f64, s: f64, x: f64, n: u64, n_quad: u64) -> Result<EvalResult<f64>> {
    let nf = n as f64;
    if n <= n_quad {
        let mut f = |u: f64| -> Result<EvalResult<f64>> {
            let j = bessel_j(nu, 2.0 * PI * (nf * u).sqrt())?;
            let w = if nu == 0.0 { 1.0 } else { u.powf(nu / 2.0) };
            let e = (-PI * s * u).exp();
            Ok(EvalResult::new(w * e * j.value, w * e * j.abs_error_bound))
        };
        let integral = quadrature(&mut f, 0.0, x, 1e-13)?;
        let scale = PI * nf.powf(-nu / 2.0);
        return Ok(EvalResult::new(
            scale * integral.value,
            scale * integral.abs_error_bound,
        ));
    }
    let y = 2.0 * PI * (nf * x).sqrt();
    let ratio = s * (x / nf).sqrt();
    let mut w = x.powf((nu + 1.0) / 2.0) / nf.sqrt();
    let mut acc = 0.0f64;
    let mut eval_bound = 0.0f64;
    let w_floor = 1e-18 * w.max(1.0);
    let mut j = 1u32;
    loop {
        let jv = bessel_j(nu + j as f64, y)?;
        acc += w * jv.value;
        eval_bound += w * jv.abs_error_bound;
        w *= ratio;
        j += 1;
        if w <= w_floor || j > 500 {
            break;
        }
    }
    // |J| <= 1 certifies the geometric truncation tail
    let trunc = w / (1.0 - ratio);
    let outer = (-PI * s * x).exp() * nf.powf(-nu / 2.0);
    Ok(EvalResult::new(
        outer * acc,
        outer * (eval_bound + trunc + j as f64 * f64::EPSILON * acc.abs().max(w)),
    ))
}

/// Voronoi summation formula for `r_k` with the exponential test function
/// `f(u) = e^{-pi s u}`:
///
/// `sum'_{n <= x} r_k(n) e^{-pi n s}
///  = -1 + (pi^{k/2}/Gamma(k/2)) int_0^x u^{k/2-1} e^{-pi s u} du
///    + pi sum_{n>=1} r_k(n) n^{-nu/2} int_0^x u^{nu/2}
///      J_nu(2 pi sqrt(n u)) e^{-pi s u} du`,  `nu = k/2 - 1`.
///
/// The infinite Bessel series on the right converges only conditionally
/// and is evaluated with the acceleration engine; its safety-scaled
/// spread dominates the budget.
pub fn voronoi_residual(k: u32, s: f64, x: f64, table_len: u64) -> Result<IdentityReport> {
    if k < 2 {
        return Err(domain("identity requires k >= 2"));
    }
    if !(s > 0.0) || !(x > 0.0) {
        return Err(domain(format!("need s > 0 and x > 0, got s={s}, x={x}")));
    }
    let start = Instant::now();
    let nu = k as f64 / 2.0 - 1.0;
    let n = table_len.max(10_000);
    let a = rk_table(k, n.max(x.ceil() as u64 + 1))?;

    // LHS: finite sum with the half-weight convention at n = x
    let mut lhs_val = 0.0f64;
    let mut m = 1u64;
    while (m as f64) <= x {
        let w = if ((m as f64) - x).abs() <= 1e-12 * x.max(1.0) {
            0.5
        } else {
            1.0
        };
        lhs_val += w * a.value(m).re * (-PI * m as f64 * s).exp();
        m += 1;
    }
    let lhs = EvalResult::new(
        Complex64::new(lhs_val, 0.0),
        (m as f64) * f64::EPSILON * lhs_val.abs(),
    );

    // main term
    let gam = gamma_real(k as f64 / 2.0)?;
    let mut f_main = |u: f64| -> Result<EvalResult<f64>> {
        let w = if u == 0.0 && k == 2 {
            1.0
        } else {
            u.powf(k as f64 / 2.0 - 1.0)
        };
        Ok(EvalResult::new(w * (-PI * s * u).exp(), 0.0))
    };
    let main = quadrature(&mut f_main, 0.0, x, 1e-13)?;
    let main_coeff = PI.powf(k as f64 / 2.0) / gam.value;

    // Bessel series via acceleration
    let n_quad = 32u64.max((4.0 * s * s * x).ceil() as u64);
    let mut phi = Vec::with_capacity(n as usize);
    let mut eval_bound = 0.0f64;
    for i in 1..=n {
        let kern = voronoi_kernel(nu, s, x, i, n_quad)?;
        phi.push(kern.value);
        eval_bound += a.value(i).norm() * kern.abs_error_bound;
    }
    let mean_c = PI.powf(k as f64 / 2.0) / gam.value;
    let mean_g = k as f64 / 2.0 - 1.0;
    let out = accel::accelerated_oscillatory_sum(&phi, &mut |i| a.value(i), &|t| {
        Complex64::new(mean_c * t.powf(mean_g), 0.0)
    });

    let rhs_val = Complex64::new(-1.0 + main_coeff * main.value, 0.0) + out.value;
    let rhs = EvalResult::new(
        rhs_val,
        ACCEL_SAFETY * out.error_estimate
            + eval_bound
            + main_coeff * main.abs_error_bound
            + main_coeff * main.value * gam.abs_error_bound / gam.value
            + 1e3 * f64::EPSILON,
    );
    let mut report =
        IdentityReport::from_sides("voronoi", format!("k={k} s={s} x={x}"), lhs, rhs, n);
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Analogue of the two-sided kernel transformation for an odd primitive
/// character `chi` mod prime `q`, with `d_chi(n) = sum_{d|n} chi(d)`:
///
/// `sum_n d_chi(n) J_0(4 pi sqrt(n z)) e^{-n pi t}
///  = -L(0,chi)/2 + (L(1,chi)/(pi t)) e^{-4 pi z/t}
///    - (2 i tau(chi)/(t q)) sum_n d_chibar(n)
///      e^{-4 pi (n/q + z)/t} I_0((8 pi/t) sqrt(n z / q))`
///
/// for `z > 0`, `Re t > 0`.
pub fn odd_char_identity_residual(
    chi: &DirichletCharacter,
    z: f64,
    t: Complex64,
) -> Result<IdentityReport> {
    odd_char_identity_residual_with_tol(chi, z, t, 1e-11)
}

/// [`odd_char_identity_residual`] with an explicit per-side series tolerance.
pub fn odd_char_identity_residual_with_tol(
    chi: &DirichletCharacter,
    z: f64,
    t: Complex64,
    tol: f64,
) -> Result<IdentityReport> {
    if !chi.is_odd || !chi.is_primitive {
        return Err(domain("identity requires an odd primitive character"));
    }
    if !(z > 0.0) {
        return Err(domain(format!("z must be positive, got {z}")));
    }
    require_right_half_plane(t, "t")?;
    let tol = clamp_tol(tol)?;
    let start = Instant::now();
    let qf = chi.modulus as f64;

    // LHS: |d_chi(n)| <= d(n) <= 2 sqrt(n)
    let lhs_profile = TailProfile {
        coeff: 2.0,
        growth: 0.5,
        sqrt_boost: 0.0,
        decay: PI * t.re,
    };
    let n_lhs = lhs_profile.required_terms(tol)?;
    let dchi = d_chi_table(chi, n_lhs);
    let lhs_sum = sum_exponential(
        |n| {
            let nf = n as f64;
            let j = bessel_j(0.0, 4.0 * PI * (nf * z).sqrt())?;
            let e = (-PI * nf * t).exp();
            Ok(EvalResult::new(
                dchi.value(n) * j.value * e,
                dchi.value(n).norm() * e.norm() * j.abs_error_bound,
            ))
        },
        &lhs_profile,
        tol,
    )?;
    let lhs = EvalResult::new(lhs_sum.value, lhs_sum.tail_bound);

    // RHS
    let inv_t = t.inv();
    let l0 = l_zero(chi)?;
    let l1 = l_one(chi)?;
    let tau = gauss_sum(chi);
    let chib = chi.conjugate();
    let rhs_profile = TailProfile {
        coeff: 2.0,
        growth: 0.5,
        sqrt_boost: 8.0 * PI * (z / qf).sqrt() * inv_t.norm(),
        decay: 4.0 * PI * inv_t.re / qf,
    };
    let n_rhs = rhs_profile.required_terms(tol)?;
    let dchib = d_chi_table(&chib, n_rhs);
    let rhs_sum = sum_exponential(
        |n| {
            let nf = n as f64;
            // e^{-4 pi (n/q + z)/t} I_0((8 pi/t) sqrt(nz/q)) expressed via
            // the stable combined kernel with arguments (4n/q, 4z)
            let i = exp_weighted_bessel_i(0.0, 4.0 * nf / qf, 4.0 * z, inv_t)?;
            Ok(EvalResult::new(
                dchib.value(n) * i.value,
                dchib.value(n).norm() * i.abs_error_bound,
            ))
        },
        &rhs_profile,
        tol,
    )?;
    let series_coeff = Complex64::new(0.0, -2.0) * tau * inv_t / qf;
    let rhs_val =
        -0.5 * l0 + l1 * inv_t / PI * (-4.0 * PI * z * inv_t).exp() + series_coeff * rhs_sum.value;
    let rhs = EvalResult::new(
        rhs_val,
        series_coeff.norm() * rhs_sum.tail_bound
            + 64.0 * f64::EPSILON * (l0.norm() + l1.norm() * inv_t.norm()),
    );
    let mut report = IdentityReport::from_sides(
        "odd-char",
        format!(
            "q={} chi={} z={z} t={}",
            chi.modulus,
            chi.index,
            fmt_complex(t)
        ),
        lhs,
        rhs,
        lhs_sum.terms_used + rhs_sum.terms_used,
    );
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// The double sum `sum_{m>=1, r>=0} e^{-4 pi (m(r+theta0) + z)/t}
/// I_0((8 pi/t) sqrt(m (r+theta0) z))`, with certified lattice tail.
fn sine_double_sum(theta0: f64, z: f64, t: f64, tol: f64) -> Result<crate::report::TruncatedSum> {
    let profile = DoubleTailProfile {
        coeff: 1.0,
        theta0,
        sqrt_boost: 8.0 * PI * z.sqrt() / t,
        decay: 4.0 * PI / t,
    };
    sum_double_exponential(
        |m, r| {
            let u = m as f64 * (r as f64 + theta0);
            exp_weighted_bessel_i(0.0, 4.0 * u, 4.0 * z, Complex64::new(1.0 / t, 0.0))
        },
        &profile,
        tol,
    )
}

/// Sine-weighted divisor identity: for `theta = a/b` in `(0,1)`,
///
/// `sum_n J_0(4 pi sqrt(n z)) e^{-n pi t} sum_{d|n} sin(2 pi d theta)
///  = -cot(pi theta)/4 + (e^{-4 pi z/t}/t)(1/2 - theta)
///    + (1/t) [ S(theta) - S(1 - theta) ]`
///
/// where `S(theta0) = sum_{m,r} e^{-4 pi (m(r+theta0)+z)/t}
/// I_0((8 pi/t) sqrt(m(r+theta0) z))`, for `z > 0`, `t > 0`.
pub fn sine_identity_residual(
    theta_num: u64,
    theta_den: u64,
    z: f64,
    t: f64,
) -> Result<IdentityReport> {
    sine_identity_residual_with_tol(theta_num, theta_den, z, t, 1e-10)
}

/// [`sine_identity_residual`] with an explicit per-side series tolerance.
pub fn sine_identity_residual_with_tol(
    theta_num: u64,
    theta_den: u64,
    z: f64,
    t: f64,
    tol: f64,
) -> Result<IdentityReport> {
    if theta_num == 0 || theta_num >= theta_den {
        return Err(domain(format!(
            "theta = {theta_num}/{theta_den} must lie strictly inside (0, 1)"
        )));
    }
    if !(z > 0.0) || !(t > 0.0) {
        return Err(domain(format!("need z > 0 and t > 0, got z={z}, t={t}")));
    }
    let tol = clamp_tol(tol)?;
    let start = Instant::now();
    let theta = theta_num as f64 / theta_den as f64;

    // LHS: |sum_{d|n} sin(2 pi d theta)| <= d(n) <= 2 sqrt(n)
    let lhs_profile = TailProfile {
        coeff: 2.0,
        growth: 0.5,
        sqrt_boost: 0.0,
        decay: PI * t,
    };
    let lhs_sum = sum_exponential(
        |n| {
            let nf = n as f64;
            let j = bessel_j(0.0, 4.0 * PI * (nf * z).sqrt())?;
            let c = sine_divisor_sum(n, theta_num, theta_den);
            let e = (-PI * nf * t).exp();
            Ok(EvalResult::new(
                Complex64::new(c * j.value * e, 0.0),
                c.abs() * e * j.abs_error_bound,
            ))
        },
        &lhs_profile,
        tol,
    )?;
    let lhs = EvalResult::new(lhs_sum.value, lhs_sum.tail_bound);

    // RHS
    let cot = (PI * theta).cos() / (PI * theta).sin();
    let pref = (-4.0 * PI * z / t).exp() / t;
    let s_plus = sine_double_sum(theta, z, t, tol)?;
    let s_minus = sine_double_sum(1.0 - theta, z, t, tol)?;
    let rhs_val = Complex64::new(-0.25 * cot + pref * (0.5 - theta), 0.0)
        + (s_plus.value - s_minus.value) / t;
    let rhs = EvalResult::new(
        rhs_val,
        (s_plus.tail_bound + s_minus.tail_bound) / t + 16.0 * f64::EPSILON * (cot.abs() + pref),
    );
    let mut report = IdentityReport::from_sides(
        "sine",
        format!("theta={theta_num}/{theta_den} z={z} t={t}"),
        lhs,
        rhs,
        lhs_sum.terms_used + s_plus.terms_used + s_minus.terms_used,
    );
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Character-average reduction from the odd-character identity to the
/// sine identity at `theta = a/q` (`q` prime, `0 < a < q`): three reports,
/// one per ingredient.
///
/// 1. `reduction-l0`: `(1/(i phi(q))) sum_{chi odd} chi(a) tau(chibar) L(0,chi)
///    = cot(pi a/q)/2`;
/// 2. `reduction-l1`: `(1/(i phi(q))) sum_{chi odd} chi(a) tau(chibar) L(1,chi)
///    = pi (1/2 - a/q)`;
/// 3. `reduction-series`: the same average of the dual `I_0`-series equals
///    the difference of the two lattice double sums at `theta0 = a/q` and
///    `1 - a/q` (both sides computed with certified tails, at `z`, `t`).
pub fn character_reduction_check(q: u32, a: u32, z: f64, t: f64) -> Result<Vec<IdentityReport>> {
    if a == 0 || a >= q {
        return Err(domain(format!("need 0 < a < q, got a={a}, q={q}")));
    }
    if !(z > 0.0) || !(t > 0.0) {
        return Err(domain(format!("need z > 0 and t > 0, got z={z}, t={t}")));
    }
    let start = Instant::now();
    let chars = enumerate_characters(q)?;
    let odd: Vec<&DirichletCharacter> = chars.iter().filter(|c| c.is_odd).collect();
    if odd.is_empty() {
        return Err(domain(format!("no odd characters mod {q}")));
    }
    let phi_q = (q - 1) as f64; // Euler phi of a prime
    let inv_iphi = (Complex64::new(0.0, 1.0) * phi_q).inv();
    let theta = a as f64 / q as f64;
    let tol = 1e-12;

    let mut reports = Vec::with_capacity(3);

    // (1) L(0, chi) average
    let mut acc = Complex64::new(0.0, 0.0);
    for chi in &odd {
        acc += chi.eval(a as u64) * gauss_sum(&chi.conjugate()) * l_zero(chi)?;
    }
    let lhs0 = EvalResult::new(
        inv_iphi * acc,
        64.0 * f64::EPSILON * (acc.norm() / phi_q).max(1.0),
    );
    let rhs0 = EvalResult::new(
        Complex64::new(0.5 * (PI * theta).cos() / (PI * theta).sin(), 0.0),
        16.0 * f64::EPSILON,
    );
    reports.push(IdentityReport::from_sides(
        "reduction-l0",
        format!("q={q} a={a}"),
        lhs0,
        rhs0,
        odd.len() as u64,
    ));

    // (2) L(1, chi) average
    let mut acc = Complex64::new(0.0, 0.0);
    for chi in &odd {
        acc += chi.eval(a as u64) * gauss_sum(&chi.conjugate()) * l_one(chi)?;
    }
    let lhs1 = EvalResult::new(
        inv_iphi * acc,
        64.0 * f64::EPSILON * (acc.norm() / phi_q).max(1.0),
    );
    let rhs1 = EvalResult::new(Complex64::new(PI * (0.5 - theta), 0.0), 16.0 * f64::EPSILON);
    reports.push(IdentityReport::from_sides(
        "reduction-l1",
        format!("q={q} a={a}"),
        lhs1,
        rhs1,
        odd.len() as u64,
    ));

    // (3) dual-series average vs lattice double sums
    let qf = q as f64;
    let inv_t = Complex64::new(1.0 / t, 0.0);
    let profile = TailProfile {
        coeff: 2.0,
        growth: 0.5,
        sqrt_boost: 8.0 * PI * (z / qf).sqrt() / t,
        decay: 4.0 * PI / (t * qf),
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut acc_bound = 0.0f64;
    let mut terms = 0u64;
    for chi in &odd {
        let tau = gauss_sum(chi);
        let chib = chi.conjugate();
        let n_terms = profile.required_terms(tol)?;
        let dchib = d_chi_table(&chib, n_terms);
        let inner = sum_exponential(
            |n| {
                let nf = n as f64;
                let i = exp_weighted_bessel_i(0.0, 4.0 * nf / qf, 4.0 * z, inv_t)?;
                Ok(EvalResult::new(
                    dchib.value(n) * i.value,
                    dchib.value(n).norm() * i.abs_error_bound,
                ))
            },
            &profile,
            tol,
        )?;
        // the full third RHS piece of the odd-character identity
        let piece = Complex64::new(0.0, -2.0) * tau / (t * qf) * inner.value;
        acc += chi.eval(a as u64) * gauss_sum(&chib) * piece;
        acc_bound += (gauss_sum(&chib).norm() * 2.0 * tau.norm() / (t * qf)) * inner.tail_bound;
        terms += inner.terms_used;
    }
    let lhs2 = EvalResult::new(inv_iphi * acc, acc_bound / phi_q);
    let s_plus = sine_double_sum(theta, z, t, tol)?;
    let s_minus = sine_double_sum(1.0 - theta, z, t, tol)?;
    let rhs2 = EvalResult::new(
        (s_plus.value - s_minus.value) / t,
        (s_plus.tail_bound + s_minus.tail_bound) / t,
    );
    terms += s_plus.terms_used + s_minus.terms_used;
    let mut rep = IdentityReport::from_sides(
        "reduction-series",
        format!("q={q} a={a} z={z} t={t}"),
        lhs2,
        rhs2,
        terms,
    );
    rep.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    reports.push(rep);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::chi4_odd;
    use crate::summation::rk_instance;

    #[test]
    fn popov_k2_real_t() {
        let r = popov_identity_residual(2, 0.7, Complex64::new(1.0, 0.0)).unwrap();
        assert!(r.passed(), "residual {} budget {}", r.residual, r.budget);
        assert!(r.budget <= 1e-8, "budget {}", r.budget);
    }

    #[test]
    fn popov_k5_complex_t() {
        let r = popov_identity_residual(5, 1.5, Complex64::new(1.0, 0.5)).unwrap();
        assert!(r.passed(), "residual {} budget {}", r.residual, r.budget);
        assert!(r.budget <= 1e-8, "budget {}", r.budget);
    }

    #[test]
    fn theta_self_dual_point() {
        let r = theta_transform_residual(4, Complex64::new(1.0, 0.0)).unwrap();
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn theta_complex_argument() {
        let r = theta_transform_residual(2, Complex64::new(1.0, 1.0)).unwrap();
        assert!(r.passed() && r.residual <= 1e-8, "{}", r.residual);
    }

    #[test]
    fn voronoi_k2_small() {
        let r = voronoi_residual(2, 1.0, 0.5, 200_000).unwrap();
        assert!(r.passed(), "residual {} budget {}", r.residual, r.budget);
    }

    #[test]
    fn cn_guard_refuses_r4_q0() {
        let inst = rk_instance(4, 2000).unwrap();
        assert!(matches!(
            cn_identity_residual(&inst, 0.0, 7.3),
            Err(crate::Error::ConvergenceGuard(_))
        ));
    }

    #[test]
    fn odd_char_mod4() {
        let chi = chi4_odd();
        let r = odd_char_identity_residual(&chi, 0.5, Complex64::new(1.0, 0.0)).unwrap();
        assert!(r.passed(), "residual {} budget {}", r.residual, r.budget);
        assert!(r.budget <= 1e-8, "budget {}", r.budget);
    }

    #[test]
    fn sine_theta_third() {
        let r = sine_identity_residual(1, 3, 0.3, 1.0).unwrap();
        assert!(r.passed(), "residual {} budget {}", r.residual, r.budget);
        assert!(r.budget <= 1e-7, "budget {}", r.budget);
    }

    #[test]
    fn sine_reflection_antisymmetry() {
        let a = sine_identity_residual(2, 7, 0.5, 1.2).unwrap();
        let b = sine_identity_residual(5, 7, 0.5, 1.2).unwrap();
        assert!((a.lhs_re + b.lhs_re).abs() <= a.budget + b.budget + 1e-12);
    }

    #[test]
    fn reduction_mod5() {
        let reps = character_reduction_check(5, 2, 0.4, 1.0).unwrap();
        for r in &reps {
            assert!(
                r.passed(),
                "{}: residual {} budget {}",
                r.identity_id,
                r.residual,
                r.budget
            );
        }
        assert!(reps[0].residual <= 1e-10 && reps[1].residual <= 1e-10);
    }
}

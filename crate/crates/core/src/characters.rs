//! Dirichlet characters to prime moduli (plus the hard-coded modulus-4
//! case), Gauss sums, the finite closed forms for `L(0, chi)` and
//! `L(1, chi)`, and the odd-character orthogonality and sine-decomposition
//! sums.
//!
//! Characters mod a prime `q` are generated from a primitive root `g`:
//! `chi_j(g^t) = exp(2 pi i j t / (q-1))`. Exponents are reduced exactly
//! before any floating-point evaluation, so the stored values are correctly
//! rounded roots of unity.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::Error;
use crate::Result;

/// Complete value table of one Dirichlet character.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    pub modulus: u32,
    /// Exponent index `j`: `chi(g^t) = e(j t / (q-1))` for the primitive
    /// root `g` used during enumeration (0 for the principal character).
    pub index: u32,
    /// `values[n]` is `chi(n)` for `0 <= n < modulus`.
    pub values: Vec<Complex64>,
    /// `chi(-1) = -1`.
    pub is_odd: bool,
    pub is_primitive: bool,
}

impl DirichletCharacter {
    /// `chi(n)`, reducing `n` modulo the conductor.
    pub fn eval(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus as u64) as usize]
    }

    /// The conjugate character `chi-bar`.
    pub fn conjugate(&self) -> DirichletCharacter {
        let order = if self.modulus > 2 {
            self.modulus - 1
        } else {
            1
        };
        DirichletCharacter {
            modulus: self.modulus,
            index: (order - self.index % order) % order,
            values: self.values.iter().map(|v| v.conj()).collect(),
            is_odd: self.is_odd,
            is_primitive: self.is_primitive,
        }
    }
}

/// The odd primitive character mod 4 (the only non-principal one).
pub fn chi4_odd() -> DirichletCharacter {
    DirichletCharacter {
        modulus: 4,
        index: 1,
        values: vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ],
        is_odd: true,
        is_primitive: true,
    }
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Euler's totient (trial division; moduli here are tiny).
pub fn euler_phi(q: u32) -> u32 {
    let mut n = q;
    let mut result = q;
    let mut p = 2u32;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root mod prime `q`.
fn primitive_root(q: u32) -> u32 {
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&p| pow_mod(g as u64, ((q - 1) / p) as u64, q as u64) != 1)
        })
        .expect("prime modulus has a primitive root")
}

/// All `q - 1` characters mod a prime `q`, built from a primitive root.
/// For prime `q` every non-principal character is primitive.
pub fn enumerate_characters(q: u32) -> Result<Vec<DirichletCharacter>> {
    if !is_prime(q) {
        return Err(Error::domain(format!("modulus {q} is not prime")));
    }
    if q == 2 {
        return Ok(vec![DirichletCharacter {
            modulus: 2,
            index: 0,
            values: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            is_odd: false,
            is_primitive: false,
        }]);
    }
    let g = primitive_root(q) as u64;
    let order = (q - 1) as u64;
    // discrete logs: dlog[g^t mod q] = t
    let mut dlog = vec![0u64; q as usize];
    let mut pow = 1u64;
    for t in 0..order {
        dlog[pow as usize] = t;
        pow = pow * g % q as u64;
    }
    let chars = (0..order)
        .map(|j| {
            let mut values = vec![Complex64::new(0.0, 0.0); q as usize];
            for n in 1..q as u64 {
                let e = j * dlog[n as usize] % order;
                let angle = 2.0 * PI * e as f64 / order as f64;
                values[n as usize] = Complex64::new(angle.cos(), angle.sin());
            }
            let is_odd = (values[(q - 1) as usize] - Complex64::new(-1.0, 0.0)).norm() < 1e-9;
            DirichletCharacter {
                modulus: q,
                index: j as u32,
                values,
                is_odd,
                is_primitive: j != 0,
            }
        })
        .collect();
    Ok(chars)
}

/// Gauss sum `tau(chi) = sum_{h=1}^{q-1} chi(h) e^{2 pi i h / q}`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus as u64;
    (1..q)
        .map(|h| {
            let angle = 2.0 * PI * h as f64 / q as f64;
            chi.eval(h) * Complex64::new(angle.cos(), angle.sin())
        })
        .sum()
}

fn require_odd_primitive(chi: &DirichletCharacter, op: &str) -> Result<()> {
    if !chi.is_odd || !chi.is_primitive {
        return Err(Error::domain(format!(
            "{op} requires an odd primitive character (modulus {})",
            chi.modulus
        )));
    }
    Ok(())
}

/// `L(0, chi)` by the finite cotangent formula
/// `(i / (2 tau(chi-bar))) sum_h chi-bar(h) cot(pi h / q)`.
pub fn l_zero(chi: &DirichletCharacter) -> Result<Complex64> {
    require_odd_primitive(chi, "L(0,chi)")?;
    let q = chi.modulus as u64;
    let bar = chi.conjugate();
    let tau_bar = gauss_sum(&bar);
    let s: Complex64 = (1..q)
        .map(|h| {
            let x = PI * h as f64 / q as f64;
            bar.eval(h) * (x.cos() / x.sin())
        })
        .sum();
    Ok(Complex64::new(0.0, 1.0) / (2.0 * tau_bar) * s)
}

/// `L(1, chi)` by the finite formula
/// `(pi i / tau(chi-bar)) sum_h chi-bar(h) (1/2 - h/q)`.
pub fn l_one(chi: &DirichletCharacter) -> Result<Complex64> {
    require_odd_primitive(chi, "L(1,chi)")?;
    let q = chi.modulus as u64;
    let bar = chi.conjugate();
    let tau_bar = gauss_sum(&bar);
    let s: Complex64 = (1..q)
        .map(|h| bar.eval(h) * (0.5 - h as f64 / q as f64))
        .sum();
    Ok(Complex64::new(0.0, PI) / tau_bar * s)
}

/// `sum over odd chi of chi(a) chi-bar(h)` mod prime `q`, checked against
/// its closed form: `+phi(q)/2` if `h = a`, `-phi(q)/2` if `h = -a`,
/// else `0`.
pub fn odd_orthogonality(q: u32, a: u32, h: u32) -> Result<Complex64> {
    if a.is_multiple_of(q) || h.is_multiple_of(q) {
        return Err(Error::domain("a and h must be units mod q"));
    }
    let chars = enumerate_characters(q)?;
    let sum: Complex64 = chars
        .iter()
        .filter(|c| c.is_odd)
        .map(|c| c.eval(a as u64) * c.eval(h as u64).conj())
        .sum();
    let half_phi = euler_phi(q) as f64 / 2.0;
    let expected = if h % q == a % q {
        half_phi
    } else if (h + a).is_multiple_of(q) {
        -half_phi
    } else {
        0.0
    };
    if (sum - Complex64::new(expected, 0.0)).norm() > 1e-10 * (q as f64) {
        return Err(Error::domain(format!(
            "orthogonality sum {sum} deviates from closed form {expected} (q={q}, a={a}, h={h})"
        )));
    }
    Ok(sum)
}

/// Residual of the sine decomposition
/// `sin(2 pi n a / q) = (1 / (i phi(q))) sum over odd chi of
/// chi(a) tau(chi-bar) chi(n)`.
pub fn sine_decomposition_check(q: u32, a: u32, n: u64) -> Result<f64> {
    if a.is_multiple_of(q) {
        return Err(Error::domain("a must be a unit mod q"));
    }
    let chars = enumerate_characters(q)?;
    let sum: Complex64 = chars
        .iter()
        .filter(|c| c.is_odd)
        .map(|c| c.eval(a as u64) * gauss_sum(&c.conjugate()) * c.eval(n))
        .sum();
    let rhs = sum / Complex64::new(0.0, euler_phi(q) as f64);
    let residue = (n % q as u64) * (a as u64) % q as u64;
    let lhs = (2.0 * PI * residue as f64 / q as f64).sin();
    Ok((Complex64::new(lhs, 0.0) - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL_PRIMES: [u32; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

    #[test]
    fn enumeration_counts_and_parity() {
        assert_eq!(enumerate_characters(2).unwrap().len(), 1);
        let c3 = enumerate_characters(3).unwrap();
        assert_eq!(c3.len(), 2);
        assert_eq!(c3.iter().filter(|c| c.is_odd).count(), 1);
        let c5 = enumerate_characters(5).unwrap();
        assert_eq!(c5.len(), 4);
        assert_eq!(c5.iter().filter(|c| c.is_odd).count(), 2);
        assert!(enumerate_characters(6).is_err());
    }

    #[test]
    fn multiplicativity_and_unit_modulus() {
        for q in SMALL_PRIMES {
            for chi in enumerate_characters(q).unwrap() {
                assert_eq!(chi.eval(1), Complex64::new(1.0, 0.0));
                for m in 0..q as u64 {
                    for n in 0..q as u64 {
                        let lhs = chi.eval(m * n);
                        let rhs = chi.eval(m) * chi.eval(n);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
                for n in 1..q as u64 {
                    assert!((chi.eval(n).norm() - 1.0).abs() < 1e-12);
                }
                assert_eq!(
                    chi.is_odd,
                    (chi.eval((q - 1) as u64) - Complex64::new(-1.0, 0.0)).norm() < 1e-9
                );
            }
        }
    }

    #[test]
    fn gauss_sum_values() {
        let c3_odd = enumerate_characters(3)
            .unwrap()
            .into_iter()
            .find(|c| c.is_odd)
            .unwrap();
        let tau = gauss_sum(&c3_odd);
        assert!((tau - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-14);
        let tau4 = gauss_sum(&chi4_odd());
        assert!((tau4 - Complex64::new(0.0, 2.0)).norm() < 1e-14);
        for q in SMALL_PRIMES {
            for chi in enumerate_characters(q).unwrap() {
                if chi.is_primitive {
                    let t = gauss_sum(&chi);
                    assert!((t.norm_sqr() - q as f64).abs() < 1e-12 * q as f64);
                }
            }
        }
    }

    #[test]
    fn tau_chi_tau_chibar() {
        for q in SMALL_PRIMES {
            for chi in enumerate_characters(q).unwrap() {
                if chi.is_odd {
                    let prod = gauss_sum(&chi) * gauss_sum(&chi.conjugate());
                    assert!((prod - Complex64::new(-(q as f64), 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn l_values_mod4_and_mod3() {
        let l0 = l_zero(&chi4_odd()).unwrap();
        assert!((l0 - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let l1 = l_one(&chi4_odd()).unwrap();
        assert!((l1 - Complex64::new(PI / 4.0, 0.0)).norm() < 1e-12);
        let c3_odd = enumerate_characters(3)
            .unwrap()
            .into_iter()
            .find(|c| c.is_odd)
            .unwrap();
        let l0 = l_zero(&c3_odd).unwrap();
        assert!((l0 - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-13);
        let l1 = l_one(&c3_odd).unwrap();
        assert!((l1 - Complex64::new(PI / (3.0 * 3f64.sqrt()), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn l_zero_l_one_cross_identity() {
        // L(0,chi) = -(i tau(chi) / pi) L(1, chi-bar)
        for q in SMALL_PRIMES {
            for chi in enumerate_characters(q).unwrap() {
                if chi.is_odd {
                    let lhs = l_zero(&chi).unwrap();
                    let rhs = -Complex64::new(0.0, 1.0) * gauss_sum(&chi) / PI
                        * l_one(&chi.conjugate()).unwrap();
                    assert!((lhs - rhs).norm() < 1e-12, "q={q}");
                }
            }
        }
    }

    #[test]
    fn l_one_against_dirichlet_series() {
        // partial sums of sum chi(n)/n
        for q in [3u32, 5, 7] {
            for chi in enumerate_characters(q).unwrap() {
                if chi.is_odd {
                    let mut s = Complex64::new(0.0, 0.0);
                    for n in 1..=1_000_000u64 {
                        s += chi.eval(n) / n as f64;
                    }
                    assert!((s - l_one(&chi).unwrap()).norm() < 1e-5, "q={q}");
                }
            }
        }
    }

    #[test]
    fn orthogonality_all_pairs() {
        assert!((odd_orthogonality(5, 2, 2).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((odd_orthogonality(5, 2, 3).unwrap() - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!(odd_orthogonality(7, 2, 3).unwrap().norm() < 1e-12);
        for q in SMALL_PRIMES {
            for a in 1..q {
                for h in 1..q {
                    odd_orthogonality(q, a, h).unwrap();
                }
            }
        }
    }

    #[test]
    fn sine_decomposition() {
        assert!(sine_decomposition_check(3, 1, 1).unwrap() <= 1e-12);
        assert!(sine_decomposition_check(5, 2, 5).unwrap() <= 1e-12);
        assert!(sine_decomposition_check(7, 3, 10).unwrap() <= 1e-12);
        for q in SMALL_PRIMES {
            for a in 1..q {
                for n in 1..=30u64 {
                    assert!(sine_decomposition_check(q, a, n).unwrap() <= 1e-12);
                }
            }
        }
    }
}

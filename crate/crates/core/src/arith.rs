//! Exact coefficient tables: sums-of-squares counts `r_k(n)` and twisted
//! divisor sums `d_chi(n)`.
//!
//! `r_k` tables are built by repeated self-convolution of the one-square
//! sequence in 128-bit integers, so every stored value is exact. `d_chi`
//! tables hold complex root-of-unity combinations and are built by a
//! divisor sieve.

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::error::Error;
use crate::Result;

/// Which coefficient family a table holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceKind {
    /// `r_k(n)`: representations of `n` as an ordered sum of `k` signed squares.
    Rk {
        k: u32,
    },
    /// `d_chi(n) = sum over d | n of chi(d)`.
    DChi {
        modulus: u32,
    },
    Custom(String),
}

#[derive(Debug, Clone)]
enum Values {
    /// Exact integers; `table[i]` is the value at `n = i + 1`.
    Int { zero: i128, table: Vec<i128> },
    /// Complex values; `table[i]` is the value at `n = i + 1`.
    Cplx { table: Vec<Complex64> },
}

/// A dense, immutable coefficient table over `n = 1..=N_max`, with the
/// `n = 0` boundary value stored separately (it carries the half-weight
/// "primed sum" convention, not a table entry).
#[derive(Debug, Clone)]
pub struct ArithmeticSequence {
    pub kind: SequenceKind,
    values: Values,
}

impl ArithmeticSequence {
    pub fn n_max(&self) -> u64 {
        match &self.values {
            Values::Int { table, .. } => table.len() as u64,
            Values::Cplx { table } => table.len() as u64,
        }
    }

    /// Coefficient at `n >= 1` as a complex number. Panics if out of range.
    pub fn value(&self, n: u64) -> Complex64 {
        assert!(n >= 1 && n <= self.n_max(), "index {n} outside table");
        match &self.values {
            Values::Int { table, .. } => Complex64::new(table[(n - 1) as usize] as f64, 0.0),
            Values::Cplx { table } => table[(n - 1) as usize],
        }
    }

    /// Exact integer coefficient at `n >= 1`, when the table is exact.
    pub fn int_value(&self, n: u64) -> Option<i128> {
        match &self.values {
            Values::Int { table, .. } => Some(table[(n - 1) as usize]),
            Values::Cplx { .. } => None,
        }
    }

    /// The `n = 0` boundary value (1 for every `r_k`; 0 for `d_chi`, whose
    /// constant term lives in the closed-form polynomial instead).
    pub fn zero_value(&self) -> Complex64 {
        match &self.values {
            Values::Int { zero, .. } => Complex64::new(*zero as f64, 0.0),
            Values::Cplx { .. } => Complex64::new(0.0, 0.0),
        }
    }
}

/// One-square sequence on `0..=n_max`: 1 at 0, 2 at each positive square.
fn r1_values(n_max: usize) -> Vec<i128> {
    let mut v = vec![0i128; n_max + 1];
    v[0] = 1;
    let mut m = 1usize;
    while m * m <= n_max {
        v[m * m] = 2;
        m += 1;
    }
    v
}

/// Additive convolution with the one-square sequence, truncated at `n_max`.
fn convolve_r1(cur: &[i128]) -> Result<Vec<i128>> {
    let n_max = cur.len() - 1;
    let mut out = cur.to_vec(); // m = 0 contribution, weight 1
    let mut m = 1usize;
    while m * m <= n_max {
        let shift = m * m;
        for n in 0..=(n_max - shift) {
            let add = cur[n]
                .checked_mul(2)
                .and_then(|t| out[n + shift].checked_add(t));
            match add {
                Some(v) => out[n + shift] = v,
                None => return Err(Error::Overflow(format!("r_k table at n={}", n + shift))),
            }
        }
        m += 1;
    }
    Ok(out)
}

/// Exact table of `r_k(n)` for `1 <= n <= n_max` (with `r_k(0) = 1` kept as
/// the boundary value), via `k`-fold self-convolution of the one-square
/// sequence.
pub fn rk_table(k: u32, n_max: u64) -> Result<ArithmeticSequence> {
    if k < 1 || n_max < 1 {
        return Err(Error::domain("rk_table requires k >= 1 and N_max >= 1"));
    }
    let n = n_max as usize;
    let mut cur = r1_values(n);
    for _ in 1..k {
        cur = convolve_r1(&cur)?;
    }
    let zero = cur[0];
    cur.remove(0);
    Ok(ArithmeticSequence {
        kind: SequenceKind::Rk { k },
        values: Values::Int { zero, table: cur },
    })
}

/// Independent oracle: count integer `k`-tuples of squared norm exactly `n`
/// by direct recursion over coordinates (memoised on the remaining norm).
pub fn rk_bruteforce(k: u32, n: u64) -> u64 {
    assert!((1..=8).contains(&k) && n <= 10_000, "oracle scale exceeded");
    // memo[j][m] = number of j-tuples with squared norm m
    fn count(k: u32, n: u64, memo: &mut Vec<Vec<Option<u64>>>) -> u64 {
        if k == 0 {
            return u64::from(n == 0);
        }
        if let Some(v) = memo[k as usize][n as usize] {
            return v;
        }
        let mut total = count(k - 1, n, memo); // coordinate 0
        let mut a = 1u64;
        while a * a <= n {
            total += 2 * count(k - 1, n - a * a, memo);
            a += 1;
        }
        memo[k as usize][n as usize] = Some(total);
        total
    }
    let mut memo = vec![vec![None; n as usize + 1]; k as usize + 1];
    count(k, n, &mut memo)
}

/// Table of `d_chi(n) = sum over d | n of chi(d)` for `1 <= n <= n_max`,
/// filled by the divisor sieve (for each `d` with `chi(d) != 0`, add
/// `chi(d)` to every multiple of `d`).
pub fn d_chi_table(chi: &DirichletCharacter, n_max: u64) -> ArithmeticSequence {
    let n = n_max as usize;
    let mut table = vec![Complex64::new(0.0, 0.0); n];
    for d in 1..=n {
        let c = chi.eval(d as u64);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let mut m = d;
        while m <= n {
            table[m - 1] += c;
            m += d;
        }
    }
    ArithmeticSequence {
        kind: SequenceKind::DChi {
            modulus: chi.modulus,
        },
        values: Values::Cplx { table },
    }
}

/// `sum over d | n of sin(2 pi d theta)` for rational `theta = a/q`.
/// The angle is reduced exactly modulo `q` before the sine is taken, so no
/// precision is lost for large divisors.
pub fn sine_divisor_sum(n: u64, theta_num: u64, theta_den: u64) -> f64 {
    assert!(
        theta_num > 0 && theta_num < theta_den,
        "theta must lie in (0,1)"
    );
    let mut total = 0.0;
    let mut d = 1u64;
    let mut add = |d: u64| {
        let residue = (d % theta_den) * theta_num % theta_den;
        total += (2.0 * std::f64::consts::PI * residue as f64 / theta_den as f64).sin();
    };
    while d * d <= n {
        if n.is_multiple_of(d) {
            add(d);
            if d * d != n {
                add(n / d);
            }
        }
        d += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::chi4_odd;

    #[test]
    fn rk_small_values() {
        let t2 = rk_table(2, 10).unwrap();
        assert_eq!(t2.int_value(5), Some(8)); // (±1,±2),(±2,±1)
        assert_eq!(t2.zero_value().re, 1.0);
        let t3 = rk_table(3, 10).unwrap();
        assert_eq!(t3.int_value(7), Some(0));
        let t4 = rk_table(4, 10).unwrap();
        assert_eq!(t4.int_value(1), Some(8));
    }

    #[test]
    fn bruteforce_matches_examples() {
        assert_eq!(rk_bruteforce(2, 1), 4);
        assert_eq!(rk_bruteforce(2, 3), 0);
        assert_eq!(rk_bruteforce(8, 2), 112);
        assert_eq!(rk_bruteforce(3, 0), 1);
    }

    #[test]
    fn table_matches_bruteforce() {
        for k in 1..=8 {
            let t = rk_table(k, 200).unwrap();
            for n in 1..=200u64 {
                assert_eq!(
                    t.int_value(n).unwrap() as u64,
                    rk_bruteforce(k, n),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn convolution_consistency() {
        // r_{k1+k2}(n) = sum_{i+j=n} r_{k1}(i) r_{k2}(j), n=0 boundary included
        for (k1, k2) in [(1u32, 1u32), (2, 2), (2, 3), (3, 5)] {
            let a = rk_table(k1, 100).unwrap();
            let b = rk_table(k2, 100).unwrap();
            let c = rk_table(k1 + k2, 100).unwrap();
            let get = |t: &ArithmeticSequence, n: u64| -> i128 {
                if n == 0 {
                    1
                } else {
                    t.int_value(n).unwrap()
                }
            };
            for n in 0..=100u64 {
                let conv: i128 = (0..=n).map(|i| get(&a, i) * get(&b, n - i)).sum();
                assert_eq!(conv, get(&c, n), "k1={k1} k2={k2} n={n}");
            }
        }
    }

    #[test]
    fn d_chi_mod4_values() {
        let chi = chi4_odd();
        let t = d_chi_table(&chi, 10);
        assert_eq!(t.value(5), Complex64::new(2.0, 0.0));
        assert_eq!(t.value(1), Complex64::new(1.0, 0.0));
        assert_eq!(t.value(2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn d_chi_divisor_bound_and_multiplicativity() {
        let chi = chi4_odd();
        let t = d_chi_table(&chi, 500);
        let divisor_count = |n: u64| (1..=n).filter(|d| n.is_multiple_of(*d)).count() as f64;
        for n in 1..=500u64 {
            assert!(t.value(n).norm() <= divisor_count(n) + 1e-12);
        }
        for m in 2..=22u64 {
            for n in 2..=22u64 {
                if gcd(m, n) == 1 {
                    let lhs = t.value(m * n);
                    let rhs = t.value(m) * t.value(n);
                    assert!((lhs - rhs).norm() < 1e-12, "m={m} n={n}");
                }
            }
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn sine_divisor_examples() {
        assert!((sine_divisor_sum(1, 1, 4) - 1.0).abs() < 1e-15);
        assert!((sine_divisor_sum(2, 1, 4) - 1.0).abs() < 1e-15);
        for n in 1..=50u64 {
            assert!(sine_divisor_sum(n, 1, 2).abs() < 1e-12);
        }
    }
}

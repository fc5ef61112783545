use num::{BigInt, One, Zero};

use super::{Coeff, Rational};
use crate::error::{Error, Result};

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Generalized binomial coefficient `C(tau, j) = tau (tau-1) ... (tau-j+1) / j!`.
pub fn binomial<T: Coeff>(tau: &T, j: usize) -> T {
    let mut acc = T::one();
    for k in 0..j {
        acc = acc * (tau.clone() - T::from_i64(k as i64)) / T::from_i64(k as i64 + 1);
    }
    acc
}

/// `B_0..=B_m` with `B_1 = -1/2`, from `Σ_{k=0}^{n} C(n+1, k) B_k = 0`.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    // row holds C(n+1, k) for k = 0..=n+1
    let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    for n in 1..=m {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for k in 1..row.len() {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(row[k].clone()) * bk;
        }
        b.push(-acc / Rational::from_integer(row[n].clone()));
    }
    b
}

pub fn bernoulli(m: usize) -> Rational {
    bernoulli_numbers(m).pop().expect("nonempty")
}

/// Rows `0..=m` of the Stirling numbers of the second kind.
pub fn stirling2_table(m: usize) -> Vec<Vec<Rational>> {
    let mut table = vec![vec![Rational::zero(); m + 1]; m + 1];
    table[0][0] = Rational::one();
    for n in 1..=m {
        for j in 1..=n {
            let jj = Rational::from_integer(BigInt::from(j));
            table[n][j] = jj * &table[n - 1][j] + &table[n - 1][j - 1];
        }
    }
    table
}

/// Number of partitions of an `m`-set into `j` nonempty blocks.
pub fn stirling2(m: usize, j: usize) -> Rational {
    if j > m {
        return Rational::zero();
    }
    stirling2_table(m)[m][j].clone()
}

/// Glaisher-type coefficients with
/// `1/(ξ e^z - 1) = Σ_{m≥0} β_{m+1}(ξ) z^m / (m+1)!`, i.e.
/// `β_m(ξ) = (-1)^{m-1} m Σ_{j=1}^{m} S(m, j) (j-1)! / (ξ-1)^j`.
pub fn beta_glaisher<T: Coeff>(xi: &T, m: usize) -> Result<T> {
    let d = xi.clone() - T::one();
    if d.is_zero() {
        return Err(Error::GlaisherPole);
    }
    assert!(m >= 1, "beta_m is defined for m >= 1");
    let stirling = stirling2_table(m);
    let inv = T::one() / d;
    let mut inv_pow = T::one();
    let mut fact = T::one(); // (j-1)!
    let mut acc = T::zero();
    for j in 1..=m {
        inv_pow = inv_pow * inv.clone();
        if j > 1 {
            fact = fact * T::from_i64(j as i64 - 1);
        }
        acc = acc + rational_to::<T>(&stirling[m][j]) * fact.clone() * inv_pow.clone();
    }
    let sign = if m % 2 == 1 { T::one() } else { -T::one() };
    Ok(sign * T::from_i64(m as i64) * acc)
}

/// Convert an integer-valued rational into the coefficient field.
fn rational_to<T: Coeff>(r: &Rational) -> T {
    use num::ToPrimitive;
    match r.to_integer().to_i64() {
        Some(n) if r.is_integer() => T::from_i64(n),
        _ => {
            // large Stirling numbers: split into base-2^32 digits
            let (sign, digits) = r.to_integer().to_u32_digits();
            let radix = T::from_i64(1i64 << 32);
            let mut acc = T::zero();
            for d in digits.iter().rev() {
                acc = acc * radix.clone() + T::from_i64(*d as i64);
            }
            if sign == num::bigint::Sign::Minus {
                -acc
            } else {
                acc
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), q(0, 1));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    /// Akiyama–Tanigawa, which produces the B_1 = +1/2 convention.
    fn akiyama_tanigawa(m: usize) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut a: Vec<Rational> = Vec::new();
        for n in 0..=m {
            a.push(q(1, n as i64 + 1));
            for j in (1..=n).rev() {
                a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
            }
            out.push(a[0].clone());
        }
        out
    }

    #[test]
    fn bernoulli_matches_independent_algorithm() {
        let ours = bernoulli_numbers(30);
        let theirs = akiyama_tanigawa(30);
        for (m, (a, b)) in ours.iter().zip(theirs.iter()).enumerate() {
            if m == 1 {
                assert_eq!(a, &-b.clone());
            } else {
                assert_eq!(a, b, "B_{m}");
            }
        }
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0), q(1, 1));
        assert_eq!(stirling2(3, 2), q(3, 1));
        assert_eq!(stirling2(2, 3), q(0, 1));
        for m in 1..10 {
            assert_eq!(stirling2(m, 1), q(1, 1));
        }
    }

    /// Count set partitions by restricted growth strings.
    fn count_set_partitions(m: usize, j: usize) -> u64 {
        fn rec(pos: usize, m: usize, max: usize, j: usize) -> u64 {
            if pos == m {
                return u64::from(max == j);
            }
            let mut total = 0;
            for b in 0..=max.min(j.saturating_sub(1)) {
                let nmax = if b == max { max + 1 } else { max };
                total += rec(pos + 1, m, nmax, j);
            }
            total
        }
        if m == 0 {
            return u64::from(j == 0);
        }
        rec(0, m, 0, j)
    }

    #[test]
    fn stirling_matches_enumeration() {
        for m in 0..=8 {
            for j in 0..=m {
                assert_eq!(
                    stirling2(m, j),
                    Rational::from_integer(BigInt::from(count_set_partitions(m, j))),
                    "S({m},{j})"
                );
            }
        }
    }

    #[test]
    fn binomial_half_integer() {
        assert_eq!(binomial(&q(-3, 2), 2), q(15, 8));
        assert_eq!(binomial(&q(5, 1), 2), q(10, 1));
        assert_eq!(binomial(&q(5, 1), 7), q(0, 1));
    }

    #[test]
    fn beta_first_term() {
        let xi = Complex64::new(3.5, 0.25);
        let b1 = beta_glaisher(&xi, 1).unwrap();
        assert!((b1 - 1.0 / (xi - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn beta_rejects_pole() {
        assert_eq!(beta_glaisher(&q(1, 1), 2), Err(Error::GlaisherPole));
    }

    #[test]
    fn beta_generating_function() {
        // xi = gamma^2 for eps = 2/5
        let eps: f64 = 0.4;
        let g = (1.0 + (1.0 - eps * eps).sqrt()) / eps;
        let xi = Complex64::new(g * g, 0.0);
        let z = 1e-3;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut zpow = 1.0;
        let mut fact = 1.0;
        for m in 0..8 {
            fact *= (m + 1) as f64;
            sum += beta_glaisher(&xi, m + 1).unwrap() * zpow / fact;
            zpow *= z;
        }
        let direct = 1.0 / (xi * z.exp() - 1.0);
        assert!((sum - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn beta_large_xi_limit() {
        let xi = q(1_000_001, 1);
        let b1 = beta_glaisher(&xi, 1).unwrap();
        assert_eq!(b1 * (xi - q(1, 1)), q(1, 1));
    }
}

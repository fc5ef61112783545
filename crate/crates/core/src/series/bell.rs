//! Partial ordinary Bell polynomials `B̂_{i,j}(p_1, p_2, ...)`, the coefficient
//! of `x^i` in `(p_1 x + p_2 x^2 + ...)^j`.

use super::{binomial, factorial, Coeff};
use crate::error::{Error, Result};

/// Arguments `p_1, p_2, ...`; `args[0]` is `p_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellArguments<T>(pub Vec<T>);

impl<T: Coeff> BellArguments<T> {
    /// `p_i` with the 1-based indexing used by the polynomials.
    pub fn get(&self, i: usize) -> Option<&T> {
        i.checked_sub(1).and_then(|k| self.0.get(k))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn require(&self, i: usize) -> Result<()> {
        if self.0.len() < i {
            return Err(Error::UnderResolved {
                what: "Bell polynomial arguments",
                needed: i,
                available: self.0.len(),
            });
        }
        Ok(())
    }
}

/// All `B̂_{i,j}` with `0 <= i, j <= max_index`, built by repeated series powering.
#[derive(Debug, Clone)]
pub struct BellTable<T> {
    // rows[j][i] = B̂_{i,j}
    rows: Vec<Vec<T>>,
}

impl<T: Coeff> BellTable<T> {
    pub fn max_index(&self) -> usize {
        self.rows.len() - 1
    }

    /// `B̂_{i,j}`; zero when `j > i`.
    pub fn get(&self, i: usize, j: usize) -> T {
        if j > i {
            return T::zero();
        }
        self.rows[j][i].clone()
    }

    /// `Σ_{j=0}^{i} C(tau, j) B̂_{i,j}`: the coefficient of `x^i` in
    /// `(1 + p_1 x + p_2 x^2 + ...)^tau`.
    pub fn binomial_row_sum(&self, i: usize, tau: &T) -> T {
        (0..=i).fold(T::zero(), |acc, j| {
            let b = self.get(i, j);
            if b.is_zero() {
                acc
            } else {
                acc + binomial(tau, j) * b
            }
        })
    }
}

pub fn bell_table<T: Coeff>(max_index: usize, p: &BellArguments<T>) -> Result<BellTable<T>> {
    p.require(max_index)?;
    let n = max_index + 1;
    let mut base = vec![T::zero(); n];
    for i in 1..n {
        base[i] = p.0[i - 1].clone();
    }
    let mut rows = Vec::with_capacity(n);
    let mut power = vec![T::zero(); n];
    power[0] = T::one();
    rows.push(power.clone());
    for _ in 1..n {
        // power <- power * base, truncated; base has zero constant term
        let mut next = vec![T::zero(); n];
        for (a_idx, a) in power.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b_idx, b) in base.iter().enumerate().take(n - a_idx).skip(1) {
                next[a_idx + b_idx] = next[a_idx + b_idx].clone() + a.clone() * b.clone();
            }
        }
        power = next;
        rows.push(power.clone());
    }
    Ok(BellTable { rows })
}

/// `B̂_{i,j}(p)`. `B̂_{0,0} = 1`; zero when `j > i` or when `i > 0` and `j = 0`.
pub fn bell_hat<T: Coeff>(i: usize, j: usize, p: &BellArguments<T>) -> Result<T> {
    p.require(i)?;
    if j > i {
        return Ok(T::zero());
    }
    // powering only needs degree i
    Ok(bell_table(i, p)?.get(i, j))
}

/// `B̂_{i,j}` from the multi-index form
/// `Σ j!/(l_1! l_2! ...) p_1^{l_1} p_2^{l_2} ...` over `Σ k l_k = i`, `Σ l_k = j`.
pub fn bell_hat_partition_form<T: Coeff>(i: usize, j: usize, p: &BellArguments<T>) -> Result<T> {
    p.require(i)?;
    if j > i {
        return Ok(T::zero());
    }
    if i == 0 {
        return Ok(if j == 0 { T::one() } else { T::zero() });
    }
    let jfact = to_coeff::<T>(&factorial(j));
    let mut total = T::zero();
    let mut multiplicities = vec![0usize; i + 1];
    partitions(i, i, &mut multiplicities, &mut |mult| {
        let parts: usize = mult.iter().sum();
        if parts != j {
            return;
        }
        let mut term = jfact.clone();
        for (k, &l) in mult.iter().enumerate().skip(1) {
            if l == 0 {
                continue;
            }
            term = term / to_coeff::<T>(&factorial(l));
            for _ in 0..l {
                term = term * p.0[k - 1].clone();
            }
        }
        total = total.clone() + term;
    });
    Ok(total)
}

/// Enumerate integer partitions of `remaining` with parts at most `max_part`,
/// recording part multiplicities.
fn partitions(
    remaining: usize,
    max_part: usize,
    mult: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(mult);
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        mult[part] += 1;
        partitions(remaining - part, part, mult, visit);
        mult[part] -= 1;
    }
}

fn to_coeff<T: Coeff>(r: &super::Rational) -> T {
    use num::ToPrimitive;
    let n = r.numer().to_i64().expect("factorial fits in i64");
    let d = r.denom().to_i64().expect("factorial fits in i64");
    T::from_i64(n) / T::from_i64(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn args(v: &[(i64, i64)]) -> BellArguments<Rational> {
        BellArguments(v.iter().map(|&(n, d)| q(n, d)).collect())
    }

    /// Composition-sum oracle: Σ over n_1 + ... + n_j = i with n_k >= 1.
    fn compositions_oracle(i: usize, j: usize, p: &BellArguments<Rational>) -> Rational {
        fn rec(rem: usize, parts: usize, p: &BellArguments<Rational>) -> Rational {
            if parts == 0 {
                return if rem == 0 { q(1, 1) } else { q(0, 1) };
            }
            let mut acc = q(0, 1);
            for n in 1..=rem {
                acc += p.0[n - 1].clone() * rec(rem - n, parts - 1, p);
            }
            acc
        }
        if j == 0 {
            return if i == 0 { q(1, 1) } else { q(0, 1) };
        }
        rec(i, j, p)
    }

    #[test]
    fn single_part() {
        let p = args(&[(3, 1), (-2, 7), (5, 3), (1, 9)]);
        for i in 1..=4 {
            assert_eq!(bell_hat(i, 1, &p).unwrap(), p.get(i).unwrap().clone());
        }
    }

    #[test]
    fn three_two_is_two_p1_p2() {
        let p = args(&[(3, 1), (-2, 7), (5, 3)]);
        assert_eq!(bell_hat(3, 2, &p).unwrap(), q(2, 1) * q(3, 1) * q(-2, 7));
    }

    #[test]
    fn boundary_values() {
        let p = args(&[(3, 1), (-2, 7)]);
        assert_eq!(bell_hat(0, 0, &p).unwrap(), q(1, 1));
        assert_eq!(bell_hat(2, 0, &p).unwrap(), q(0, 1));
        assert_eq!(bell_hat(1, 2, &p).unwrap(), q(0, 1));
    }

    #[test]
    fn insufficient_arguments() {
        let p = args(&[(3, 1)]);
        assert!(matches!(
            bell_hat(3, 1, &p),
            Err(Error::UnderResolved { .. })
        ));
    }

    #[test]
    fn three_forms_agree() {
        let p = args(&[(1, 2), (-3, 5), (7, 3), (2, 11), (-1, 4), (5, 6), (1, 13)]);
        let table = bell_table(7, &p).unwrap();
        for i in 0..=7 {
            for j in 0..=i {
                let oracle = compositions_oracle(i, j, &p);
                assert_eq!(table.get(i, j), oracle, "table ({i},{j})");
                assert_eq!(bell_hat_partition_form(i, j, &p).unwrap(), oracle, "partition ({i},{j})");
            }
        }
    }
}

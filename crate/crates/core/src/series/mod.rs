//! Truncated power series over exact rationals or double-precision complex
//! numbers, plus the combinatorial kernels the coefficient formulas consume.
//!
//! A [`TruncatedSeries`] stores the Taylor coefficients `c_0..=c_M` of a
//! function about a base point. Every operation truncates its result to the
//! smallest order among its operands, so no coefficient beyond a known index is
//! ever fabricated.

mod bell;
mod combinatorics;
pub mod elementary;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

pub use bell::{bell_hat, bell_hat_partition_form, bell_table, BellArguments, BellTable};
pub use combinatorics::{
    bernoulli, bernoulli_numbers, beta_glaisher, binomial, factorial, stirling2, stirling2_table,
};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Series with complex floating coefficients.
pub type ComplexSeries = TruncatedSeries<Complex64>;

/// Series with exact rational coefficients.
pub type RationalSeries = TruncatedSeries<Rational>;

/// Coefficient field for truncated series.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Whether `cpow` should go through `exp(tau * log f)` at this order
    /// instead of the binomial sum.
    fn prefers_exp_log_pow(_order: usize) -> bool {
        false
    }
}

impl Coeff for Complex64 {
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn prefers_exp_log_pow(order: usize) -> bool {
        order > 12
    }
}

impl Coeff for Rational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Finite Taylor expansion `Σ_{s=0}^{M} c_s (z - base)^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    base: T,
    coeffs: Vec<T>,
}

impl<T: Coeff> TruncatedSeries<T> {
    pub fn new(base: T, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self { base, coeffs })
    }

    pub fn constant(base: T, value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self { base, coeffs }
    }

    pub fn zero(base: T, order: usize) -> Self {
        Self::constant(base, T::zero(), order)
    }

    pub fn one(base: T, order: usize) -> Self {
        Self::constant(base, T::one(), order)
    }

    /// The series of `z - base`.
    pub fn variable(base: T, order: usize) -> Self {
        let mut s = Self::zero(base, order);
        if order >= 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    /// The series of `z` itself, i.e. `base + (z - base)`.
    pub fn identity(base: T, order: usize) -> Self {
        let mut s = Self::variable(base.clone(), order);
        s.coeffs[0] = base;
        s
    }

    pub fn base(&self) -> &T {
        &self.base
    }

    /// Highest retained index `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, index: usize) -> Option<&T> {
        self.coeffs.get(index)
    }

    pub fn constant_term(&self) -> &T {
        &self.coeffs[0]
    }

    /// Drop every coefficient above `order`. Asking for a higher order than
    /// available is an error rather than zero-padding.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::UnderResolved {
                what: "series truncation",
                needed: order + 1,
                available: self.coeffs.len(),
            });
        }
        Ok(Self {
            base: self.base.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch {
                left: format!("{:?}", self.base),
                right: format!("{:?}", other.base),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let m = self.order().min(other.order());
        let coeffs = (0..=m)
            .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
            .collect();
        Ok(Self {
            base: self.base.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let m = self.order().min(other.order());
        let coeffs = (0..=m)
            .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
            .collect();
        Ok(Self {
            base: self.base.clone(),
            coeffs,
        })
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        let mut coeffs = vec![T::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self {
            base: self.base.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            base: self.base.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            base: self.base.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Add a constant to the zeroth coefficient.
    pub fn add_constant(&self, value: &T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + value.clone();
        out
    }

    pub fn pow_int(&self, n: u32) -> Self {
        let mut result = Self::one(self.base.clone(), self.order());
        let mut square = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&square);
            }
            k >>= 1;
            if k > 0 {
                square = square.mul_unchecked(&square);
            }
        }
        result
    }

    /// Multiplicative inverse to the same order.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let m = self.order();
        let inv0 = T::one() / c0;
        let mut g: Vec<T> = Vec::with_capacity(m + 1);
        g.push(inv0.clone());
        for n in 1..=m {
            let mut acc = T::zero();
            for k in 1..=n {
                acc = acc + self.coeffs[k].clone() * g[n - k].clone();
            }
            g.push(-(acc * inv0.clone()));
        }
        Ok(Self {
            base: self.base.clone(),
            coeffs: g,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        Ok(self.mul_unchecked(&other.recip()?))
    }

    /// Divide by `(z - base)^m`, requiring the first `m` coefficients to be
    /// exactly zero.
    pub fn shift_down(&self, m: usize) -> Result<Self> {
        if m > self.order() {
            return Err(Error::UnderResolved {
                what: "series shift",
                needed: m + 1,
                available: self.coeffs.len(),
            });
        }
        if let Some(bad) = self.coeffs[..m].iter().position(|c| !c.is_zero()) {
            return Err(Error::Precondition(format!(
                "coefficient {bad} is nonzero, so the series does not vanish to order {m}"
            )));
        }
        Ok(Self {
            base: self.base.clone(),
            coeffs: self.coeffs[m..].to_vec(),
        })
    }

    /// Multiply by `(z - base)^m`; the order grows by `m`.
    pub fn shift_up(&self, m: usize) -> Self {
        let mut coeffs = vec![T::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            base: self.base.clone(),
            coeffs,
        }
    }

    /// `outer ∘ inner`: substitutes `inner` for the expansion variable of
    /// `outer`. The result lives at the base of `inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant(format!(
                "{:?}",
                inner.coeffs[0]
            )));
        }
        let m = outer.order().min(inner.order());
        let inner = inner.truncate(m)?;
        let mut acc = Self::constant(inner.base.clone(), outer.coeffs[m].clone(), m);
        for k in (0..m).rev() {
            acc = acc.mul_unchecked(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + outer.coeffs[k].clone();
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.base.clone(), 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64))
            .collect();
        Self {
            base: self.base.clone(),
            coeffs,
        }
    }

    /// Antiderivative with the given constant term; the order grows by one.
    pub fn integral(&self, constant: T) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant);
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / T::from_i64(k as i64 + 1));
        }
        Self {
            base: self.base.clone(),
            coeffs,
        }
    }

    /// `log f` for `f` with constant term exactly one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne(format!("{:?}", self.coeffs[0])));
        }
        let m = self.order();
        if m == 0 {
            return Ok(Self::zero(self.base.clone(), 0));
        }
        let quotient = self
            .derivative()
            .mul_unchecked(&self.truncate(m - 1)?.recip()?);
        Ok(quotient.integral(T::zero()))
    }

    /// `exp f` for `f` with constant term exactly zero.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero(format!("{:?}", self.coeffs[0])));
        }
        let m = self.order();
        // n g_n = Σ_{k=1}^{n} k f_k g_{n-k}
        let mut g: Vec<T> = Vec::with_capacity(m + 1);
        g.push(T::one());
        for n in 1..=m {
            let mut acc = T::zero();
            for k in 1..=n {
                acc = acc + T::from_i64(k as i64) * self.coeffs[k].clone() * g[n - k].clone();
            }
            g.push(acc / T::from_i64(n as i64));
        }
        Ok(Self {
            base: self.base.clone(),
            coeffs: g,
        })
    }

    /// Principal power `f^tau` for `f` with constant term exactly one.
    pub fn cpow(&self, tau: &T) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne(format!("{:?}", self.coeffs[0])));
        }
        let m = self.order();
        if T::prefers_exp_log_pow(m) {
            return self.log()?.scale(tau).exp();
        }
        // Σ_j C(tau, j) (f - 1)^j; (f - 1)^j starts at index j.
        let delta = self.add_constant(&-T::one());
        let mut result = Self::one(self.base.clone(), m);
        let mut power = Self::one(self.base.clone(), m);
        let mut binom = T::one();
        for j in 1..=m {
            power = power.mul_unchecked(&delta);
            binom = binom * (tau.clone() - T::from_i64(j as i64 - 1)) / T::from_i64(j as i64);
            for (r, p) in result.coeffs.iter_mut().zip(power.coeffs.iter()).skip(j) {
                *r = r.clone() + binom.clone() * p.clone();
            }
        }
        Ok(result)
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: &T) -> T {
        let h = z.clone() - self.base.clone();
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * h.clone() + c.clone())
    }

    /// Reinterpret the coefficients at a different base point.
    pub fn rebased(&self, base: T) -> Self {
        Self {
            base,
            coeffs: self.coeffs.clone(),
        }
    }
}

impl TruncatedSeries<Rational> {
    /// Lift exact coefficients to complex floats.
    pub fn to_complex(&self) -> ComplexSeries {
        use num::ToPrimitive;
        let lift = |r: &Rational| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
        TruncatedSeries {
            base: lift(&self.base),
            coeffs: self.coeffs.iter().map(lift).collect(),
        }
    }
}

impl TruncatedSeries<Complex64> {
    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Maximum coefficientwise distance to `other`, over the shared order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_series(coeffs: &[f64]) -> ComplexSeries {
        ComplexSeries::new(c(0.0, 0.0), coeffs.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn add_cancels() {
        let f = real_series(&[1.0, 1.0]);
        let g = real_series(&[1.0, -1.0]);
        assert_eq!(f.add(&g).unwrap().coeffs(), &[c(2.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn add_truncates_to_smaller_order() {
        let f = real_series(&[1.0, 2.0, 3.0]);
        let g = real_series(&[1.0]);
        assert_eq!(f.add(&g).unwrap().order(), 0);
    }

    #[test]
    fn mismatched_bases_rejected() {
        let f = real_series(&[1.0, 2.0]);
        let g = f.rebased(c(1.0, 0.0));
        assert!(matches!(f.add(&g), Err(Error::BaseMismatch { .. })));
        assert!(matches!(f.mul(&g), Err(Error::BaseMismatch { .. })));
    }

    #[test]
    fn difference_of_squares() {
        let f = real_series(&[1.0, 1.0, 0.0]);
        let g = real_series(&[1.0, -1.0, 0.0]);
        assert_eq!(
            f.mul(&g).unwrap().coeffs(),
            &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]
        );
    }

    #[test]
    fn geometric_recip() {
        let f = RationalSeries::new(q(0, 1), vec![q(1, 1), q(-1, 1), q(0, 1), q(0, 1)]).unwrap();
        let g = f.recip().unwrap();
        assert!(g.coeffs().iter().all(|x| x.is_one()));
    }

    #[test]
    fn recip_of_constant() {
        let f = RationalSeries::constant(q(0, 1), q(2, 1), 0);
        assert_eq!(f.recip().unwrap().coeffs(), &[q(1, 2)]);
    }

    #[test]
    fn recip_rejects_zero_constant() {
        let f = real_series(&[0.0, 1.0]);
        assert_eq!(f.recip(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn compose_geometric_with_doubling() {
        let outer = RationalSeries::new(q(0, 1), vec![q(1, 1); 5]).unwrap();
        let inner = RationalSeries::new(q(0, 1), vec![q(0, 1), q(2, 1), q(0, 1), q(0, 1), q(0, 1)])
            .unwrap();
        let r = RationalSeries::compose(&outer, &inner).unwrap();
        let expect: Vec<_> = [1, 2, 4, 8, 16].iter().map(|&n| q(n, 1)).collect();
        assert_eq!(r.coeffs(), expect.as_slice());
    }

    #[test]
    fn compose_with_identity_variable() {
        let exp = RationalSeries::variable(q(0, 1), 6).exp().unwrap();
        let z = RationalSeries::variable(q(0, 1), 6);
        assert_eq!(RationalSeries::compose(&exp, &z).unwrap(), exp);
    }

    #[test]
    fn compose_rejects_nonzero_inner_constant() {
        let f = real_series(&[1.0, 1.0]);
        assert!(matches!(
            ComplexSeries::compose(&f, &f),
            Err(Error::NonzeroInnerConstant(_))
        ));
    }

    #[test]
    fn cpow_geometric() {
        let f = RationalSeries::new(q(0, 1), vec![q(1, 1), q(-1, 1), q(0, 1), q(0, 1)]).unwrap();
        let g = f.cpow(&q(-1, 1)).unwrap();
        assert!(g.coeffs().iter().all(|x| x.is_one()));
    }

    #[test]
    fn cpow_square_root_binomial() {
        let f = RationalSeries::new(q(0, 1), vec![q(1, 1), q(1, 1), q(0, 1)]).unwrap();
        let g = f.cpow(&q(1, 2)).unwrap();
        assert_eq!(g.coeffs(), &[q(1, 1), q(1, 2), q(-1, 8)]);
    }

    #[test]
    fn cpow_rejects_constant_not_one() {
        let f = real_series(&[2.0, 1.0]);
        assert!(matches!(
            f.cpow(&c(0.5, 0.0)),
            Err(Error::ConstantTermNotOne(_))
        ));
    }

    #[test]
    fn cpow_high_order_matches_binomial_route() {
        // order 16 switches to exp/log; compare with the exact rational binomial sum
        let coeffs: Vec<Rational> = (0..=16).map(|k| q(1, k + 1)).collect();
        let exact = RationalSeries::new(q(0, 1), coeffs).unwrap();
        let tau = q(-7, 3);
        let expect = exact.cpow(&tau).unwrap().to_complex();
        let got = exact.to_complex().cpow(&c(-7.0 / 3.0, 0.0)).unwrap();
        for (a, b) in got.coeffs().iter().zip(expect.coeffs()) {
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn exp_of_variable_is_exponential_series() {
        let e = RationalSeries::variable(q(0, 1), 5).exp().unwrap();
        let expect: Vec<_> = [1, 1, 2, 6, 24, 120].iter().map(|&d| q(1, d)).collect();
        assert_eq!(e.coeffs(), expect.as_slice());
    }

    #[test]
    fn log_exp_roundtrip_exact() {
        let f = RationalSeries::new(q(0, 1), vec![q(1, 1), q(3, 2), q(-1, 5), q(7, 3), q(1, 9)])
            .unwrap();
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn shift_down_requires_leading_zeros() {
        let f = real_series(&[0.0, 0.0, 1.0, 2.0]);
        assert_eq!(f.shift_down(2).unwrap().coeffs(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(f.shift_down(3).is_err());
        assert_eq!(f.shift_down(0).unwrap(), f);
    }

    #[test]
    fn truncate_never_pads() {
        let f = real_series(&[1.0, 2.0]);
        assert!(matches!(f.truncate(3), Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn eval_uses_base() {
        let f = RationalSeries::new(q(1, 1), vec![q(0, 1), q(1, 1), q(1, 1)]).unwrap();
        // (z-1) + (z-1)^2 at z = 3
        assert_eq!(f.eval(&q(3, 1)), q(6, 1));
    }
}

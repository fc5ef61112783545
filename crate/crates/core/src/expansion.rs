//! Expansion coefficients `α_s` and the assembled asymptotic series
//!
//! ```text
//! ∫ e^{N p(z)} (z - z0)^{a-1} q(z) dz  ~  e^{N p(z0)} Σ_s c_s N^{-(s+a)/μ}
//! ```
//!
//! for the contour shapes in [`BranchSpec`].

use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::Rational64;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::saddle::SaddleNormalForm;
use crate::series::{bell_table, BellArguments, Coeff, ComplexSeries, TruncatedSeries};
use crate::special::gamma;

/// Distance from a non-positive integer at which a floating `(s+a)/μ` draws a warning.
pub const NEAR_POLE_WARNING: f64 = 1e-8;

/// The exponent parameter `a` of the factor `(z - z0)^{a-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExponentParam {
    /// Exact rational; the only form that can trigger the degenerate-term rule.
    Exact(Rational64),
    Complex(Complex64),
}

impl ExponentParam {
    pub fn one() -> Self {
        ExponentParam::Exact(Rational64::one())
    }

    pub fn integer(n: i64) -> Self {
        ExponentParam::Exact(Rational64::from_integer(n))
    }

    pub fn value(&self) -> Complex64 {
        match *self {
            ExponentParam::Exact(r) => Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0),
            ExponentParam::Complex(c) => c,
        }
    }

    /// `a + m`.
    pub fn shifted(&self, m: i64) -> Self {
        match *self {
            ExponentParam::Exact(r) => ExponentParam::Exact(r + m),
            ExponentParam::Complex(c) => ExponentParam::Complex(c + m as f64),
        }
    }

    /// `(s + a)/μ`.
    pub fn exponent(&self, s: usize, mu: usize) -> Complex64 {
        match *self {
            ExponentParam::Exact(r) => {
                let e = (r + s as i64) / mu as i64;
                Complex64::new(*e.numer() as f64 / *e.denom() as f64, 0.0)
            }
            ExponentParam::Complex(c) => (c + s as f64) / mu as f64,
        }
    }

    /// `(s + a)/μ` when it is exactly an integer.
    pub fn integer_exponent(&self, s: usize, mu: usize) -> Option<i64> {
        match *self {
            ExponentParam::Exact(r) => {
                let e = (r + s as i64) / mu as i64;
                e.is_integer().then(|| e.to_integer())
            }
            ExponentParam::Complex(_) => None,
        }
    }

    fn is_odd_integer(&self) -> bool {
        matches!(*self, ExponentParam::Exact(r) if r.is_integer() && r.to_integer() % 2 != 0)
    }
}

impl std::fmt::Display for ExponentParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExponentParam::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExponentParam::Complex(c) => write!(f, "{c}"),
        }
    }
}

pub const PRINCIPAL_BRANCH_NOTE: &str =
    "p0^(-(s+a)/mu) = exp(-(s+a)/mu * Log p0) with Arg p0 in (-pi, pi]";

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSequence {
    pub a: ExponentParam,
    pub mu: usize,
    pub alphas: Vec<Complex64>,
    pub branch_note: &'static str,
}

impl AlphaSequence {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Attach the prefactor `p0^{-(s+a)/μ}/μ` to precomputed bracket sums.
    pub fn from_brackets(p0: Complex64, mu: usize, a: ExponentParam, brackets: &[Complex64]) -> Self {
        let log_p0 = p0.ln();
        let alphas = brackets
            .iter()
            .enumerate()
            .map(|(s, b)| {
                let e = a.exponent(s, mu);
                (-e * log_p0).exp() * b / mu as f64
            })
            .collect();
        Self {
            a,
            mu,
            alphas,
            branch_note: PRINCIPAL_BRANCH_NOTE,
        }
    }
}

/// Bracket sums `Σ_{i<=s} q_{s-i} Σ_j C(τ_s, j) B̂_{i,j}(p_1/p0, p_2/p0, ...)`
/// for `s < count`.
pub fn alpha_kernel_bell<T: Coeff>(
    ratios: &BellArguments<T>,
    q: &[T],
    tau: &dyn Fn(usize) -> T,
    count: usize,
) -> Result<Vec<T>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if q.len() < count {
        return Err(Error::UnderResolved {
            what: "Taylor coefficients of q",
            needed: count,
            available: q.len(),
        });
    }
    let table = bell_table(count - 1, ratios)?;
    Ok((0..count)
        .map(|s| {
            let t = tau(s);
            (0..=s).fold(T::zero(), |acc, i| {
                let qs = &q[s - i];
                if qs.is_zero() {
                    acc
                } else {
                    acc + qs.clone() * table.binomial_row_sum(i, &t)
                }
            })
        })
        .collect())
}

/// The same bracket sums as [`alpha_kernel_bell`], read off as the index-`s`
/// coefficient of `q (1 - φ)^{τ_s}`.
pub fn alpha_kernel_direct<T: Coeff>(
    one_minus_phi: &TruncatedSeries<T>,
    q: &TruncatedSeries<T>,
    tau: &dyn Fn(usize) -> T,
    count: usize,
) -> Result<Vec<T>> {
    (0..count)
        .map(|s| {
            // exp(τ log(1 - φ)), not the binomial sum the Bell route expands
            let w = one_minus_phi.truncate(s)?.log()?.scale(&tau(s)).exp()?;
            let prod = w.mul(&q.truncate(s)?)?;
            Ok(prod.coeffs()[s].clone())
        })
        .collect()
}

fn aligned_q(nf: &SaddleNormalForm, q: &ComplexSeries) -> Result<ComplexSeries> {
    let gap = (q.base() - nf.z0).norm();
    if gap > 1e-12 * (1.0 + nf.z0.norm()) {
        return Err(Error::BaseMismatch {
            left: format!("{}", nf.z0),
            right: format!("{}", q.base()),
        });
    }
    Ok(q.rebased(nf.z0))
}

fn neg_exponent(a: ExponentParam, mu: usize) -> impl Fn(usize) -> Complex64 {
    move |s| -a.exponent(s, mu)
}

/// `α_0..α_{count-1}` from the partial Bell polynomial formula.
pub fn alpha_bell(
    nf: &SaddleNormalForm,
    q: &ComplexSeries,
    a: ExponentParam,
    count: usize,
) -> Result<AlphaSequence> {
    let q = aligned_q(nf, q)?;
    let ratios = nf.bell_arguments(count.saturating_sub(1))?;
    let brackets = alpha_kernel_bell(&ratios, q.coeffs(), &neg_exponent(a, nf.mu), count)?;
    Ok(AlphaSequence::from_brackets(nf.p0, nf.mu, a, &brackets))
}

/// `α_0..α_{count-1}` from the series of `q (1 - φ)^{-(s+a)/μ}`, computed
/// separately for each `s`.
pub fn alpha_direct(
    nf: &SaddleNormalForm,
    q: &ComplexSeries,
    a: ExponentParam,
    count: usize,
) -> Result<AlphaSequence> {
    let q = aligned_q(nf, q)?;
    if count > 0 {
        if q.order() + 1 < count {
            return Err(Error::UnderResolved {
                what: "Taylor coefficients of q",
                needed: count,
                available: q.order() + 1,
            });
        }
        if nf.phi.order() + 1 < count {
            return Err(Error::UnderResolved {
                what: "normal form phi coefficients",
                needed: count,
                available: nf.phi.order() + 1,
            });
        }
    }
    let brackets = alpha_kernel_direct(&nf.one_minus_phi(), &q, &neg_exponent(a, nf.mu), count)?;
    Ok(AlphaSequence::from_brackets(nf.p0, nf.mu, a, &brackets))
}

/// How the contour meets the saddle. Sector indices refer to the
/// steepest-descent angles `θ_k` of the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum BranchSpec {
    /// Starts at `z0` and leaves through valley `k`.
    Endpoint { k: i64 },
    /// Arrives through valley `k1` and leaves through valley `k2`.
    Through { k1: i64, k2: i64 },
    /// Even `μ`, arriving from the valley opposite to `k` and leaving through `k`.
    EvenOpposite { k: i64 },
    /// Arrives through `k1`, circles `z0` and leaves through `k2`; valid for
    /// any `a`.
    CirclePath { k1: i64, k2: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub s: usize,
    /// `(s + a)/μ`.
    pub exponent: Complex64,
    pub coeff: Complex64,
    /// True when the coefficient is exactly zero.
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticExpansion {
    pub p_at_z0: Complex64,
    pub mu: usize,
    pub a: ExponentParam,
    pub branch: BranchSpec,
    pub terms: Vec<Term>,
    pub warnings: Vec<String>,
}

fn phase(k: i64, e: Complex64) -> Complex64 {
    (Complex64::i() * (2.0 * PI * k as f64) * e).exp()
}

fn factorial_f64(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn assemble(
    alphas: &AlphaSequence,
    nf: &SaddleNormalForm,
    branch: BranchSpec,
) -> Result<AsymptoticExpansion> {
    let mu = nf.mu;
    let a = alphas.a;
    if alphas.mu != mu {
        return Err(Error::Precondition(format!(
            "alpha sequence was computed for mu = {} but the saddle has mu = {mu}",
            alphas.mu
        )));
    }
    let circle = matches!(branch, BranchSpec::CirclePath { .. });
    if !circle {
        for s in 0..alphas.len() {
            if let Some(m) = a.integer_exponent(s, mu) {
                if m <= 0 {
                    return Err(Error::GammaPole { s, exponent: m });
                }
            }
        }
        if a.value().re <= 0.0 {
            return Err(Error::Precondition(format!(
                "Re(a) must be positive unless the contour circles z0, got a = {a}"
            )));
        }
    }
    if let BranchSpec::EvenOpposite { .. } = branch {
        if mu % 2 != 0 {
            return Err(Error::Precondition(format!("variant requires even mu, got mu = {mu}")));
        }
        if !a.is_odd_integer() {
            return Err(Error::Precondition(format!(
                "opposite-sector variant requires an exact odd integer a, got a = {a}"
            )));
        }
    }
    let mut warnings = Vec::new();
    if let BranchSpec::Through { k1, k2 } = branch {
        if k1 == k2 {
            warnings.push(format!("k1 = k2 = {k1}: every term vanishes"));
        }
    }
    let mut terms = Vec::with_capacity(alphas.len());
    for (s, &alpha) in alphas.alphas.iter().enumerate() {
        let e = a.exponent(s, mu);
        let coeff = match branch {
            BranchSpec::Endpoint { k } => gamma(e) * alpha * phase(k, e),
            BranchSpec::Through { k1, k2 } => match a.integer_exponent(s, mu) {
                // e^{2πi k e} = 1 for every k
                Some(_) => Complex64::zero(),
                None => gamma(e) * alpha * (phase(k2, e) - phase(k1, e)),
            },
            BranchSpec::EvenOpposite { k } => {
                if s % 2 == 1 {
                    Complex64::zero()
                } else {
                    2.0 * gamma(e) * alpha * phase(k, e)
                }
            }
            BranchSpec::CirclePath { k1, k2 } => match a.integer_exponent(s, mu) {
                Some(m) if m <= 0 => {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let factor = Complex64::i() * (2.0 * PI * (k2 - k1) as f64) * sign
                        / factorial_f64(m.unsigned_abs());
                    factor * alpha
                }
                Some(_) => Complex64::zero(),
                _ => {
                    if let ExponentParam::Complex(_) = a {
                        let nearest = e.re.round();
                        if nearest <= 0.0 && (e - nearest).norm() < NEAR_POLE_WARNING {
                            warnings.push(format!(
                                "term s = {s}: (s+a)/mu = {e} is within {NEAR_POLE_WARNING:e} of a Gamma pole; \
                                 pass a as an exact rational to use the exact rule"
                            ));
                        }
                    }
                    gamma(e) * alpha * (phase(k2, e) - phase(k1, e))
                }
            },
        };
        terms.push(Term {
            s,
            exponent: e,
            coeff,
            vanishes: coeff.is_zero(),
        });
    }
    Ok(AsymptoticExpansion {
        p_at_z0: nf.p_at_z0,
        mu,
        a,
        branch,
        terms,
        warnings,
    })
}

impl AsymptoticExpansion {
    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `Σ_{s<terms} c_s N^{-(s+a)/μ}`, without the factor `e^{N p(z0)}`.
    pub fn evaluate_scaled(&self, n: f64, terms: usize) -> Result<Complex64> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NonPositiveN(n));
        }
        if terms > self.terms.len() {
            return Err(Error::TooManyTerms {
                requested: terms,
                available: self.terms.len(),
            });
        }
        let ln_n = n.ln();
        Ok(self.terms[..terms]
            .iter()
            .fold(Complex64::zero(), |acc, t| acc + t.coeff * (-t.exponent * ln_n).exp()))
    }

    /// `e^{N p(z0)} Σ_{s<terms} c_s N^{-(s+a)/μ}`.
    pub fn evaluate(&self, n: f64, terms: usize) -> Result<Complex64> {
        let sum = self.evaluate_scaled(n, terms)?;
        Ok((self.p_at_z0 * n).exp() * sum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VanishingShift {
    /// `ψ` with `q = (z - z0)^m ψ`.
    pub psi: ComplexSeries,
    /// Largest `|α_s(q, a)|` for `s < m`.
    pub max_leading: f64,
    /// Largest `|α_{s+m}(q, a) - α_s(ψ, a + m)|`.
    pub max_discrepancy: f64,
}

/// Factor `q = (z - z0)^m ψ`, requiring the first `m` coefficients of `q`
/// to be exactly zero.
pub fn order_of_vanishing_shift(q: &ComplexSeries, m: usize) -> Result<ComplexSeries> {
    q.shift_down(m)
}

/// Check `α_s(q, a) = 0` for `s < m` and `α_{s+m}(q, a) = α_s(ψ, a + m)`
/// over `count` coefficients of `q`.
pub fn check_vanishing_shift(
    nf: &SaddleNormalForm,
    q: &ComplexSeries,
    m: usize,
    a: ExponentParam,
    count: usize,
) -> Result<VanishingShift> {
    let psi = order_of_vanishing_shift(q, m)?;
    let full = alpha_direct(nf, q, a, count)?;
    let shifted = alpha_direct(nf, &psi, a.shifted(m as i64), count.saturating_sub(m))?;
    let max_leading = full.alphas.iter().take(m).map(|x| x.norm()).fold(0.0, f64::max);
    let max_discrepancy = shifted
        .alphas
        .iter()
        .enumerate()
        .map(|(s, x)| (full.alphas[s + m] - x).norm())
        .fold(0.0, f64::max);
    Ok(VanishingShift {
        psi,
        max_leading,
        max_discrepancy,
    })
}

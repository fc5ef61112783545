//! Worked examples: Stirling's series for Γ, the Kepler integral
//! `∫ e^{N i (z - sin z)} dz`, the equation-of-center integral and its
//! parabolic limit. Each builds its expansion through the generic pipeline and
//! compares it against contour quadrature at finite `N`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use num::rational::Rational64;
use num::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{
    alpha_bell, alpha_kernel_bell, assemble, AlphaSequence, AsymptoticExpansion, BranchSpec,
    ExponentParam,
};
use crate::quadrature::{
    builtin_integrand, integrate_with, Contour, ContourBuilder, IntegrandParams, QuadratureOptions,
    QuadratureResult,
};
use crate::saddle::{normalize_with_order, SaddleNormalForm};
use crate::series::{
    bernoulli_numbers, beta_glaisher, elementary, factorial, BellArguments, ComplexSeries,
    Rational,
};

/// Radius of the detour around the pole in the equation-of-center contour.
pub const CENTER_ARC_RADIUS: f64 = 0.25;
/// Radius of the detour around the double pole in the parabolic contour.
pub const PARABOLIC_ARC_RADIUS: f64 = 0.3;
/// Upper end of the truncated Γ integral; the tail beyond is below `e^{-8N}`.
pub const GAMMA_CUTOFF: f64 = 12.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TableValue {
    Exact(#[serde(serialize_with = "serialize_rational")] Rational),
    Real(f64),
    Complex(Complex64),
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableEntry {
    pub label: String,
    pub value: TableValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub name: &'static str,
    pub n: f64,
    pub eps: Option<f64>,
    /// Number of expansion terms `S` (indices `s < S`).
    pub terms: usize,
    pub expansion_value: Complex64,
    pub oracle_value: Complex64,
    pub oracle: Option<QuadratureResult>,
    pub agreement_digits: i32,
    pub coefficient_table: Vec<TableEntry>,
    pub expansion: AsymptoticExpansion,
}

/// `floor(-log10(|x - reference| / |reference|))`, capped at 17.
pub fn agreement_digits(x: Complex64, reference: Complex64) -> i32 {
    let rel = (x - reference).norm() / reference.norm();
    if rel == 0.0 {
        return 17;
    }
    if !rel.is_finite() {
        return 0;
    }
    ((-rel.log10()).floor() as i32).min(17)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn require_integer_n(n: f64) -> Result<()> {
    if !(n >= 1.0 && n.fract() == 0.0) {
        return Err(Error::OutOfRange {
            name: "N",
            value: n,
            range: "positive integers (the periodic contour legs cancel only then)",
        });
    }
    Ok(())
}

fn require_terms(terms: usize) -> Result<()> {
    if terms == 0 {
        return Err(Error::Precondition("need at least one expansion term".into()));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1)",
        });
    }
    Ok(eps)
}

// ---------------------------------------------------------------------------
// Γ(N+1)/N^{N+1} = ∫_0^∞ e^{N(-z + log z)} dz

/// `p_s/p0 = (-1)^s 2/(s+2)` for `p(z) = -z + log z` at `z = 1`.
pub fn gamma_bell_arguments(count: usize) -> BellArguments<Rational> {
    BellArguments(
        (1..=count as i64)
            .map(|s| {
                let sign = if s % 2 == 0 { 1 } else { -1 };
                q(2 * sign, s + 2)
            })
            .collect(),
    )
}

/// Stirling coefficients `γ_1..γ_m` of `Γ(N+1) ~ √(2πN)(N/e)^N Σ γ_k N^{-k}`.
pub fn gamma_stirling(m: usize) -> Result<Vec<Rational>> {
    if m == 0 {
        return Err(Error::Precondition("need at least one coefficient".into()));
    }
    let count = 2 * m + 1;
    let args = gamma_bell_arguments(count - 1);
    let mut unit = vec![Rational::zero(); count];
    unit[0] = Rational::one();
    let tau = |s: usize| q(-(s as i64 + 1), 2);
    let brackets = alpha_kernel_bell(&args, &unit, &tau, count)?;
    Ok((1..=m)
        .map(|k| {
            let scale = factorial(2 * k) / (factorial(k) * Rational::from_integer(num::BigInt::from(2).pow(k as u32)));
            scale * &brackets[2 * k]
        })
        .collect())
}

fn gamma_normal_form(order: usize) -> Result<SaddleNormalForm> {
    let one = Complex64::new(1.0, 0.0);
    let p = elementary::log(one, order).sub(&ComplexSeries::identity(one, order))?;
    normalize_with_order(&p, 2)
}

/// Expansion of `∫_0^∞ e^{N(-z + log z)} dz` with `terms` coefficients.
pub fn gamma_expansion(terms: usize) -> Result<AsymptoticExpansion> {
    require_terms(terms)?;
    let nf = gamma_normal_form(terms + 2)?;
    let alphas = alpha_bell(&nf, &ComplexSeries::one(nf.z0, terms), ExponentParam::one(), terms)?;
    assemble(&alphas, &nf, BranchSpec::EvenOpposite { k: 0 })
}

pub fn gamma_contour() -> Contour {
    ContourBuilder::start_at(Complex64::new(0.0, 0.0))
        .line_to(Complex64::new(1.0, 0.0))
        .line_to(Complex64::new(GAMMA_CUTOFF, 0.0))
        .build()
        .expect("fixed contour")
}

/// `e^{N} ∫_0^{GAMMA_CUTOFF} e^{N(-z + log z)} dz`.
pub fn gamma_quadrature_scaled(n: f64, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    let f = builtin_integrand("gamma", &IntegrandParams::new(n).shifted())?;
    Ok(integrate_with(f, &gamma_contour(), opts))
}

/// Stirling coefficients `γ_1..γ_m` and the `2m+1`-term expansion at `N`.
pub fn gamma_report(n: f64, m: usize, opts: &QuadratureOptions) -> Result<ExampleReport> {
    if !(n > 0.0) {
        return Err(Error::NonPositiveN(n));
    }
    let table = gamma_stirling(m)?;
    let terms = 2 * m + 1;
    let expansion = gamma_expansion(terms)?;
    let quad = gamma_quadrature_scaled(n, opts)?;
    let scale = (-n).exp();
    let expansion_value = expansion.evaluate_scaled(n, terms)? * scale;
    let oracle_value = quad.value * scale;
    Ok(ExampleReport {
        name: "gamma",
        n,
        eps: None,
        terms,
        expansion_value,
        oracle_value,
        oracle: Some(quad),
        agreement_digits: agreement_digits(expansion_value, oracle_value),
        coefficient_table: table
            .into_iter()
            .enumerate()
            .map(|(k, g)| TableEntry {
                label: format!("gamma_{}", k + 1),
                value: TableValue::Exact(g),
            })
            .collect(),
        expansion,
    })
}

// ---------------------------------------------------------------------------
// ∫_{-π}^{π} e^{N i (z - sin z)} dz

/// Coefficients of `6(z - sin z)/z^3 - 1`: `0, -3!/5!, 0, 3!/7!, ...`.
pub fn kepler_bell_arguments(count: usize) -> BellArguments<Rational> {
    BellArguments(
        (1..=count)
            .map(|i| {
                if i % 2 == 1 {
                    Rational::zero()
                } else {
                    let sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
                    Rational::from_integer((6 * sign).into()) / factorial(i + 3)
                }
            })
            .collect(),
    )
}

/// `d(s) = Σ_j C(-(s+1)/3, j) B̂_{s,j}(0, -3!/5!, 0, 3!/7!, ...)` for `s < count`.
pub fn kepler_d(count: usize) -> Result<Vec<Rational>> {
    let args = kepler_bell_arguments(count.saturating_sub(1));
    let mut unit = vec![Rational::zero(); count];
    if count > 0 {
        unit[0] = Rational::one();
    }
    let tau = |s: usize| q(-(s as i64 + 1), 3);
    alpha_kernel_bell(&args, &unit, &tau, count)
}

fn kepler_normal_form(order: usize) -> Result<SaddleNormalForm> {
    let zero = Complex64::new(0.0, 0.0);
    let z = ComplexSeries::identity(zero, order);
    let p = z
        .sub(&elementary::sin(zero, Complex64::new(1.0, 0.0), order))?
        .scale(&Complex64::i());
    normalize_with_order(&p, 3)
}

/// Steepest-descent path through 0, from `-π + iπ/√3` to `π + iπ/√3`. The
/// vertical legs from `±π` are left out: they cancel by periodicity for
/// integer `N` but are individually of size `e^{1.2 N}`.
pub fn kepler_contour() -> Contour {
    let h = PI / 3f64.sqrt();
    ContourBuilder::start_at(Complex64::new(-PI, h))
        .line_to(Complex64::new(0.0, 0.0))
        .line_to(Complex64::new(PI, h))
        .build()
        .expect("fixed contour")
}

pub fn kepler_expansion(terms: usize) -> Result<AsymptoticExpansion> {
    require_terms(terms)?;
    let nf = kepler_normal_form(terms + 3)?;
    let alphas = alpha_bell(&nf, &ComplexSeries::one(nf.z0, terms), ExponentParam::one(), terms)?;
    assemble(&alphas, &nf, BranchSpec::Through { k1: 1, k2: 0 })
}

/// The expansion terms in real closed form,
/// `(2/3) cos(π(s+1)/6) Γ((s+1)/3) d(s) (6/N)^{(s+1)/3}`.
pub fn kepler_closed_form(n: f64, d: &[Rational]) -> f64 {
    d.iter()
        .enumerate()
        .map(|(s, ds)| {
            let e = (s as f64 + 1.0) / 3.0;
            2.0 / 3.0
                * (PI * (s as f64 + 1.0) / 6.0).cos()
                * crate::special::gamma_real(e)
                * to_f64(ds)
                * (6.0 / n).powf(e)
        })
        .sum()
}

pub fn kepler_plain(n: f64, terms: usize, opts: &QuadratureOptions) -> Result<ExampleReport> {
    require_integer_n(n)?;
    let d = kepler_d(terms)?;
    let expansion = kepler_expansion(terms)?;
    let f = builtin_integrand("kepler_plain", &IntegrandParams::new(n))?;
    let quad = integrate_with(f, &kepler_contour(), opts);
    let expansion_value = expansion.evaluate(n, terms)?;
    Ok(ExampleReport {
        name: "kepler",
        n,
        eps: None,
        terms,
        expansion_value,
        oracle_value: quad.value,
        oracle: Some(quad),
        agreement_digits: agreement_digits(expansion_value, quad.value),
        coefficient_table: exact_table("d", &d),
        expansion,
    })
}

fn exact_table(name: &str, values: &[Rational]) -> Vec<TableEntry> {
    values
        .iter()
        .enumerate()
        .map(|(s, v)| TableEntry {
            label: format!("{name}({s})"),
            value: TableValue::Exact(v.clone()),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// ∫_{-π}^{π} e^{N i (z - ε sin z)} / (1 - ε cos z) dz

/// Constants of the equation-of-center saddle for eccentricity `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterSaddle {
    pub eps: f64,
    /// `(1 + √(1-ε²))/ε`.
    pub gamma: f64,
    /// `i log γ`.
    pub z0: Complex64,
    /// `√(1-ε²)/2`.
    pub p0: f64,
    /// `√(1-ε²) - log γ`.
    pub p_at_z0: f64,
}

impl CenterSaddle {
    pub fn new(eps: f64) -> Result<Self> {
        let eps = check_eps(eps)?;
        let root = (1.0 - eps * eps).sqrt();
        let gamma = (1.0 + root) / eps;
        Ok(Self {
            eps,
            gamma,
            z0: Complex64::new(0.0, gamma.ln()),
            p0: root / 2.0,
            p_at_z0: root - gamma.ln(),
        })
    }

    fn root(&self) -> f64 {
        2.0 * self.p0
    }
}

/// `q_s` for `q(z) = (z - z0)/(1 - ε cos z)` at `z0 = i log γ`, via Bernoulli
/// numbers and the Glaisher-type coefficients `β_m(γ²)`.
pub fn center_q(saddle: &CenterSaddle, count: usize) -> Result<Vec<Complex64>> {
    let bern: Vec<f64> = bernoulli_numbers(count).iter().map(to_f64).collect();
    let xi = Complex64::new(saddle.gamma * saddle.gamma, 0.0);
    let betas: Vec<Complex64> = (1..=count)
        .map(|m| beta_glaisher(&xi, m))
        .collect::<Result<_>>()?;
    let fact: Vec<f64> = (0..=count + 1).map(|k| to_f64(&factorial(k))).collect();
    let i = Complex64::i();
    Ok((0..count)
        .map(|s| {
            let sum = (0..=s).fold(Complex64::zero(), |acc, n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                acc + betas[n] * (sign * bern[s - n] / (fact[n + 1] * fact[s - n]))
            });
            -2.0 * saddle.gamma * i.powu(s as u32 + 1) / saddle.eps * sum
        })
        .collect())
}

/// `p_s/p0 = 2 i^s/(s+2)!`, times `-1/√(1-ε²)` for odd `s`.
pub fn center_bell_arguments(saddle: &CenterSaddle, count: usize) -> BellArguments<Complex64> {
    let i = Complex64::i();
    BellArguments(
        (1..=count)
            .map(|s| {
                let base = 2.0 * i.powu(s as u32) / to_f64(&factorial(s + 2));
                if s % 2 == 0 {
                    base
                } else {
                    -base / saddle.root()
                }
            })
            .collect(),
    )
}

/// `d(s) = Σ_i q_{s-i} Σ_j C(-s/2, j) B̂_{i,j}(p_1/p0, ...)`, so that
/// `α_s = d(s)/(2 p0^{s/2})`.
pub fn center_d(saddle: &CenterSaddle, count: usize) -> Result<Vec<Complex64>> {
    let qs = center_q(saddle, count)?;
    let args = center_bell_arguments(saddle, count.saturating_sub(1));
    let tau = |s: usize| Complex64::new(-(s as f64) / 2.0, 0.0);
    alpha_kernel_bell(&args, &qs, &tau, count)
}

fn center_normal_form(saddle: &CenterSaddle, order: usize) -> Result<SaddleNormalForm> {
    // p(z0 + w) = p(z0) + i(w - sin w) + √(1-ε²)(cos w - 1)
    let zero = Complex64::new(0.0, 0.0);
    let w = ComplexSeries::identity(zero, order);
    let one = Complex64::new(1.0, 0.0);
    let odd = w.sub(&elementary::sin(zero, one, order))?.scale(&Complex64::i());
    let even = elementary::cos(zero, one, order)
        .add_constant(&-one)
        .scale(&Complex64::new(saddle.root(), 0.0));
    let p = odd
        .add(&even)?
        .add_constant(&Complex64::new(saddle.p_at_z0, 0.0))
        .rebased(saddle.z0);
    normalize_with_order(&p, 2)
}

pub fn center_expansion(saddle: &CenterSaddle, terms: usize) -> Result<AsymptoticExpansion> {
    require_terms(terms)?;
    let d = center_d(saddle, terms)?;
    let nf = center_normal_form(saddle, terms + 2)?;
    let alphas = AlphaSequence::from_brackets(nf.p0, 2, ExponentParam::integer(0), &d);
    assemble(&alphas, &nf, BranchSpec::CirclePath { k1: 1, k2: 2 })
}

/// Horizontal path at height `log γ` from `-π` to `π`, dipping below `z0`
/// on a half circle. The vertical legs to the real axis cancel for integer
/// `N` and are left out.
pub fn center_contour(saddle: &CenterSaddle) -> Contour {
    let h = saddle.z0.im;
    let r = CENTER_ARC_RADIUS;
    ContourBuilder::start_at(Complex64::new(-PI, h))
        .line_to(saddle.z0 - r)
        .arc_by(saddle.z0, PI)
        .line_to(Complex64::new(PI, h))
        .build()
        .expect("fixed contour")
}

/// `e^{-N p(z0)}` times the equation-of-center integral.
pub fn center_quadrature_scaled(
    saddle: &CenterSaddle,
    n: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let f = builtin_integrand("center", &IntegrandParams::new(n).eps(saddle.eps).shifted())?;
    Ok(integrate_with(f, &center_contour(saddle), opts))
}

pub fn equation_of_center(
    eps: f64,
    n: f64,
    terms: usize,
    opts: &QuadratureOptions,
) -> Result<ExampleReport> {
    require_integer_n(n)?;
    let saddle = CenterSaddle::new(eps)?;
    let expansion = center_expansion(&saddle, terms)?;
    let d = center_d(&saddle, terms)?;
    let quad = center_quadrature_scaled(&saddle, n, opts)?;
    let scale = (n * saddle.p_at_z0).exp();
    let expansion_value = expansion.evaluate_scaled(n, terms)? * scale;
    let oracle_value = quad.value * scale;
    Ok(ExampleReport {
        name: "center",
        n,
        eps: Some(eps),
        terms,
        expansion_value,
        oracle_value,
        oracle: Some(quad),
        agreement_digits: agreement_digits(expansion_value, oracle_value),
        coefficient_table: d
            .iter()
            .enumerate()
            .map(|(s, v)| TableEntry {
                label: format!("d({s})"),
                value: TableValue::Complex(*v),
            })
            .collect(),
        expansion,
    })
}

/// Least-squares polynomial `f_s` with `d(s) (1-ε²)^{(s+1)/2} = f_s(ε²)` for odd `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FPolynomial {
    pub s: usize,
    /// Ascending powers of `x = ε²`.
    pub coeffs: Vec<f64>,
    /// Largest absolute misfit over the samples.
    pub residual: f64,
    /// Largest `|Im d(s)|` relative to `|d(s)|` seen while sampling.
    pub max_imaginary: f64,
}

impl FPolynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Fit `f_s` of degree `(s-1)/2` from samples of `d(s)` at `ε² ∈ (0.02, 0.9)`.
pub fn fit_f_polynomial(s: usize) -> Result<FPolynomial> {
    if s % 2 == 0 {
        return Err(Error::Precondition(format!("f_s is defined for odd s, got {s}")));
    }
    let unknowns = (s + 1) / 2;
    let samples = unknowns + 6;
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    let mut max_imaginary: f64 = 0.0;
    for k in 0..samples {
        let x = 0.02 + 0.88 * k as f64 / (samples - 1) as f64;
        let saddle = CenterSaddle::new(x.sqrt())?;
        let d = center_d(&saddle, s + 1)?[s];
        max_imaginary = max_imaginary.max(d.im.abs() / d.norm());
        xs.push(x);
        ys.push(d.re * (1.0 - x).powf((s as f64 + 1.0) / 2.0));
    }
    let a = DMatrix::from_fn(samples, unknowns, |r, c| xs[r].powi(c as i32));
    let b = DVector::from_vec(ys.clone());
    let svd = a.clone().svd(true, true);
    let sol = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Precondition(format!("least squares failed: {e}")))?;
    let fitted = &a * &sol;
    let residual = (fitted - b).amax();
    Ok(FPolynomial {
        s,
        coeffs: sol.iter().copied().collect(),
        residual,
        max_imaginary,
    })
}

// ---------------------------------------------------------------------------
// ∫_{-π}^{π} e^{N i (z - sin z)} / (1 - cos z) dz

/// Taylor coefficients of `z²/(1 - cos z)` from the Bernoulli product formula.
pub fn parabolic_q(count: usize) -> Vec<Rational> {
    parabolic_q_from(&bernoulli_numbers(count), count)
}

/// [`parabolic_q`] from a supplied Bernoulli table `B_0..B_{count-1}`.
pub fn parabolic_q_from(b: &[Rational], count: usize) -> Vec<Rational> {
    (0..count)
        .map(|s| {
            if s % 2 == 1 {
                return Rational::zero();
            }
            let sum = (0..=s).fold(Rational::zero(), |acc, n| {
                let term = &b[n] * &b[s - n] / (factorial(n) * factorial(s - n));
                if n % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            let sign = if (s / 2) % 2 == 0 { 2 } else { -2 };
            Rational::from_integer(sign.into()) * sum
        })
        .collect()
}

/// `d*(s) = Σ_i q_{s-i} Σ_j C(-(s-1)/3, j) B̂_{i,j}(0, -3!/5!, 0, ...)`.
pub fn parabolic_d_star(count: usize) -> Result<Vec<Rational>> {
    let qs = parabolic_q(count);
    let args = kepler_bell_arguments(count.saturating_sub(1));
    let tau = |s: usize| q(1 - s as i64, 3);
    alpha_kernel_bell(&args, &qs, &tau, count)
}

pub fn parabolic_expansion(terms: usize) -> Result<AsymptoticExpansion> {
    require_terms(terms)?;
    let d = parabolic_d_star(terms)?;
    let nf = kepler_normal_form(terms + 3)?;
    let a = ExponentParam::Exact(Rational64::from_integer(-1));
    let brackets: Vec<Complex64> = d.iter().map(|x| Complex64::new(to_f64(x), 0.0)).collect();
    let alphas = AlphaSequence::from_brackets(nf.p0, 3, a, &brackets);
    assemble(&alphas, &nf, BranchSpec::CirclePath { k1: 1, k2: 0 })
}

/// `(2/3) Σ cos(π(s-1)/6) Γ((s-1)/3) d*(s) (6/N)^{(s-1)/3}`, skipping the
/// vanishing `s = 1` term.
pub fn parabolic_closed_form(n: f64, d_star: &[Rational]) -> f64 {
    d_star
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != 1)
        .map(|(s, ds)| {
            let e = (s as f64 - 1.0) / 3.0;
            2.0 / 3.0
                * (PI * (s as f64 - 1.0) / 6.0).cos()
                * crate::special::gamma_real(e)
                * to_f64(ds)
                * (6.0 / n).powf(e)
        })
        .sum()
}

/// The real segment `[-π, π]` with a half circle over the double pole at 0.
pub fn parabolic_contour() -> Contour {
    let r = PARABOLIC_ARC_RADIUS;
    ContourBuilder::start_at(Complex64::new(-PI, 0.0))
        .line_to(Complex64::new(-r, 0.0))
        .arc_by(Complex64::new(0.0, 0.0), -PI)
        .line_to(Complex64::new(PI, 0.0))
        .build()
        .expect("fixed contour")
}

/// Steepest-descent lines into 0 from `±π + iπ/√3`, joined by an arc over the
/// pole. Same value as [`parabolic_contour`] for integer `N` since the
/// residue at 0 vanishes and the vertical legs cancel.
pub fn parabolic_descent_contour() -> Contour {
    let h = PI / 3f64.sqrt();
    let r = PARABOLIC_ARC_RADIUS;
    ContourBuilder::start_at(Complex64::new(-PI, h))
        .line_to(Complex64::from_polar(r, 5.0 * PI / 6.0))
        .arc_by(Complex64::new(0.0, 0.0), -2.0 * PI / 3.0)
        .line_to(Complex64::new(PI, h))
        .build()
        .expect("fixed contour")
}

pub fn parabolic(n: f64, terms: usize, opts: &QuadratureOptions) -> Result<ExampleReport> {
    require_integer_n(n)?;
    let d = parabolic_d_star(terms)?;
    let expansion = parabolic_expansion(terms)?;
    let f = builtin_integrand("parabolic", &IntegrandParams::new(n))?;
    let quad = integrate_with(f, &parabolic_contour(), opts);
    let expansion_value = expansion.evaluate(n, terms)?;
    Ok(ExampleReport {
        name: "parabolic",
        n,
        eps: None,
        terms,
        expansion_value,
        oracle_value: quad.value,
        oracle: Some(quad),
        agreement_digits: agreement_digits(expansion_value, quad.value),
        coefficient_table: exact_table("d*", &d),
        expansion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq(n: i64, d: i64) -> Rational {
        q(n, d)
    }

    #[test]
    fn stirling_coefficients() {
        let g = gamma_stirling(3).unwrap();
        assert_eq!(g, vec![qq(1, 12), qq(1, 288), qq(-139, 51840)]);
    }

    #[test]
    fn stirling_match_gamma_function() {
        // Γ(N+1) = √(2πN)(N/e)^N (1 + γ_1/N + ...)
        let g = gamma_stirling(6).unwrap();
        let n: f64 = 40.0;
        let series: f64 = 1.0 + g.iter().enumerate().map(|(k, x)| to_f64(x) / n.powi(k as i32 + 1)).sum::<f64>();
        let ln_exact = crate::special::gamma(Complex64::new(n + 1.0, 0.0)).ln().re;
        let ln_lead = 0.5 * (2.0 * PI * n).ln() + n * n.ln() - n;
        assert!(((ln_exact - ln_lead).exp() - series).abs() < 1e-14);
    }

    #[test]
    fn kepler_d_table() {
        let d = kepler_d(10).unwrap();
        assert_eq!(d[0], qq(1, 1));
        assert_eq!(d[2], qq(1, 20));
        assert_eq!(d[4], qq(1, 280));
        assert_eq!(d[6], qq(1, 3600));
        assert_eq!(d[8], qq(387, 17248000));
        for s in (1..10).step_by(2) {
            assert!(d[s].is_zero());
        }
    }

    /// `6(z - sin z)/z^3` built from the sine series alone.
    fn kepler_ratio_series(order: usize) -> crate::series::RationalSeries {
        let coeffs = (0..=order)
            .map(|i| {
                if i % 2 == 1 {
                    return Rational::zero();
                }
                let k = i / 2 + 1;
                let sign = if k % 2 == 0 { -6 } else { 6 };
                Rational::from_integer(sign.into()) / factorial(2 * k + 1)
            })
            .collect();
        crate::series::RationalSeries::new(Rational::zero(), coeffs).unwrap()
    }

    #[test]
    fn kepler_d_matches_series_power() {
        let ratio = kepler_ratio_series(10);
        let unit = crate::series::RationalSeries::one(Rational::zero(), 10);
        let tau = |s: usize| q(-(s as i64 + 1), 3);
        let direct = crate::expansion::alpha_kernel_direct(&ratio, &unit, &tau, 11).unwrap();
        assert_eq!(direct, kepler_d(11).unwrap());
    }

    #[test]
    fn parabolic_d_star_matches_series_power() {
        let ratio = kepler_ratio_series(10);
        let qs = crate::series::RationalSeries::new(Rational::zero(), parabolic_q(11)).unwrap();
        let tau = |s: usize| q(1 - s as i64, 3);
        let direct = crate::expansion::alpha_kernel_direct(&ratio, &qs, &tau, 11).unwrap();
        assert_eq!(direct, parabolic_d_star(11).unwrap());
    }

    #[test]
    fn kepler_pipeline_matches_closed_form() {
        let d = kepler_d(10).unwrap();
        let ex = kepler_expansion(10).unwrap();
        for n in [20.0, 50.0, 300.0] {
            let a = ex.evaluate(n, 10).unwrap();
            let b = kepler_closed_form(n, &d);
            assert!((a.re - b).abs() < 1e-14 * b.abs() && a.im.abs() < 1e-14, "N = {n}");
        }
    }

    #[test]
    fn parabolic_q_matches_series_reciprocal() {
        let order = 12;
        let zero = Complex64::new(0.0, 0.0);
        let one_minus_cos = elementary::cos(zero, Complex64::new(1.0, 0.0), order + 2)
            .neg()
            .add_constant(&Complex64::new(1.0, 0.0));
        let mut c = one_minus_cos.into_coeffs();
        c[0] = Complex64::zero();
        c[1] = Complex64::zero();
        let reduced = ComplexSeries::new(zero, c).unwrap().shift_down(2).unwrap();
        let direct = reduced.recip().unwrap();
        let formula = parabolic_q(order + 1);
        for (s, x) in formula.iter().enumerate() {
            assert!((direct.coeffs()[s] - Complex64::new(to_f64(x), 0.0)).norm() < 1e-13, "s = {s}");
        }
    }

    #[test]
    fn parabolic_d_star_table() {
        let d = parabolic_d_star(9).unwrap();
        assert_eq!(d[0], qq(2, 1));
        assert_eq!(d[2], qq(1, 5));
        assert_eq!(d[4], qq(27, 1400));
        assert_eq!(d[6], qq(23, 12600));
        assert_eq!(d[8], qq(947, 5544000));
        assert!(d[1].is_zero());
    }

    #[test]
    fn parabolic_pipeline_matches_closed_form() {
        let d = parabolic_d_star(8).unwrap();
        let ex = parabolic_expansion(8).unwrap();
        assert!(ex.terms[1].vanishes);
        let a = ex.evaluate(50.0, 8).unwrap();
        let b = parabolic_closed_form(50.0, &d);
        assert!((a.re - b).abs() < 1e-13 * b.abs() && a.im.abs() < 1e-13 * b.abs());
    }

    #[test]
    fn center_q_matches_series_quotient() {
        let saddle = CenterSaddle::new(0.4).unwrap();
        let order = 10;
        // 1 - ε cos(z0 + w) = 1 - ε cos z0 cos w + ε sin z0 sin w
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let cz = saddle.eps * saddle.z0.cos();
        let sz = saddle.eps * saddle.z0.sin();
        let den = elementary::cos(zero, one, order + 1)
            .scale(&-cz)
            .add(&elementary::sin(zero, one, order + 1).scale(&sz))
            .unwrap()
            .add_constant(&one);
        let mut c = den.into_coeffs();
        c[0] = Complex64::zero();
        let direct = ComplexSeries::new(zero, c).unwrap().shift_down(1).unwrap().recip().unwrap();
        let formula = center_q(&saddle, order + 1).unwrap();
        for s in 0..=order {
            assert!((direct.coeffs()[s] - formula[s]).norm() < 1e-12, "s = {s}");
        }
        assert!((formula[0] - Complex64::new(0.0, -1.0 / (2.0 * saddle.p0))).norm() < 1e-14);
    }

    #[test]
    fn center_bell_arguments_match_normal_form() {
        let saddle = CenterSaddle::new(0.7).unwrap();
        let nf = center_normal_form(&saddle, 12).unwrap();
        assert!((nf.p0 - Complex64::new(saddle.p0, 0.0)).norm() < 1e-15);
        let from_nf = nf.bell_arguments(10).unwrap();
        let formula = center_bell_arguments(&saddle, 10);
        for s in 1..=10 {
            assert!((from_nf.get(s).unwrap() - formula.get(s).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn center_constant_term() {
        for eps in [0.1, 0.4, 0.9] {
            let saddle = CenterSaddle::new(eps).unwrap();
            let ex = center_expansion(&saddle, 3).unwrap();
            let expect = PI / (1.0 - eps * eps).sqrt();
            assert!((ex.terms[0].coeff - Complex64::new(expect, 0.0)).norm() < 1e-13);
            assert!(ex.terms[2].vanishes);
        }
    }

    #[test]
    fn f_polynomials() {
        let f1 = fit_f_polynomial(1).unwrap();
        assert!((f1.coeffs[0] - 2.0 / 3.0).abs() < 1e-12);
        let f3 = fit_f_polynomial(3).unwrap();
        assert!((f3.coeffs[0] + 46.0 / 540.0).abs() < 1e-11);
        assert!((f3.coeffs[1] + 189.0 / 540.0).abs() < 1e-11);
        let f5 = fit_f_polynomial(5).unwrap();
        let expect = [92.0 / 36288.0, 6228.0 / 36288.0, 4887.0 / 36288.0];
        for (a, b) in f5.coeffs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(f5.residual < 1e-10);
        assert!(f5.max_imaginary < 1e-12);
    }

    #[test]
    fn parabolic_path_independence() {
        let opts = QuadratureOptions::default();
        let f = builtin_integrand("parabolic", &IntegrandParams::new(20.0)).unwrap();
        let a = integrate_with(&f, &parabolic_contour(), &opts);
        let b = integrate_with(&f, &parabolic_descent_contour(), &opts);
        assert!((a.value - b.value).norm() < 1e-10 * a.value.norm());
    }

    #[test]
    fn center_prefactor_below_one() {
        for k in 1..=9 {
            let saddle = CenterSaddle::new(k as f64 / 10.0).unwrap();
            let e = saddle.p_at_z0.exp();
            let expect = (2.0 * saddle.p0).exp() / saddle.gamma;
            assert!((e - expect).abs() < 1e-15 && e < 1.0);
        }
    }

    #[test]
    fn agreement_digit_rule() {
        let r = Complex64::new(1.0, 0.0);
        assert_eq!(agreement_digits(Complex64::new(1.00015, 0.0), r), 3);
        assert_eq!(agreement_digits(r, r), 17);
    }
}

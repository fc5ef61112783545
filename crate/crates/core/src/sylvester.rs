//! Main-term asymptotics of the first Sylvester waves `Σ_k W_k(N, λN)`:
//! the constants `w0`, `z0`, the series `p`, `f_λ`, `g_ℓ`, `u_j` about `z0`,
//! and the coefficients `a_t(λ)` of `Re[w0^{-N} N^{-2} Σ a_t N^{-t}]`.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::rational::Rational64;
use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expansion::{alpha_bell, assemble, BranchSpec, ExponentParam};
use crate::saddle::{find_saddle, normalize_with_order, SaddleNormalForm, SaddleReport};
use crate::series::{bernoulli, elementary, factorial, ComplexSeries};
use crate::special::dilog;

pub const NEWTON_START: Complex64 = Complex64::new(0.92, -0.18);
pub const MAX_SERIES_ORDER: usize = 24;
pub const MAX_U_INDEX: usize = 8;
pub const MAX_T: usize = 6;

const NEWTON_MAX_ITER: usize = 60;
/// Steps used to continue the square root of `z/(2 sin π(z-1))` from the real axis.
const BRANCH_STEPS: usize = 64;

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

fn li2_at_one() -> f64 {
    PI * PI / 6.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveConstants {
    /// Root of `Li2(w) - 2πi log w` near `0.92 - 0.18i`.
    pub w0: Complex64,
    /// `1 + log(1 - w0)/(2πi)`.
    pub z0_wave: Complex64,
    /// `p(z0) = -log w0`.
    pub p_at_z0: Complex64,
    /// `-p''(z0)/2`.
    pub p0_wave: Complex64,
    /// Steepest-descent angle `-arg(p0)/2`.
    pub theta0: f64,
    /// `|Li2(w0) - 2πi log w0|`.
    pub residual: f64,
    pub iterations: usize,
}

fn defining_equation(w: Complex64) -> Result<Complex64> {
    Ok(dilog(w)? - two_pi_i() * w.ln())
}

pub fn solve_constants() -> Result<WaveConstants> {
    let mut w = NEWTON_START;
    let mut iterations = 0;
    loop {
        let f = defining_equation(w)?;
        let df = (-(1.0 - w).ln() - two_pi_i()) / w;
        let step = f / df;
        w -= step;
        iterations += 1;
        if step.norm() <= 1e-15 * w.norm() {
            break;
        }
        if iterations >= NEWTON_MAX_ITER || !step.norm().is_finite() {
            return Err(Error::NoConvergence {
                iterations,
                residual: defining_equation(w)?.norm(),
            });
        }
    }
    let z0 = 1.0 + (1.0 - w).ln() / two_pi_i();
    let p = p_series_at(w, z0, 3)?;
    let nf = normalize_with_order(&p, 2)?;
    Ok(WaveConstants {
        w0: w,
        z0_wave: z0,
        p_at_z0: -w.ln(),
        p0_wave: nf.p0,
        theta0: nf.theta(0),
        residual: defining_equation(w)?.norm(),
        iterations,
    })
}

/// `p(z) = (Li2(e^{2πiz}) - Li2(1))/(2πiz)`.
pub fn p_wave(z: Complex64) -> Result<Complex64> {
    Ok((dilog((two_pi_i() * z).exp())? - li2_at_one()) / (two_pi_i() * z))
}

/// `p'(z)`, using `d/dz Li2(e^{2πiz}) = -2πi log(1 - e^{2πiz})`.
pub fn p_wave_derivative(z: Complex64) -> Result<Complex64> {
    let x = (two_pi_i() * z).exp();
    let numerator = dilog(x)? - li2_at_one();
    let d_numerator = -two_pi_i() * (1.0 - x).ln();
    Ok((d_numerator * z - numerator) / (two_pi_i() * z * z))
}

/// Locate the saddle of `p` directly by Newton on `p'`, independently of `w0`.
pub fn find_wave_saddle(guess: Complex64) -> Result<SaddleReport> {
    let dp = |z: Complex64| p_wave_derivative(z).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    find_saddle(dp, guess, 1e-13)
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::OutOfRange {
            name: "order",
            value: order as f64,
            range: "at most 24",
        });
    }
    Ok(())
}

/// Rescale so the constant term is exactly one, returning the scale.
fn unit_normalize(s: &ComplexSeries) -> Result<(Complex64, ComplexSeries)> {
    let c0 = *s.constant_term();
    let mut coeffs = s.scale(&(1.0 / c0)).into_coeffs();
    coeffs[0] = Complex64::new(1.0, 0.0);
    Ok((c0, ComplexSeries::new(*s.base(), coeffs)?))
}

fn p_series_at(w0: Complex64, z0: Complex64, order: usize) -> Result<ComplexSeries> {
    // Li2(e^{2πiz}) - Li2(1) integrated from its derivative -2πi log(1 - e^{2πiz}).
    let one = Complex64::new(1.0, 0.0);
    let one_minus_x = elementary::exp(z0, two_pi_i(), order).neg().add_constant(&one);
    let (c0, unit) = unit_normalize(&one_minus_x)?;
    let log = unit.log()?.add_constant(&c0.ln());
    let numerator = log
        .scale(&-two_pi_i())
        .integral(dilog(1.0 - w0)? - li2_at_one())
        .truncate(order)?;
    let denominator = ComplexSeries::identity(z0, order).scale(&two_pi_i());
    numerator.div(&denominator)
}

/// Taylor series of `p` about `z0_wave`.
pub fn p_wave_series(c: &WaveConstants, order: usize) -> Result<ComplexSeries> {
    check_order(order)?;
    p_series_at(c.w0, c.z0_wave, order)
}

fn lambda_f64(lambda: Rational64) -> f64 {
    lambda.to_f64().unwrap_or(f64::NAN)
}

/// `z/(2 sin π(z-1))`, which is positive on `(1, 2)`.
fn sine_quotient(z: Complex64) -> Complex64 {
    z / (2.0 * (PI * (z - 1.0)).sin())
}

/// Square root of [`sine_quotient`] at `z`, continued along the vertical
/// segment from `Re z`, where it is positive.
fn continued_sqrt(z: Complex64) -> Complex64 {
    let start = Complex64::new(z.re, 0.0);
    let mut root = sine_quotient(start).sqrt();
    for k in 1..=BRANCH_STEPS {
        let point = start + (z - start) * (k as f64 / BRANCH_STEPS as f64);
        let candidate = sine_quotient(point).sqrt();
        root = if (candidate - root).norm() <= (candidate + root).norm() {
            candidate
        } else {
            -candidate
        };
    }
    root
}

/// `f_λ(z) = (z/(2 sin π(z-1)))^{1/2} e^{-πiz(2λ+1/2)}`, with the square root
/// continued from the positive values on `(1, 2)`.
pub fn f_lambda(z: Complex64, lambda: Rational64) -> Complex64 {
    let l = lambda_f64(lambda);
    continued_sqrt(z) * (Complex64::new(0.0, -PI * (2.0 * l + 0.5)) * z).exp()
}

/// Taylor series of `f_λ` about `z0_wave`.
pub fn f_lambda_series(c: &WaveConstants, lambda: Rational64, order: usize) -> Result<ComplexSeries> {
    check_order(order)?;
    let z0 = c.z0_wave;
    // sin π(z - 1) = -sin πz
    let sine = elementary::sin(z0, Complex64::new(PI, 0.0), order).scale(&Complex64::new(-2.0, 0.0));
    let quotient = ComplexSeries::identity(z0, order).div(&sine)?;
    let (_, unit) = unit_normalize(&quotient)?;
    let root = unit.cpow(&Complex64::new(0.5, 0.0))?.scale(&continued_sqrt(z0));
    let l = lambda_f64(lambda);
    let phase = elementary::exp(z0, Complex64::new(0.0, -PI * (2.0 * l + 0.5)), order);
    root.mul(&phase)
}

/// Polynomial `P_n` with `cot^{(n)}(x) = P_n(cot x)`, ascending coefficients.
pub fn cot_derivative_polynomial(n: usize) -> Vec<f64> {
    let mut p = vec![0.0, 1.0];
    for _ in 0..n {
        // P' (-1 - C^2)
        let dp: Vec<f64> = p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        let mut next = vec![0.0; dp.len() + 2];
        for (k, c) in dp.iter().enumerate() {
            next[k] -= c;
            next[k + 2] -= c;
        }
        p = next;
    }
    p
}

/// `g_ℓ(z) = -B_{2ℓ}/(2ℓ)! (πz)^{2ℓ-1} cot^{(2ℓ-2)}(πz)`, evaluated directly.
pub fn g_value(ell: usize, z: Complex64) -> Complex64 {
    assert!(ell >= 1, "g is indexed from 1");
    let x = PI * z;
    let cot = x.cos() / x.sin();
    let poly = cot_derivative_polynomial(2 * ell - 2);
    let deriv = poly.iter().rev().fold(Complex64::zero(), |acc, c| acc * cot + c);
    let b = (bernoulli(2 * ell) / factorial(2 * ell)).to_f64().unwrap_or(f64::NAN);
    -b * x.powu(2 * ell as u32 - 1) * deriv
}

/// Taylor series of `g_ℓ` about `z0_wave`.
pub fn g_series(c: &WaveConstants, ell: usize, order: usize) -> Result<ComplexSeries> {
    check_order(order)?;
    if ell == 0 {
        return Err(Error::Precondition("g is indexed from 1".into()));
    }
    let z0 = c.z0_wave;
    let pi = Complex64::new(PI, 0.0);
    let cot = elementary::cos(z0, pi, order).div(&elementary::sin(z0, pi, order))?;
    let poly = cot_derivative_polynomial(2 * ell - 2);
    let deriv = poly.iter().rev().try_fold(ComplexSeries::zero(z0, order), |acc, k| {
        acc.mul(&cot).map(|s| s.add_constant(&Complex64::new(*k, 0.0)))
    })?;
    let b = (bernoulli(2 * ell) / factorial(2 * ell)).to_f64().unwrap_or(f64::NAN);
    let power = ComplexSeries::identity(z0, order).scale(&pi).pow_int(2 * ell as u32 - 1);
    Ok(power.mul(&deriv)?.scale(&Complex64::new(-b, 0.0)))
}

/// Multi-indices `(m_1, m_2, ...)` with `m_1 + 3 m_2 + 5 m_3 + ... = j`,
/// trailing zeros dropped.
pub fn odd_weight_indices(j: usize) -> Vec<Vec<usize>> {
    fn walk(ell: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let weight = 2 * ell - 1;
        if weight > remaining {
            if remaining == 0 {
                let mut index = current.clone();
                while index.last() == Some(&0) {
                    index.pop();
                }
                out.push(index);
            }
            return;
        }
        for m in (0..=remaining / weight).rev() {
            current.push(m);
            walk(ell + 1, remaining - m * weight, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if j == 0 {
        out.push(Vec::new());
    } else {
        walk(1, j, &mut Vec::new(), &mut out);
    }
    out
}

/// `u_j = Σ Π_ℓ g_ℓ^{m_ℓ}/m_ℓ!` over [`odd_weight_indices`], given `g_1, g_2, ...`.
pub fn u_from_g(gs: &[ComplexSeries], j: usize) -> Result<ComplexSeries> {
    let base = *gs
        .first()
        .ok_or_else(|| Error::Precondition("need g_1".into()))?
        .base();
    let order = gs.iter().map(|g| g.order()).min().unwrap_or(0);
    let mut total = ComplexSeries::zero(base, order);
    for index in odd_weight_indices(j) {
        let mut term = ComplexSeries::one(base, order);
        for (l, &m) in index.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let g = gs.get(l).ok_or(Error::UnderResolved {
                what: "g series",
                needed: l + 1,
                available: gs.len(),
            })?;
            let scale = 1.0 / factorial(m).to_f64().unwrap_or(f64::NAN);
            term = term.mul(&g.pow_int(m as u32).scale(&Complex64::new(scale, 0.0)))?;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// Taylor series of `u_j` about `z0_wave`.
pub fn u_series(c: &WaveConstants, j: usize, order: usize) -> Result<ComplexSeries> {
    if j > MAX_U_INDEX {
        return Err(Error::OutOfRange {
            name: "j",
            value: j as f64,
            range: "at most 8",
        });
    }
    if j == 0 {
        return Ok(ComplexSeries::one(c.z0_wave, order));
    }
    let gs = (1..=(j + 1) / 2)
        .map(|l| g_series(c, l, order))
        .collect::<Result<Vec<_>>>()?;
    u_from_g(&gs, j)
}

/// Series that do not depend on `λ`, built once and shared across `λ`.
#[derive(Debug, Clone)]
pub struct WaveSession {
    pub constants: WaveConstants,
    pub normal_form: SaddleNormalForm,
    pub t_max: usize,
    order: usize,
    u: Vec<ComplexSeries>,
}

impl WaveSession {
    pub fn new(t_max: usize) -> Result<Self> {
        if t_max > MAX_T {
            return Err(Error::OutOfRange {
                name: "t_max",
                value: t_max as f64,
                range: "at most 6",
            });
        }
        let constants = solve_constants()?;
        let order = 2 * t_max + 2;
        let p = p_wave_series(&constants, order)?;
        let normal_form = normalize_with_order(&p, 2)?;
        let u = (0..=t_max)
            .map(|j| u_series(&constants, j, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            constants,
            normal_form,
            t_max,
            order,
            u,
        })
    }

    /// `a_t(λ) = -4i Σ_{m≤t} Γ(m+1/2) α_{2m}(f_λ u_{t-m})` for `t ≤ t_max`.
    pub fn coefficients(&self, lambda: Rational64) -> Result<WaveExpansion> {
        let f = f_lambda_series(&self.constants, lambda, self.order)?;
        let mut coeffs = vec![Complex64::zero(); self.t_max + 1];
        for (j, u) in self.u.iter().enumerate() {
            let q = f.mul(u)?;
            let count = 2 * (self.t_max - j) + 1;
            let alphas = alpha_bell(&self.normal_form, &q, ExponentParam::one(), count)?;
            // Both steepest-descent rays: term 2m is 2 Γ(m+1/2) α_{2m}.
            let expansion = assemble(&alphas, &self.normal_form, BranchSpec::EvenOpposite { k: 0 })?;
            for m in 0..=(self.t_max - j) {
                coeffs[j + m] += Complex64::new(0.0, -2.0) * expansion.terms[2 * m].coeff;
            }
        }
        Ok(WaveExpansion {
            lambda,
            w0: self.constants.w0,
            coeffs,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveExpansion {
    pub lambda: Rational64,
    pub w0: Complex64,
    /// `a_0(λ), ..., a_{t_max}(λ)`.
    pub coeffs: Vec<Complex64>,
}

impl WaveExpansion {
    /// `Re[w0^{-N} N^{-2} Σ_{t<terms} a_t N^{-t}]`; requires `λN` integral.
    pub fn main_term(&self, n: u64, terms: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::NonPositiveN(0.0));
        }
        let product = self.lambda * Rational64::from_integer(n as i64);
        if !product.is_integer() {
            return Err(Error::NonIntegralLambdaN(format!("lambda = {}, N = {n}", self.lambda)));
        }
        if terms == 0 || terms > self.coeffs.len() {
            return Err(Error::TooManyTerms {
                requested: terms,
                available: self.coeffs.len(),
            });
        }
        let nf = n as f64;
        let sum = self.coeffs[..terms]
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, a| acc / nf + a);
        Ok(((-nf * self.w0.ln()).exp() * sum / (nf * nf)).re)
    }
}

/// `a_0(λ) = 2 z0 e^{-πi z0 (1+2λ)}`.
pub fn a0_closed_form(c: &WaveConstants, lambda: Rational64) -> Complex64 {
    let l = lambda_f64(lambda);
    2.0 * c.z0_wave * (Complex64::new(0.0, -PI * (1.0 + 2.0 * l)) * c.z0_wave).exp()
}

/// `-2i√π p0^{-1/2} f_λ(z0)`, i.e. `-4i Γ(1/2) α_0(f_λ)`.
pub fn a0_from_alpha(c: &WaveConstants, lambda: Rational64) -> Complex64 {
    Complex64::new(0.0, -2.0) * PI.sqrt() * c.p0_wave.powf(-0.5) * f_lambda(c.z0_wave, lambda)
}

/// `-e^{πi/4} z0^{1/2} w0^{-1/2} e^{-2πiλz0}`.
pub fn f_lambda_closed_form(c: &WaveConstants, lambda: Rational64) -> Complex64 {
    let l = lambda_f64(lambda);
    -Complex64::from_polar(1.0, PI / 4.0) * c.z0_wave.sqrt() / c.w0.sqrt()
        * (Complex64::new(0.0, -2.0 * PI * l) * c.z0_wave).exp()
}

/// One-term and `terms`-term main values at `N`, with the constants used.
pub fn wave_main_term(lambda: Rational64, n: u64, terms: usize) -> Result<f64> {
    if terms == 0 {
        return Err(Error::Precondition("need at least one term".into()));
    }
    let session = WaveSession::new(terms - 1)?;
    session.coefficients(lambda)?.main_term(n, terms)
}

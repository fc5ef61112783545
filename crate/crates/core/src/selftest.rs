//! Named invariant checks run by the `selftest` command.

use std::f64::consts::PI;
use std::time::Instant;

use num::complex::Complex64;
use num::rational::Rational64;
use num::{One, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::examples;
use crate::expansion::{alpha_bell, alpha_direct, assemble, BranchSpec, ExponentParam};
use crate::quadrature::{builtin_integrand, integrate, integrate_with, Contour, IntegrandParams, QuadratureOptions};
use crate::saddle::normalize_with_order;
use crate::series::{
    bell_hat, bell_hat_partition_form, bernoulli_numbers, elementary, BellArguments, ComplexSeries,
    Rational,
};
use crate::special::dilog;
use crate::sylvester;

/// Deliberate corruptions, used to confirm the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Perturb `B_4` in the Bernoulli table handed to the checks.
    CorruptBernoulli,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bernoulli" => Ok(Fault::CorruptBernoulli),
            other => Err(format!("unknown fault '{other}' (known: bernoulli)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub passed: usize,
    pub failed: usize,
    pub failing: Vec<&'static str>,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Context {
    fault: Option<Fault>,
}

impl Context {
    fn bernoulli(&self, m: usize) -> Vec<Rational> {
        let mut b = bernoulli_numbers(m);
        if self.fault == Some(Fault::CorruptBernoulli) && b.len() > 4 {
            b[4] += Rational::new(1.into(), 1000.into());
        }
        b
    }
}

type Check = fn(&Context) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("bernoulli_akiyama_tanigawa", bernoulli_akiyama_tanigawa),
    ("parabolic_q_vs_series", parabolic_q_vs_series),
    ("stirling_gamma_table", stirling_gamma_table),
    ("kepler_d_table", kepler_d_table),
    ("parabolic_d_star_table", parabolic_d_star_table),
    ("bell_forms_agree", bell_forms_agree),
    ("alpha_bell_vs_direct", alpha_bell_vs_direct),
    ("even_opposite_odd_terms_zero", even_opposite_odd_terms_zero),
    ("through_equal_sectors_zero", through_equal_sectors_zero),
    ("center_constant_term", center_constant_term),
    ("center_f_polynomials", center_f_polynomials),
    ("dilog_reflection", dilog_reflection),
    ("residue_circle", residue_circle),
    ("kepler_quadrature", kepler_quadrature),
    ("sylvester_constants", sylvester_constants),
    ("sylvester_a0_three_ways", sylvester_a0_three_ways),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run(fault: Option<Fault>) -> SelftestSummary {
    let ctx = Context { fault };
    let checks: Vec<CheckOutcome> = CHECKS
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(&ctx) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    let failing: Vec<&'static str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    SelftestSummary {
        passed: checks.len() - failing.len(),
        failed: failing.len(),
        failing,
        checks,
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn bernoulli_akiyama_tanigawa(ctx: &Context) -> Result<(bool, String)> {
    // B_n with B_1 = +1/2 from the Akiyama–Tanigawa triangle; flip B_1.
    let m = 16;
    let table = ctx.bernoulli(m);
    let mut row: Vec<Rational> = Vec::new();
    let mut bad = Vec::new();
    for n in 0..=m {
        row.push(q(1, n as i64 + 1));
        for j in (1..=n).rev() {
            row[j - 1] = Rational::from_integer((j as i64).into()) * (&row[j - 1] - &row[j]);
        }
        let expect = if n == 1 { -row[0].clone() } else { row[0].clone() };
        if table[n] != expect {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("B_0..B_{m}; mismatches at {bad:?}")))
}

fn parabolic_q_vs_series(ctx: &Context) -> Result<(bool, String)> {
    let order = 12;
    let zero = Complex64::zero();
    let mut c = elementary::cos(zero, Complex64::one(), order + 2)
        .neg()
        .add_constant(&Complex64::one())
        .into_coeffs();
    c[0] = zero;
    c[1] = zero;
    let direct = ComplexSeries::new(zero, c)?.shift_down(2)?.recip()?;
    let formula = examples::parabolic_q_from(&ctx.bernoulli(order + 1), order + 1);
    let worst = formula
        .iter()
        .enumerate()
        .map(|(s, x)| {
            let v = Complex64::new(num::ToPrimitive::to_f64(x).unwrap_or(f64::NAN), 0.0);
            (direct.coeffs()[s] - v).norm()
        })
        .fold(0.0, f64::max);
    Ok((worst < 1e-13, format!("max |q_s - series| = {worst:.3e}")))
}

fn stirling_gamma_table(_: &Context) -> Result<(bool, String)> {
    let g = examples::gamma_stirling(3)?;
    let expect = vec![q(1, 12), q(1, 288), q(-139, 51840)];
    let shown: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    Ok((g == expect, shown.join(", ")))
}

fn kepler_d_table(_: &Context) -> Result<(bool, String)> {
    let d = examples::kepler_d(9)?;
    let ok = d[0] == q(1, 1)
        && d[2] == q(1, 20)
        && d[4] == q(1, 280)
        && d[6] == q(1, 3600)
        && d[8] == q(387, 17248000)
        && d.iter().skip(1).step_by(2).all(Zero::is_zero);
    Ok((ok, "d(0..8)".into()))
}

fn parabolic_d_star_table(_: &Context) -> Result<(bool, String)> {
    let d = examples::parabolic_d_star(9)?;
    let ok = d[0] == q(2, 1)
        && d[2] == q(1, 5)
        && d[4] == q(27, 1400)
        && d[6] == q(23, 12600)
        && d[8] == q(947, 5544000)
        && d.iter().skip(1).step_by(2).all(Zero::is_zero);
    Ok((ok, "d*(0..8)".into()))
}

fn bell_forms_agree(_: &Context) -> Result<(bool, String)> {
    let args = BellArguments((1..=8).map(|k| q(if k % 2 == 0 { 3 } else { -2 }, k + 1)).collect());
    let mut bad = Vec::new();
    for i in 0..=8 {
        for j in 0..=i {
            if bell_hat(i, j, &args)? != bell_hat_partition_form(i, j, &args)? {
                bad.push((i, j));
            }
        }
    }
    Ok((bad.is_empty(), format!("i, j <= 8; mismatches {bad:?}")))
}

fn sample_problem() -> Result<(crate::saddle::SaddleNormalForm, ComplexSeries)> {
    let z0 = Complex64::new(0.3, -0.2);
    let order = 12;
    let p = elementary::cos(z0, Complex64::new(1.0, 0.5), order)
        .add(&ComplexSeries::variable(z0, order).pow_int(3).scale(&Complex64::new(0.2, 0.1)))?;
    let mut c = p.into_coeffs();
    c[1] = Complex64::zero();
    let p = ComplexSeries::new(z0, c)?;
    let q = elementary::exp(z0, Complex64::new(0.4, -0.3), order);
    Ok((normalize_with_order(&p, 2)?, q))
}

fn alpha_bell_vs_direct(_: &Context) -> Result<(bool, String)> {
    let (nf, qs) = sample_problem()?;
    let mut worst: f64 = 0.0;
    for a in [ExponentParam::one(), ExponentParam::Complex(Complex64::new(0.7, 0.3))] {
        let b = alpha_bell(&nf, &qs, a, 10)?;
        let d = alpha_direct(&nf, &qs, a, 10)?;
        for (x, y) in b.alphas.iter().zip(&d.alphas) {
            worst = worst.max((x - y).norm() / (1.0 + y.norm()));
        }
    }
    Ok((worst < 1e-10, format!("max relative difference {worst:.3e}")))
}

fn even_opposite_odd_terms_zero(_: &Context) -> Result<(bool, String)> {
    let (nf, qs) = sample_problem()?;
    let alphas = alpha_bell(&nf, &qs, ExponentParam::one(), 9)?;
    let ex = assemble(&alphas, &nf, BranchSpec::EvenOpposite { k: 0 })?;
    let ok = ex.terms.iter().filter(|t| t.s % 2 == 1).all(|t| t.coeff.is_zero());
    Ok((ok, "odd s".into()))
}

fn through_equal_sectors_zero(_: &Context) -> Result<(bool, String)> {
    let (nf, qs) = sample_problem()?;
    let alphas = alpha_bell(&nf, &qs, ExponentParam::Complex(Complex64::new(0.5, 0.25)), 9)?;
    let ex = assemble(&alphas, &nf, BranchSpec::Through { k1: 1, k2: 1 })?;
    let ok = ex.terms.iter().all(|t| t.coeff.is_zero()) && !ex.warnings.is_empty();
    Ok((ok, format!("{} warning(s)", ex.warnings.len())))
}

fn center_constant_term(_: &Context) -> Result<(bool, String)> {
    let saddle = examples::CenterSaddle::new(0.4)?;
    let ex = examples::center_expansion(&saddle, 5)?;
    let expect = Complex64::new(PI / (1.0f64 - 0.16).sqrt(), 0.0);
    let err = rel(ex.terms[0].coeff, expect);
    Ok((err < 1e-13, format!("relative error {err:.3e}")))
}

fn center_f_polynomials(_: &Context) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 1..=9 {
        let eps = k as f64 / 10.0;
        let x = eps * eps;
        let d = examples::center_d(&examples::CenterSaddle::new(eps)?, 4)?;
        worst = worst.max((d[1].re * (1.0 - x) - 2.0 / 3.0).abs());
        worst = worst.max((d[3].re * (1.0 - x).powi(2) + (46.0 + 189.0 * x) / 540.0).abs());
    }
    Ok((worst < 1e-12, format!("max deviation {worst:.3e}")))
}

fn dilog_reflection(_: &Context) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..12 {
        let z = Complex64::from_polar(0.3 + 0.05 * k as f64, 0.4 * k as f64 + 0.2);
        let lhs = dilog(z)? + dilog(1.0 - z)? + z.ln() * (1.0 - z).ln();
        worst = worst.max((lhs - PI * PI / 6.0).norm());
    }
    Ok((worst < 1e-12, format!("max residual {worst:.3e}")))
}

fn residue_circle(_: &Context) -> Result<(bool, String)> {
    let c = Contour::circle(Complex64::zero(), 1.0)?;
    let r = integrate(|z| 1.0 / z, &c, 1e-14, 1e-13);
    let err = (r.value - Complex64::new(0.0, 2.0 * PI)).norm();
    Ok((err < 1e-12, format!("error {err:.3e}")))
}

fn kepler_quadrature(_: &Context) -> Result<(bool, String)> {
    let f = builtin_integrand("kepler_plain", &IntegrandParams::new(50.0))?;
    let r = integrate_with(f, &examples::kepler_contour(), &QuadratureOptions::default());
    let target = Complex64::new(0.762835382546, 0.0);
    let err = rel(r.value, target);
    Ok((err < 1e-11, format!("value {:.12}", r.value.re)))
}

fn sylvester_constants(_: &Context) -> Result<(bool, String)> {
    let c = sylvester::solve_constants()?;
    let ok = c.residual < 1e-12
        && (c.w0 - Complex64::new(0.916198, -0.182459)).norm() < 1e-6
        && (c.z0_wave - Complex64::new(1.181475, 0.255528)).norm() < 1e-6;
    Ok((ok, format!("w0 = {}, z0 = {}", c.w0, c.z0_wave)))
}

fn sylvester_a0_three_ways(_: &Context) -> Result<(bool, String)> {
    let session = sylvester::WaveSession::new(0)?;
    let lambda = Rational64::one();
    let closed = sylvester::a0_closed_form(&session.constants, lambda);
    let via_alpha = sylvester::a0_from_alpha(&session.constants, lambda);
    let pipeline = session.coefficients(lambda)?.coeffs[0];
    let err = rel(via_alpha, closed).max(rel(pipeline, closed));
    Ok((err < 1e-9, format!("max relative difference {err:.3e}")))
}

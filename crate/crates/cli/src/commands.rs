use num::complex::Complex64;
use num::rational::Rational64;
use saddlepoint::examples::{self, ExampleReport, TableValue};
use saddlepoint::expansion::{alpha_bell, assemble, AsymptoticExpansion, ExponentParam};
use saddlepoint::quadrature::{integrate_power_factor, integrate_with, QuadratureOptions};
use saddlepoint::saddle::{normalize, normalize_with_order};
use saddlepoint::selftest::{self, Fault};
use saddlepoint::sylvester;
use thiserror::Error;

use crate::output::{Cell, Comparison, Report, TermRow};
use crate::problem::{self, Problem, ProblemError};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: exit status 2.
    #[error("{0}")]
    Input(String),
}

impl From<ProblemError> for CliError {
    fn from(e: ProblemError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<saddlepoint::Error> for CliError {
    fn from(e: saddlepoint::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Output plus whether every requested check held.
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
    pub failure: Option<String>,
}

impl Outcome {
    fn from_report(report: Report, tol: Option<f64>) -> Self {
        let worst = report
            .comparisons
            .iter()
            .map(|c| c.relative_difference)
            .fold(0.0, f64::max);
        match tol {
            Some(t) if !(worst <= t) => Outcome {
                report,
                ok: false,
                failure: Some(format!("relative difference {worst:.3e} exceeds --tol {t:e}")),
            },
            _ => Outcome {
                report,
                ok: true,
                failure: None,
            },
        }
    }
}

fn term_rows(ex: &AsymptoticExpansion, count: usize) -> Vec<TermRow> {
    ex.terms
        .iter()
        .take(count)
        .map(|t| TermRow {
            s: t.s,
            exponent: t.exponent,
            coeff: t.coeff,
            vanishes: t.vanishes,
        })
        .collect()
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn expand(text: &str, n_override: &[f64], terms: Option<usize>, tol: Option<f64>) -> Result<Outcome, CliError> {
    let mut prob = problem::parse(text)?;
    if let Some(s) = terms {
        if s == 0 {
            return Err(CliError::Input("--terms must be at least 1".into()));
        }
        prob.order = s;
    }
    if !n_override.is_empty() {
        if prob.contour.is_none() {
            return Err(CliError::Input("--n needs a contour in the problem file".into()));
        }
        prob.n = n_override.to_vec();
    }
    let (ex, mu) = build_expansion(&prob)?;
    let s = prob.order;
    let mut report = Report {
        title: "expand".into(),
        params: vec![
            ("z0".into(), Cell::Complex(prob.z0)),
            ("mu".into(), Cell::Int(mu as i64)),
            ("a".into(), Cell::Text(prob.a.to_string())),
            ("variant".into(), Cell::Text(serde_json::to_string(&prob.variant).expect("serializable"))),
            ("terms".into(), Cell::Int(s as i64)),
            ("p(z0)".into(), Cell::Complex(ex.p_at_z0)),
        ],
        terms: term_rows(&ex, s),
        warnings: ex.warnings.clone(),
        ..Default::default()
    };
    if let Some(contour) = &prob.contour {
        let opts = QuadratureOptions::from_env()?;
        for &n in &prob.n {
            let p_z0 = ex.p_at_z0;
            let (z0, pspec, qspec) = (prob.z0, prob.p.clone(), prob.q.clone());
            let f = move |z: Complex64| (n * (pspec.eval(z0, z) - p_z0)).exp() * qspec.eval(z0, z);
            let quad = match polynomial_power(prob.a) {
                // (z - z0)^(a-1) is a polynomial: no branch point to avoid.
                Some(k) => integrate_with(move |z| f(z) * (z - z0).powi(k), contour, &opts),
                None => integrate_power_factor(f, prob.a.value(), prob.z0, contour, &opts)?,
            };
            let expansion = ex.evaluate_scaled(n, s)?;
            let rel = relative(expansion, quad.value);
            report.comparisons.push(Comparison {
                n,
                terms: s,
                expansion,
                quadrature: quad.value,
                error_estimate: quad.error_estimate,
                converged: quad.converged,
                relative_difference: rel,
                digits: examples::agreement_digits(expansion, quad.value),
            });
        }
        if !prob.n.is_empty() {
            report
                .notes
                .push("expansion and quadrature values exclude the common factor e^{N p(z0)}".into());
        }
    }
    Ok(Outcome::from_report(report, tol))
}

fn polynomial_power(a: ExponentParam) -> Option<i32> {
    match a {
        ExponentParam::Exact(r) if r.is_integer() && *r.numer() >= 1 => i32::try_from(r.numer() - 1).ok(),
        _ => None,
    }
}

fn build_expansion(prob: &Problem) -> Result<(AsymptoticExpansion, usize), CliError> {
    let s = prob.order;
    let mu = match prob.mu {
        Some(m) => m,
        None => {
            let probe = prob.p.series(prob.z0, s + 8)?;
            normalize(&probe)?.mu
        }
    };
    if let problem::FunctionSpec::Coeffs(c) = &prob.p {
        if c.len() < mu + s {
            return Err(CliError::Input(format!(
                "p has {} coefficients but mu = {mu} with {s} terms needs {}",
                c.len(),
                mu + s
            )));
        }
    }
    let p = prob.p.series(prob.z0, prob.p_order(mu))?;
    let nf = normalize_with_order(&p, mu)?;
    let q = prob.q.series(prob.z0, s - 1)?;
    let alphas = alpha_bell(&nf, &q, prob.a, s)?;
    Ok((assemble(&alphas, &nf, prob.variant)?, mu))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExampleFlags {
    pub n: Option<f64>,
    pub eps: Option<f64>,
    pub lambda: Option<Rational64>,
    pub terms: Option<usize>,
}

fn table_cell(v: &TableValue) -> Cell {
    match v {
        TableValue::Exact(r) => Cell::Exact(format!("{}/{}", r.numer(), r.denom())),
        TableValue::Real(x) => Cell::Real(*x),
        TableValue::Complex(z) => Cell::Complex(*z),
    }
}

fn example_report(r: &ExampleReport) -> Report {
    let mut params = vec![("N".into(), Cell::Real(r.n))];
    if let Some(eps) = r.eps {
        params.push(("eps".into(), Cell::Real(eps)));
    }
    params.push(("terms".into(), Cell::Int(r.terms as i64)));
    let oracle = r.oracle.as_ref();
    Report {
        title: format!("example {}", r.name),
        params,
        table: r
            .coefficient_table
            .iter()
            .map(|e| (e.label.clone(), table_cell(&e.value)))
            .collect(),
        terms: term_rows(&r.expansion, r.terms),
        comparisons: vec![Comparison {
            n: r.n,
            terms: r.terms,
            expansion: r.expansion_value,
            quadrature: r.oracle_value,
            error_estimate: oracle.map_or(0.0, |q| q.error_estimate * (r.oracle_value.norm() / q.value.norm())),
            converged: oracle.is_none_or(|q| q.converged),
            relative_difference: relative(r.expansion_value, r.oracle_value),
            digits: r.agreement_digits,
        }],
        warnings: r.expansion.warnings.clone(),
        ..Default::default()
    }
}

fn reject(flag: &str, name: &str, given: bool) -> Result<(), CliError> {
    if given {
        return Err(CliError::Input(format!("{flag} does not apply to example '{name}'")));
    }
    Ok(())
}

pub fn example(name: &str, flags: ExampleFlags, tol: Option<f64>) -> Result<Outcome, CliError> {
    let opts = QuadratureOptions::from_env()?;
    let n = flags.n;
    if name != "sylvester" {
        reject("--lambda", name, flags.lambda.is_some())?;
    }
    if name != "center" {
        reject("--eps", name, flags.eps.is_some())?;
    }
    let report = match name {
        "gamma" => {
            let m = flags.terms.unwrap_or(3);
            let r = examples::gamma_report(n.unwrap_or(50.0), m, &opts)?;
            let mut report = example_report(&r);
            report
                .notes
                .push(format!("terms = {m} Stirling coefficients, i.e. {} expansion terms", 2 * m + 1));
            report
        }
        "kepler" => example_report(&examples::kepler_plain(n.unwrap_or(50.0), flags.terms.unwrap_or(10), &opts)?),
        "center" => {
            let eps = flags
                .eps
                .ok_or_else(|| CliError::Input("example 'center' needs --eps".into()))?;
            example_report(&examples::equation_of_center(
                eps,
                n.unwrap_or(50.0),
                flags.terms.unwrap_or(13),
                &opts,
            )?)
        }
        "parabolic" => example_report(&examples::parabolic(n.unwrap_or(50.0), flags.terms.unwrap_or(8), &opts)?),
        "sylvester" => return sylvester_example(flags),
        other => {
            return Err(CliError::Input(format!(
                "unknown example '{other}' (known: gamma, kepler, center, parabolic, sylvester)"
            )))
        }
    };
    Ok(Outcome::from_report(report, tol))
}

fn sylvester_example(flags: ExampleFlags) -> Result<Outcome, CliError> {
    let n = flags.n.unwrap_or(2000.0);
    if !(n >= 1.0 && n.fract() == 0.0 && n <= u64::MAX as f64) {
        return Err(CliError::Input(format!("example 'sylvester' needs a positive integer --n, got {n}")));
    }
    let n = n as u64;
    let lambda = flags.lambda.unwrap_or_else(|| Rational64::from_integer(1));
    let terms = flags.terms.unwrap_or(3);
    if terms == 0 || terms > sylvester::MAX_T + 1 {
        return Err(CliError::Input(format!(
            "--terms for 'sylvester' must be between 1 and {}",
            sylvester::MAX_T + 1
        )));
    }
    let session = sylvester::WaveSession::new(terms - 1)?;
    let ex = session.coefficients(lambda)?;
    let c = session.constants;
    let mut report = Report {
        title: "example sylvester".into(),
        params: vec![
            ("N".into(), Cell::Int(n as i64)),
            ("lambda".into(), Cell::Exact(format!("{}/{}", lambda.numer(), lambda.denom()))),
            ("terms".into(), Cell::Int(terms as i64)),
        ],
        ..Default::default()
    };
    report.values.extend([
        ("w0".into(), Cell::Complex(c.w0)),
        ("z0".into(), Cell::Complex(c.z0_wave)),
        ("p0".into(), Cell::Complex(c.p0_wave)),
        ("theta0".into(), Cell::Real(c.theta0)),
        ("log(1/|w0|)".into(), Cell::Real(-c.w0.norm().ln())),
        ("residual".into(), Cell::Real(c.residual)),
    ]);
    for (t, a) in ex.coeffs.iter().enumerate() {
        report.table.push((format!("a_{t}"), Cell::Complex(*a)));
    }
    let closed = sylvester::a0_closed_form(&c, lambda);
    report.values.push(("a_0 closed form".into(), Cell::Complex(closed)));
    for k in 1..=terms {
        let v = ex.main_term(n, k)?;
        report.values.push((format!("main term, {k} term(s)"), Cell::Real(v)));
        report.values.push((format!("main term, {k} term(s), 3 s.f."), Cell::Text(format!("{v:.2e}"))));
    }
    let a0_err = relative(ex.coeffs[0], closed);
    let ok = a0_err < 1e-9;
    Ok(Outcome {
        report,
        ok,
        failure: (!ok).then(|| format!("a_0 differs from its closed form by {a0_err:.3e}")),
    })
}

pub fn selftest(fault: Option<&str>) -> Result<Outcome, CliError> {
    let fault = fault
        .map(|f| f.parse::<Fault>().map_err(CliError::Input))
        .transpose()?;
    let summary = selftest::run(fault);
    let mut report = Report {
        title: "selftest".into(),
        ..Default::default()
    };
    for c in &summary.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        report
            .values
            .push((c.name.to_string(), Cell::Text(format!("{status} ({})", c.detail))));
    }
    report.params.push(("passed".into(), Cell::Int(summary.passed as i64)));
    report.params.push(("failed".into(), Cell::Int(summary.failed as i64)));
    let ok = summary.ok();
    Ok(Outcome {
        report,
        ok,
        failure: (!ok).then(|| format!("failing invariants: {}", summary.failing.join(", "))),
    })
}

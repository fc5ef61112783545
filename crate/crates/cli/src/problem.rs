//! Problem files: one `key = <JSON>` per line, `#` starts a comment.
//! See `docs/problem-file.md` for the full format.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::rational::Rational64;
use saddlepoint::expansion::{BranchSpec, ExponentParam};
use saddlepoint::quadrature::{Contour, Piece};
use saddlepoint::series::{elementary, ComplexSeries};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing required key '{0}'")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

fn line_err(line: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Line {
        line,
        message: message.into(),
    }
}

/// A function given either by name or by Taylor coefficients about `z0`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Builtin { name: String, eps: Option<f64> },
    Coeffs(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub z0: Complex64,
    pub p: FunctionSpec,
    pub q: FunctionSpec,
    pub a: ExponentParam,
    pub variant: BranchSpec,
    /// Number of terms `S`.
    pub order: usize,
    /// `μ`; detected from `p` when absent.
    pub mu: Option<usize>,
    pub contour: Option<Contour>,
    pub n: Vec<f64>,
}

const KEYS: &[&str] = &["z0", "p", "q", "a", "variant", "order", "mu", "contour", "branch_angle", "n"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionJson {
    builtin: Option<String>,
    eps: Option<f64>,
    coeffs: Option<Vec<Value>>,
}

pub fn parse(text: &str) -> Result<Problem, ProblemError> {
    let mut raw: BTreeMap<&str, (usize, Value)> = BTreeMap::new();
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(full).trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| line_err(line, "expected 'key = value'"))?;
        let key = key.trim();
        let key = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| line_err(line, format!("unknown key '{key}'")))?;
        let value: Value = serde_json::from_str(value.trim())
            .map_err(|e| line_err(line, format!("value of '{key}' is not valid JSON: {e}")))?;
        if let Some((first, _)) = raw.get(key) {
            return Err(line_err(line, format!("'{key}' already given on line {first}")));
        }
        raw.insert(key, (line, value));
    }

    let take = |key: &'static str| raw.get(key).cloned();
    let need = |key: &'static str| take(key).ok_or(ProblemError::Missing(key));

    let (line, v) = need("z0")?;
    let z0 = complex_from(&v).map_err(|m| line_err(line, m))?;
    let (line, v) = need("p")?;
    let p = function_from(&v).map_err(|m| line_err(line, m))?;
    let q = match take("q") {
        Some((line, v)) => function_from(&v).map_err(|m| line_err(line, m))?,
        None => FunctionSpec::Builtin {
            name: "one".into(),
            eps: None,
        },
    };
    let a = match take("a") {
        Some((line, v)) => exponent_from(&v).map_err(|m| line_err(line, m))?,
        None => ExponentParam::one(),
    };
    let (line, v) = need("variant")?;
    let variant: BranchSpec =
        serde_json::from_value(v).map_err(|e| line_err(line, format!("bad variant: {e}")))?;
    let (line, v) = need("order")?;
    let order = v
        .as_u64()
        .filter(|&s| s >= 1)
        .ok_or_else(|| line_err(line, "order must be a positive integer"))? as usize;
    let mu = match take("mu") {
        Some((line, v)) => Some(
            v.as_u64()
                .filter(|&m| m >= 1)
                .ok_or_else(|| line_err(line, "mu must be a positive integer"))? as usize,
        ),
        None => None,
    };
    let contour = match take("contour") {
        Some((line, v)) => {
            let pieces: Vec<Piece> =
                serde_json::from_value(v).map_err(|e| line_err(line, format!("bad contour: {e}")))?;
            let mut c = Contour::new(pieces).map_err(|e| line_err(line, e.to_string()))?;
            if let Some((bline, b)) = take("branch_angle") {
                let angle = b
                    .as_f64()
                    .ok_or_else(|| line_err(bline, "branch_angle must be a number"))?;
                c = c.with_branch_angle(angle);
            }
            Some(c)
        }
        None => {
            if let Some((bline, _)) = take("branch_angle") {
                return Err(line_err(bline, "branch_angle given without a contour"));
            }
            None
        }
    };
    let n = match take("n") {
        Some((line, v)) => {
            let list = match v {
                Value::Array(items) => items,
                single => vec![single],
            };
            list.iter()
                .map(|x| x.as_f64().filter(|n| *n > 0.0))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| line_err(line, "n must be a positive number or a list of them"))?
        }
        None => Vec::new(),
    };
    if !n.is_empty() && contour.is_none() {
        return Err(ProblemError::Invalid("'n' needs a 'contour' to compare against".into()));
    }

    let problem = Problem {
        z0,
        p,
        q,
        a,
        variant,
        order,
        mu,
        contour,
        n,
    };
    problem.check_lengths()?;
    Ok(problem)
}

fn strip_comment(line: &str) -> &str {
    // '#' inside JSON strings is not used by any key, so a plain split is enough.
    line.split_once('#').map_or(line, |(head, _)| head)
}

fn complex_from(v: &Value) -> Result<Complex64, String> {
    match v {
        Value::Number(x) => Ok(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(items) if items.len() == 2 => {
            let re = items[0].as_f64().ok_or("real part must be a number")?;
            let im = items[1].as_f64().ok_or("imaginary part must be a number")?;
            Ok(Complex64::new(re, im))
        }
        _ => Err("expected a number or [re, im]".into()),
    }
}

fn function_from(v: &Value) -> Result<FunctionSpec, String> {
    let f: FunctionJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    match (f.builtin, f.coeffs) {
        (Some(name), None) => {
            if !["one", "gamma", "kepler", "center"].contains(&name.as_str()) {
                return Err(format!("unknown builtin '{name}' (known: one, gamma, kepler, center)"));
            }
            if name == "center" && f.eps.is_none() {
                return Err("builtin 'center' needs eps".into());
            }
            Ok(FunctionSpec::Builtin { name, eps: f.eps })
        }
        (None, Some(c)) if !c.is_empty() => c
            .iter()
            .map(complex_from)
            .collect::<Result<Vec<_>, _>>()
            .map(FunctionSpec::Coeffs),
        _ => Err("give exactly one of 'builtin' or a non-empty 'coeffs'".into()),
    }
}

fn exponent_from(v: &Value) -> Result<ExponentParam, String> {
    match v {
        Value::String(s) => s
            .trim()
            .parse::<Rational64>()
            .map(ExponentParam::Exact)
            .map_err(|_| format!("'{s}' is not a rational 'num/den'")),
        Value::Number(x) => match x.as_i64() {
            Some(k) => Ok(ExponentParam::integer(k)),
            None => Ok(ExponentParam::Complex(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0))),
        },
        Value::Array(_) => complex_from(v).map(ExponentParam::Complex),
        _ => Err("a must be \"num/den\", an integer, or [re, im]".into()),
    }
}

impl FunctionSpec {
    /// Taylor series about `z0` up to `order`.
    pub fn series(&self, z0: Complex64, order: usize) -> Result<ComplexSeries, ProblemError> {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let wrap = |e: saddlepoint::Error| ProblemError::Invalid(e.to_string());
        match self {
            FunctionSpec::Coeffs(c) => {
                let mut c = c.clone();
                c.resize(order + 1, Complex64::new(0.0, 0.0));
                c.truncate(order + 1);
                ComplexSeries::new(z0, c).map_err(wrap)
            }
            FunctionSpec::Builtin { name, eps } => {
                let z = ComplexSeries::identity(z0, order);
                match name.as_str() {
                    "one" => Ok(ComplexSeries::one(z0, order)),
                    "gamma" => {
                        if z0.norm() == 0.0 {
                            return Err(ProblemError::Invalid("builtin 'gamma' needs z0 != 0".into()));
                        }
                        elementary::log(z0, order).sub(&z).map_err(wrap)
                    }
                    "kepler" | "center" => {
                        let e = eps.unwrap_or(1.0);
                        z.sub(&elementary::sin(z0, one, order).scale(&Complex64::new(e, 0.0)))
                            .map(|s| s.scale(&i))
                            .map_err(wrap)
                    }
                    other => Err(ProblemError::Invalid(format!("unknown builtin '{other}'"))),
                }
            }
        }
    }

    /// Point evaluation; coefficient lists are treated as polynomials in `z - z0`.
    pub fn eval(&self, z0: Complex64, z: Complex64) -> Complex64 {
        let i = Complex64::i();
        match self {
            FunctionSpec::Coeffs(c) => {
                let h = z - z0;
                c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * h + x)
            }
            FunctionSpec::Builtin { name, eps } => match name.as_str() {
                "one" => Complex64::new(1.0, 0.0),
                "gamma" => -z + z.ln(),
                _ => i * (z - eps.unwrap_or(1.0) * z.sin()),
            },
        }
    }

    fn coeff_len(&self) -> Option<usize> {
        match self {
            FunctionSpec::Coeffs(c) => Some(c.len()),
            FunctionSpec::Builtin { .. } => None,
        }
    }
}

impl Problem {
    /// Coefficient lists must cover what `S` terms read: `q_0..q_{S-1}` and
    /// `p_0..p_{μ+S-1}`.
    fn check_lengths(&self) -> Result<(), ProblemError> {
        if let Some(len) = self.q.coeff_len() {
            if len < self.order {
                return Err(ProblemError::Invalid(format!(
                    "q has {len} coefficients but order {} needs {}",
                    self.order, self.order
                )));
            }
        }
        if let (Some(len), Some(mu)) = (self.p.coeff_len(), self.mu) {
            let needed = mu + self.order;
            if len < needed {
                return Err(ProblemError::Invalid(format!(
                    "p has {len} coefficients but mu = {mu} with order {} needs {needed}",
                    self.order
                )));
            }
        }
        Ok(())
    }

    /// Series order for `p`, given `μ`.
    pub fn p_order(&self, mu: usize) -> usize {
        mu + self.order - 1
    }
}

//! Report rendering in text, JSON and TSV. Floats always carry 17
//! significant digits so identical runs print identical bytes.

use clap::ValueEnum;
use num::complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Exact rational as `num/den`.
    Exact(String),
    Real(f64),
    Complex(Complex64),
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermRow {
    pub s: usize,
    pub exponent: Complex64,
    pub coeff: Complex64,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub n: f64,
    pub terms: usize,
    pub expansion: Complex64,
    pub quadrature: Complex64,
    pub error_estimate: f64,
    pub converged: bool,
    pub relative_difference: f64,
    pub digits: i32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub title: String,
    pub params: Vec<(String, Cell)>,
    pub table: Vec<(String, Cell)>,
    pub terms: Vec<TermRow>,
    pub comparisons: Vec<Comparison>,
    pub values: Vec<(String, Cell)>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Exact(s) | Cell::Text(s) => s.clone(),
        Cell::Real(x) => real(*x),
        Cell::Complex(z) => complex(*z),
        Cell::Int(k) => k.to_string(),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
        Cell::Real(x) => json!(x),
        Cell::Complex(z) => complex_json(*z),
        Cell::Int(k) => json!(k),
    }
}

fn pairs_json(pairs: &[(String, Cell)]) -> Value {
    // Keep insertion order with an array of objects rather than a map.
    Value::Array(
        pairs
            .iter()
            .map(|(k, v)| json!({"name": k, "value": cell_json(v)}))
            .collect(),
    )
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Tsv => self.tsv(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.title));
        for (k, v) in &self.params {
            out.push_str(&format!("{k} = {}\n", cell_text(v)));
        }
        if !self.table.is_empty() {
            out.push_str("\ncoefficients:\n");
            for (k, v) in &self.table {
                out.push_str(&format!("  {k} = {}\n", cell_text(v)));
            }
        }
        if !self.terms.is_empty() {
            out.push_str("\nterms (coefficient of N^-exponent):\n");
            for t in &self.terms {
                let mark = if t.vanishes { "  (vanishes)" } else { "" };
                out.push_str(&format!(
                    "  s = {:>2}  exponent = {}  coeff = {}{mark}\n",
                    t.s,
                    complex(t.exponent),
                    complex(t.coeff)
                ));
            }
        }
        for c in &self.comparisons {
            out.push_str(&format!("\nN = {}, S = {}\n", real(c.n), c.terms));
            out.push_str(&format!("  expansion  = {}\n", complex(c.expansion)));
            out.push_str(&format!("  quadrature = {}\n", complex(c.quadrature)));
            out.push_str(&format!("  quadrature error estimate = {}\n", real(c.error_estimate)));
            if !c.converged {
                out.push_str("  quadrature did not converge\n");
            }
            out.push_str(&format!("  relative difference = {}\n", real(c.relative_difference)));
            out.push_str(&format!("  agreement: {} digits\n", c.digits));
        }
        if !self.values.is_empty() {
            out.push('\n');
            for (k, v) in &self.values {
                out.push_str(&format!("{k} = {}\n", cell_text(v)));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }

    fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("title".into(), json!(self.title));
        m.insert("params".into(), pairs_json(&self.params));
        m.insert("coefficients".into(), pairs_json(&self.table));
        m.insert(
            "terms".into(),
            Value::Array(
                self.terms
                    .iter()
                    .map(|t| {
                        json!({
                            "s": t.s,
                            "exponent": complex_json(t.exponent),
                            "coeff": complex_json(t.coeff),
                            "vanishes": t.vanishes,
                        })
                    })
                    .collect(),
            ),
        );
        m.insert(
            "comparisons".into(),
            Value::Array(
                self.comparisons
                    .iter()
                    .map(|c| {
                        json!({
                            "n": c.n,
                            "terms": c.terms,
                            "expansion": complex_json(c.expansion),
                            "quadrature": complex_json(c.quadrature),
                            "error_estimate": c.error_estimate,
                            "converged": c.converged,
                            "relative_difference": c.relative_difference,
                            "agreement_digits": c.digits,
                        })
                    })
                    .collect(),
            ),
        );
        m.insert("values".into(), pairs_json(&self.values));
        m.insert("notes".into(), json!(self.notes));
        m.insert("warnings".into(), json!(self.warnings));
        Value::Object(m)
    }

    fn tsv(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, fields: &[String]| {
            out.push_str(&fields.join("\t"));
            out.push('\n');
        };
        row(&mut out, &["title".into(), self.title.clone()]);
        for (k, v) in &self.params {
            row(&mut out, &["param".into(), k.clone(), cell_text(v)]);
        }
        for (k, v) in &self.table {
            row(&mut out, &["coeff".into(), k.clone(), cell_text(v)]);
        }
        if !self.terms.is_empty() {
            row(
                &mut out,
                &["#term", "s", "exponent_re", "exponent_im", "coeff_re", "coeff_im", "vanishes"]
                    .map(String::from),
            );
        }
        for t in &self.terms {
            row(
                &mut out,
                &[
                    "term".into(),
                    t.s.to_string(),
                    real(t.exponent.re),
                    real(t.exponent.im),
                    real(t.coeff.re),
                    real(t.coeff.im),
                    t.vanishes.to_string(),
                ],
            );
        }
        if !self.comparisons.is_empty() {
            row(
                &mut out,
                &[
                    "#compare", "n", "terms", "expansion_re", "expansion_im", "quadrature_re",
                    "quadrature_im", "error_estimate", "converged", "relative_difference", "digits",
                ]
                .map(String::from),
            );
        }
        for c in &self.comparisons {
            row(
                &mut out,
                &[
                    "compare".into(),
                    real(c.n),
                    c.terms.to_string(),
                    real(c.expansion.re),
                    real(c.expansion.im),
                    real(c.quadrature.re),
                    real(c.quadrature.im),
                    real(c.error_estimate),
                    c.converged.to_string(),
                    real(c.relative_difference),
                    c.digits.to_string(),
                ],
            );
        }
        for (k, v) in &self.values {
            row(&mut out, &["value".into(), k.clone(), cell_text(v)]);
        }
        for n in &self.notes {
            row(&mut out, &["note".into(), n.clone()]);
        }
        for w in &self.warnings {
            row(&mut out, &["warning".into(), w.clone()]);
        }
        out
    }
}

//! Complex Gamma function and the principal dilogarithm.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::series::bernoulli_numbers;

const STIRLING_TERMS: usize = 8;
const STIRLING_SHIFT: f64 = 15.0;
const DILOG_TERMS: usize = 30;

fn bernoulli_f64() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        bernoulli_numbers(2 * DILOG_TERMS + 2)
            .iter()
            .map(|b| b.to_f64().expect("finite"))
            .collect()
    })
}

/// `log Γ(w)` by the Stirling series, for `Re w >= STIRLING_SHIFT`.
fn ln_gamma_stirling(w: Complex64) -> Complex64 {
    let b = bernoulli_f64();
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    let mut acc = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut power = inv;
    for k in 1..=STIRLING_TERMS {
        let kk = 2 * k;
        acc += power * (b[kk] / ((kk * (kk - 1)) as f64));
        power *= inv2;
    }
    acc
}

/// Complex Gamma function. Poles at non-positive integers yield non-finite values.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return PI / (s * gamma(1.0 - z));
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.re < STIRLING_SHIFT {
        prod *= w;
        w += 1.0;
    }
    ln_gamma_stirling(w).exp() / prod
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

/// `Σ_{n>=0} B_n u^{n+1}/(n+1)!`, which equals `Li2(1 - e^{-u})`.
fn dilog_bernoulli_series(u: Complex64) -> Complex64 {
    let b = bernoulli_f64();
    let u2 = u * u;
    let mut acc = u - u2 / 4.0;
    // u^{2k+1}/(2k+1)!
    let mut term = u;
    for k in 1..=DILOG_TERMS {
        let n = 2 * k;
        term = term * u2 / ((n * (n + 1)) as f64);
        acc += term * b[n];
    }
    acc
}

/// Principal branch of `Li2(z) = Σ z^n/n²`, continued analytically off the cut `[1, ∞)`.
///
/// `z = 1` itself is accepted and gives `π²/6`.
pub fn dilog(z: Complex64) -> Result<Complex64> {
    let zeta2 = PI * PI / 6.0;
    if z.im == 0.0 && z.re >= 1.0 {
        if z.re == 1.0 {
            return Ok(Complex64::new(zeta2, 0.0));
        }
        return Err(Error::OnBranchCut(format!("{z}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    let one = Complex64::new(1.0, 0.0);
    if z.re <= 0.5 {
        if z.norm() <= 1.0 {
            return Ok(dilog_bernoulli_series(-(one - z).ln()));
        }
        return Ok(inversion(z));
    }
    if (one - z).norm() <= 1.0 {
        // Li2(z) = -Li2(1-z) + π²/6 - log z log(1-z)
        let head = dilog_bernoulli_series(-z.ln());
        return Ok(-head + zeta2 - z.ln() * (one - z).ln());
    }
    Ok(inversion(z))
}

/// `Li2(z) = -Li2(1/z) - π²/6 - log²(-z)/2`, for `|z| > 1` off the cut.
fn inversion(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let inner = dilog_bernoulli_series(-(one - 1.0 / z).ln());
    let l = (-z).ln();
    -inner - PI * PI / 6.0 - 0.5 * l * l
}

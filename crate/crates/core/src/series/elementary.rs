//! Taylor series of elementary functions of `c·z` at a base point.

use num::complex::Complex64;

use super::ComplexSeries;

fn series(base: Complex64, coeffs: Vec<Complex64>) -> ComplexSeries {
    ComplexSeries::new(base, coeffs).expect("order + 1 coefficients")
}

/// `exp(c z)` about `base`.
pub fn exp(base: Complex64, c: Complex64, order: usize) -> ComplexSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = (c * base).exp();
    for k in 0..=order {
        coeffs.push(term);
        term = term * c / (k as f64 + 1.0);
    }
    series(base, coeffs)
}

/// `sin(c z)` about `base`.
pub fn sin(base: Complex64, c: Complex64, order: usize) -> ComplexSeries {
    let i = Complex64::i();
    let plus = exp(base, i * c, order);
    let minus = exp(base, -i * c, order);
    let coeffs = plus
        .coeffs()
        .iter()
        .zip(minus.coeffs())
        .map(|(a, b)| (a - b) / (2.0 * i))
        .collect();
    series(base, coeffs)
}

/// `cos(c z)` about `base`.
pub fn cos(base: Complex64, c: Complex64, order: usize) -> ComplexSeries {
    let i = Complex64::i();
    let plus = exp(base, i * c, order);
    let minus = exp(base, -i * c, order);
    let coeffs = plus
        .coeffs()
        .iter()
        .zip(minus.coeffs())
        .map(|(a, b)| (a + b) / 2.0)
        .collect();
    series(base, coeffs)
}

/// Principal `log z` about `base`; `base` must be nonzero.
pub fn log(base: Complex64, order: usize) -> ComplexSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(base.ln());
    let inv = 1.0 / base;
    let mut power = inv;
    for k in 1..=order {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        coeffs.push(power * (sign / k as f64));
        power *= inv;
    }
    series(base, coeffs)
}

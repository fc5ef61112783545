use num::complex::Complex64;

use crate::error::{Error, Result};

pub type Integrand = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandParams {
    pub n: f64,
    /// Eccentricity, required by `center`.
    pub eps: Option<f64>,
    /// Integrate `e^{N (p(z) - p(z0))}` instead of `e^{N p(z)}`, so that the
    /// result stays of moderate size; multiply by `e^{N p(z0)}` afterwards.
    pub shifted: bool,
}

impl IntegrandParams {
    pub fn new(n: f64) -> Self {
        Self {
            n,
            eps: None,
            shifted: false,
        }
    }

    pub fn eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn shifted(mut self) -> Self {
        self.shifted = true;
        self
    }
}

/// `(1 + sqrt(1 - ε²))/ε`.
pub(crate) fn center_gamma(eps: f64) -> f64 {
    (1.0 + (1.0 - eps * eps).sqrt()) / eps
}

/// Saddle value `p(z0)` of the named integrand's exponent.
pub(crate) fn saddle_value(name: &str, eps: Option<f64>) -> Result<Complex64> {
    Ok(match name {
        "gamma" => Complex64::new(-1.0, 0.0),
        "kepler_plain" | "parabolic" => Complex64::new(0.0, 0.0),
        "center" => {
            let eps = check_eps(eps)?;
            Complex64::new((1.0 - eps * eps).sqrt() - center_gamma(eps).ln(), 0.0)
        }
        other => return Err(Error::UnknownIntegrand(other.to_string())),
    })
}

fn check_eps(eps: Option<f64>) -> Result<f64> {
    let eps = eps.ok_or_else(|| Error::Precondition("integrand 'center' needs eps".into()))?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1)",
        });
    }
    Ok(eps)
}

/// The integrands of the worked examples:
///
/// - `gamma`: `e^{N(-z + log z)}`
/// - `kepler_plain`: `e^{N i (z - sin z)}`
/// - `center`: `e^{N i (z - ε sin z)} / (1 - ε cos z)`
/// - `parabolic`: `e^{N i (z - sin z)} / (1 - cos z)`
pub fn builtin_integrand(name: &str, params: &IntegrandParams) -> Result<Integrand> {
    let n = params.n;
    let i = Complex64::i();
    let p_z0 = saddle_value(name, params.eps)?;
    let shift = if params.shifted { p_z0 } else { Complex64::new(0.0, 0.0) };
    Ok(match name {
        "gamma" => Box::new(move |z: Complex64| (n * (-z + z.ln() - shift)).exp()),
        "kepler_plain" => Box::new(move |z: Complex64| (n * (i * (z - z.sin()) - shift)).exp()),
        "center" => {
            let eps = check_eps(params.eps)?;
            Box::new(move |z: Complex64| {
                (n * (i * (z - eps * z.sin()) - shift)).exp() / (1.0 - eps * z.cos())
            })
        }
        "parabolic" => Box::new(move |z: Complex64| {
            // 1 - cos z = 2 sin²(z/2) without cancellation near 0
            let s = (z / 2.0).sin();
            (n * (i * (z - z.sin()) - shift)).exp() / (2.0 * s * s)
        }),
        other => return Err(Error::UnknownIntegrand(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_at_one() {
        let f = builtin_integrand("gamma", &IntegrandParams::new(1.0)).unwrap();
        assert!((f(c(1.0, 0.0)) - c((-1f64).exp(), 0.0)).norm() < 1e-16);
        let g = builtin_integrand("gamma", &IntegrandParams::new(1.0).shifted()).unwrap();
        assert!((g(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn kepler_at_zero() {
        let f = builtin_integrand("kepler_plain", &IntegrandParams::new(50.0)).unwrap();
        assert_eq!(f(c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn center_finite_near_pole() {
        let eps = 0.4;
        let f = builtin_integrand("center", &IntegrandParams::new(50.0).eps(eps)).unwrap();
        let z0 = c(0.0, center_gamma(eps).ln());
        let v = f(z0 + 0.1);
        assert!(v.re.is_finite() && v.im.is_finite());
        // the denominator vanishes at the saddle
        assert!((1.0 - eps * z0.cos()).norm() < 1e-15);
    }

    #[test]
    fn center_shift_is_saddle_value() {
        let eps = 0.4;
        let z0 = c(0.0, center_gamma(eps).ln());
        let p = Complex64::i() * (z0 - eps * z0.sin());
        assert!((p - saddle_value("center", Some(eps)).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            builtin_integrand("airy", &IntegrandParams::new(1.0)),
            Err(Error::UnknownIntegrand(_))
        ));
        assert!(matches!(
            builtin_integrand("center", &IntegrandParams::new(1.0).eps(1.0)),
            Err(Error::OutOfRange { .. })
        ));
    }
}

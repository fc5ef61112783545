//! Normal form `p(z) = p(z0) - p0 (z - z0)^μ (1 - φ(z))` of a saddle, the
//! steepest-descent geometry around it, and numerical helpers for locating
//! saddles and checking that a contour stays below the saddle height.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero;

use crate::error::{Error, Result};
use crate::quadrature::Contour;
use crate::series::{BellArguments, ComplexSeries};

/// Relative modulus below which a Taylor coefficient of `p - p(z0)` counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;
/// `|cos(ω0 + μθ)|` below this marks a ridge direction.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;
/// Radius of the disk around the saddle skipped by [`check_max_condition`].
pub const EXCLUDED_RADIUS: f64 = 1e-6;
pub const DEFAULT_MAX_SAMPLES: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct SaddleNormalForm {
    pub z0: Complex64,
    pub p_at_z0: Complex64,
    pub mu: usize,
    pub p0: Complex64,
    /// `arg p0` in `(-π, π]`.
    pub omega0: f64,
    /// `φ` with `φ(z0) = 0`; index `s` holds `-p_s/p0`.
    pub phi: ComplexSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionClass {
    Valley { sector: i64 },
    Hill,
    Boundary,
}

/// Normal form of `p`, detecting `μ` as the first coefficient of `p - p(z0)`
/// whose modulus exceeds [`ZERO_THRESHOLD`] times the largest one.
pub fn normalize(p: &ComplexSeries) -> Result<SaddleNormalForm> {
    let coeffs = p.coeffs();
    let scale = coeffs
        .iter()
        .skip(1)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::DegenerateSaddle);
    }
    let mu = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| c.norm() >= ZERO_THRESHOLD * scale)
        .map(|(k, _)| k)
        .ok_or(Error::DegenerateSaddle)?;
    normalize_with_order(p, mu)
}

/// Normal form with `μ` supplied by the caller; coefficients below index
/// `μ` are ignored.
pub fn normalize_with_order(p: &ComplexSeries, mu: usize) -> Result<SaddleNormalForm> {
    if mu == 0 {
        return Err(Error::Precondition("mu must be at least 1".into()));
    }
    let coeffs = p.coeffs();
    if mu > p.order() {
        return Err(Error::UnderResolved {
            what: "Taylor coefficients of p",
            needed: mu + 1,
            available: coeffs.len(),
        });
    }
    let c_mu = coeffs[mu];
    if c_mu.is_zero() {
        return Err(Error::DegenerateSaddle);
    }
    let p0 = -c_mu;
    let mut phi = vec![Complex64::zero(); p.order() - mu + 1];
    for (s, slot) in phi.iter_mut().enumerate().skip(1) {
        *slot = -coeffs[mu + s] / c_mu;
    }
    Ok(SaddleNormalForm {
        z0: *p.base(),
        p_at_z0: coeffs[0],
        mu,
        p0,
        omega0: p0.arg(),
        phi: ComplexSeries::new(*p.base(), phi)?,
    })
}

impl SaddleNormalForm {
    /// Steepest-descent angle `θ_ℓ = -ω0/μ + 2πℓ/μ`.
    pub fn theta(&self, ell: i64) -> f64 {
        let mu = self.mu as f64;
        -self.omega0 / mu + 2.0 * PI * ell as f64 / mu
    }

    fn ridge_cos(&self, direction: f64) -> f64 {
        (self.omega0 + self.mu as f64 * direction).cos()
    }

    /// Index `k` of the steepest-descent angle `θ_k` within `π/μ` of
    /// `direction`. `k` is not reduced modulo `μ`, so directions differing by
    /// `2π` give indices differing by `μ`. Directions on a ridge `θ_k ± π/μ`
    /// are rejected.
    pub fn sector_index(&self, direction: f64) -> Result<i64> {
        let x = (direction - self.theta(0)) * self.mu as f64 / (2.0 * PI);
        if ((x - x.floor()) - 0.5).abs() < BOUNDARY_TOLERANCE {
            return Err(Error::RidgeDirection { direction });
        }
        Ok(x.round() as i64)
    }

    pub fn classify_direction(&self, direction: f64) -> DirectionClass {
        let cos = self.ridge_cos(direction);
        if cos > BOUNDARY_TOLERANCE {
            let mu = self.mu as f64;
            let sector = ((direction - self.theta(0)) * mu / (2.0 * PI)).round() as i64;
            DirectionClass::Valley { sector }
        } else if cos < -BOUNDARY_TOLERANCE {
            DirectionClass::Hill
        } else {
            DirectionClass::Boundary
        }
    }

    /// Taylor series of `p(z0) - p0 (z - z0)^μ (1 - φ(z))`.
    pub fn reconstruct(&self) -> ComplexSeries {
        let mut coeffs = vec![Complex64::zero(); self.mu + self.phi.order() + 1];
        coeffs[0] = self.p_at_z0;
        for (s, phi_s) in self.phi.coeffs().iter().enumerate() {
            let one_minus = if s == 0 { 1.0 - phi_s } else { -phi_s };
            coeffs[self.mu + s] = -self.p0 * one_minus;
        }
        ComplexSeries::new(self.z0, coeffs).expect("nonempty")
    }

    /// `p_1/p0, ..., p_count/p0`.
    pub fn bell_arguments(&self, count: usize) -> Result<BellArguments<Complex64>> {
        if count > self.phi.order() {
            return Err(Error::UnderResolved {
                what: "normal form phi coefficients",
                needed: count + 1,
                available: self.phi.order() + 1,
            });
        }
        Ok(BellArguments(
            self.phi.coeffs()[1..=count].iter().map(|c| -c).collect(),
        ))
    }

    /// The series of `1 - φ`.
    pub fn one_minus_phi(&self) -> ComplexSeries {
        self.phi.neg().add_constant(&Complex64::new(1.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleReport {
    pub z: Complex64,
    pub iterations: usize,
    /// `|p'(z)|` at the returned point.
    pub residual: f64,
}

const NEWTON_MAX_ITER: usize = 100;

/// Damped Newton iteration for `p'(z) = 0`, given `p'` itself. The second
/// derivative is taken by central differences of `p'`.
pub fn find_saddle<F: Fn(Complex64) -> Complex64>(
    dp: F,
    guess: Complex64,
    tol: f64,
) -> Result<SaddleReport> {
    let mut z = guess;
    let mut fz = dp(z);
    for iterations in 0..NEWTON_MAX_ITER {
        let residual = fz.norm();
        if residual <= tol {
            return Ok(SaddleReport {
                z,
                iterations,
                residual,
            });
        }
        let h = 1e-5 * (1.0 + z.norm());
        let d2 = (dp(z + h) - dp(z - h)) / (2.0 * h);
        if d2.is_zero() || !d2.re.is_finite() || !d2.im.is_finite() {
            break;
        }
        let step = fz / d2;
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let candidate = z - step * damping;
            let fc = dp(candidate);
            if fc.norm() < residual {
                z = candidate;
                fz = fc;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_ITER,
        residual: fz.norm(),
    })
}

/// [`find_saddle`] with `p'` from a five-point central difference of `p`.
/// The difference quotient limits attainable residuals to about `1e-11` for
/// moderately scaled `p`.
pub fn find_saddle_numeric<F: Fn(Complex64) -> Complex64>(
    p: F,
    guess: Complex64,
    tol: f64,
) -> Result<SaddleReport> {
    let dp = |z: Complex64| {
        let h = 1e-3 * (1.0 + z.norm());
        (p(z - 2.0 * h) - 8.0 * p(z - h) + 8.0 * p(z + h) - p(z + 2.0 * h)) / (12.0 * h)
    };
    find_saddle(dp, guess, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxConditionReport {
    /// Largest `Re p(z) - Re p(z0)` over the samples.
    pub max_excess: f64,
    pub at: Complex64,
    pub samples: usize,
    pub passed: bool,
}

/// Sample `Re p(z) - Re p(z0)` uniformly in each piece's parameter, skipping
/// points within [`EXCLUDED_RADIUS`] of `z0`. Passes iff every sample is
/// strictly negative.
pub fn check_max_condition<F: Fn(Complex64) -> Complex64>(
    p: F,
    contour: &Contour,
    z0: Complex64,
    samples: usize,
) -> Result<MaxConditionReport> {
    if samples < 2 {
        return Err(Error::Precondition("need at least 2 samples per piece".into()));
    }
    let height = p(z0).re;
    let mut max_excess = f64::NEG_INFINITY;
    let mut at = z0;
    let mut used = 0;
    for piece in contour.pieces() {
        for k in 0..samples {
            let z = piece.point(k as f64 / (samples - 1) as f64);
            if (z - z0).norm() < EXCLUDED_RADIUS {
                continue;
            }
            used += 1;
            let excess = p(z).re - height;
            if excess > max_excess || excess.is_nan() {
                max_excess = excess;
                at = z;
            }
        }
    }
    Ok(MaxConditionReport {
        max_excess,
        at,
        samples: used,
        passed: used > 0 && max_excess < 0.0,
    })
}

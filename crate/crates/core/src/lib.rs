//! Complete asymptotic expansions of saddle-point integrals
//! `∫ e^{N p(z)} (z - z0)^{a-1} q(z) dz`, with an adaptive contour-quadrature
//! oracle to check them at finite `N`.
//!
//! ```
//! use num::complex::Complex64;
//! use saddlepoint::expansion::{alpha_bell, assemble, BranchSpec, ExponentParam};
//! use saddlepoint::saddle::normalize;
//! use saddlepoint::series::{elementary, ComplexSeries};
//!
//! // Γ(N+1)/N^{N+1} = ∫_0^∞ e^{N(log z - z)} dz, saddle at z = 1
//! let one = Complex64::new(1.0, 0.0);
//! let p = elementary::log(one, 9).sub(&ComplexSeries::identity(one, 9))?;
//! let nf = normalize(&p)?;
//! let alphas = alpha_bell(&nf, &ComplexSeries::one(one, 7), ExponentParam::one(), 7)?;
//! let ex = assemble(&alphas, &nf, BranchSpec::EvenOpposite { k: 0 })?;
//! let n = 50.0;
//! let exact = saddlepoint::special::gamma(Complex64::new(n + 1.0, 0.0)) / n.powf(n + 1.0);
//! assert!((ex.evaluate(n, 7)? / exact - 1.0).norm() < 1e-9);
//! # Ok::<(), saddlepoint::Error>(())
//! ```

pub mod error;
pub mod examples;
pub mod expansion;
pub mod series;
pub mod quadrature;
pub mod saddle;
pub mod selftest;
pub mod special;
pub mod sylvester;

pub use error::{Error, Result};

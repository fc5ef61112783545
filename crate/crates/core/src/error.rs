use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// name the violated precondition without a backtrace.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series base points differ: {left} vs {right}")]
    BaseMismatch { left: String, right: String },

    #[error("series must have at least one coefficient")]
    EmptySeries,

    #[error("inner series of a composition must have zero constant term, found {0}")]
    NonzeroInnerConstant(String),

    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("series power needs constant term exactly 1, found {0}")]
    ConstantTermNotOne(String),

    #[error("exponential needs constant term exactly 0, found {0}")]
    ConstantTermNotZero(String),

    #[error("{what} needs {needed} entries but only {available} are available")]
    UnderResolved {
        what: &'static str,
        needed: usize,
        available: usize,
    },

    #[error("argument xi = 1 is a pole of the Glaisher coefficients")]
    GlaisherPole,

    #[error("p is constant to its truncation order (all non-constant coefficients vanish)")]
    DegenerateSaddle,

    #[error("direction {direction} lies on a ridge between valley sectors")]
    RidgeDirection { direction: f64 },

    #[error("Newton iteration did not converge after {iterations} steps (last |p'| = {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("{0}")]
    Precondition(String),

    #[error("Gamma pole at (s + a)/mu = {exponent} for s = {s}; only the circle-path variant has a replacement rule")]
    GammaPole { s: usize, exponent: i64 },

    #[error("N must be a positive real number, got {0}")]
    NonPositiveN(f64),

    #[error("requested {requested} terms but only {available} are available")]
    TooManyTerms { requested: usize, available: usize },

    #[error("contour pieces {index} and {next} do not share an endpoint (gap {gap:e})")]
    DisconnectedContour { index: usize, next: usize, gap: f64 },

    #[error("contour passes within {distance:e} of the branch point")]
    ContourThroughBranchPoint { distance: f64 },

    #[error("initial branch angle {angle} is not an argument of the contour start relative to the branch point")]
    InconsistentBranchAngle { angle: f64 },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("unknown builtin integrand '{0}'")]
    UnknownIntegrand(String),

    #[error("parameter {name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("dilogarithm evaluated on its branch cut at {0}")]
    OnBranchCut(String),

    #[error("lambda * N = {0} is not an integer")]
    NonIntegralLambdaN(String),
}

pub type Result<T> = std::result::Result<T, Error>;

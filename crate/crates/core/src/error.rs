use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the operator laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero {0} lies outside the open disk (|a| >= 1 - 1e-12)")]
    ZeroOutsideDisk(Complex64),
    #[error("phase {0} is not unimodular")]
    BadPhase(Complex64),
    #[error("a Blaschke product needs at least one zero")]
    EmptyProduct,
    #[error("evaluation point {0} hits a pole")]
    PoleHit(Complex64),
    #[error("rate {0} is not in (0, 1)")]
    BadRate(f64),
    #[error("accumulation point {0} is not on the unit circle")]
    BadPoint(Complex64),
    #[error("family degrees must be positive and strictly increasing")]
    BadDegrees,
    #[error("Gram defect {defect:e} still above 1e-10 at N = {points}")]
    QuadratureStall { points: usize, defect: f64 },
    #[error("quadrature size {0} must be a power of two and at least 4 * degree")]
    BadQuadratureSize(usize),
    #[error("base point {0} lies outside the closed disk")]
    BasePointOutside(Complex64),
    #[error("base point {0} lies on the circle")]
    BasePointOnCircle(Complex64),
    #[error("grid sizes differ: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("degree must be at least 1")]
    BadDegree,
    #[error("jump set must be exactly {{1}}, found {0} jump(s)")]
    WrongJumpSet(usize),
    #[error("functional calculus needs a trigonometric polynomial symbol")]
    MethodMismatch,
    #[error("alpha {0} is not unimodular")]
    BadAlpha(Complex64),
    #[error("Hankel truncation {requested} is below the minimum {minimum}")]
    TruncationTooSmall { requested: usize, minimum: usize },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("scenario: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;

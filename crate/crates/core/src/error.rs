use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure category, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Inputs violate a structural precondition (bad trajectory, infeasible constraints, ...).
    Validation,
    /// A numerical procedure failed or a computed quantity is degenerate.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pole hit at s = {at}")]
    PoleHit { at: Complex64 },

    #[error("trajectory passes through a pole of z at parameter s = {s}")]
    TrajectoryThroughPole { s: f64 },

    #[error("point {point} lies within {distance:e} of the curve")]
    PointOnCurve { point: Complex64, distance: f64 },

    #[error("winding number about {point} is not an integer (residual {residual:.3}); curve is under-sampled")]
    NonIntegerWinding { point: Complex64, residual: f64 },

    #[error("root {root} lies inside the membership guard band of the D curve")]
    AmbiguousMembership { root: Complex64 },

    #[error("C and its conjugate do not wind exactly once around [-1, 1]: {0}")]
    NotEncircling(String),

    #[error("endpoint image z(omega({s})) = {value} is not real")]
    EndpointNotReal { s: f64, value: Complex64 },

    #[error("Markov function evaluated at mass location {location}")]
    EvalAtMass { location: f64 },

    #[error("constraints are infeasible for the mass pair: weights ({w0}, {w1})")]
    Infeasible { w0: f64, w1: f64 },

    #[error("mass pair locations coincide at {0}")]
    DegeneratePair(f64),

    #[error("frequency-probe recipe evaluated at its pole z = {0}")]
    ProbePole(Complex64),

    #[error("coupling factor c(omega) vanishes at omega = {0}")]
    CouplingZero(Complex64),

    #[error(
        "adaptive quadrature did not converge after {panels} panels (estimated error {estimate:e})"
    )]
    QuadratureNotConverged { panels: usize, estimate: f64 },

    #[error("pole at {location} has multiplicity {multiplicity}; the first-moment closed form needs simple poles")]
    NonSimplePole {
        location: Complex64,
        multiplicity: usize,
    },

    #[error("a spectral measure is required for the measure-dependent terms")]
    MissingMeasure,

    #[error("probe value z0 = {0} lies inside C and its conjugate")]
    ProbeInsideCurve(Complex64),

    #[error("response is not measure independent for this trajectory")]
    NotMeasureIndependent,

    #[error("closed-form denominator vanishes at t = {0}")]
    ZeroDenominator(f64),

    #[error("first-moment coefficient vanishes at t = {0}")]
    ZeroCoefficient(f64),

    #[error("singular recovery system: {0}")]
    SingularSystem(String),

    #[error("recovery precondition failed: {0}")]
    PreconditionM(String),

    #[error("no grid measure satisfies the constraints")]
    NoFeasibleMeasure,

    #[error("target {0} makes numerator - target * denominator identically zero")]
    DegenerateTarget(Complex64),

    #[error("exponent {0} is out of the representable range")]
    ExponentRange(f64),

    #[error("polynomial root {root} failed the residual check (|p| = {residual:e})")]
    RootNotConverged { root: Complex64, residual: f64 },

    #[error("wrong design for this operation: {0}")]
    WrongDesign(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidInput(_)
            | TrajectoryThroughPole { .. }
            | NotEncircling(_)
            | EndpointNotReal { .. }
            | AmbiguousMembership { .. }
            | Infeasible { .. }
            | DegeneratePair(_)
            | ProbeInsideCurve(_)
            | NotMeasureIndependent
            | NoFeasibleMeasure
            | MissingMeasure
            | PreconditionM(_)
            | WrongDesign(_) => ErrorClass::Validation,
            _ => ErrorClass::Numerical,
        }
    }
}

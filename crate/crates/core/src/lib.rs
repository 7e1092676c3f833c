//! Time-varying quasistatic signal design for two-phase composites.
//!
//! The pipeline: a [`MaterialSystem`] and a frequency [`Trajectory`] are
//! classified by winding numbers and the spectral structure of `h(ζ)`;
//! a recipe from the [`RecipeRegistry`] is pulled back to an input signal;
//! responses are simulated by quadrature or predicted in closed form, and
//! the volume fraction is bounded or recovered from measurements.

pub mod bounds;
pub mod builtins;
pub mod curves;
pub mod error;
pub mod material;
pub mod measures;
pub mod poly;
pub mod quadrature;
pub mod response;
pub mod roots;
pub mod signal_design;
pub mod spectral;
pub mod trajectory;

pub use num_complex::Complex64;

pub use bounds::{bounds_over_measures, BoundEnvelope, Constraints, RecoveryResult, ScanOptions};
pub use curves::{classify, trace_curves, ClosedCurve, CurveClassification, Orientation};
pub use error::{Error, ErrorClass, Result};
pub use material::{Duality, MaterialModel, MaterialSystem, Phase};
pub use measures::{constrained_pair, PointMass, SpectralMeasure};
pub use poly::{Poly, RationalFunction};
pub use response::{simulate_response, ResponseContext, ResponseKernel, TimeSeries};
pub use signal_design::{
    FrequencyProbeRecipe, Recipe, RecipeParams, RecipeRegistry, SignalDesign, VolumeFractionRecipe,
};
pub use spectral::{OmegaRegion, OmegaRoot, OmegaSpectrum, Pole};
pub use trajectory::{EndpointAxis, Trajectory};

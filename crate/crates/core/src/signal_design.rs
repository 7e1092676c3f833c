//! Recipes `r(z)`, their pull-back to `α(s)`, `β(s)` along a trajectory, and
//! synthesis of the applied input `Re u(t)`.
//!
//! Recipes are trait objects held in a [`RecipeRegistry`] and selected by name,
//! so new families plug in without touching the pipeline.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::CurveClassification;
use crate::error::{Error, Result};
use crate::material::MaterialSystem;
use crate::measures::SpectralMeasure;
use crate::quadrature::{self, Tolerance};
use crate::response::{self, ClosedFormInputs};
use crate::trajectory::Trajectory;

/// Largest exponent magnitude accepted before `exp` is declared out of range.
pub const MAX_EXPONENT: f64 = 700.0;

pub(crate) fn checked_exp(x: Complex64) -> Result<Complex64> {
    if x.re.abs() > MAX_EXPONENT {
        return Err(Error::ExponentRange(x.re));
    }
    Ok(x.exp())
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Named parameters a recipe factory may read.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RecipeParams {
    pub k: Option<f64>,
    pub z0: Option<Complex64>,
}

/// A choice of `r(z)` on `C` together with its closed-form response.
pub trait Recipe: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn params(&self) -> RecipeParams;

    /// `r(z)` before the orientation sign is applied.
    fn r(&self, z: Complex64) -> Result<Complex64>;

    /// Rejects combinations the recipe cannot serve.
    fn validate(&self, _cls: &CurveClassification) -> Result<()> {
        Ok(())
    }

    /// `Re v(t)` from the residue expansion over `Ω`.
    fn predict(&self, inputs: &ClosedFormInputs<'_>, times: &[f64]) -> Result<Vec<f64>>;

    /// `Re v(t0)`, which depends on the measure only through what the recipe targets.
    fn value_at_t0(&self, a0: f64, measure: &SpectralMeasure) -> Result<f64>;

    fn volume_fraction_k(&self) -> Option<f64> {
        None
    }

    fn probe_target(&self) -> Option<Complex64> {
        None
    }
}

/// `r(z) = -i(1 + kz)/(2π)`: `Re v(t0) = -a0 ∫(1 + kλ) dγ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeFractionRecipe {
    pub k: f64,
}

impl Recipe for VolumeFractionRecipe {
    fn name(&self) -> &'static str {
        "volume-fraction"
    }

    fn params(&self) -> RecipeParams {
        RecipeParams {
            k: Some(self.k),
            z0: None,
        }
    }

    fn r(&self, z: Complex64) -> Result<Complex64> {
        Ok(-I * (1.0 + self.k * z) / (2.0 * PI))
    }

    fn predict(&self, inputs: &ClosedFormInputs<'_>, times: &[f64]) -> Result<Vec<f64>> {
        response::volume_fraction_closed_form(inputs, self.k, times)
    }

    fn value_at_t0(&self, a0: f64, measure: &SpectralMeasure) -> Result<f64> {
        Ok(-a0 * (measure.moment(0) + self.k * measure.moment(1)))
    }

    fn volume_fraction_k(&self) -> Option<f64> {
        Some(self.k)
    }
}

/// `r(z) = i/(4π(z - z0)) + i/(4π(z - z̄0))`: `Re v(t0) = a0 ∫ Re 1/(λ - z0) dγ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyProbeRecipe {
    pub z0: Complex64,
}

impl FrequencyProbeRecipe {
    pub fn new(z0: Complex64) -> Result<Self> {
        if !z0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "probe target {z0} is not finite"
            )));
        }
        if z0.im == 0.0 && (-1.0..=1.0).contains(&z0.re) {
            return Err(Error::InvalidInput(format!(
                "probe target {z0} lies on the spectral interval [-1, 1]"
            )));
        }
        Ok(FrequencyProbeRecipe { z0 })
    }
}

impl Recipe for FrequencyProbeRecipe {
    fn name(&self) -> &'static str {
        "frequency-probe"
    }

    fn params(&self) -> RecipeParams {
        RecipeParams {
            k: None,
            z0: Some(self.z0),
        }
    }

    fn r(&self, z: Complex64) -> Result<Complex64> {
        let (d1, d2) = (z - self.z0, z - self.z0.conj());
        let scale = 1e-12 * (1.0 + self.z0.norm());
        if d1.norm() < scale || d2.norm() < scale {
            return Err(Error::ProbePole(z));
        }
        Ok(I / (4.0 * PI) * (1.0 / d1 + 1.0 / d2))
    }

    fn validate(&self, cls: &CurveClassification) -> Result<()> {
        match cls.c_winding(self.z0) {
            Ok(0) => Ok(()),
            Ok(_) | Err(Error::PointOnCurve { .. }) => Err(Error::ProbeInsideCurve(self.z0)),
            Err(e) => Err(e),
        }
    }

    fn predict(&self, inputs: &ClosedFormInputs<'_>, times: &[f64]) -> Result<Vec<f64>> {
        response::frequency_probe_closed_form(inputs, self.z0, times)
    }

    fn value_at_t0(&self, a0: f64, measure: &SpectralMeasure) -> Result<f64> {
        Ok(a0 * measure.markov_eval(self.z0)?.re)
    }

    fn probe_target(&self) -> Option<Complex64> {
        Some(self.z0)
    }
}

pub type RecipeFactory = fn(&RecipeParams) -> Result<Arc<dyn Recipe>>;

fn volume_fraction_factory(p: &RecipeParams) -> Result<Arc<dyn Recipe>> {
    let k = p.k.unwrap_or(0.0);
    if !k.is_finite() {
        return Err(Error::InvalidInput(format!("k = {k} is not finite")));
    }
    Ok(Arc::new(VolumeFractionRecipe { k }))
}

fn frequency_probe_factory(p: &RecipeParams) -> Result<Arc<dyn Recipe>> {
    let z0 =
        p.z0.ok_or_else(|| Error::InvalidInput("frequency-probe recipe needs z0".into()))?;
    Ok(Arc::new(FrequencyProbeRecipe::new(z0)?))
}

/// Recipe families by name.
#[derive(Clone, Default)]
pub struct RecipeRegistry {
    factories: BTreeMap<&'static str, RecipeFactory>,
}

impl fmt::Debug for RecipeRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factories.keys()).finish()
    }
}

impl RecipeRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("volume-fraction", volume_fraction_factory);
        reg.register("frequency-probe", frequency_probe_factory);
        reg
    }

    pub fn register(&mut self, name: &'static str, factory: RecipeFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn build(&self, name: &str, params: &RecipeParams) -> Result<Arc<dyn Recipe>> {
        let factory = self.factories.get(name).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown recipe '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        factory(params)
    }
}

/// Per-node quantities along the trajectory.
#[derive(Debug, Clone, Copy)]
pub struct PathNode {
    pub omega: Complex64,
    pub z: Complex64,
    pub alpha: Complex64,
}

/// A recipe bound to a system and an admissible trajectory.
#[derive(Debug, Clone)]
pub struct SignalDesign {
    system: MaterialSystem,
    trajectory: Trajectory,
    classification: CurveClassification,
    recipe: Arc<dyn Recipe>,
    sign: f64,
    t0: f64,
    tol: Tolerance,
}

impl SignalDesign {
    pub fn new(
        system: MaterialSystem,
        trajectory: Trajectory,
        classification: CurveClassification,
        recipe: Arc<dyn Recipe>,
        t0: f64,
    ) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::InvalidInput("t0 must be finite".into()));
        }
        recipe.validate(&classification)?;
        let sign = classification.orientation.sign();
        Ok(SignalDesign {
            system,
            trajectory,
            classification,
            recipe,
            sign,
            t0,
            tol: Tolerance::default(),
        })
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn system(&self) -> &MaterialSystem {
        &self.system
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn classification(&self) -> &CurveClassification {
        &self.classification
    }

    pub fn recipe(&self) -> &dyn Recipe {
        self.recipe.as_ref()
    }

    /// `+1` when `C ∪ C̄` winds anticlockwise around `[-1, 1]`, else `-1`.
    pub fn sign(&self) -> f64 {
        self.sign
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Signed `r(z)`.
    pub fn eval_r(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.sign * self.recipe.r(z)?)
    }

    pub fn node(&self, s: f64) -> Result<PathNode> {
        let omega = self.trajectory.eval(s);
        let z = self.system.eval_z(omega)?;
        let dz = self.system.eval_dz(omega)?;
        let alpha = 2.0 * self.eval_r(z)? * dz * self.trajectory.derivative(s);
        Ok(PathNode { omega, z, alpha })
    }

    /// `α(s) = 2 r(z(ω(s))) z'(ω(s)) ω'(s)`.
    pub fn alpha(&self, s: f64) -> Result<Complex64> {
        Ok(self.node(s)?.alpha)
    }

    /// `β(s) = α(s)/c(ω(s))`.
    pub fn beta(&self, s: f64) -> Result<Complex64> {
        let n = self.node(s)?;
        Ok(n.alpha / self.system.coupling(n.omega)?)
    }

    /// `Re u(t) = Re ∫₀¹ β(s) e^{-iω(s)(t - t0)} ds` at each time.
    pub fn synthesize_input(&self, times: &[f64]) -> Result<Vec<f64>> {
        let t0 = self.t0;
        let out = quadrature::integrate(times.len(), self.tol, |s, buf| {
            let n = self.node(s)?;
            let beta = n.alpha / self.system.coupling(n.omega)?;
            for (b, &t) in buf.iter_mut().zip(times) {
                *b = beta * checked_exp(-I * n.omega * (t - t0))?;
            }
            Ok(())
        })?;
        Ok(out.value.iter().map(|v| v.re).collect())
    }

    /// `g(λ) = ∮_{C ∪ C̄} r(z)/(λ - z) dz`, integrated along both branches
    /// with the recipe evaluated directly on each.
    pub fn contour_integral(&self, lambda: Complex64) -> Result<Complex64> {
        contour_integral_with(self, lambda, |z| self.eval_r(z))
    }
}

/// `∮_{C ∪ C̄} f(z)/(λ - z) dz` for an arbitrary `f`. `C̄` is traversed as
/// `conj z(ω(1 - s))`.
pub fn contour_integral_with<F>(design: &SignalDesign, lambda: Complex64, f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let sys = design.system();
    let traj = design.trajectory();
    let out = quadrature::integrate(2, Tolerance::with_rel(1e-12), |s, buf| {
        let w = traj.eval(s);
        let z = sys.eval_z(w)?;
        let dz = sys.eval_dz(w)? * traj.derivative(s);
        buf[0] = f(z)? / (lambda - z) * dz;
        let wb = traj.eval(1.0 - s);
        let zb = sys.eval_z(wb)?.conj();
        let dzb = -(sys.eval_dz(wb)? * traj.derivative(1.0 - s)).conj();
        buf[1] = f(zb)? / (lambda - zb) * dzb;
        Ok(())
    })?;
    Ok(out.value[0] + out.value[1])
}

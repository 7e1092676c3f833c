//! Discrete spectral measures on `[-1, 1]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance below which a Markov evaluation point is treated as a mass location.
pub const MASS_GUARD: f64 = 1e-12;
/// Slack allowed on a negative weight before a pair is declared infeasible.
pub const WEIGHT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub location: f64,
    pub weight: f64,
}

/// Finite sum of point masses `Σ w_j δ(λ - λ_j)` with `λ_j ∈ [-1, 1]`, `w_j ≥ 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<PointMass>", into = "Vec<PointMass>")]
pub struct SpectralMeasure {
    masses: Vec<PointMass>,
}

impl TryFrom<Vec<PointMass>> for SpectralMeasure {
    type Error = Error;
    fn try_from(masses: Vec<PointMass>) -> Result<Self> {
        SpectralMeasure::new(masses)
    }
}

impl From<SpectralMeasure> for Vec<PointMass> {
    fn from(m: SpectralMeasure) -> Self {
        m.masses
    }
}

impl SpectralMeasure {
    pub fn new(masses: Vec<PointMass>) -> Result<Self> {
        for m in &masses {
            if !m.location.is_finite() || !(-1.0..=1.0).contains(&m.location) {
                return Err(Error::InvalidInput(format!(
                    "mass location {} outside [-1, 1]",
                    m.location
                )));
            }
            if !m.weight.is_finite() || m.weight < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "negative mass weight {}",
                    m.weight
                )));
            }
        }
        Ok(SpectralMeasure { masses })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(location, weight)| PointMass { location, weight })
                .collect(),
        )
    }

    pub fn point(location: f64, weight: f64) -> Result<Self> {
        Self::from_pairs(&[(location, weight)])
    }

    pub fn masses(&self) -> &[PointMass] {
        &self.masses
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// `Σ w_j λ_j^order` for order 0 or 1.
    pub fn moment(&self, order: u32) -> f64 {
        self.masses
            .iter()
            .map(|m| m.weight * m.location.powi(order as i32))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.moment(0)
    }

    /// `∫ f(λ) dγ(λ)`.
    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::iter::Sum<T>,
        F: Fn(f64) -> T,
        T: std::ops::Mul<f64, Output = T>,
    {
        self.masses.iter().map(|m| f(m.location) * m.weight).sum()
    }

    /// Markov function `Σ w_j / (λ_j - z)`.
    pub fn markov_eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in &self.masses {
            let d = Complex64::new(m.location, 0.0) - z;
            if d.norm() <= MASS_GUARD {
                return Err(Error::EvalAtMass {
                    location: m.location,
                });
            }
            acc += m.weight / d;
        }
        Ok(acc)
    }
}

/// Two point masses at `λ0`, `λ1` with prescribed mass and first moment.
pub fn constrained_pair(l0: f64, l1: f64, mass: f64, m1: f64) -> Result<SpectralMeasure> {
    if l0 == l1 {
        return Err(Error::DegeneratePair(l0));
    }
    let w1 = (m1 - mass * l0) / (l1 - l0);
    let w0 = mass - w1;
    if w0 < -WEIGHT_SLACK || w1 < -WEIGHT_SLACK {
        return Err(Error::Infeasible { w0, w1 });
    }
    SpectralMeasure::from_pairs(&[(l0, w0.max(0.0)), (l1, w1.max(0.0))])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_mass_markov() {
        let m = SpectralMeasure::point(0.5, 1.0).unwrap();
        let v = m.markov_eval(c(30.0, 0.0)).unwrap();
        assert!((v - c(-2.0 / 59.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn symmetric_pair_vanishes_at_origin() {
        let m = SpectralMeasure::from_pairs(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!(m.markov_eval(c(0.0, 0.0)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn unit_mass_asymptotics() {
        let m = SpectralMeasure::from_pairs(&[(-0.3, 0.25), (0.9, 0.75)]).unwrap();
        let z = c(1e8, 0.0);
        assert!((z * m.markov_eval(z).unwrap() + 1.0).norm() < 1e-7);
    }

    #[test]
    fn moments() {
        let d = SpectralMeasure::point(0.5, 1.0).unwrap();
        assert_eq!((d.moment(0), d.moment(1)), (1.0, 0.5));
        let p = SpectralMeasure::from_pairs(&[(-1.0, 0.3), (1.0, 0.7)]).unwrap();
        assert!((p.moment(1) - 0.4).abs() < 1e-15);
        let e = SpectralMeasure::default();
        assert_eq!((e.moment(0), e.moment(1)), (0.0, 0.0));
    }

    #[test]
    fn eval_at_mass_rejected() {
        let m = SpectralMeasure::point(0.5, 1.0).unwrap();
        assert!(matches!(
            m.markov_eval(c(0.5, 0.0)),
            Err(Error::EvalAtMass { .. })
        ));
    }

    #[test]
    fn pair_construction() {
        let p = constrained_pair(-1.0, 1.0, 1.0, 0.4).unwrap();
        assert!((p.masses()[0].weight - 0.3).abs() < 1e-15);
        assert!((p.masses()[1].weight - 0.7).abs() < 1e-15);
        let q = constrained_pair(0.0, 0.4, 1.0, 0.4).unwrap();
        assert_eq!(q.masses()[0].weight, 0.0);
        assert!((q.masses()[1].weight - 1.0).abs() < 1e-15);
        assert!(matches!(
            constrained_pair(0.0, 0.2, 1.0, 0.4),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            constrained_pair(0.2, 0.2, 1.0, 0.4),
            Err(Error::DegeneratePair(_))
        ));
    }

    #[test]
    fn invalid_masses_rejected() {
        assert!(SpectralMeasure::point(1.5, 1.0).is_err());
        assert!(SpectralMeasure::point(0.0, -1.0).is_err());
    }
}

//! Phase responses and the contrast maps `z(ω)` and `h(ζ) = z(-iζ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RationalFunction;

/// Which formulation drives the body: the direct problem couples through
/// `μ₂(ω)`, the dual problem through `1/μ₂(ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duality {
    #[default]
    Direct,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    PhasePair {
        mu1: RationalFunction,
        mu2: RationalFunction,
    },
    /// A contrast map given directly. `mu2` is only needed for the coupling
    /// factor; without it the coupling is taken as one.
    DirectZ {
        z: RationalFunction,
        mu2: Option<RationalFunction>,
    },
}

/// Laplace variable `s = -iω`.
#[inline]
pub fn laplace(omega: Complex64) -> Complex64 {
    Complex64::new(omega.im, -omega.re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSystem {
    model: MaterialModel,
    duality: Duality,
    z: RationalFunction,
    dz: RationalFunction,
}

impl MaterialSystem {
    pub fn phase_pair(
        mu1: RationalFunction,
        mu2: RationalFunction,
        duality: Duality,
    ) -> Result<Self> {
        let (n1, d1) = (mu1.num(), mu1.den());
        let (n2, d2) = (mu2.num(), mu2.den());
        // (μ₁ + μ₂) / (μ₂ - μ₁) with the common denominator d₁d₂ cancelled.
        let num = n1.mul(d2).add(&n2.mul(d1));
        let den = n2.mul(d1).sub(&n1.mul(d2));
        if den.is_zero() {
            return Err(Error::InvalidInput(
                "mu1 and mu2 coincide identically; z is unbounded".into(),
            ));
        }
        let z = RationalFunction::from_polys(num, den)?.reduced()?;
        Ok(Self::assemble(
            MaterialModel::PhasePair { mu1, mu2 },
            duality,
            z,
        ))
    }

    pub fn direct_z(
        z: RationalFunction,
        mu2: Option<RationalFunction>,
        duality: Duality,
    ) -> Result<Self> {
        let reduced = z.reduced()?;
        Ok(Self::assemble(
            MaterialModel::DirectZ { z, mu2 },
            duality,
            reduced,
        ))
    }

    fn assemble(model: MaterialModel, duality: Duality, z: RationalFunction) -> Self {
        let dz = z.derivative();
        MaterialSystem {
            model,
            duality,
            z,
            dz,
        }
    }

    pub fn model(&self) -> &MaterialModel {
        &self.model
    }

    pub fn duality(&self) -> Duality {
        self.duality
    }

    pub fn with_duality(mut self, duality: Duality) -> Self {
        self.duality = duality;
        self
    }

    /// `z` as a rational function of `s = -iω`.
    pub fn z_rational(&self) -> &RationalFunction {
        &self.z
    }

    pub fn eval_mu(&self, which: Phase, omega: Complex64) -> Result<Complex64> {
        let s = laplace(omega);
        match (&self.model, which) {
            (MaterialModel::PhasePair { mu1, .. }, Phase::One) => mu1.eval(s),
            (MaterialModel::PhasePair { mu2, .. }, Phase::Two) => mu2.eval(s),
            (MaterialModel::DirectZ { mu2: Some(mu2), .. }, Phase::Two) => mu2.eval(s),
            (MaterialModel::DirectZ { mu2: Some(mu2), z }, Phase::One) => {
                // μ₁ = μ₂ (z - 1) / (z + 1)
                let zv = z.eval(s)?;
                let denom = zv + 1.0;
                if denom.norm() < 1e-12 * (1.0 + zv.norm()) {
                    return Err(Error::PoleHit { at: s });
                }
                Ok(mu2.eval(s)? * (zv - 1.0) / denom)
            }
            (MaterialModel::DirectZ { mu2: None, .. }, _) => Err(Error::InvalidInput(
                "phase responses are not available for a bare contrast map".into(),
            )),
        }
    }

    pub fn eval_z(&self, omega: Complex64) -> Result<Complex64> {
        self.z.eval(laplace(omega))
    }

    /// `dz/dω`, exact.
    pub fn eval_dz(&self, omega: Complex64) -> Result<Complex64> {
        Ok(self.dz.eval(laplace(omega))? * Complex64::new(0.0, -1.0))
    }

    /// Coupling factor `c(ω)` relating the applied amplitude to the output
    /// amplitude: `μ₂(ω)` for the direct problem and `1/μ₂(ω)` for the dual.
    pub fn coupling(&self, omega: Complex64) -> Result<Complex64> {
        let mu2 = match &self.model {
            MaterialModel::PhasePair { mu2, .. } => mu2.eval(laplace(omega))?,
            MaterialModel::DirectZ { mu2: Some(mu2), .. } => mu2.eval(laplace(omega))?,
            MaterialModel::DirectZ { mu2: None, .. } => Complex64::new(1.0, 0.0),
        };
        let c = match self.duality {
            Duality::Direct => mu2,
            Duality::Dual => {
                if mu2.norm() < 1e-300 {
                    return Err(Error::PoleHit { at: laplace(omega) });
                }
                1.0 / mu2
            }
        };
        if c.norm() < 1e-14 {
            return Err(Error::CouplingZero(omega));
        }
        Ok(c)
    }

    /// `h(ζ) = z(-iζ)` as a real rational function of `ζ`. With `s = -iω`
    /// and `ω = -iζ` this is the substitution `s = -ζ`.
    pub fn as_h(&self) -> RationalFunction {
        self.z.reflect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lossy_dielectric_phase_response() {
        let sys = builtins::material("example1").unwrap();
        let v = sys.eval_mu(Phase::One, c(0.0, 1.5)).unwrap();
        assert!((v - c(5.0 / 3.0, 0.0)).norm() < 1e-14);
        assert_eq!(sys.eval_mu(Phase::Two, c(0.3, 2.0)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn plasma_phase_response() {
        let sys = builtins::material("example2").unwrap();
        let v = sys.eval_mu(Phase::One, c(0.0, 1.0)).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn contrast_values_on_imaginary_axis() {
        let sys = builtins::material("example1").unwrap();
        assert!((sys.eval_z(c(0.0, 1.5)).unwrap() - c(11.0, 0.0)).norm() < 1e-12);
        assert!((sys.eval_z(c(0.0, 0.5)).unwrap() - c(-5.0, 0.0)).norm() < 1e-12);
        assert!((sys.eval_z(c(0.0, 31.0 / 27.0)).unwrap() - c(30.0, 0.0)).norm() < 1e-11);
        assert!(matches!(
            sys.eval_z(c(0.0, 1.0)),
            Err(Error::PoleHit { .. })
        ));
    }

    #[test]
    fn h_of_example1() {
        let h = builtins::material("example1").unwrap().as_h();
        // (3ζ - 1)/(ζ + 1) up to a common scale
        for zeta in [c(0.2, 0.3), c(-3.0, 1.0), c(5.0, -2.0)] {
            let expect = (3.0 * zeta - 1.0) / (zeta + 1.0);
            assert!((h.eval(zeta).unwrap() - expect).norm() < 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn h_of_example3() {
        let h = builtins::material("example3").unwrap().as_h();
        for zeta in [c(0.2, 0.3), c(-3.0, 1.0), c(5.0, -2.0)] {
            let expect = -(zeta + 5.0) / ((zeta + 1.0) * (zeta + 8.0));
            assert!((h.eval(zeta).unwrap() - expect).norm() < 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn constant_contrast() {
        let sys = MaterialSystem::direct_z(RationalFunction::constant(2.5), None, Duality::Direct)
            .unwrap();
        let h = sys.as_h();
        assert_eq!(h.eval(c(1.0, 4.0)).unwrap(), c(2.5, 0.0));
    }

    #[test]
    fn identical_phases_rejected() {
        let mu = RationalFunction::new(vec![1.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(MaterialSystem::phase_pair(mu.clone(), mu, Duality::Direct).is_err());
    }

    #[test]
    fn coupling_by_duality() {
        let sys = builtins::material("example1").unwrap();
        let w = c(0.4, 0.9);
        assert_eq!(sys.coupling(w).unwrap(), c(2.0, 0.0));
        let dual = sys.with_duality(Duality::Dual);
        assert_eq!(dual.coupling(w).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn coupling_with_dispersive_second_phase() {
        let sys = builtins::material("example2").unwrap();
        let v = sys.coupling(c(0.0, 1.0)).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn direct_z_recovers_first_phase() {
        let mu1 = RationalFunction::new(vec![1.0, 1.0], vec![0.0, 1.0]).unwrap();
        let mu2 = RationalFunction::constant(2.0);
        let pair = MaterialSystem::phase_pair(mu1, mu2.clone(), Duality::Direct).unwrap();
        let direct =
            MaterialSystem::direct_z(pair.z_rational().clone(), Some(mu2), Duality::Direct)
                .unwrap();
        let w = c(0.7, 0.4);
        let a = pair.eval_mu(Phase::One, w).unwrap();
        let b = direct.eval_mu(Phase::One, w).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}

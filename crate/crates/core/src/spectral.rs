//! Poles, zeros and level-set preimages of `h(ζ)` and their location
//! relative to the region `Ω` bounded by `D ∪ D̄`.
//!
//! Roots are located exactly as polynomial roots; `Ω` membership comes from
//! the winding number of the sampled boundary, which also supplies the
//! integer weight each root carries in the residue sums.

use num_complex::Complex64;
use serde::Serialize;

use crate::curves::{ClosedCurve, WINDING_GUARD};
use crate::error::{Error, Result};
use crate::poly::RationalFunction;
use crate::roots;

/// The region inside `D ∪ D̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaRegion {
    boundary: ClosedCurve,
    guard: f64,
}

impl OmegaRegion {
    pub fn new(boundary: ClosedCurve) -> Self {
        OmegaRegion {
            boundary,
            guard: WINDING_GUARD,
        }
    }

    pub fn boundary(&self) -> &ClosedCurve {
        &self.boundary
    }

    /// Winding number of the boundary about `z`. Points inside the guard band
    /// are rejected rather than assigned to either side.
    pub fn winding(&self, z: Complex64) -> Result<i32> {
        match self.boundary.winding_number(z, self.guard) {
            Err(Error::PointOnCurve { .. }) => Err(Error::AmbiguousMembership { root: z }),
            other => other,
        }
    }

    pub fn contains(&self, z: Complex64) -> Result<bool> {
        Ok(self.winding(z)? != 0)
    }
}

/// A root of `num - target·den` (or of `num`) with its multiplicity and the
/// winding of `D ∪ D̄` about it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaRoot {
    pub location: Complex64,
    pub multiplicity: usize,
    pub winding: i32,
}

impl OmegaRoot {
    /// Signed contribution to residue sums: multiplicity times winding.
    pub fn weight(&self) -> i32 {
        self.multiplicity as i32 * self.winding
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pole {
    pub location: Complex64,
    pub multiplicity: usize,
    /// Residue of `h`, present for simple poles.
    pub residue: Option<Complex64>,
    pub winding: i32,
}

impl Pole {
    pub fn weight(&self) -> i32 {
        self.multiplicity as i32 * self.winding
    }
}

/// Poles and zeros of `h` over the whole plane, each tagged with its winding,
/// plus any level-set preimages computed on request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaSpectrum {
    pub poles: Vec<Pole>,
    pub zeros: Vec<OmegaRoot>,
    pub preimages: Vec<(Complex64, Vec<OmegaRoot>)>,
}

impl OmegaSpectrum {
    pub fn poles_in_omega(&self) -> impl Iterator<Item = &Pole> {
        self.poles.iter().filter(|p| p.winding != 0)
    }

    pub fn zeros_in_omega(&self) -> impl Iterator<Item = &OmegaRoot> {
        self.zeros.iter().filter(|z| z.winding != 0)
    }
}

fn snap_real(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Every pole of `h` with multiplicity, winding and (for simple poles) the
/// residue `num(β)/den'(β)`.
pub fn all_poles(h: &RationalFunction, region: &OmegaRegion) -> Result<Vec<Pole>> {
    let dden = h.den().derivative();
    h.poles()?
        .into_iter()
        .map(|(beta, n)| {
            let beta = snap_real(beta);
            let residue = if n == 1 {
                Some(h.num().eval(beta) / dden.eval(beta))
            } else {
                None
            };
            Ok(Pole {
                location: beta,
                multiplicity: n,
                residue,
                winding: region.winding(beta)?,
            })
        })
        .collect()
}

pub fn poles_in_omega(h: &RationalFunction, region: &OmegaRegion) -> Result<Vec<Pole>> {
    Ok(all_poles(h, region)?
        .into_iter()
        .filter(|p| p.winding != 0)
        .collect())
}

/// All solutions of `h(ζ) = target`, with windings.
pub fn preimages(
    h: &RationalFunction,
    target: Complex64,
    region: &OmegaRegion,
) -> Result<Vec<OmegaRoot>> {
    let coeffs = h.level_set_poly(target);
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let ref_scale = h
        .num()
        .max_abs_coeff()
        .max(target.norm() * h.den().max_abs_coeff());
    if scale <= 1e-13 * ref_scale || scale == 0.0 {
        return Err(Error::DegenerateTarget(target));
    }
    let raw = roots::polynomial_roots(&coeffs)?;
    roots::cluster_roots(&raw, roots::CLUSTER_TOL)
        .into_iter()
        .map(|(z, m)| {
            let z = if target.im == 0.0 { snap_real(z) } else { z };
            Ok(OmegaRoot {
                location: z,
                multiplicity: m,
                winding: region.winding(z)?,
            })
        })
        .collect()
}

pub fn preimages_in_omega(
    h: &RationalFunction,
    target: Complex64,
    region: &OmegaRegion,
) -> Result<Vec<OmegaRoot>> {
    Ok(preimages(h, target, region)?
        .into_iter()
        .filter(|r| r.winding != 0)
        .collect())
}

/// Poles and zeros of `h` with windings.
pub fn analyze(h: &RationalFunction, region: &OmegaRegion) -> Result<OmegaSpectrum> {
    let poles = all_poles(h, region)?;
    let zeros = if h.is_zero() {
        Vec::new()
    } else {
        h.zeros()?
            .into_iter()
            .map(|(z, m)| {
                let z = snap_real(z);
                Ok(OmegaRoot {
                    location: z,
                    multiplicity: m,
                    winding: region.winding(z)?,
                })
            })
            .collect::<Result<_>>()?
    };
    Ok(OmegaSpectrum {
        poles,
        zeros,
        preimages: Vec::new(),
    })
}

/// Adds the preimages of each target to the spectrum.
pub fn with_targets(
    mut spectrum: OmegaSpectrum,
    h: &RationalFunction,
    targets: &[Complex64],
    region: &OmegaRegion,
) -> Result<OmegaSpectrum> {
    for &t in targets {
        let pre = preimages_in_omega(h, t, region)?;
        spectrum.preimages.push((t, pre));
    }
    Ok(spectrum)
}

//! Sampled curves `C = z(Γ)`, `D = iΓ`, their conjugate closures, winding
//! numbers, and trajectory classification.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::MaterialSystem;
use crate::poly::RationalFunction;
use crate::spectral::{self, OmegaRegion, OmegaRoot, OmegaSpectrum, Pole};
use crate::trajectory::Trajectory;

/// Distance below which a point counts as lying on a curve.
pub const WINDING_GUARD: f64 = 1e-6;

/// Default number of equispaced probe points on `[-1, 1]`.
pub const DEFAULT_PROBES: usize = 201;

const MAX_REFINE_PASSES: usize = 8;
const MAX_POINTS: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Anticlockwise,
    Clockwise,
}

impl Orientation {
    pub fn from_winding(w: i32) -> Option<Self> {
        match w.signum() {
            1 => Some(Orientation::Anticlockwise),
            -1 => Some(Orientation::Clockwise),
            _ => None,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Orientation::Anticlockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }
}

/// Closed polygon; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedCurve {
    points: Vec<Complex64>,
}

impl ClosedCurve {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidInput(
                "closed curve needs at least 3 vertices".into(),
            ));
        }
        Ok(ClosedCurve { points })
    }

    /// `open` followed by its conjugate traversed backwards. The endpoints of
    /// `open` are expected to be real, so they are not duplicated.
    pub fn with_conjugate(open: &[Complex64]) -> Result<Self> {
        let mut pts = open.to_vec();
        if open.len() > 2 {
            pts.extend(open[1..open.len() - 1].iter().rev().map(|z| z.conj()));
        }
        ClosedCurve::new(pts)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Smallest distance from `p` to any edge.
    pub fn distance(&self, p: Complex64) -> f64 {
        self.segments()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Signed number of turns around `p`, from summed angle increments.
    pub fn winding_number(&self, p: Complex64, guard: f64) -> Result<i32> {
        let dist = self.distance(p);
        if dist <= guard {
            return Err(Error::PointOnCurve {
                point: p,
                distance: dist,
            });
        }
        let total: f64 = self
            .segments()
            .map(|(a, b)| ((b - p) / (a - p)).arg())
            .sum();
        let turns = total / (2.0 * PI);
        let rounded = turns.round();
        let residual = (turns - rounded).abs();
        if residual >= 0.25 {
            return Err(Error::NonIntegerWinding { point: p, residual });
        }
        Ok(rounded as i32)
    }

    pub fn bounding_diameter(&self) -> f64 {
        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in &self.points {
            lo_re = lo_re.min(p.re);
            hi_re = hi_re.max(p.re);
            lo_im = lo_im.min(p.im);
            hi_im = hi_im.max(p.im);
        }
        (hi_re - lo_re).hypot(hi_im - lo_im)
    }
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Winding number of an explicit closed vertex list about `p`, with the default guard band.
pub fn winding_number(closed: &[Complex64], p: Complex64) -> Result<i32> {
    ClosedCurve::new(closed.to_vec())?.winding_number(p, WINDING_GUARD)
}

/// Sampled images of the trajectory. `c[i] = z(ω(s[i]))`, `d[i] = iω(s[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedCurves {
    pub s: Vec<f64>,
    pub gamma: Vec<Complex64>,
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

impl TracedCurves {
    /// `C̄`: the conjugate of `C`, traversed as `s` decreases.
    pub fn c_bar(&self) -> Vec<Complex64> {
        self.c.iter().rev().map(|z| z.conj()).collect()
    }

    /// `D̄`: the conjugate of `D`, traversed as `s` decreases.
    pub fn d_bar(&self) -> Vec<Complex64> {
        self.d.iter().rev().map(|z| z.conj()).collect()
    }

    pub fn closed_c(&self) -> Result<ClosedCurve> {
        ClosedCurve::with_conjugate(&self.c)
    }

    pub fn closed_d(&self) -> Result<ClosedCurve> {
        ClosedCurve::with_conjugate(&self.d)
    }
}

fn z_at(sys: &MaterialSystem, traj: &Trajectory, s: f64) -> Result<Complex64> {
    match sys.eval_z(traj.eval(s)) {
        Ok(z) if z.is_finite() => Ok(z),
        Ok(_) | Err(Error::PoleHit { .. }) => Err(Error::TrajectoryThroughPole { s }),
        Err(e) => Err(e),
    }
}

/// Samples `C`, `D` along the trajectory: `n` equispaced parameters, then
/// bisection of every chord longer than 1% of the curve's extent.
pub fn trace_curves(sys: &MaterialSystem, traj: &Trajectory, n: usize) -> Result<TracedCurves> {
    let n = n.max(2);
    let mut s: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let mut c: Vec<Complex64> = s
        .iter()
        .map(|&si| z_at(sys, traj, si))
        .collect::<Result<_>>()?;

    for _ in 0..MAX_REFINE_PASSES {
        let extent = extent(&c);
        let limit = 0.01 * extent;
        let mut next_s = Vec::with_capacity(s.len());
        let mut next_c = Vec::with_capacity(c.len());
        let mut refined = false;
        for i in 0..s.len() {
            next_s.push(s[i]);
            next_c.push(c[i]);
            if i + 1 < s.len() && (c[i + 1] - c[i]).norm() > limit {
                let mid = 0.5 * (s[i] + s[i + 1]);
                next_s.push(mid);
                next_c.push(z_at(sys, traj, mid)?);
                refined = true;
            }
        }
        s = next_s;
        c = next_c;
        if !refined || s.len() > MAX_POINTS {
            break;
        }
    }
    let gamma: Vec<Complex64> = s.iter().map(|&si| traj.eval(si)).collect();
    let d = gamma.iter().map(|w| Complex64::new(-w.im, w.re)).collect();
    Ok(TracedCurves { s, gamma, c, d })
}

fn extent(pts: &[Complex64]) -> f64 {
    ClosedCurve {
        points: pts.to_vec(),
    }
    .bounding_diameter()
    .max(1e-300)
}

/// `n` equispaced points on `[-1, 1]`.
pub fn probe_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Preimages of one probe value inside `Ω`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbePreimages {
    pub lambda: f64,
    pub preimages: Vec<OmegaRoot>,
}

/// Everything the closed forms need to know about a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct CurveClassification {
    /// `z(ω(0))`.
    pub endpoint_a: f64,
    /// `z(ω(1))`.
    pub endpoint_b: f64,
    pub probe_lambdas: Vec<f64>,
    /// Winding number of `C ∪ C̄` about each probe value.
    pub probe_windings: Vec<i32>,
    /// Orientation of `C ∪ C̄` around `[-1, 1]`.
    pub orientation: Orientation,
    pub encircles_interval: bool,
    /// Orientation of `D ∪ D̄` about the midpoint of its real chord, when closed.
    pub d_orientation: Option<Orientation>,
    /// Poles and zeros of `h` with their windings; absent when `D` does not close.
    pub spectrum: Option<OmegaSpectrum>,
    /// Per probe value, the preimages under `h` lying inside `Ω`.
    pub m_profile: Vec<ProbePreimages>,
    pub all_time_independent: bool,
    #[serde(skip)]
    pub h: RationalFunction,
    #[serde(skip)]
    pub curves: TracedCurves,
    #[serde(skip)]
    pub closed_c: ClosedCurve,
    #[serde(skip)]
    pub region: Option<OmegaRegion>,
}

impl CurveClassification {
    /// Poles of `h` inside `Ω` (nonzero winding).
    pub fn poles_in_omega(&self) -> Vec<Pole> {
        self.spectrum
            .as_ref()
            .map(|sp| {
                sp.poles
                    .iter()
                    .filter(|p| p.winding != 0)
                    .cloned()
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Winding number of `C ∪ C̄` about an arbitrary point.
    pub fn c_winding(&self, z: Complex64) -> Result<i32> {
        self.closed_c.winding_number(z, WINDING_GUARD)
    }

    pub fn region(&self) -> Result<&OmegaRegion> {
        self.region.as_ref().ok_or_else(|| {
            Error::InvalidInput(
                "trajectory endpoints are not both on the imaginary axis; the rotated region is undefined"
                    .into(),
            )
        })
    }

    /// For every probe `λ`, `Σ m·w - Σ n·w - wind_C(λ)` where `w` is the winding of
    /// `D ∪ D̄` about each root. All entries are zero when the argument principle holds.
    pub fn counting_defects(&self) -> Vec<(f64, i32)> {
        let pole_weight: i32 = self.poles_in_omega().iter().map(|p| p.weight()).sum();
        self.m_profile
            .iter()
            .zip(&self.probe_windings)
            .map(|(row, &wc)| {
                let zero_weight: i32 = row.preimages.iter().map(|r| r.weight()).sum();
                (row.lambda, zero_weight - pole_weight - wc)
            })
            .collect()
    }
}

pub fn classify(
    sys: &MaterialSystem,
    traj: &Trajectory,
    probe_lambdas: &[f64],
) -> Result<CurveClassification> {
    let curves = trace_curves(sys, traj, traj.samples())?;
    let a = endpoint_value(&curves, 0.0, 0)?;
    let b = endpoint_value(&curves, 1.0, curves.c.len() - 1)?;
    let closed_c = curves.closed_c()?;

    let probe_windings: Vec<i32> = probe_lambdas
        .par_iter()
        .map(|&l| closed_c.winding_number(Complex64::new(l, 0.0), WINDING_GUARD))
        .collect::<Result<_>>()?;
    let first = *probe_windings
        .first()
        .ok_or_else(|| Error::InvalidInput("empty probe grid".into()))?;
    if first.abs() != 1 || probe_windings.iter().any(|&w| w != first) {
        return Err(Error::NotEncircling(format!(
            "probe windings range over {:?} (endpoints {a} and {b})",
            (
                probe_windings.iter().min().unwrap(),
                probe_windings.iter().max().unwrap()
            )
        )));
    }
    let orientation = Orientation::from_winding(first).expect("nonzero");

    let h = sys.as_h();
    let (region, spectrum, m_profile, d_orientation) = if traj.closes_rotated_curve() {
        let region = OmegaRegion::new(curves.closed_d()?);
        let spectrum = spectral::analyze(&h, &region)?;
        let m_profile: Vec<ProbePreimages> = probe_lambdas
            .par_iter()
            .map(|&l| {
                let pre = spectral::preimages_in_omega(&h, Complex64::new(l, 0.0), &region)?;
                Ok(ProbePreimages {
                    lambda: l,
                    preimages: pre,
                })
            })
            .collect::<Result<_>>()?;
        let mid = 0.5 * (curves.d[0] + curves.d[curves.d.len() - 1]);
        let d_orientation = region
            .winding(Complex64::new(mid.re, 0.0))
            .ok()
            .and_then(Orientation::from_winding);
        (Some(region), Some(spectrum), m_profile, d_orientation)
    } else {
        (None, None, Vec::new(), None)
    };
    let all_time_independent =
        spectrum.is_some() && m_profile.iter().all(|row| row.preimages.is_empty());

    Ok(CurveClassification {
        endpoint_a: a,
        endpoint_b: b,
        probe_lambdas: probe_lambdas.to_vec(),
        probe_windings,
        orientation,
        encircles_interval: true,
        d_orientation,
        spectrum,
        m_profile,
        all_time_independent,
        h,
        curves,
        closed_c,
        region,
    })
}

fn endpoint_value(curves: &TracedCurves, s: f64, idx: usize) -> Result<f64> {
    let z = curves.c[idx];
    if z.im.abs() > 1e-9 * (1.0 + z.norm()) {
        return Err(Error::EndpointNotReal { s, value: z });
    }
    Ok(z.re)
}

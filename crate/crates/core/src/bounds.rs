//! Extremal-measure envelopes and the inverse maps from measurements to the
//! volume fraction, the first moment and the response at a probe frequency.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{constrained_pair, SpectralMeasure};
use crate::quadrature::Tolerance;
use crate::response::{check_times, linspace, ResponseKernel};
use crate::signal_design::{checked_exp, SignalDesign};
use crate::spectral;

pub const DEFAULT_GRID: usize = 401;
const GOLDEN_ITERATIONS: usize = 3;
/// Tolerance of the quadrature rule behind bound scans.
pub const KERNEL_TOL: f64 = 1e-11;

/// Moment information assumed known about the measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Constraints {
    Mass { mass: f64 },
    MassMoment { mass: f64, m1: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEnvelope {
    pub times: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Mass locations of the minimizing measure at each time.
    pub argmin: Vec<Vec<f64>>,
    pub argmax: Vec<Vec<f64>>,
}

impl BoundEnvelope {
    pub fn width(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| u - l)
            .collect()
    }

    pub fn max_width(&self) -> f64 {
        self.width().into_iter().fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        let mut out = String::from("t,lower,upper,argmin_lambda,argmax_lambda\n");
        for i in 0..self.times.len() {
            writeln!(
                out,
                "{},{},{},{},{}",
                self.times[i],
                self.lower[i],
                self.upper[i],
                join(&self.argmin[i]),
                join(&self.argmax[i])
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Scan options for [`bounds_over_measures`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub grid: usize,
    pub tol: Tolerance,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            grid: DEFAULT_GRID,
            tol: Tolerance::with_rel(KERNEL_TOL),
        }
    }
}

#[derive(Clone, Copy)]
struct Extreme {
    value: f64,
    at: [f64; 2],
}

fn golden_refine(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    best: Extreme,
    maximize: bool,
) -> Extreme {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let better = |x: f64, y: f64| if maximize { x > y } else { x < y };
    let mut out = best;
    for _ in 0..GOLDEN_ITERATIONS {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        let (fc, fd) = (f(c), f(d));
        if better(fc, fd) {
            b = d;
        } else {
            a = c;
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if better(fx, out.value) {
                out = Extreme {
                    value: fx,
                    at: [x, f64::NAN],
                };
            }
        }
    }
    out
}

/// Per-time bounds on `Re v(t)` over all measures meeting `constraints`.
///
/// Mass only: single point masses on a `grid`-point scan of `[-1, 1]`, refined
/// by golden-section search around the grid extremes. Mass and first moment:
/// every feasible pair of grid points through [`constrained_pair`]. With `a0`
/// unknown the envelope covers `a0 ∈ [0, 2]`.
pub fn bounds_over_measures(
    design: &SignalDesign,
    a0: Option<f64>,
    times: &[f64],
    constraints: Constraints,
    opts: ScanOptions,
) -> Result<BoundEnvelope> {
    check_times(times)?;
    if opts.grid < 2 {
        return Err(Error::InvalidInput(
            "bound grid needs at least 2 points".into(),
        ));
    }
    if let Some(a) = a0 {
        if !(0.0..=2.0).contains(&a) {
            return Err(Error::InvalidInput(format!("a0 = {a} outside [0, 2]")));
        }
    }
    let kernel = ResponseKernel::build(design, times, opts.tol)?;
    let grid = linspace(-1.0, 1.0, opts.grid);
    let rows: Vec<Vec<f64>> = grid.par_iter().map(|&l| kernel.eval(l)).collect();
    let nt = times.len();

    let (lo, hi) = match constraints {
        Constraints::Mass { mass } => {
            if mass.is_nan() || mass < 0.0 {
                return Err(Error::NoFeasibleMeasure);
            }
            let step = grid[1] - grid[0];
            (0..nt)
                .into_par_iter()
                .map(|j| {
                    let mut lo = Extreme {
                        value: f64::INFINITY,
                        at: [0.0, f64::NAN],
                    };
                    let mut hi = Extreme {
                        value: f64::NEG_INFINITY,
                        at: [0.0, f64::NAN],
                    };
                    let (mut ilo, mut ihi) = (0, 0);
                    for (i, row) in rows.iter().enumerate() {
                        let v = mass * row[j];
                        if v < lo.value {
                            lo = Extreme {
                                value: v,
                                at: [grid[i], f64::NAN],
                            };
                            ilo = i;
                        }
                        if v > hi.value {
                            hi = Extreme {
                                value: v,
                                at: [grid[i], f64::NAN],
                            };
                            ihi = i;
                        }
                    }
                    let f = |l: f64| mass * kernel.eval_at(l, j);
                    let span = |i: usize| ((grid[i] - step).max(-1.0), (grid[i] + step).min(1.0));
                    let (a, b) = span(ilo);
                    lo = golden_refine(f, a, b, lo, false);
                    let (a, b) = span(ihi);
                    hi = golden_refine(f, a, b, hi, true);
                    (lo, hi)
                })
                .unzip::<_, _, Vec<_>, Vec<_>>()
        }
        Constraints::MassMoment { mass, m1 } => {
            let pairs: Vec<(usize, usize, f64, f64)> = (0..grid.len())
                .flat_map(|i| (i + 1..grid.len()).map(move |k| (i, k)))
                .filter_map(|(i, k)| {
                    constrained_pair(grid[i], grid[k], mass, m1)
                        .ok()
                        .map(|m| (i, k, m.masses()[0].weight, m.masses()[1].weight))
                })
                .collect();
            if pairs.is_empty() {
                return Err(Error::NoFeasibleMeasure);
            }
            let init = || {
                (
                    vec![
                        Extreme {
                            value: f64::INFINITY,
                            at: [0.0; 2]
                        };
                        nt
                    ],
                    vec![
                        Extreme {
                            value: f64::NEG_INFINITY,
                            at: [0.0; 2]
                        };
                        nt
                    ],
                )
            };
            let merge = |mut a: (Vec<Extreme>, Vec<Extreme>), b: (Vec<Extreme>, Vec<Extreme>)| {
                for j in 0..nt {
                    if b.0[j].value < a.0[j].value {
                        a.0[j] = b.0[j];
                    }
                    if b.1[j].value > a.1[j].value {
                        a.1[j] = b.1[j];
                    }
                }
                a
            };
            pairs
                .par_iter()
                .fold(init, |mut acc, &(i, k, w0, w1)| {
                    for (j, (&ri, &rk)) in rows[i].iter().zip(&rows[k]).enumerate() {
                        let v = w0 * ri + w1 * rk;
                        if v < acc.0[j].value {
                            acc.0[j] = Extreme {
                                value: v,
                                at: [grid[i], grid[k]],
                            };
                        }
                        if v > acc.1[j].value {
                            acc.1[j] = Extreme {
                                value: v,
                                at: [grid[i], grid[k]],
                            };
                        }
                    }
                    acc
                })
                .reduce(init, merge)
        }
    };

    let locs = |e: &Extreme| {
        e.at.iter()
            .copied()
            .filter(|x| !x.is_nan())
            .collect::<Vec<_>>()
    };
    let (lower, upper): (Vec<f64>, Vec<f64>) = match a0 {
        Some(a) => (
            lo.iter().map(|e| a * e.value).collect(),
            hi.iter().map(|e| a * e.value).collect(),
        ),
        None => (
            lo.iter().map(|e| (2.0 * e.value).min(0.0)).collect(),
            hi.iter().map(|e| (2.0 * e.value).max(0.0)).collect(),
        ),
    };
    Ok(BoundEnvelope {
        times: times.to_vec(),
        lower,
        upper,
        argmin: lo.iter().map(locs).collect(),
        argmax: hi.iter().map(locs).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryResult {
    pub f1: f64,
    pub interval: [f64; 2],
    /// Which closed form was inverted.
    pub method: String,
    pub times: Vec<f64>,
    /// Least-squares residual norm when several measurements were used.
    pub residual: f64,
}

fn volume_fraction_denominator(design: &SignalDesign, t: f64) -> Result<f64> {
    let cls = design.classification();
    if design.recipe().volume_fraction_k() != Some(0.0) {
        return Err(Error::WrongDesign(format!(
            "volume-fraction recovery needs the k = 0 volume-fraction recipe, not '{}'",
            design.recipe().name()
        )));
    }
    let tau = t - design.t0();
    if !cls.all_time_independent {
        // at t0 every admissible trajectory gives a measure-independent value
        if tau == 0.0 {
            return design
                .recipe()
                .value_at_t0(1.0, &SpectralMeasure::point(0.0, 1.0)?);
        }
        return Err(Error::NotMeasureIndependent);
    }
    let mut s = Complex64::new(0.0, 0.0);
    for p in cls.poles_in_omega() {
        s += p.weight() as f64 * checked_exp(-p.location * tau)?;
    }
    Ok(design.sign() * s.re)
}

/// `f1` from measurements of `Re v(t) = a0 σ Σ n w e^{-β(t - t0)}`. Several
/// measurements are combined by least squares; `eps` is the measurement
/// half-width mapped through the same linear relation.
pub fn recover_volume_fraction(
    design: &SignalDesign,
    measurements: &[(f64, f64)],
    eps: f64,
) -> Result<RecoveryResult> {
    if measurements.is_empty() {
        return Err(Error::InvalidInput("no measurements".into()));
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidInput(format!(
            "eps = {eps} must be nonnegative"
        )));
    }
    let d: Vec<f64> = measurements
        .iter()
        .map(|&(t, _)| volume_fraction_denominator(design, t))
        .collect::<Result<_>>()?;
    let dd: f64 = d.iter().map(|x| x * x).sum();
    let scale = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || dd.sqrt() < 1e-300 {
        return Err(Error::ZeroDenominator(scale));
    }
    let dv: f64 = d.iter().zip(measurements).map(|(x, &(_, v))| x * v).sum();
    let a0 = dv / dd;
    let residual = d
        .iter()
        .zip(measurements)
        .map(|(x, &(_, v))| (v - a0 * x).powi(2))
        .sum::<f64>()
        .sqrt();
    // |Δa0| ≤ eps Σ|d| / Σd² for a perturbation of each value by at most eps
    let da0 = eps * d.iter().map(|x| x.abs()).sum::<f64>() / dd;
    let lo = (0.5 * (a0 - da0)).clamp(0.0, 1.0);
    let hi = (0.5 * (a0 + da0)).clamp(0.0, 1.0);
    Ok(RecoveryResult {
        f1: (0.5 * a0).clamp(lo, hi),
        interval: [lo, hi],
        method: "volume-fraction (k = 0) pole expansion".into(),
        times: measurements.iter().map(|m| m.0).collect(),
        residual,
    })
}

/// `M1` from one measurement of the first-moment design with known `a0`.
pub fn recover_first_moment(
    design: &SignalDesign,
    a0: f64,
    measurement: (f64, f64),
) -> Result<f64> {
    let cls = design.classification();
    if !cls.all_time_independent {
        return Err(Error::NotMeasureIndependent);
    }
    let k = design.recipe().volume_fraction_k().ok_or_else(|| {
        Error::WrongDesign("first-moment recovery needs a volume-fraction recipe".into())
    })?;
    let poles = cls.poles_in_omega();
    if let Some(p) = poles.iter().find(|p| p.multiplicity > 1) {
        return Err(Error::NonSimplePole {
            location: p.location,
            multiplicity: p.multiplicity,
        });
    }
    let (t, value) = measurement;
    let tau = t - design.t0();
    let mut s = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for p in &poles {
        let e = checked_exp(-p.location * tau)?;
        s += p.weight() as f64 * e;
        b += p.winding as f64 * p.residue.expect("simple pole") * tau * e;
    }
    // value = a0 σ [S (1 + k M1) - k τ B]
    let coeff = a0 * design.sign() * k * s.re;
    if coeff.abs() < 1e-14 {
        return Err(Error::ZeroCoefficient(coeff));
    }
    Ok((value - a0 * design.sign() * (s - k * b).re) / coeff)
}

/// Result of recovering `∫dγ/(λ - z0)` from probe-design measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyRecovery {
    /// `ξ = X/2` with `X = ∫dγ/(λ - z0)`.
    pub xi: Complex64,
    pub integral: Complex64,
}

/// Solves `Re v(t_i) = -σ a0 q Re(2ξ e^{-κ(t_i - t0)})` for `ξ` from two
/// measurements, `q` being the weight (multiplicity times winding) of `κ`.
pub fn solve_two_time(
    kappa: Complex64,
    sign: f64,
    a0: f64,
    weight: f64,
    t0: f64,
    m1: (f64, f64),
    m2: (f64, f64),
) -> Result<Complex64> {
    if kappa.im == 0.0 {
        return Err(Error::SingularSystem(
            "real preimage admits a single unknown only".into(),
        ));
    }
    if m1.0 == m2.0 {
        return Err(Error::SingularSystem("measurement times coincide".into()));
    }
    let c = -sign * a0 * weight;
    if c == 0.0 {
        return Err(Error::ZeroCoefficient(c));
    }
    // Re(2ξE) = 2(ξr Er - ξi Ei)
    let e1 = 2.0 * checked_exp(-kappa * (m1.0 - t0))?;
    let e2 = 2.0 * checked_exp(-kappa * (m2.0 - t0))?;
    let (a11, a12, a21, a22) = (e1.re, -e1.im, e2.re, -e2.im);
    let det = a11 * a22 - a12 * a21;
    let scale = (a11.abs() + a12.abs()) * (a21.abs() + a22.abs());
    if det.abs() <= 1e-12 * scale {
        return Err(Error::SingularSystem(format!("determinant {det}")));
    }
    let (b1, b2) = (m1.1 / c, m2.1 / c);
    Ok(Complex64::new(
        (b1 * a22 - a12 * b2) / det,
        (a11 * b2 - a21 * b1) / det,
    ))
}

/// `∫dγ/(λ - z0)` from the probe design. A real `z0` needs one measurement;
/// a complex `z0` needs two, at distinct times, and a single non-real simple
/// preimage in `Ω`.
pub fn recover_frequency_response(
    design: &SignalDesign,
    a0: f64,
    measurements: &[(f64, f64)],
) -> Result<FrequencyRecovery> {
    let cls = design.classification();
    let z0 = design
        .recipe()
        .probe_target()
        .ok_or_else(|| Error::WrongDesign("frequency recovery needs a probe recipe".into()))?;
    if !cls.all_time_independent {
        return Err(Error::PreconditionM(
            "h takes values in [-1, 1] inside the region; only t = t0 is measure independent"
                .into(),
        ));
    }
    let region = cls.region()?;
    let kappa = spectral::preimages_in_omega(&cls.h, z0, region)?;
    let t0 = design.t0();
    let sign = design.sign();
    if z0.im == 0.0 {
        let &(t, v) = measurements
            .first()
            .ok_or_else(|| Error::InvalidInput("no measurements".into()))?;
        let tau = t - t0;
        let mut s = Complex64::new(0.0, 0.0);
        for r in &kappa {
            s += r.weight() as f64 * checked_exp(-r.location * tau)?;
        }
        let c = -sign * a0 * s.re;
        if c.abs() < 1e-300 {
            return Err(Error::ZeroCoefficient(c));
        }
        let x = Complex64::new(v / c, 0.0);
        return Ok(FrequencyRecovery {
            xi: 0.5 * x,
            integral: x,
        });
    }
    if kappa.len() != 1 || kappa[0].multiplicity != 1 {
        return Err(Error::PreconditionM(format!(
            "expected one simple preimage of z0 in the region, found {:?}",
            kappa
                .iter()
                .map(|r| (r.location, r.multiplicity))
                .collect::<Vec<_>>()
        )));
    }
    if measurements.len() < 2 {
        return Err(Error::InvalidInput(
            "complex z0 needs two measurements".into(),
        ));
    }
    let xi = solve_two_time(
        kappa[0].location,
        sign,
        a0,
        kappa[0].winding as f64,
        t0,
        measurements[0],
        measurements[1],
    )?;
    Ok(FrequencyRecovery {
        xi,
        integral: 2.0 * xi,
    })
}

/// Rebuilds the extremal measure behind an envelope witness.
pub fn extremal_measure(locations: &[f64], mass: f64, m1: Option<f64>) -> Result<SpectralMeasure> {
    match (locations, m1) {
        ([l], _) => SpectralMeasure::point(*l, mass),
        ([l0, l1], Some(m1)) => constrained_pair(*l0, *l1, mass, m1),
        _ => Err(Error::InvalidInput(
            "witness must have one or two locations".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::curves::{classify, probe_grid, DEFAULT_PROBES};
    use crate::response::{simulate_response, ResponseContext};
    use crate::signal_design::{RecipeParams, RecipeRegistry};

    fn design(name: &str, params: RecipeParams, recipe: &str) -> SignalDesign {
        let sys = builtins::material(name).unwrap();
        let traj = builtins::trajectory(name).unwrap();
        let cls = classify(&sys, &traj, &probe_grid(DEFAULT_PROBES)).unwrap();
        let r = RecipeRegistry::with_builtins()
            .build(recipe, &params)
            .unwrap();
        SignalDesign::new(sys, traj, cls, r, 0.0).unwrap()
    }

    fn vf(k: f64) -> RecipeParams {
        RecipeParams {
            k: Some(k),
            z0: None,
        }
    }

    fn small() -> ScanOptions {
        ScanOptions {
            grid: 41,
            ..Default::default()
        }
    }

    #[test]
    fn collapsed_envelope_for_example1() {
        let d = design("example1", vf(0.0), "volume-fraction");
        let times = linspace(-3.0, 0.0, 31);
        let env = bounds_over_measures(
            &d,
            Some(0.6),
            &times,
            Constraints::Mass { mass: 1.0 },
            small(),
        )
        .unwrap();
        assert!(env.max_width() < 1e-8);
        for (t, v) in times.iter().zip(&env.lower) {
            assert!((v + 0.6 * t.exp()).abs() < 1e-8);
        }
        let unknown =
            bounds_over_measures(&d, None, &times, Constraints::Mass { mass: 1.0 }, small())
                .unwrap();
        assert!(unknown.upper.iter().all(|&u| u == 0.0));
        for (t, v) in times.iter().zip(&unknown.lower) {
            assert!((v + 2.0 * t.exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn moment_information_narrows_envelope() {
        let d = design("example3", vf(0.0), "volume-fraction");
        let times = linspace(-1.0, 1.0, 9);
        let outer = bounds_over_measures(
            &d,
            Some(0.6),
            &times,
            Constraints::Mass { mass: 1.0 },
            small(),
        )
        .unwrap();
        let inner = bounds_over_measures(
            &d,
            Some(0.6),
            &times,
            Constraints::MassMoment { mass: 1.0, m1: 0.4 },
            small(),
        )
        .unwrap();
        for j in 0..times.len() {
            assert!(inner.lower[j] >= outer.lower[j] - 1e-12);
            assert!(inner.upper[j] <= outer.upper[j] + 1e-12);
        }
        assert!(outer.width()[4] < 1e-8);
        assert!(outer.max_width() > 1e-3);
    }

    #[test]
    fn envelope_witness_reproduces_bound() {
        let d = design("example3", vf(0.0), "volume-fraction");
        let times = [0.5];
        let env = bounds_over_measures(
            &d,
            Some(0.6),
            &times,
            Constraints::Mass { mass: 1.0 },
            small(),
        )
        .unwrap();
        let m = extremal_measure(&env.argmax[0], 1.0, None).unwrap();
        let ctx = ResponseContext::new(d, 0.6).unwrap().with_measure(m);
        let v = simulate_response(&ctx, &times).unwrap();
        assert!((v.values()[0] - env.upper[0]).abs() < 1e-8);
    }

    #[test]
    fn infeasible_moments() {
        let d = design("example1", vf(0.0), "volume-fraction");
        let err = bounds_over_measures(
            &d,
            Some(0.6),
            &[0.0],
            Constraints::MassMoment { mass: 1.0, m1: 1.5 },
            small(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoFeasibleMeasure));
    }

    #[test]
    fn volume_fraction_recovery() {
        let d = design("example1", vf(0.0), "volume-fraction");
        let r = recover_volume_fraction(&d, &[(0.0, -0.6)], 0.0).unwrap();
        assert!((r.f1 - 0.3).abs() < 1e-15);
        let r = recover_volume_fraction(&d, &[(-1.0, -0.6 * (-1.0f64).exp())], 0.0).unwrap();
        assert!((r.f1 - 0.3).abs() < 1e-15);
        let r = recover_volume_fraction(&d, &[(0.0, 0.0)], 0.0).unwrap();
        assert_eq!(r.f1, 0.0);
        let r = recover_volume_fraction(&d, &[(0.0, -0.6)], 0.006).unwrap();
        assert!(r.interval[0] <= 0.3 && 0.3 <= r.interval[1]);
        assert!((r.interval[1] - r.interval[0] - 0.006).abs() < 1e-12);
        let lsq = recover_volume_fraction(&d, &[(0.0, -0.6), (-1.0, -0.6 * (-1.0f64).exp())], 0.0)
            .unwrap();
        assert!((lsq.f1 - 0.3).abs() < 1e-15 && lsq.residual < 1e-15);
    }

    #[test]
    fn volume_fraction_recovery_needs_independence() {
        let d = design("example3", vf(0.0), "volume-fraction");
        assert!(matches!(
            recover_volume_fraction(&d, &[(0.5, -0.6)], 0.0),
            Err(Error::NotMeasureIndependent)
        ));
        // t0 stays measure independent for any admissible trajectory
        let r = recover_volume_fraction(&d, &[(0.0, -0.6)], 0.0).unwrap();
        assert!((r.f1 - 0.3).abs() < 1e-15);
    }

    #[test]
    fn first_moment_recovery() {
        let d = design("example1", vf(1.0), "volume-fraction");
        assert!((recover_first_moment(&d, 0.6, (0.0, -0.84)).unwrap() - 0.4).abs() < 1e-14);
        assert!(recover_first_moment(&d, 0.6, (0.0, -0.6)).unwrap().abs() < 1e-14);
        let t = -0.7;
        let v = -0.6 * f64::exp(t) * (1.4 + 4.0 * t);
        assert!((recover_first_moment(&d, 0.6, (t, v)).unwrap() - 0.4).abs() < 1e-13);
        assert!(matches!(
            recover_first_moment(&d, 0.0, (0.0, -0.6)),
            Err(Error::ZeroCoefficient(_))
        ));
    }

    #[test]
    fn two_time_round_trip() {
        let kappa = Complex64::new(-1.0, 0.5);
        let xi = Complex64::new(0.1, 0.2);
        let (a0, sign) = (0.6, 1.0);
        let fwd = |t: f64| {
            -sign * a0 * (xi * (-kappa * t).exp() + xi.conj() * (-kappa.conj() * t).exp()).re
        };
        let got =
            solve_two_time(kappa, sign, a0, 1.0, 0.0, (0.0, fwd(0.0)), (1.0, fwd(1.0))).unwrap();
        assert!((got - xi).norm() < 1e-10);
        assert!(matches!(
            solve_two_time(kappa, sign, a0, 1.0, 0.0, (1.0, 0.1), (1.0, 0.2)),
            Err(Error::SingularSystem(_))
        ));
        assert!(matches!(
            solve_two_time(
                Complex64::new(-1.0, 0.0),
                sign,
                a0,
                1.0,
                0.0,
                (0.0, 0.1),
                (1.0, 0.2)
            ),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn real_probe_recovery() {
        let z0 = Complex64::new(30.0, 0.0);
        let d = design(
            "example1",
            RecipeParams {
                k: None,
                z0: Some(z0),
            },
            "frequency-probe",
        );
        let t: f64 = 0.5;
        let v = 0.6 * (31.0 * t / 27.0).exp() / (0.5 - 30.0);
        let r = recover_frequency_response(&d, 0.6, &[(t, v)]).unwrap();
        assert!((r.integral - Complex64::new(-2.0 / 59.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_probe_recovery_from_simulation() {
        let z0 = Complex64::new(20.0, 15.0);
        let d = design(
            "example1",
            RecipeParams {
                k: None,
                z0: Some(z0),
            },
            "frequency-probe",
        );
        let m = SpectralMeasure::from_pairs(&[(-0.2, 0.4), (0.8, 0.6)]).unwrap();
        let truth = m.markov_eval(z0).unwrap();
        let ctx = ResponseContext::new(d.clone(), 0.6)
            .unwrap()
            .with_measure(m);
        let times = [-1.0, 0.0];
        let v = simulate_response(&ctx, &times).unwrap();
        let meas: Vec<(f64, f64)> = times
            .iter()
            .copied()
            .zip(v.values().iter().copied())
            .collect();
        let r = recover_frequency_response(&d, 0.6, &meas).unwrap();
        assert!((r.integral - truth).norm() < 1e-8 * truth.norm());
    }
}

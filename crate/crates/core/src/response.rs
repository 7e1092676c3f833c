//! Forward simulation of `Re v(t)` and its closed-form residue expansions.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::CurveClassification;
use crate::error::{Error, Result};
use crate::measures::SpectralMeasure;
use crate::quadrature::{self, CompositeRule, Tolerance};
use crate::signal_design::{checked_exp, SignalDesign};
use crate::spectral::{self, OmegaRoot};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        check_times(&times)?;
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value {v}")));
        }
        Ok(TimeSeries { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Two-column CSV with shortest round-trip decimals.
    pub fn to_csv(&self, value_header: &str) -> String {
        let mut out = format!("t,{value_header}\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(out, "{t},{v}").expect("writing to a String");
        }
        out
    }
}

pub fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("non-finite time".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `n` equispaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Everything the closed forms consume.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormInputs<'a> {
    pub classification: &'a CurveClassification,
    pub sign: f64,
    pub t0: f64,
    pub a0: f64,
    pub measure: Option<&'a SpectralMeasure>,
    /// First moment used when no measure is supplied.
    pub m1: Option<f64>,
}

/// A design together with the body it is applied to.
#[derive(Debug, Clone)]
pub struct ResponseContext {
    design: SignalDesign,
    a0: f64,
    measure: Option<SpectralMeasure>,
    m1: Option<f64>,
}

impl ResponseContext {
    pub fn new(design: SignalDesign, a0: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&a0) {
            return Err(Error::InvalidInput(format!("a0 = {a0} outside [0, 2]")));
        }
        Ok(ResponseContext {
            design,
            a0,
            measure: None,
            m1: None,
        })
    }

    pub fn with_measure(mut self, measure: SpectralMeasure) -> Self {
        self.measure = Some(measure);
        self
    }

    pub fn with_first_moment(mut self, m1: f64) -> Self {
        self.m1 = Some(m1);
        self
    }

    pub fn design(&self) -> &SignalDesign {
        &self.design
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn measure(&self) -> Option<&SpectralMeasure> {
        self.measure.as_ref()
    }

    pub fn inputs(&self) -> ClosedFormInputs<'_> {
        ClosedFormInputs {
            classification: self.design.classification(),
            sign: self.design.sign(),
            t0: self.design.t0(),
            a0: self.a0,
            measure: self.measure.as_ref(),
            m1: self.m1,
        }
    }

    /// The recipe's own closed form.
    pub fn predict(&self, times: &[f64]) -> Result<TimeSeries> {
        check_times(times)?;
        let v = self.design.recipe().predict(&self.inputs(), times)?;
        TimeSeries::new(times.to_vec(), v)
    }
}

/// `Re v(t) = Re ∫₀¹ a0 F(z(ω(s))) α(s) e^{-iω(s)(t - t0)} ds` by adaptive quadrature.
pub fn simulate_response(ctx: &ResponseContext, times: &[f64]) -> Result<TimeSeries> {
    check_times(times)?;
    let measure = ctx.measure().ok_or(Error::MissingMeasure)?;
    let design = ctx.design();
    let (a0, t0) = (ctx.a0(), design.t0());
    if a0 == 0.0 {
        return TimeSeries::new(times.to_vec(), vec![0.0; times.len()]);
    }
    let out = quadrature::integrate(times.len(), design.tolerance(), |s, buf| {
        let n = design.node(s)?;
        let f = a0 * measure.markov_eval(n.z)? * n.alpha;
        for (b, &t) in buf.iter_mut().zip(times) {
            *b = f * checked_exp(-I * n.omega * (t - t0))?;
        }
        Ok(())
    })?;
    TimeSeries::new(times.to_vec(), out.value.iter().map(|v| v.re).collect())
}

fn ensure_k(ctx: &ResponseContext, k: f64) -> Result<()> {
    match ctx.design().recipe().volume_fraction_k() {
        Some(dk) if dk == k => Ok(()),
        _ => Err(Error::WrongDesign(format!(
            "closed form for k = {k} requested from a '{}' design",
            ctx.design().recipe().name()
        ))),
    }
}

pub fn predict_volume_fraction_response(
    ctx: &ResponseContext,
    k: f64,
    times: &[f64],
) -> Result<TimeSeries> {
    ensure_k(ctx, k)?;
    ctx.predict(times)
}

pub fn predict_frequency_probe_response(
    ctx: &ResponseContext,
    z0: Complex64,
    times: &[f64],
) -> Result<TimeSeries> {
    if ctx.design().recipe().probe_target() != Some(z0) {
        return Err(Error::WrongDesign(format!(
            "probe closed form for z0 = {z0} requested from a '{}' design",
            ctx.design().recipe().name()
        )));
    }
    ctx.predict(times)
}

/// Preimages inside `Ω` of each mass location, or nothing when the
/// classification guarantees there are none.
fn mass_preimages(inputs: &ClosedFormInputs<'_>) -> Result<Vec<(f64, f64, Vec<OmegaRoot>)>> {
    let cls = inputs.classification;
    let region = cls.region()?;
    match inputs.measure {
        Some(m) => m
            .masses()
            .iter()
            .map(|pm| {
                let pre =
                    spectral::preimages_in_omega(&cls.h, Complex64::new(pm.location, 0.0), region)?;
                Ok((pm.location, pm.weight, pre))
            })
            .collect(),
        None if cls.all_time_independent => Ok(Vec::new()),
        None => Err(Error::MissingMeasure),
    }
}

fn weighted_exp_sum<'a>(
    roots: impl Iterator<Item = (Complex64, i32)> + 'a,
    tau: f64,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, w) in roots {
        acc += w as f64 * checked_exp(-z * tau)?;
    }
    Ok(acc)
}

/// Residue expansion of `Re v(t)` for `r(z) = -i(1 + kz)/(2π)`:
///
/// `a0 σ [Σ_β n w (m0 + k m1) E(β) - k m0 Σ_β w b τ E(β) - ∫dγ Σ_α m w (1 + kλ) E(α)]`
///
/// with `E(ζ) = e^{-ζτ}`, `τ = t - t0`, `w` the winding of `D ∪ D̄` about each
/// root, `β` the poles of `h` and `α` the preimages of each mass location.
pub fn volume_fraction_closed_form(
    inputs: &ClosedFormInputs<'_>,
    k: f64,
    times: &[f64],
) -> Result<Vec<f64>> {
    let cls = inputs.classification;
    let poles = cls.poles_in_omega();
    if k != 0.0 {
        if let Some(p) = poles.iter().find(|p| p.multiplicity > 1) {
            return Err(Error::NonSimplePole {
                location: p.location,
                multiplicity: p.multiplicity,
            });
        }
    }
    let m0 = inputs.measure.map_or(1.0, |m| m.moment(0));
    let m1 = match (inputs.measure, inputs.m1) {
        (Some(m), _) => m.moment(1),
        (None, Some(m1)) => m1,
        (None, None) if k == 0.0 => 0.0,
        (None, None) => return Err(Error::MissingMeasure),
    };
    let masses = mass_preimages(inputs)?;

    times
        .iter()
        .map(|&t| {
            let tau = t - inputs.t0;
            let pole_sum = weighted_exp_sum(poles.iter().map(|p| (p.location, p.weight())), tau)?;
            let mut acc = (m0 + k * m1) * pole_sum;
            if k != 0.0 {
                let mut res = Complex64::new(0.0, 0.0);
                for p in &poles {
                    let b = p.residue.expect("simple pole");
                    res += p.winding as f64 * b * tau * checked_exp(-p.location * tau)?;
                }
                acc -= k * m0 * res;
            }
            for (lambda, w, pre) in &masses {
                let s = weighted_exp_sum(pre.iter().map(|r| (r.location, r.weight())), tau)?;
                acc -= w * (1.0 + k * lambda) * s;
            }
            Ok(inputs.a0 * inputs.sign * acc.re)
        })
        .collect()
}

/// Residue expansion of `Re v(t)` for the probe recipe at `z0`:
///
/// `a0 σ [∫dγ Σ_α m w E(α) Re_z0(λ) - Σ_κ p w E(κ) X/2 - Σ_κ̄ p w E(κ̄) X̄/2]`
///
/// with `X = ∫dγ/(λ - z0)`, `κ` the preimages of `z0`, `κ̄` those of `z̄0`, and
/// `Re_z0(λ) = (1/(λ - z0) + 1/(λ - z̄0))/2`.
pub fn frequency_probe_closed_form(
    inputs: &ClosedFormInputs<'_>,
    z0: Complex64,
    times: &[f64],
) -> Result<Vec<f64>> {
    let cls = inputs.classification;
    if !matches!(cls.c_winding(z0), Ok(0)) {
        return Err(Error::ProbeInsideCurve(z0));
    }
    let measure = inputs.measure.ok_or(Error::MissingMeasure)?;
    let region = cls.region()?;
    let x = measure.markov_eval(z0)?;
    let xb = measure.markov_eval(z0.conj())?;
    let kappa = spectral::preimages_in_omega(&cls.h, z0, region)?;
    let kappa_bar = spectral::preimages_in_omega(&cls.h, z0.conj(), region)?;
    let masses = mass_preimages(inputs)?;

    times
        .iter()
        .map(|&t| {
            let tau = t - inputs.t0;
            let mut acc = Complex64::new(0.0, 0.0);
            for (lambda, w, pre) in &masses {
                let l = Complex64::new(*lambda, 0.0);
                let c = 0.5 * (1.0 / (l - z0) + 1.0 / (l - z0.conj()));
                let s = weighted_exp_sum(pre.iter().map(|r| (r.location, r.weight())), tau)?;
                acc += w * c * s;
            }
            let sk = weighted_exp_sum(kappa.iter().map(|r| (r.location, r.weight())), tau)?;
            let skb = weighted_exp_sum(kappa_bar.iter().map(|r| (r.location, r.weight())), tau)?;
            acc -= 0.5 * (sk * x + skb * xb);
            Ok(inputs.a0 * inputs.sign * acc.re)
        })
        .collect()
}

/// `Re v0(t) = Re a0 ∫dγ/(λ - z0) e^{-iω0(t - t0)}`, the single-frequency
/// response the probe design reproduces.
pub fn reference_response(
    a0: f64,
    measure: &SpectralMeasure,
    z0: Complex64,
    omega0: Complex64,
    t0: f64,
    times: &[f64],
) -> Result<TimeSeries> {
    check_times(times)?;
    let g = a0 * measure.markov_eval(z0)?;
    let values = times
        .iter()
        .map(|&t| Ok((g * checked_exp(-I * omega0 * (t - t0))?).re))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(times.to_vec(), values)
}

/// Probe values used to fix the quadrature rule behind a [`ResponseKernel`].
const KERNEL_PROBES: [f64; 9] = [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0];

/// `K(λ, t) = Re ∫₀¹ α(s)/(λ - z(s)) e^{-iω(s)(t - t0)} ds` on a fixed time grid,
/// so that `Re v(t) = a0 Σ w_j K(λ_j, t)` for any discrete measure.
#[derive(Debug, Clone)]
pub struct ResponseKernel {
    times: Vec<f64>,
    z: Vec<Complex64>,
    /// Row-major `[node][time]` products of rule weight, `α` and the exponential.
    w: Vec<Complex64>,
}

impl ResponseKernel {
    pub fn build(design: &SignalDesign, times: &[f64], tol: Tolerance) -> Result<Self> {
        check_times(times)?;
        let nt = times.len();
        let t0 = design.t0();
        let probe = quadrature::integrate(KERNEL_PROBES.len() * nt, tol, |s, buf| {
            let n = design.node(s)?;
            for (row, &l) in buf.chunks_mut(nt).zip(&KERNEL_PROBES) {
                let f = n.alpha / (l - n.z);
                for (b, &t) in row.iter_mut().zip(times) {
                    *b = f * checked_exp(-I * n.omega * (t - t0))?;
                }
            }
            Ok(())
        })?;
        Self::from_rule(design, times, &probe.rule)
    }

    pub fn from_rule(design: &SignalDesign, times: &[f64], rule: &CompositeRule) -> Result<Self> {
        let t0 = design.t0();
        let rows: Vec<(Complex64, Vec<Complex64>)> = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&s, &wt)| {
                let n = design.node(s)?;
                let row = times
                    .iter()
                    .map(|&t| Ok(wt * n.alpha * checked_exp(-I * n.omega * (t - t0))?))
                    .collect::<Result<Vec<_>>>()?;
                Ok((n.z, row))
            })
            .collect::<Result<_>>()?;
        let mut z = Vec::with_capacity(rows.len());
        let mut w = Vec::with_capacity(rows.len() * times.len());
        for (zi, row) in rows {
            z.push(zi);
            w.extend(row);
        }
        Ok(ResponseKernel {
            times: times.to_vec(),
            z,
            w,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn nodes(&self) -> usize {
        self.z.len()
    }

    /// `K(λ, ·)` over the whole time grid.
    pub fn eval(&self, lambda: f64) -> Vec<f64> {
        let nt = self.times.len();
        let mut acc = vec![0.0; nt];
        for (i, &zi) in self.z.iter().enumerate() {
            let q = 1.0 / (lambda - zi);
            let row = &self.w[i * nt..(i + 1) * nt];
            for (a, v) in acc.iter_mut().zip(row) {
                *a += q.re * v.re - q.im * v.im;
            }
        }
        acc
    }

    /// `K(λ, t_j)` at a single time index.
    pub fn eval_at(&self, lambda: f64, j: usize) -> f64 {
        let nt = self.times.len();
        self.z
            .iter()
            .enumerate()
            .map(|(i, &zi)| {
                let q = 1.0 / (lambda - zi);
                let v = self.w[i * nt + j];
                q.re * v.re - q.im * v.im
            })
            .sum()
    }

    pub fn response(&self, a0: f64, measure: &SpectralMeasure) -> Vec<f64> {
        let mut acc = vec![0.0; self.times.len()];
        for m in measure.masses() {
            for (a, k) in acc.iter_mut().zip(self.eval(m.location)) {
                *a += a0 * m.weight * k;
            }
        }
        acc
    }
}

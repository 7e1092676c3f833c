//! Acceptance criteria for the reference case studies, one line each.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use composite_probe::bounds::{
    bounds_over_measures, recover_frequency_response, recover_volume_fraction, Constraints,
    ScanOptions,
};
use composite_probe::builtins::EXAMPLE1_PROBE_OMEGA;
use composite_probe::measures::constrained_pair;
use composite_probe::response::{linspace, reference_response, simulate_response, ResponseContext};
use composite_probe::signal_design::SignalDesign;
use composite_probe::{spectral, Complex64};
use composite_probe_validation::{
    builtin_design, max_abs_err, max_rel_err, probe, random_measure, rng, run, volume_fraction,
    Criterion,
};
use rand::Rng;

const A0: f64 = 0.6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

macro_rules! attempt {
    ($crit:expr, $name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                $crit.error($name, err);
                return;
            }
        }
    };
}

fn fig_grid_early() -> Vec<f64> {
    linspace(-3.0, 0.0, 601)
}

fn fig_grid_centered() -> Vec<f64> {
    linspace(-1.0, 1.0, 601)
}

/// Max relative error of quadrature simulations over random single point masses.
fn sim_error(
    crit: &mut Criterion,
    design: &SignalDesign,
    measures: Vec<composite_probe::SpectralMeasure>,
    times: &[f64],
    expect: &[f64],
    floor: f64,
) -> Option<f64> {
    let mut worst = 0.0f64;
    for m in measures {
        let ctx = ResponseContext::new(design.clone(), A0)
            .ok()?
            .with_measure(m);
        match simulate_response(&ctx, times) {
            Ok(v) => worst = worst.max(max_rel_err(v.values(), expect, floor)),
            Err(e) => {
                crit.error("simulate_response", e);
                return None;
            }
        }
    }
    Some(worst)
}

fn criterion_1(crit: &mut Criterion) {
    let start = Instant::now();
    let design = attempt!(
        crit,
        "design",
        builtin_design("example1", "volume-fraction", &volume_fraction(0.0), false)
    );
    let times = fig_grid_early();
    let expect: Vec<f64> = times.iter().map(|t| -A0 * t.exp()).collect();
    let mut r = rng(1);
    let masses = (0..20)
        .map(|_| composite_probe::SpectralMeasure::point(r.random_range(-1.0..=1.0), 1.0).unwrap())
        .collect();
    let Some(err) = sim_error(crit, &design, masses, &times, &expect, 0.0) else {
        return;
    };
    crit.below(
        "simulation vs -0.6 e^t, 20 point masses (max rel)",
        err,
        1e-6,
    );
    let ctx = attempt!(crit, "context", ResponseContext::new(design.clone(), A0));
    let pred = attempt!(crit, "prediction", ctx.predict(&times));
    crit.below(
        "closed form vs -0.6 e^t (max rel)",
        max_rel_err(pred.values(), &expect, 0.0),
        1e-6,
    );
    let env = attempt!(
        crit,
        "envelope",
        bounds_over_measures(
            &design,
            Some(A0),
            &times,
            Constraints::Mass { mass: 1.0 },
            ScanOptions::default()
        )
    );
    crit.below("mass-only envelope width (a0 known)", env.max_width(), 1e-8);
    let secs = start.elapsed().as_secs_f64();
    crit.check("runtime", secs < 30.0, format!("{secs:.2} s < 30 s"));
}

fn criterion_2(crit: &mut Criterion) {
    let design = attempt!(
        crit,
        "design",
        builtin_design("example1", "volume-fraction", &volume_fraction(1.0), false)
    );
    let times = fig_grid_early();
    let expect: Vec<f64> = times
        .iter()
        .map(|t| -A0 * t.exp() * (1.4 + 4.0 * t))
        .collect();
    let mut r = rng(2);
    let measures: Vec<_> = (0..20)
        .map(|_| {
            let l0 = r.random_range(-1.0..0.39);
            let l1 = r.random_range(0.41..=1.0);
            constrained_pair(l0, l1, 1.0, 0.4).unwrap()
        })
        .collect();
    // relative error with an absolute floor near the crossing at t = -0.35
    let mut worst = 0.0f64;
    for m in measures {
        let ctx =
            attempt!(crit, "context", ResponseContext::new(design.clone(), A0)).with_measure(m);
        let v = attempt!(crit, "simulate_response", simulate_response(&ctx, &times));
        for (a, e) in v.values().iter().zip(&expect) {
            let tol = (1e-6 * e.abs()).max(1e-9);
            worst = worst.max((a - e).abs() / tol);
        }
    }
    crit.check(
        "simulation vs -0.6 e^t (1.4 + 4t), 20 pairs with M1 = 0.4",
        worst < 1.0,
        format!("max error / max(1e-6 |exact|, 1e-9) = {worst:.3e} < 1"),
    );
    let ctx =
        attempt!(crit, "context", ResponseContext::new(design.clone(), A0)).with_first_moment(0.4);
    let pred = attempt!(crit, "prediction", ctx.predict(&times));
    crit.below(
        "closed form (max abs)",
        max_abs_err(pred.values(), &expect),
        1e-12,
    );
    let env = attempt!(
        crit,
        "envelope",
        bounds_over_measures(
            &design,
            Some(A0),
            &times,
            Constraints::MassMoment { mass: 1.0, m1: 0.4 },
            ScanOptions::default()
        )
    );
    crit.below("mass + first-moment envelope width", env.max_width(), 1e-8);
    crit.below(
        "envelope vs closed form (max abs)",
        max_abs_err(&env.lower, &expect),
        1e-8,
    );
}

fn criterion_3(crit: &mut Criterion) {
    let z0 = c(30.0, 0.0);
    let design = attempt!(
        crit,
        "design",
        builtin_design("example1", "frequency-probe", &probe(z0), false)
    );
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = random_measure(&mut r);
        let expect = A0 * attempt!(crit, "markov", m.markov_eval(z0)).re;
        let ctx =
            attempt!(crit, "context", ResponseContext::new(design.clone(), A0)).with_measure(m);
        let v = attempt!(crit, "simulate_response", simulate_response(&ctx, &[0.0]));
        worst = worst.max((v.values()[0] - expect).abs());
    }
    crit.below(
        "|Re v(0) - a0 sum w/(lambda - 30)|, 20 random measures",
        worst,
        1e-8,
    );
}

fn criterion_4(crit: &mut Criterion) {
    let z0 = c(30.0, 0.0);
    let design = attempt!(
        crit,
        "design",
        builtin_design("example1", "frequency-probe", &probe(z0), false)
    );
    let m = composite_probe::SpectralMeasure::point(0.5, 1.0).unwrap();
    let times = fig_grid_early();
    let ctx =
        attempt!(crit, "context", ResponseContext::new(design.clone(), A0)).with_measure(m.clone());
    let sim = attempt!(crit, "simulate_response", simulate_response(&ctx, &times));
    let literal: Vec<f64> = times
        .iter()
        .map(|t| -A0 * (31.0 * t / 27.0).exp() / (0.5 - 30.0))
        .collect();
    crit.below(
        "simulation vs -a0 e^{31t/27}/(0.5 - 30) as stated (max rel)",
        max_rel_err(sim.values(), &literal, 0.0),
        1e-6,
    );
    let v0 = attempt!(
        crit,
        "reference",
        reference_response(A0, &m, z0, EXAMPLE1_PROBE_OMEGA, 0.0, &times)
    );
    crit.below(
        "simulation vs Re v0(t) = a0 e^{31t/27}/(0.5 - 30) (max rel)",
        max_rel_err(sim.values(), v0.values(), 0.0),
        1e-6,
    );
    let pred = attempt!(crit, "prediction", ctx.predict(&times));
    crit.below(
        "closed form vs simulation (max rel)",
        max_rel_err(pred.values(), sim.values(), 0.0),
        1e-6,
    );
    let t = 0.5;
    let v = attempt!(crit, "simulate_response", simulate_response(&ctx, &[t])).values()[0];
    let rec = attempt!(
        crit,
        "recovery",
        recover_frequency_response(&design, A0, &[(t, v)])
    );
    crit.below(
        "single-time recovery of int dgamma/(lambda - z0) = -2/59",
        (rec.integral - c(-2.0 / 59.0, 0.0)).norm(),
        1e-8,
    );
}

fn envelope_checks(crit: &mut Criterion, name: &str, k: f64, times: &[f64], expect: &[f64]) {
    let design = attempt!(
        crit,
        "design",
        builtin_design(name, "volume-fraction", &volume_fraction(k), false)
    );
    let constraints = if k == 0.0 {
        Constraints::Mass { mass: 1.0 }
    } else {
        Constraints::MassMoment { mass: 1.0, m1: 0.4 }
    };
    let env = attempt!(
        crit,
        "envelope",
        bounds_over_measures(
            &design,
            Some(A0),
            times,
            constraints,
            ScanOptions::default()
        )
    );
    crit.below(format!("k = {k} envelope width"), env.max_width(), 1e-8);
    crit.below(
        format!("k = {k} envelope vs closed form (max abs)"),
        max_abs_err(&env.upper, expect),
        1e-8,
    );
}

fn criterion_5(crit: &mut Criterion) {
    let design = attempt!(
        crit,
        "design",
        builtin_design("example2", "volume-fraction", &volume_fraction(0.0), false)
    );
    let cls = design.classification();
    crit.below("endpoint A = 14", (cls.endpoint_a - 14.0).abs(), 1e-9);
    crit.below("endpoint B = -4", (cls.endpoint_b + 4.0).abs(), 1e-9);
    crit.check(
        "all_time_independent",
        cls.all_time_independent,
        format!("{}", cls.all_time_independent),
    );
    let poles = cls.poles_in_omega();
    crit.check(
        "single simple pole at -1 in the region",
        poles.len() == 1
            && poles[0].multiplicity == 1
            && (poles[0].location - c(-1.0, 0.0)).norm() < 1e-9,
        format!(
            "{:?}",
            poles
                .iter()
                .map(|p| (p.location, p.multiplicity))
                .collect::<Vec<_>>()
        ),
    );
    let times = fig_grid_early();
    let e0: Vec<f64> = times.iter().map(|t| -A0 * t.exp()).collect();
    let e1: Vec<f64> = times
        .iter()
        .map(|t| -A0 * t.exp() * (1.4 + 4.0 * t))
        .collect();
    envelope_checks(crit, "example2", 0.0, &times, &e0);
    envelope_checks(crit, "example2", 1.0, &times, &e1);
}

fn criterion_6(crit: &mut Criterion) {
    let design = attempt!(
        crit,
        "design",
        builtin_design("example3", "volume-fraction", &volume_fraction(0.0), false)
    );
    let cls = design.classification();
    crit.below("endpoint A = 1.8408", (cls.endpoint_a - 1.8408).abs(), 5e-4);
    crit.below(
        "endpoint B = -1.3433",
        (cls.endpoint_b + 1.3433).abs(),
        5e-4,
    );
    let spectrum = cls.spectrum.as_ref();
    let poles: Vec<f64> = spectrum
        .map(|s| s.poles.iter().map(|p| p.location.re).collect())
        .unwrap_or_default();
    crit.check(
        "poles of h at -8 and -1",
        poles.len() == 2 && (poles[0] + 8.0).abs() < 1e-9 && (poles[1] + 1.0).abs() < 1e-9,
        format!(
            "{:?} with region windings {:?}",
            poles,
            spectrum.map(|s| s.poles.iter().map(|p| p.winding).collect::<Vec<_>>())
        ),
    );
    let zeros: Vec<f64> = spectrum
        .map(|s| s.zeros.iter().map(|z| z.location.re).collect())
        .unwrap_or_default();
    crit.check(
        "zero of h at -5",
        zeros.len() == 1 && (zeros[0] + 5.0).abs() < 1e-9,
        format!("{zeros:?}"),
    );
    crit.check(
        "all_time_independent = false",
        !cls.all_time_independent,
        format!("{}", cls.all_time_independent),
    );
    let times = fig_grid_centered();
    let i0 = times
        .iter()
        .position(|&t| t == 0.0)
        .expect("grid contains 0");
    let i5 = times
        .iter()
        .position(|&t| t == 0.5)
        .expect("grid contains 0.5");
    let env = attempt!(
        crit,
        "envelope",
        bounds_over_measures(
            &design,
            Some(A0),
            &times,
            Constraints::Mass { mass: 1.0 },
            ScanOptions::default()
        )
    );
    let w = env.width();
    crit.below("envelope width at t = 0", w[i0], 1e-6);
    crit.below(
        "envelope value at t = 0 vs -a0",
        (env.lower[i0] + A0).abs(),
        1e-6,
    );
    crit.check(
        "envelope width at t = 0.5",
        w[i5] > 1e-3,
        format!("{:.4e} > 1e-3", w[i5]),
    );
    // two distinct point masses: equal at t0, different elsewhere
    let mut sims = Vec::new();
    for l in [-0.8, 0.6] {
        let m = composite_probe::SpectralMeasure::point(l, 1.0).unwrap();
        let ctx =
            attempt!(crit, "context", ResponseContext::new(design.clone(), A0)).with_measure(m);
        sims.push(attempt!(
            crit,
            "simulate_response",
            simulate_response(&ctx, &times)
        ));
    }
    let gap = max_abs_err(sims[0].values(), sims[1].values());
    crit.check(
        "two point masses differ away from t = 0",
        gap > 1e-3,
        format!("{gap:.4e} > 1e-3"),
    );
    crit.below(
        "two point masses agree with -a0 at t = 0",
        (sims[0].values()[i0] + A0)
            .abs()
            .max((sims[1].values()[i0] + A0).abs()),
        1e-6,
    );
}

fn criterion_7(crit: &mut Criterion) {
    let lambdas = linspace(-1.0, 1.0, 21);
    let cases = [
        ("example1", "volume-fraction", volume_fraction(0.0)),
        ("example1", "volume-fraction", volume_fraction(1.0)),
        ("example1", "frequency-probe", probe(c(30.0, 0.0))),
        ("example1", "frequency-probe", probe(c(20.0, 15.0))),
        ("example3", "volume-fraction", volume_fraction(1.0)),
        ("example3", "frequency-probe", probe(c(5.0, 0.0))),
    ];
    for (name, recipe, params) in &cases {
        for reversed in [false, true] {
            let d = attempt!(
                crit,
                "design",
                builtin_design(name, recipe, params, reversed)
            );
            let wind = d.classification().orientation.sign();
            let mut worst = 0.0f64;
            for &l in &lambdas {
                let lc = c(l, 0.0);
                let g = attempt!(crit, "contour integral", d.contour_integral(lc));
                let r = attempt!(crit, "r", d.eval_r(lc));
                // g = -wind 2πi r(λ): the contour runs around λ with winding `wind`
                worst = worst.max((g + wind * c(0.0, 2.0 * PI) * r).norm());
            }
            let label = format!(
                "{name} {recipe} {:?} {}",
                params
                    .k
                    .map(|k| format!("k={k}"))
                    .or(params.z0.map(|z| format!("z0={z}")))
                    .unwrap_or_default(),
                if reversed {
                    "clockwise C"
                } else {
                    "anticlockwise C"
                }
            );
            crit.below(label, worst, 1e-8);
        }
    }
}

fn criterion_8(crit: &mut Criterion) {
    let probes = [
        ("example1", vec![c(30.0, 0.0), c(20.0, 15.0)]),
        ("example2", vec![c(30.0, 0.0)]),
        ("example3", vec![c(10.0, 0.0), c(3.0, 4.0)]),
    ];
    for (name, z0s) in probes {
        let d = attempt!(
            crit,
            "design",
            builtin_design(name, "volume-fraction", &volume_fraction(0.0), false)
        );
        let cls = d.classification();
        let defects = cls.counting_defects();
        let bad = defects.iter().filter(|(_, e)| *e != 0).count();
        crit.check(
            format!(
                "{name}: sum m w - sum n w = wind_C(lambda) on {} probes",
                defects.len()
            ),
            bad == 0 && defects.len() == 201,
            format!("{bad} mismatches"),
        );
        let region = attempt!(crit, "region", cls.region());
        let pole_weight: i32 = cls.poles_in_omega().iter().map(|p| p.weight()).sum();
        for z0 in z0s {
            let wc = attempt!(crit, "winding", cls.c_winding(z0));
            let pre = attempt!(
                crit,
                "preimages",
                spectral::preimages_in_omega(&cls.h, z0, region)
            );
            let p: i32 = pre.iter().map(|r| r.weight()).sum();
            crit.check(
                format!("{name}: z0 = {z0} outside C, sum p w - sum n w = 0"),
                wc == 0 && p - pole_weight == 0,
                format!("wind_C = {wc}, sum p w = {p}, sum n w = {pole_weight}"),
            );
        }
    }
}

fn criterion_9(crit: &mut Criterion) {
    let times = [-2.0, -1.5, -1.0, -0.5, 0.0];
    for (stream, name) in [(9u64, "example1"), (10, "example2")] {
        let d = attempt!(
            crit,
            "design",
            builtin_design(name, "volume-fraction", &volume_fraction(0.0), false)
        );
        let mut r = rng(stream);
        let mut draws = Vec::new();
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let f1: f64 = r.random_range(0.0..=1.0);
            let m = random_measure(&mut r);
            let ctx = attempt!(crit, "context", ResponseContext::new(d.clone(), 2.0 * f1))
                .with_measure(m);
            let v = attempt!(crit, "simulate_response", simulate_response(&ctx, &times));
            for (&t, &val) in times.iter().zip(v.values()) {
                let rec = attempt!(
                    crit,
                    "recovery",
                    recover_volume_fraction(&d, &[(t, val)], 0.0)
                );
                worst = worst.max((rec.f1 - f1).abs());
            }
            draws.push((f1, v));
        }
        crit.below(
            format!("{name}: noiseless f1 error over 20 draws x 5 times"),
            worst,
            1e-6,
        );
        let mut contained = 0;
        for trial in 0..100 {
            let (f1, series) = &draws[trial % draws.len()];
            let j = trial % times.len();
            let truth = series.values()[j];
            let eps = 0.01 * truth.abs();
            let noisy = truth + r.random_range(-1.0..=1.0) * eps;
            let rec = attempt!(
                crit,
                "recovery",
                recover_volume_fraction(&d, &[(times[j], noisy)], eps)
            );
            if rec.interval[0] <= *f1 && *f1 <= rec.interval[1] {
                contained += 1;
            }
        }
        crit.check(
            format!("{name}: +-1% noise interval contains f1"),
            contained == 100,
            format!("{contained}/100 trials"),
        );
    }
}

fn main() -> ExitCode {
    run(vec![
        (
            1,
            "Example 1, k = 0: response -0.6 e^t and collapsed envelope",
            criterion_1,
        ),
        (
            2,
            "Example 1, k = 1: response -0.6 e^t (1.4 + 4t) and collapsed envelope",
            criterion_2,
        ),
        (
            3,
            "Probe design at t0 reproduces a0 int dgamma/(lambda - 30)",
            criterion_3,
        ),
        (
            4,
            "Example 1, z0 = 30: probe response closed form and recovery of -2/59",
            criterion_4,
        ),
        (
            5,
            "Example 2: endpoints 14/-4, single pole -1, collapsed envelopes",
            criterion_5,
        ),
        (
            6,
            "Example 3: negative control, coincident only at t0",
            criterion_6,
        ),
        (
            7,
            "Residue identity for the contour integral of r/(lambda - z)",
            criterion_7,
        ),
        (
            8,
            "Counting identities over the 201-point probe grid",
            criterion_8,
        ),
        (
            9,
            "Round-trip volume-fraction recovery, noiseless and +-1% noise",
            criterion_9,
        ),
    ])
}

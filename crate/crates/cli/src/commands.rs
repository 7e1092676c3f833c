//! One function per subcommand. Each returns the files it produced and a
//! short human-readable summary; writing them out is the caller's job.

use std::fmt::Write;

use composite_probe::bounds::{
    bounds_over_measures, recover_first_moment, recover_frequency_response, recover_volume_fraction,
};
use composite_probe::{simulate_response, ResponseContext, SignalDesign};
use serde::Serialize;

use crate::error::{CliError, CliResult, Context};
use crate::figures::{FigureRegistry, RunOptions};
use crate::scenario::Scenario;
use crate::table::Table;

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Table(Table),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub title: String,
    pub payload: Payload,
}

impl Artifact {
    fn table(file: &str, title: &str, table: Table) -> Self {
        Artifact {
            file: file.into(),
            title: title.into(),
            payload: Payload::Table(table),
        }
    }

    fn json(file: &str, title: &str, value: &impl Serialize) -> CliResult<Self> {
        let text =
            serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Artifact {
            file: file.into(),
            title: title.into(),
            payload: Payload::Text(text + "\n"),
        })
    }

    pub fn contents(&self) -> String {
        match &self.payload {
            Payload::Table(t) => t.to_csv(),
            Payload::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: String,
    pub artifacts: Vec<Artifact>,
}

pub fn verify(sc: &Scenario, opts: &RunOptions) -> CliResult<Report> {
    let design = sc.design(opts.tol)?;
    let cls = design.classification();
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", sc.name);
    let _ = writeln!(
        s,
        "endpoints: z(omega(0)) = {}, z(omega(1)) = {}",
        cls.endpoint_a, cls.endpoint_b
    );
    let _ = writeln!(s, "C orientation: {:?}", cls.orientation);
    let _ = writeln!(s, "encircles [-1, 1]: {}", cls.encircles_interval);
    match &cls.spectrum {
        Some(sp) => {
            for p in &sp.poles {
                let res = p.residue.map_or("-".to_string(), |r| r.to_string());
                let _ = writeln!(
                    s,
                    "pole {} (multiplicity {}, residue {res}, winding {})",
                    p.location, p.multiplicity, p.winding
                );
            }
            for z in &sp.zeros {
                let _ = writeln!(
                    s,
                    "zero {} (multiplicity {}, winding {})",
                    z.location, z.multiplicity, z.winding
                );
            }
        }
        None => {
            let _ = writeln!(s, "rotated curve is open; no pole/zero analysis");
        }
    }
    let bad = cls
        .counting_defects()
        .iter()
        .filter(|(_, e)| *e != 0)
        .count();
    let _ = writeln!(
        s,
        "counting identity violations: {bad} of {}",
        cls.probe_lambdas.len()
    );
    let _ = writeln!(s, "all_time_independent: {}", cls.all_time_independent);
    Ok(Report {
        summary: s,
        artifacts: vec![Artifact::json(
            "classification.json",
            "classification",
            cls,
        )?],
    })
}

#[derive(Serialize)]
struct DesignSummary<'a> {
    scenario: &'a str,
    recipe: &'static str,
    params: composite_probe::RecipeParams,
    sign: f64,
    t0: f64,
}

pub fn design(sc: &Scenario, opts: &RunOptions) -> CliResult<Report> {
    let d = sc.design(opts.tol)?;
    let times = sc.times()?;
    let u = d.synthesize_input(&times).context("synthesize input")?;
    let summary = DesignSummary {
        scenario: &sc.name,
        recipe: d.recipe().name(),
        params: d.recipe().params(),
        sign: d.sign(),
        t0: d.t0(),
    };
    Ok(Report {
        summary: format!(
            "designed '{}' input for {} on {} times\n",
            summary.recipe,
            sc.name,
            times.len()
        ),
        artifacts: vec![
            Artifact::table(
                "input.csv",
                "input signal Re u(t)",
                Table::from_columns(&["t", "u"], &[&times, &u]),
            ),
            Artifact::json("design.json", "design", &summary)?,
        ],
    })
}

fn context(sc: &Scenario, design: SignalDesign) -> CliResult<ResponseContext> {
    let a0 = sc.require_a0()?;
    let ctx = ResponseContext::new(design, a0).context("response")?;
    Ok(match sc.constraints.as_ref().and_then(|c| c.m1) {
        Some(m1) => ctx.with_first_moment(m1),
        None => ctx,
    })
}

pub fn simulate(sc: &Scenario, opts: &RunOptions) -> CliResult<Report> {
    let design = sc.design(opts.tol)?;
    let times = sc.times()?;
    let ctx = context(sc, design)?.with_measure(sc.require_measure()?);
    let sim = simulate_response(&ctx, &times).context("simulate")?;
    let mut table = Table::from_columns(&["t", "simulated"], &[&times, sim.values()]);
    let mut summary = format!("simulated {} times for {}\n", times.len(), sc.name);
    if ctx.design().classification().all_time_independent {
        let pred = ctx.predict(&times).context("closed form")?;
        let gap = sim
            .values()
            .iter()
            .zip(pred.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        table = Table::from_columns(
            &["t", "simulated", "predicted"],
            &[&times, sim.values(), pred.values()],
        );
        let _ = writeln!(summary, "max |simulated - predicted| = {gap:e}");
    }
    Ok(Report {
        summary,
        artifacts: vec![Artifact::table("response.csv", "Re v(t)", table)],
    })
}

pub fn bounds(sc: &Scenario, opts: &RunOptions) -> CliResult<Report> {
    let design = sc.design(opts.tol)?;
    let times = sc.times()?;
    let env = bounds_over_measures(&design, sc.a0, &times, sc.constraints()?, opts.scan()?)
        .context("bounds")?;
    let summary = format!(
        "bounds for {} over {} times, max width {:e}\n",
        sc.name,
        times.len(),
        env.max_width()
    );
    let plot = Table::from_columns(&["t", "lower", "upper"], &[&times, &env.lower, &env.upper]);
    Ok(Report {
        summary,
        artifacts: vec![
            Artifact::table("bounds.csv", "bounds on Re v(t)", plot),
            Artifact {
                file: "bounds_extremals.csv".into(),
                title: "extremal measures".into(),
                payload: Payload::Text(env.to_csv()),
            },
        ],
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum Recovered {
    VolumeFraction(composite_probe::RecoveryResult),
    FirstMoment { m1: Vec<f64>, times: Vec<f64> },
    Frequency(composite_probe::bounds::FrequencyRecovery),
}

pub fn recover(sc: &Scenario, opts: &RunOptions) -> CliResult<Report> {
    let design = sc.design(opts.tol)?;
    let spec = sc.recovery.as_ref().ok_or_else(|| {
        CliError::Config(format!(
            "scenario '{}' declares no recovery section",
            sc.name
        ))
    })?;
    let measurements: Vec<(f64, f64)> = match (&spec.measurements, &spec.times) {
        (Some(m), None) => m.iter().map(|p| (p[0], p[1])).collect(),
        (None, Some(times)) => {
            let ctx = context(sc, design.clone())?.with_measure(sc.require_measure()?);
            let v = simulate_response(&ctx, times).context("synthesize measurements")?;
            times
                .iter()
                .copied()
                .zip(v.values().iter().copied())
                .collect()
        }
        _ => {
            return Err(CliError::Config(
                "recovery needs exactly one of: measurements, times".into(),
            ))
        }
    };
    let recovered = match (
        design.recipe().volume_fraction_k(),
        design.recipe().probe_target(),
    ) {
        (Some(0.0), _) => Recovered::VolumeFraction(
            recover_volume_fraction(&design, &measurements, spec.eps).context("recover")?,
        ),
        (Some(_), _) => {
            let a0 = sc.require_a0()?;
            let m1 = measurements
                .iter()
                .map(|&m| recover_first_moment(&design, a0, m))
                .collect::<composite_probe::Result<Vec<_>>>()
                .context("recover")?;
            Recovered::FirstMoment {
                m1,
                times: measurements.iter().map(|m| m.0).collect(),
            }
        }
        (None, Some(_)) => Recovered::Frequency(
            recover_frequency_response(&design, sc.require_a0()?, &measurements)
                .context("recover")?,
        ),
        (None, None) => {
            return Err(CliError::Config(format!(
                "recipe '{}' has no recovery",
                design.recipe().name()
            )))
        }
    };
    let summary = match &recovered {
        Recovered::VolumeFraction(r) => {
            format!("f1 = {} in [{}, {}]\n", r.f1, r.interval[0], r.interval[1])
        }
        Recovered::FirstMoment { m1, .. } => format!("M1 = {m1:?}\n"),
        Recovered::Frequency(f) => format!("integral of dgamma/(lambda - z0) = {}\n", f.integral),
    };
    Ok(Report {
        summary,
        artifacts: vec![Artifact::json("recovery.json", "recovery", &recovered)?],
    })
}

pub fn reproduce(figures: &FigureRegistry, id: &str, opts: &RunOptions) -> CliResult<Report> {
    let fig = figures.get(id)?;
    let table = fig.render(opts)?;
    Ok(Report {
        summary: format!("{}: {}\n", fig.id(), fig.title()),
        artifacts: vec![Artifact::table(&format!("{id}.csv"), fig.title(), table)],
    })
}

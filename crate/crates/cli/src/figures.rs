//! Figure reproducers, registered by id and selected at run time.

use std::collections::BTreeMap;

use composite_probe::bounds::{bounds_over_measures, Constraints, ScanOptions};
use composite_probe::builtins::EXAMPLE1_PROBE_OMEGA;
use composite_probe::curves::probe_grid;
use composite_probe::quadrature::Tolerance;
use composite_probe::response::reference_response;
use composite_probe::{simulate_response, Complex64, ResponseContext, SignalDesign};

use crate::error::{CliError, CliResult, Context};
use crate::scenario::{DesignSpec, Scenario};
use crate::table::Table;

/// Knobs shared by every command.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Number of `λ` grid points for bound scans.
    pub grid: Option<usize>,
    /// Relative quadrature tolerance.
    pub tol: Option<f64>,
}

impl RunOptions {
    pub fn scan(&self) -> CliResult<ScanOptions> {
        let mut opts = ScanOptions::default();
        if let Some(n) = self.grid {
            if n < 2 {
                return Err(CliError::Config(format!("--grid {n} must be at least 2")));
            }
            opts.grid = n;
        }
        if let Some(rel) = self.tol {
            if rel.is_nan() || rel <= 0.0 {
                return Err(CliError::Config(format!("--tol {rel} must be positive")));
            }
            opts.tol = Tolerance::with_rel(rel);
        }
        Ok(opts)
    }
}

pub trait Figure: Send + Sync {
    fn id(&self) -> &'static str;

    fn title(&self) -> &'static str;

    fn render(&self, opts: &RunOptions) -> CliResult<Table>;
}

fn with_design(mut scenario: Scenario, design: DesignSpec) -> Scenario {
    scenario.design = design;
    scenario
}

fn volume_fraction(k: f64) -> DesignSpec {
    DesignSpec {
        recipe: "volume-fraction".into(),
        k: Some(k),
        z0: None,
        omega0: None,
    }
}

fn envelope(
    design: &SignalDesign,
    a0: Option<f64>,
    times: &[f64],
    constraints: Constraints,
    opts: &RunOptions,
) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let env =
        bounds_over_measures(design, a0, times, constraints, opts.scan()?).context("bounds")?;
    Ok((env.lower, env.upper))
}

/// Bounds on the volume-fraction design response. With `k = 0` the outer
/// pair leaves `a0` unknown; with `k = 1` it knows `a0` but not `M1`.
pub struct VolumeFractionBounds {
    pub id: &'static str,
    pub title: &'static str,
    pub scenario: &'static str,
    pub k: f64,
    pub m1: f64,
    /// Closed form in `(a0, m1, t)`, when the figure has one.
    pub exact: Option<fn(f64, f64, f64) -> f64>,
}

impl Figure for VolumeFractionBounds {
    fn id(&self) -> &'static str {
        self.id
    }

    fn title(&self) -> &'static str {
        self.title
    }

    fn render(&self, opts: &RunOptions) -> CliResult<Table> {
        let sc = with_design(Scenario::builtin(self.scenario)?, volume_fraction(self.k));
        let a0 = sc.require_a0()?;
        let times = sc.times()?;
        let design = sc.design(opts.tol)?;
        let mass = Constraints::Mass { mass: 1.0 };
        let (names, outer, inner) = if self.k == 0.0 {
            (
                [
                    "t",
                    "unknown_a0_lower",
                    "unknown_a0_upper",
                    "lower",
                    "upper",
                ],
                envelope(&design, None, &times, mass, opts)?,
                envelope(&design, Some(a0), &times, mass, opts)?,
            )
        } else {
            let moment = Constraints::MassMoment {
                mass: 1.0,
                m1: self.m1,
            };
            (
                ["t", "mass_lower", "mass_upper", "lower", "upper"],
                envelope(&design, Some(a0), &times, mass, opts)?,
                envelope(&design, Some(a0), &times, moment, opts)?,
            )
        };
        let mut table =
            Table::from_columns(&names, &[&times, &outer.0, &outer.1, &inner.0, &inner.1]);
        if let Some(f) = self.exact {
            table.columns.push("exact".into());
            for (row, &t) in table.rows.iter_mut().zip(&times) {
                row.push(f(a0, self.m1, t));
            }
        }
        Ok(table)
    }
}

fn probe_scenario() -> CliResult<Scenario> {
    Ok(with_design(
        Scenario::builtin("example1")?,
        DesignSpec {
            recipe: "frequency-probe".into(),
            k: None,
            z0: None,
            omega0: Some([EXAMPLE1_PROBE_OMEGA.re, EXAMPLE1_PROBE_OMEGA.im]),
        },
    ))
}

fn probe_z0(design: &SignalDesign) -> CliResult<Complex64> {
    design
        .recipe()
        .probe_target()
        .ok_or_else(|| CliError::Config("design is not a frequency probe".into()))
}

/// Bounds over point masses on the probe response and on the target
/// single-frequency response.
pub struct ProbeBounds;

impl Figure for ProbeBounds {
    fn id(&self) -> &'static str {
        "fig4a"
    }

    fn title(&self) -> &'static str {
        "Example 1, z0 = 30: bounds on Re v(t) and Re v0(t) over point masses"
    }

    fn render(&self, opts: &RunOptions) -> CliResult<Table> {
        let sc = probe_scenario()?;
        let a0 = sc.require_a0()?;
        let times = sc.times()?;
        let design = sc.design(opts.tol)?;
        let z0 = probe_z0(&design)?;
        let (lo, hi) = envelope(
            &design,
            Some(a0),
            &times,
            Constraints::Mass { mass: 1.0 },
            opts,
        )?;
        let grid = probe_grid(opts.scan()?.grid);
        let mut lo0 = vec![f64::INFINITY; times.len()];
        let mut hi0 = vec![f64::NEG_INFINITY; times.len()];
        for &l in &grid {
            let m = composite_probe::SpectralMeasure::point(l, 1.0).context("measure")?;
            let v0 = reference_response(a0, &m, z0, EXAMPLE1_PROBE_OMEGA, sc.t0, &times)
                .context("reference")?;
            for (j, &v) in v0.values().iter().enumerate() {
                lo0[j] = lo0[j].min(v);
                hi0[j] = hi0[j].max(v);
            }
        }
        Ok(Table::from_columns(
            &["t", "lower", "upper", "reference_lower", "reference_upper"],
            &[&times, &lo, &hi, &lo0, &hi0],
        ))
    }
}

/// Probe response for the measure `δ(λ - 0.5)`, against the target response.
pub struct ProbeResponse;

impl Figure for ProbeResponse {
    fn id(&self) -> &'static str {
        "fig4b"
    }

    fn title(&self) -> &'static str {
        "Example 1, z0 = 30, point mass at 0.5: Re v(t) and Re v0(t)"
    }

    fn render(&self, opts: &RunOptions) -> CliResult<Table> {
        let sc = probe_scenario()?;
        let a0 = sc.require_a0()?;
        let times = sc.times()?;
        let design = sc.design(opts.tol)?;
        let z0 = probe_z0(&design)?;
        let m = sc.require_measure()?;
        let ctx = ResponseContext::new(design, a0)
            .context("response")?
            .with_measure(m.clone());
        let sim = simulate_response(&ctx, &times).context("simulate")?;
        let pred = ctx.predict(&times).context("closed form")?;
        let v0 = reference_response(a0, &m, z0, EXAMPLE1_PROBE_OMEGA, sc.t0, &times)
            .context("reference")?;
        // Re v0(t) = a0 e^{31t/27}/(0.5 - 30) for this measure
        let exact: Vec<f64> = times
            .iter()
            .map(|t| a0 * (31.0 * (t - sc.t0) / 27.0).exp() / (0.5 - 30.0))
            .collect();
        Ok(Table::from_columns(
            &["t", "simulated", "predicted", "reference", "exact"],
            &[&times, sim.values(), pred.values(), v0.values(), &exact],
        ))
    }
}

fn exact_k0(a0: f64, _m1: f64, t: f64) -> f64 {
    -a0 * t.exp()
}

fn exact_k1(a0: f64, m1: f64, t: f64) -> f64 {
    -a0 * t.exp() * (1.0 + m1 + 4.0 * t)
}

pub struct FigureRegistry {
    figures: BTreeMap<&'static str, Box<dyn Figure>>,
}

impl FigureRegistry {
    pub fn empty() -> Self {
        FigureRegistry {
            figures: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        let vf = |id, title, scenario, k, exact| VolumeFractionBounds {
            id,
            title,
            scenario,
            k,
            m1: 0.4,
            exact,
        };
        r.register(Box::new(vf(
            "fig2b",
            "Example 1, k = 0: bounds with and without the volume fraction",
            "example1",
            0.0,
            Some(exact_k0 as fn(f64, f64, f64) -> f64),
        )));
        r.register(Box::new(vf(
            "fig3b",
            "Example 1, k = 1: bounds with and without M1 = 0.4",
            "example1",
            1.0,
            Some(exact_k1),
        )));
        r.register(Box::new(ProbeBounds));
        r.register(Box::new(ProbeResponse));
        r.register(Box::new(vf(
            "fig6a",
            "Example 2, k = 0: bounds with and without the volume fraction",
            "example2",
            0.0,
            Some(exact_k0),
        )));
        r.register(Box::new(vf(
            "fig6b",
            "Example 2, k = 1: bounds with and without M1 = 0.4",
            "example2",
            1.0,
            Some(exact_k1),
        )));
        r.register(Box::new(vf(
            "fig8a",
            "Example 3, k = 0: bounds coincide only at t = 0",
            "example3",
            0.0,
            None,
        )));
        r.register(Box::new(vf(
            "fig8b",
            "Example 3, k = 1: bounds coincide only at t = 0",
            "example3",
            1.0,
            None,
        )));
        r
    }

    pub fn register(&mut self, figure: Box<dyn Figure>) {
        self.figures.insert(figure.id(), figure);
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.figures.keys().copied()
    }

    pub fn get(&self, id: &str) -> CliResult<&dyn Figure> {
        self.figures
            .get(id)
            .map(|f| f.as_ref())
            .ok_or_else(|| CliError::UnknownFigure {
                id: id.to_string(),
                available: self.ids().collect::<Vec<_>>().join(", "),
            })
    }
}

impl Default for FigureRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

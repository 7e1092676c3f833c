//! Scenario files: one TOML document describing a material, a trajectory,
//! a design and whatever the requested command needs beyond that.

use std::path::Path;

use composite_probe::curves::{classify, probe_grid, DEFAULT_PROBES};
use composite_probe::measures::PointMass;
use composite_probe::quadrature::Tolerance;
use composite_probe::response::linspace;
use composite_probe::trajectory::DEFAULT_SAMPLES;
use composite_probe::{
    Complex64, Constraints, Duality, MaterialSystem, RationalFunction, RecipeParams,
    RecipeRegistry, SignalDesign, SpectralMeasure, Trajectory,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult, Context};

/// Built-in scenarios, selectable by name wherever a path is accepted.
pub const BUILTINS: [(&str, &str); 3] = [
    ("example1", include_str!("../scenarios/example1.toml")),
    ("example2", include_str!("../scenarios/example2.toml")),
    ("example3", include_str!("../scenarios/example3.toml")),
];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// `2 f1`; absent means the volume fraction is unknown.
    pub a0: Option<f64>,
    #[serde(default)]
    pub t0: f64,
    pub material: MaterialSpec,
    pub trajectory: TrajectorySpec,
    pub design: DesignSpec,
    #[serde(default)]
    pub measure: Vec<PointMass>,
    pub constraints: Option<ConstraintSpec>,
    pub time_grid: TimeGrid,
    pub recovery: Option<RecoverySpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalSpec {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl RationalSpec {
    fn build(&self, what: &str) -> CliResult<RationalFunction> {
        RationalFunction::new(self.num.clone(), self.den.clone()).context(what)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub builtin: Option<String>,
    pub mu1: Option<RationalSpec>,
    pub mu2: Option<RationalSpec>,
    pub z: Option<RationalSpec>,
    #[serde(default)]
    pub duality: Duality,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    pub builtin: Option<String>,
    /// `[re, im]` pairs, ascending powers of the path parameter.
    pub coeffs: Option<Vec<[f64; 2]>>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub reversed: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpec {
    pub recipe: String,
    pub k: Option<f64>,
    pub z0: Option<[f64; 2]>,
    /// Alternative to `z0`: the probe frequency, with `z0 = z(omega0)`.
    pub omega0: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub mass: f64,
    pub m1: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TimeGrid {
    Uniform {
        start: f64,
        stop: f64,
        points: usize,
    },
    Explicit {
        times: Vec<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverySpec {
    /// `(t, Re v(t))` pairs. When absent they are synthesized from `measure`.
    pub measurements: Option<Vec<[f64; 2]>>,
    pub times: Option<Vec<f64>>,
    #[serde(default)]
    pub eps: f64,
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Scenario {
    pub fn parse(text: &str) -> CliResult<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        s.times()?;
        Ok(s)
    }

    /// Reads a scenario file, or a built-in scenario when `arg` names one and
    /// no such file exists.
    pub fn load(arg: &str) -> CliResult<Self> {
        let path = Path::new(arg);
        if !path.exists() {
            if let Some((_, text)) = BUILTINS.iter().find(|(n, _)| *n == arg) {
                return Self::parse(text);
            }
        }
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn builtin(name: &str) -> CliResult<Self> {
        let (_, text) = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| CliError::Config(format!("no built-in scenario '{name}'")))?;
        Self::parse(text)
    }

    pub fn times(&self) -> CliResult<Vec<f64>> {
        let times = match &self.time_grid {
            TimeGrid::Uniform {
                start,
                stop,
                points,
            } => {
                if *points < 2 || stop.is_nan() || start.is_nan() || stop <= start {
                    return Err(CliError::Config(format!(
                        "time_grid needs stop > start and at least 2 points (got [{start}, {stop}], {points})"
                    )));
                }
                linspace(*start, *stop, *points)
            }
            TimeGrid::Explicit { times } => times.clone(),
        };
        if times.is_empty()
            || times.windows(2).any(|w| w[1] <= w[0])
            || times.iter().any(|t| !t.is_finite())
        {
            return Err(CliError::Config(
                "time grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(times)
    }

    pub fn system(&self) -> CliResult<MaterialSystem> {
        let m = &self.material;
        let sys =
            match (&m.builtin, &m.mu1, &m.mu2, &m.z) {
                (Some(name), None, None, None) => {
                    composite_probe::builtins::material(name).context("material")?
                }
                (None, Some(mu1), Some(mu2), None) => MaterialSystem::phase_pair(
                    mu1.build("material.mu1")?,
                    mu2.build("material.mu2")?,
                    m.duality,
                )
                .context("material")?,
                (None, None, mu2, Some(z)) => MaterialSystem::direct_z(
                    z.build("material.z")?,
                    mu2.as_ref().map(|r| r.build("material.mu2")).transpose()?,
                    m.duality,
                )
                .context("material")?,
                _ => return Err(CliError::Config(
                    "material needs exactly one of: builtin, mu1 + mu2, or z (with optional mu2)"
                        .into(),
                )),
            };
        Ok(sys.with_duality(m.duality))
    }

    pub fn trajectory(&self) -> CliResult<Trajectory> {
        let t = &self.trajectory;
        let samples = t.samples.unwrap_or(DEFAULT_SAMPLES);
        let traj = match (&t.builtin, &t.coeffs) {
            (Some(name), None) => composite_probe::builtins::trajectory(name)
                .map(|tr| tr.with_samples(samples))
                .context("trajectory")?,
            (None, Some(c)) => Trajectory::new(c.iter().copied().map(complex).collect(), samples)
                .context("trajectory")?,
            _ => {
                return Err(CliError::Config(
                    "trajectory needs exactly one of: builtin, coeffs".into(),
                ))
            }
        };
        Ok(if t.reversed { traj.reversed() } else { traj })
    }

    pub fn recipe_params(&self, sys: &MaterialSystem) -> CliResult<RecipeParams> {
        let d = &self.design;
        let z0 = match (d.z0, d.omega0) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "design takes z0 or omega0, not both".into(),
                ))
            }
            (Some(z), None) => Some(complex(z)),
            (None, Some(w)) => Some(sys.eval_z(complex(w)).context("design.omega0")?),
            (None, None) => None,
        };
        Ok(RecipeParams { k: d.k, z0 })
    }

    pub fn design(&self, tol: Option<f64>) -> CliResult<SignalDesign> {
        let sys = self.system()?;
        let traj = self.trajectory()?;
        let cls = classify(&sys, &traj, &probe_grid(DEFAULT_PROBES)).context("classify")?;
        let params = self.recipe_params(&sys)?;
        let recipe = RecipeRegistry::with_builtins()
            .build(&self.design.recipe, &params)
            .context("design")?;
        let mut design = SignalDesign::new(sys, traj, cls, recipe, self.t0).context("design")?;
        if let Some(rel) = tol {
            if rel.is_nan() || rel <= 0.0 {
                return Err(CliError::Config(format!("--tol {rel} must be positive")));
            }
            design = design.with_tolerance(Tolerance::with_rel(rel));
        }
        Ok(design)
    }

    pub fn measure(&self) -> CliResult<Option<SpectralMeasure>> {
        if self.measure.is_empty() {
            return Ok(None);
        }
        SpectralMeasure::new(self.measure.clone())
            .context("measure")
            .map(Some)
    }

    pub fn require_measure(&self) -> CliResult<SpectralMeasure> {
        self.measure()?.ok_or_else(|| {
            CliError::Config(format!("scenario '{}' declares no measure", self.name))
        })
    }

    pub fn require_a0(&self) -> CliResult<f64> {
        self.a0
            .ok_or_else(|| CliError::Config(format!("scenario '{}' declares no a0", self.name)))
    }

    pub fn constraints(&self) -> CliResult<Constraints> {
        let c = self.constraints.as_ref().ok_or_else(|| {
            CliError::Config(format!("scenario '{}' declares no constraints", self.name))
        })?;
        Ok(match c.m1 {
            Some(m1) => Constraints::MassMoment { mass: c.mass, m1 },
            None => Constraints::Mass { mass: c.mass },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_and_resolve() {
        for (name, _) in BUILTINS {
            let s = Scenario::builtin(name).unwrap();
            assert_eq!(s.name, name);
            let cls = s.design(None).unwrap();
            let reference = composite_probe::builtins::material(name).unwrap();
            let w = Complex64::new(0.7, 1.3);
            let z = cls.system().eval_z(w).unwrap();
            assert!((z - reference.eval_z(w).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_decreasing_times() {
        let text = Scenario::builtin("example1")
            .map(|_| BUILTINS[0].1)
            .unwrap()
            .replace("start = -3.0\nstop = 0.0", "start = 0.0\nstop = -3.0");
        assert!(matches!(Scenario::parse(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn omega0_resolves_to_z0() {
        let mut s = Scenario::builtin("example1").unwrap();
        s.design = DesignSpec {
            recipe: "frequency-probe".into(),
            k: None,
            z0: None,
            omega0: Some([0.0, 31.0 / 27.0]),
        };
        let p = s.recipe_params(&s.system().unwrap()).unwrap();
        assert!((p.z0.unwrap() - Complex64::new(30.0, 0.0)).norm() < 1e-12);
    }
}

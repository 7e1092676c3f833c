//! Reporting and sampling helpers for the acceptance suite.
//!
//! Each criterion collects named checks and prints a single `PASS` or `FAIL`
//! line followed by indented detail lines.

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use composite_probe::curves::{classify, probe_grid, DEFAULT_PROBES};
use composite_probe::measures::SpectralMeasure;
use composite_probe::signal_design::{RecipeParams, RecipeRegistry, SignalDesign};
use composite_probe::{builtins, Complex64, Result, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x05ee_d2f1;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Criterion {
    pub fn new(id: u32, title: impl Into<String>) -> Self {
        Criterion {
            id,
            title: title.into(),
            checks: Vec::new(),
            seconds: 0.0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// `value < bound`, reported with both numbers.
    pub fn below(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.check(name, value < bound, format!("{value:.3e} < {bound:.0e}"));
    }

    /// Records a failed step that could not be evaluated.
    pub fn error(&mut self, name: impl Into<String>, err: impl fmt::Display) {
        self.check(name, false, format!("error: {err}"));
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        write!(
            f,
            "{status} [{}] {} ({}/{} checks, {:.1} s)",
            self.id,
            self.title,
            self.checks.len() - failed.len(),
            self.checks.len(),
            self.seconds
        )?;
        if !failed.is_empty() {
            write!(f, " failed: {}", failed.join(", "))?;
        }
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            write!(f, "\n    {mark} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Runs every criterion, prints its line and returns failure if any failed.
/// A criterion body: records its checks on the given [`Criterion`].
pub type CriterionFn = fn(&mut Criterion);

pub fn run(criteria: Vec<(u32, &str, CriterionFn)>) -> ExitCode {
    let mut all = true;
    for (id, title, body) in criteria {
        let mut c = Criterion::new(id, title);
        let start = Instant::now();
        body(&mut c);
        c.seconds = start.elapsed().as_secs_f64();
        all &= c.passed();
        println!("{c}");
    }
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria failed");
        ExitCode::FAILURE
    }
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// `|a - e| / max(|e|, floor)` maximized over paired samples.
pub fn max_rel_err(actual: &[f64], expected: &[f64], floor: f64) -> f64 {
    actual
        .iter()
        .zip(expected)
        .map(|(a, e)| (a - e).abs() / e.abs().max(floor))
        .fold(0.0, f64::max)
}

pub fn max_abs_err(actual: &[f64], expected: &[f64]) -> f64 {
    actual
        .iter()
        .zip(expected)
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max)
}

/// One to three masses at uniform locations with unit total weight.
pub fn random_measure(rng: &mut ChaCha8Rng) -> SpectralMeasure {
    let n = rng.random_range(1..=3);
    let raw: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(-1.0..=1.0), rng.random_range(0.05..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|p| p.1).sum();
    let pairs: Vec<(f64, f64)> = raw.iter().map(|&(l, w)| (l, w / total)).collect();
    SpectralMeasure::from_pairs(&pairs).expect("valid by construction")
}

pub fn volume_fraction(k: f64) -> RecipeParams {
    RecipeParams {
        k: Some(k),
        z0: None,
    }
}

pub fn probe(z0: Complex64) -> RecipeParams {
    RecipeParams {
        k: None,
        z0: Some(z0),
    }
}

/// A design on a built-in case study, optionally on the reversed trajectory.
pub fn builtin_design(
    name: &str,
    recipe: &str,
    params: &RecipeParams,
    reversed: bool,
) -> Result<SignalDesign> {
    let sys = builtins::material(name)?;
    let mut traj: Trajectory = builtins::trajectory(name)?;
    if reversed {
        traj = traj.reversed();
    }
    let cls = classify(&sys, &traj, &probe_grid(DEFAULT_PROBES))?;
    let r = RecipeRegistry::with_builtins().build(recipe, params)?;
    SignalDesign::new(sys, traj, cls, r, 0.0)
}

//! Adaptive composite Gauss–Legendre quadrature on `[0, 1]` for
//! vector-valued complex integrands.
//!
//! Each panel is integrated with a 16-point rule and again on its two halves;
//! the difference is the panel's error estimate. Panels are bisected until the
//! summed estimate meets the tolerance in every component.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const NODES_PER_PANEL: usize = 16;
pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const MAX_PANELS: usize = 1 << 14;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NODES_PER_PANEL))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: DEFAULT_REL_TOL,
            abs: DEFAULT_ABS_TOL,
            max_panels: MAX_PANELS,
        }
    }
}

impl Tolerance {
    pub fn with_rel(rel: f64) -> Self {
        Tolerance {
            rel,
            ..Default::default()
        }
    }
}

/// A fixed composite rule on `[0, 1]`, produced by a converged adaptive run
/// and reusable for integrands of the same character.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn uniform(panels: usize) -> Self {
        let edges: Vec<(f64, f64)> = (0..panels)
            .map(|i| (i as f64 / panels as f64, (i + 1) as f64 / panels as f64))
            .collect();
        Self::from_panels(&edges)
    }

    fn from_panels(panels: &[(f64, f64)]) -> Self {
        let g = gl16();
        let mut nodes = Vec::with_capacity(panels.len() * NODES_PER_PANEL);
        let mut weights = Vec::with_capacity(panels.len() * NODES_PER_PANEL);
        for &(a, b) in panels {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in g.nodes.iter().zip(&g.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, dim: usize, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
    {
        let parts: Vec<Vec<Complex64>> = self
            .nodes
            .par_iter()
            .zip(&self.weights)
            .map(|(&s, &w)| {
                let mut buf = vec![Complex64::new(0.0, 0.0); dim];
                f(s, &mut buf)?;
                buf.iter_mut().for_each(|v| *v *= w);
                Ok(buf)
            })
            .collect::<Result<_>>()?;
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        for p in parts {
            acc.iter_mut().zip(p).for_each(|(a, v)| *a += v);
        }
        Ok(acc)
    }
}

struct Panel {
    a: f64,
    b: f64,
    coarse: Vec<Complex64>,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

fn panel_sum<F>(a: f64, b: f64, dim: usize, f: &F) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
{
    let g = gl16();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    for (x, w) in g.nodes.iter().zip(&g.weights) {
        f(mid + half * x, &mut buf)?;
        acc.iter_mut()
            .zip(&buf)
            .for_each(|(a, v)| *a += v * (half * w));
    }
    Ok(acc)
}

fn refine<F>(a: f64, b: f64, coarse: Vec<Complex64>, dim: usize, f: &F) -> Result<Panel>
where
    F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
{
    let m = 0.5 * (a + b);
    Ok(Panel {
        a,
        b,
        coarse,
        left: panel_sum(a, m, dim, f)?,
        right: panel_sum(m, b, dim, f)?,
    })
}

/// Result of an adaptive run: the integral and the rule that achieved it.
#[derive(Debug, Clone)]
pub struct Adaptive {
    pub value: Vec<Complex64>,
    pub rule: CompositeRule,
    pub panels: usize,
}

/// Integrates a `dim`-component integrand over `[0, 1]`. The closure writes
/// `f(s)` into the provided buffer.
pub fn integrate<F>(dim: usize, tol: Tolerance, f: F) -> Result<Adaptive>
where
    F: Fn(f64, &mut [Complex64]) -> Result<()> + Sync,
{
    let initial = 8usize;
    let mut panels: Vec<Panel> = (0..initial)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (i as f64 / initial as f64, (i + 1) as f64 / initial as f64);
            let coarse = panel_sum(a, b, dim, &f)?;
            refine(a, b, coarse, dim, &f)
        })
        .collect::<Result<_>>()?;

    loop {
        let mut total = vec![Complex64::new(0.0, 0.0); dim];
        for p in &panels {
            for (t, (l, r)) in total.iter_mut().zip(p.left.iter().zip(&p.right)) {
                *t += l + r;
            }
        }
        let tols: Vec<f64> = total
            .iter()
            .map(|v| (tol.rel * v.norm()).max(tol.abs))
            .collect();
        let errs: Vec<f64> = panels
            .iter()
            .map(|p| {
                (0..dim)
                    .map(|j| (p.left[j] + p.right[j] - p.coarse[j]).norm() / tols[j])
                    .fold(0.0, f64::max)
            })
            .collect();
        let mut summed = vec![0.0; dim];
        for p in &panels {
            for j in 0..dim {
                summed[j] += (p.left[j] + p.right[j] - p.coarse[j]).norm() / tols[j];
            }
        }
        let worst = summed.iter().cloned().fold(0.0, f64::max);
        if worst <= 1.0 {
            let mut edges = Vec::with_capacity(2 * panels.len());
            for p in &panels {
                let m = 0.5 * (p.a + p.b);
                edges.push((p.a, m));
                edges.push((m, p.b));
            }
            return Ok(Adaptive {
                value: total,
                rule: CompositeRule::from_panels(&edges),
                panels: panels.len(),
            });
        }
        let threshold = 1.0 / panels.len() as f64;
        let max_err = errs.iter().cloned().fold(0.0, f64::max);
        let split: Vec<bool> = errs
            .iter()
            .map(|&e| e > threshold || e >= max_err)
            .collect();
        let n_split = split.iter().filter(|&&s| s).count();
        if panels.len() + n_split > tol.max_panels {
            return Err(Error::QuadratureNotConverged {
                panels: panels.len(),
                estimate: worst,
            });
        }
        let old = std::mem::take(&mut panels);
        let jobs: Vec<(Panel, bool)> = old.into_iter().zip(split).collect();
        panels = jobs
            .into_par_iter()
            .map(|(p, s)| -> Result<Vec<Panel>> {
                if !s {
                    return Ok(vec![p]);
                }
                let m = 0.5 * (p.a + p.b);
                Ok(vec![
                    refine(p.a, m, p.left, dim, &f)?,
                    refine(m, p.b, p.right, dim, &f)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
    }
}

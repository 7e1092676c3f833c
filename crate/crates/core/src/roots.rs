//! Polynomial roots from companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots closer than this (relative to `max(1, |r|)`) are merged into one root.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Residual acceptance threshold, relative to `Σ |c_k| |r|^k`.
const RESIDUAL_TOL: f64 = 1e-10;

fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    let r = x.norm();
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
        scale = scale * r + c.norm();
    }
    (p, dp, scale)
}

/// All complex roots of `c[0] + c[1] x + ... + c[n] x^n`, repeated by multiplicity.
///
/// Each eigenvalue of the companion matrix gets one Newton step; a root is
/// accepted when `|p(r)| < 1e-10 Σ |c_k| |r|^k`.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if scale == 0.0 {
        return Err(Error::InvalidInput(
            "zero polynomial has no finite root set".into(),
        ));
    }
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() / scale < crate::poly::TRIM_TOL {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo] == Complex64::new(0.0, 0.0) {
        lo += 1;
    }
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let trimmed = &coeffs[lo..hi];
    let degree = trimmed.len().saturating_sub(1);
    if degree == 0 {
        return Ok(roots);
    }
    let lead = trimmed[degree];
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -trimmed[i] / lead;
    }
    let eig = companion
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::InvalidInput("companion Schur form is not triangular".into()))?;

    for &z in eig.iter() {
        let (p, dp, _) = horner(trimmed, z);
        let mut r = z;
        if dp.norm() > 0.0 {
            let cand = z - p / dp;
            let (pc, _, _) = horner(trimmed, cand);
            if pc.is_finite() && pc.norm() <= p.norm() {
                r = cand;
            }
        }
        let (p, _, s) = horner(trimmed, r);
        if p.norm() > RESIDUAL_TOL * s.max(f64::MIN_POSITIVE) {
            return Err(Error::RootNotConverged {
                root: r,
                residual: p.norm(),
            });
        }
        roots.push(r);
    }
    Ok(roots)
}

/// Groups roots within `tol` (relative to `max(1, |r|)`) and reports each
/// cluster's centroid with its multiplicity. Output is sorted by real part,
/// then imaginary part.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        let hit = clusters.iter_mut().find(|(c, n)| {
            let centroid = *c / *n as f64;
            (centroid - r).norm() <= tol * centroid.norm().max(1.0)
        });
        match hit {
            Some((sum, n)) => {
                *sum += r;
                *n += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    let mut out: Vec<_> = clusters
        .into_iter()
        .map(|(sum, n)| (sum / n as f64, n))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

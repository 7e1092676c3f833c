//! The three reference case studies, available by name.
//!
//! * `example1`: lossy dielectric `μ₁ = 1 + i/ω` against a lossless `μ₂ = 2`.
//! * `example2`: plasma `μ₁ = 1 - 1/ω²` against lossy `μ₂ = 1 + i/ω`.
//! * `example3`: contrast map `z = (s - 5)/((s - 1)(s - 8))` with `s = -iω`,
//!   a trajectory whose rotated region contains real preimages of `[-1, 1]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::material::{Duality, MaterialSystem};
use crate::poly::RationalFunction;
use crate::trajectory::{Trajectory, DEFAULT_SAMPLES};

pub const NAMES: [&str; 3] = ["example1", "example2", "example3"];

/// Probe frequency with `z(ω₀) = 30` for `example1`.
pub const EXAMPLE1_PROBE_OMEGA: Complex64 = Complex64::new(0.0, 31.0 / 27.0);

fn unknown(name: &str) -> Error {
    Error::InvalidInput(format!(
        "unknown built-in '{name}' (expected one of {})",
        NAMES.join(", ")
    ))
}

pub fn material(name: &str) -> Result<MaterialSystem> {
    match name {
        "example1" => MaterialSystem::phase_pair(
            RationalFunction::new(vec![1.0, 1.0], vec![0.0, 1.0])?,
            RationalFunction::constant(2.0),
            Duality::Direct,
        ),
        "example2" => MaterialSystem::phase_pair(
            RationalFunction::new(vec![1.0, 0.0, 1.0], vec![0.0, 0.0, 1.0])?,
            RationalFunction::new(vec![1.0, 1.0], vec![0.0, 1.0])?,
            Duality::Direct,
        ),
        "example3" => {
            let (a1, a2, a3) = (1.0, 5.0, 8.0);
            MaterialSystem::direct_z(
                RationalFunction::new(vec![-a2, 1.0], vec![a1 * a3, -(a1 + a3), 1.0])?,
                None,
                Duality::Direct,
            )
        }
        _ => Err(unknown(name)),
    }
}

pub fn trajectory(name: &str) -> Result<Trajectory> {
    let c = Complex64::new;
    match name {
        "example1" | "example2" => Trajectory::new(
            vec![c(0.0, 1.5), c(2.0, 1.0), c(-2.0, -2.0)],
            DEFAULT_SAMPLES,
        ),
        "example3" => {
            let (a1, a3, eps) = (1.0, 8.0, 0.3);
            let b = c(2.0, 1.0);
            Trajectory::new(
                vec![c(0.0, a1 + eps), b, -(b + c(0.0, 2.0 * eps + a1 - a3))],
                DEFAULT_SAMPLES,
            )
        }
        _ => Err(unknown(name)),
    }
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

pub const DEFAULT_SAMPLES: usize = 2048;

/// Relative tolerance for "lies on an axis" and "inside the closed quadrant".
const AXIS_TOL: f64 = 1e-12;

/// Polynomial path `ω(s)`, `s ∈ [0, 1]`, in the closed first quadrant of the
/// complex frequency plane, starting and ending on the positive imaginary or
/// positive real axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    omega: ComplexPoly,
    d_omega: ComplexPoly,
    samples: usize,
}

/// Which axis an endpoint sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointAxis {
    Imaginary,
    Real,
}

impl Trajectory {
    pub fn new(coeffs: Vec<Complex64>, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::InvalidInput(
                "sample count must be at least 2".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "non-finite trajectory coefficient".into(),
            ));
        }
        let omega = ComplexPoly::new(coeffs);
        if omega.coeffs().is_empty() {
            return Err(Error::InvalidInput("trajectory is identically zero".into()));
        }
        let t = Trajectory {
            d_omega: omega.derivative(),
            omega,
            samples,
        };
        t.validate()?;
        Ok(t)
    }

    fn scale(&self) -> f64 {
        self.omega
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .sum::<f64>()
            .max(1.0)
    }

    fn validate(&self) -> Result<()> {
        for s in [0.0, 1.0] {
            self.endpoint_axis(s)?;
        }
        let tol = AXIS_TOL * self.scale();
        let n = self.samples.max(DEFAULT_SAMPLES);
        for i in 0..=n {
            let s = i as f64 / n as f64;
            let w = self.eval(s);
            if w.re < -tol || w.im < -tol {
                return Err(Error::InvalidInput(format!(
                    "trajectory leaves the first quadrant at s = {s}: omega = {w}"
                )));
            }
        }
        Ok(())
    }

    fn endpoint_axis(&self, s: f64) -> Result<EndpointAxis> {
        let w = self.eval(s);
        let tol = AXIS_TOL * self.scale();
        if w.re.abs() <= tol && w.im >= -tol {
            Ok(EndpointAxis::Imaginary)
        } else if w.im.abs() <= tol && w.re >= -tol {
            Ok(EndpointAxis::Real)
        } else {
            Err(Error::InvalidInput(format!(
                "trajectory endpoint omega({s}) = {w} is not on the positive imaginary or real axis"
            )))
        }
    }

    /// Axes of `ω(0)` and `ω(1)`.
    pub fn endpoint_axes(&self) -> (EndpointAxis, EndpointAxis) {
        (
            self.endpoint_axis(0.0).expect("validated"),
            self.endpoint_axis(1.0).expect("validated"),
        )
    }

    /// True when both endpoints are on the imaginary axis, so that `D = iΓ`
    /// and its conjugate close into a curve bounding a region.
    pub fn closes_rotated_curve(&self) -> bool {
        self.endpoint_axes() == (EndpointAxis::Imaginary, EndpointAxis::Imaginary)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.omega.coeffs()
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples.max(2);
        self
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        self.omega.eval(Complex64::new(s, 0.0))
    }

    pub fn derivative(&self, s: f64) -> Complex64 {
        self.d_omega.eval(Complex64::new(s, 0.0))
    }

    /// The same path traversed backwards, `ω(1 - s)`.
    pub fn reversed(&self) -> Trajectory {
        // Taylor shift: ω(1 - s) = Σ_k c_k (1 - s)^k
        let n = self.omega.coeffs().len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in self.omega.coeffs().iter().enumerate() {
            let mut binom = 1.0;
            for (j, o) in out.iter_mut().enumerate().take(k + 1) {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                *o += c * binom * sign;
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
        }
        Trajectory::new(out, self.samples).expect("reversal preserves validity")
    }
}

//! Dense polynomials and rational functions with ascending coefficients.
//!
//! Material responses are kept as real-coefficient rationals in the Laplace
//! variable `s = -iω`. Real coefficients make conjugate symmetry hold by
//! construction, and keep pole/zero structure exactly rational.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;

/// Relative threshold used when trimming trailing coefficients.
pub const TRIM_TOL: f64 = 1e-13;

/// Real polynomial, `c[0] + c[1] x + ... + c[n] x^n`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn trim(&mut self) {
        let scale = self.max_abs_coeff();
        if scale == 0.0 || !scale.is_finite() {
            if scale == 0.0 {
                self.coeffs.clear();
            }
            return;
        }
        while let Some(&last) = self.coeffs.last() {
            if last.abs() / scale < TRIM_TOL {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `Σ |c_k| |x|^k`, the natural scale for rounding error in `eval(x)`.
    pub fn eval_abs(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, f: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|&c| Complex64::new(c, 0.0))
            .collect()
    }

    /// Exact division by a real monic factor; the remainder is discarded.
    fn div_monic(&self, factor: &[f64]) -> Poly {
        let d = factor.len() - 1;
        if self.coeffs.len() <= d {
            return Poly::zero();
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = rem[k + d];
            quot[k] = q;
            for (j, f) in factor.iter().enumerate() {
                rem[k + j] -= q * f;
            }
        }
        Poly::new(quot)
    }

    /// Removes the factor `(x - r)` for real `r`, or `(x - r)(x - r̄)` otherwise.
    pub fn deflate(&self, r: Complex64, real: bool) -> Poly {
        if real {
            self.div_monic(&[-r.re, 1.0])
        } else {
            self.div_monic(&[r.norm_sqr(), -2.0 * r.re, 1.0])
        }
    }

    /// Complex roots, with multiplicities clustered.
    pub fn roots(&self) -> Result<Vec<(Complex64, usize)>> {
        let r = roots::polynomial_roots(&self.to_complex())?;
        Ok(roots::cluster_roots(&r, roots::CLUSTER_TOL))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

/// Complex polynomial in a real or complex variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut coeffs = coeffs;
        if scale == 0.0 {
            coeffs.clear();
        } else {
            while coeffs.last().is_some_and(|c| c.norm() / scale < TRIM_TOL) {
                coeffs.pop();
            }
        }
        ComplexPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> ComplexPoly {
        ComplexPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }
}

/// Ratio of two real polynomials.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        Self::from_polys(Poly::new(num), Poly::new(den))
    }

    pub fn from_polys(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput(
                "denominator is identically zero".into(),
            ));
        }
        if num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .any(|c| !c.is_finite())
        {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn constant(c: f64) -> Self {
        RationalFunction {
            num: Poly::constant(c),
            den: Poly::constant(1.0),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Evaluates at `x`, failing when `|den(x)| < 1e-12 (1 + |num(x)|)`.
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        let n = self.num.eval(x);
        let d = self.den.eval(x);
        if d.norm() < 1e-12 * (1.0 + n.norm()) {
            return Err(Error::PoleHit { at: x });
        }
        Ok(n / d)
    }

    pub fn derivative(&self) -> RationalFunction {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFunction {
            num,
            den: self.den.mul(&self.den),
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.den == other.den {
            return RationalFunction {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        RationalFunction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, f: f64) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(f),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::from_polys(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.reflect(),
            den: self.den.reflect(),
        }
    }

    /// Cancels roots shared by numerator and denominator and scales the
    /// denominator's leading coefficient to one.
    pub fn reduced(&self) -> Result<RationalFunction> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Poly::constant(1.0),
            });
        }
        loop {
            if den.degree() == 0 || num.degree() == 0 {
                break;
            }
            let den_roots = roots::polynomial_roots(&den.to_complex())?;
            let shared = den_roots.iter().copied().find(|&r| {
                let scale = num.eval_abs(r).max(f64::MIN_POSITIVE);
                num.eval(r).norm() <= 1e-9 * scale
            });
            match shared {
                Some(r) => {
                    let real = r.im.abs() <= 1e-9 * (1.0 + r.norm());
                    let r = if real { Complex64::new(r.re, 0.0) } else { r };
                    num = num.deflate(r, real);
                    den = den.deflate(r, real);
                }
                None => break,
            }
        }
        let lead = *den.coeffs().last().expect("nonzero denominator");
        Ok(RationalFunction {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    /// Poles with multiplicities (roots of the denominator).
    pub fn poles(&self) -> Result<Vec<(Complex64, usize)>> {
        self.den.roots()
    }

    /// Zeros with multiplicities (roots of the numerator).
    pub fn zeros(&self) -> Result<Vec<(Complex64, usize)>> {
        self.num.roots()
    }

    /// Coefficients of `num - target * den`, whose roots are the preimages of `target`.
    pub fn level_set_poly(&self, target: Complex64) -> Vec<Complex64> {
        let n = self.num.coeffs();
        let d = self.den.coeffs();
        let len = n.len().max(d.len());
        (0..len)
            .map(|k| {
                Complex64::new(*n.get(k).unwrap_or(&0.0), 0.0)
                    - target * d.get(k).copied().unwrap_or(0.0)
            })
            .collect()
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num.coeffs(), self.den.coeffs())
    }
}

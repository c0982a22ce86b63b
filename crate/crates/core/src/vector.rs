//! Dense real vectors and the tolerance pair used throughout the crate.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense vector with at least one coordinate, all of them finite.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("vector must have dimension >= 1".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("coordinate {i} is not finite")));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector must have dimension >= 1");
        Vector(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        // hypot-style scaling keeps tiny iterates (far below 1e-154) from
        // underflowing to zero when squared.
        let scale = self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let s: f64 = self.0.iter().map(|c| (c / scale) * (c / scale)).sum();
        scale * s.sqrt()
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (self - other).norm()
    }

    pub fn scaled(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(1.0 / n))
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Vector(c)
    }

    /// Coordinates `range` as a new vector.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Vector {
        Vector(self.0[range].to_vec())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    /// Panics on an empty or non-finite array; meant for literals.
    fn from(a: [f64; N]) -> Self {
        Vector::new(a.to_vec()).expect("vector literal must be nonempty and finite")
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.add_scaled(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        self.scaled(s)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scaled(-1.0)
    }
}

/// Feasibility and degeneracy tolerances.
///
/// `eps_feas` bounds membership residuals; `eps_degen` decides when two
/// points coincide and when a pivot counts as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTolerance")]
pub struct Tolerance {
    pub eps_feas: f64,
    pub eps_degen: f64,
}

#[derive(Deserialize)]
struct RawTolerance {
    eps_feas: f64,
    eps_degen: f64,
}

impl TryFrom<RawTolerance> for Tolerance {
    type Error = Error;
    fn try_from(r: RawTolerance) -> Result<Self> {
        Tolerance::new(r.eps_feas, r.eps_degen)
    }
}

impl Tolerance {
    pub const DEFAULT_EPS_FEAS: f64 = 1e-10;
    pub const DEFAULT_EPS_DEGEN: f64 = 1e-12;

    pub fn new(eps_feas: f64, eps_degen: f64) -> Result<Self> {
        if !(eps_feas.is_finite() && eps_degen.is_finite() && eps_feas > 0.0 && eps_degen > 0.0) {
            return Err(Error::InvalidInput("tolerances must be finite and > 0".into()));
        }
        if eps_degen > eps_feas {
            return Err(Error::InvalidInput("eps_degen must not exceed eps_feas".into()));
        }
        Ok(Tolerance { eps_feas, eps_degen })
    }

    /// Whether `p` and `q` coincide: `‖p − q‖ ≤ eps_degen · max(‖p‖, ‖q‖)`.
    ///
    /// The test is purely relative so that it commutes with positive scaling.
    pub fn coincide(&self, p: &Vector, q: &Vector) -> bool {
        p.distance(q) <= self.eps_degen * p.norm().max(q.norm())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_feas: Self::DEFAULT_EPS_FEAS, eps_degen: Self::DEFAULT_EPS_DEGEN }
    }
}

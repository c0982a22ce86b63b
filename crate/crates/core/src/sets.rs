//! Closed convex sets with exact projection and reflection.
//!
//! Half-spaces, rays and linear subspaces project in closed form. Polyhedra
//! (H-representation) and finitely generated cones (V-representation) are
//! projected by enumerating candidate faces: every linearly independent
//! subset of constraints (resp. generators) induces an affine set (resp. a
//! span) whose least-squares projection is a candidate; a candidate is kept
//! only if it is feasible and satisfies the optimality conditions, and the
//! nearest survivor is returned. At desk scale (a dozen constraints in a
//! handful of dimensions) this is exact up to rounding.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::solve_gram;
use crate::vector::{Tolerance, Vector};

/// `{x : ⟨normal, x⟩ ≤ offset}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHalfSpace")]
pub struct HalfSpace {
    normal: Vector,
    offset: f64,
}

#[derive(Deserialize)]
struct RawHalfSpace {
    normal: Vector,
    offset: f64,
}

impl TryFrom<RawHalfSpace> for HalfSpace {
    type Error = Error;
    fn try_from(r: RawHalfSpace) -> Result<Self> {
        HalfSpace::new(r.normal, r.offset)
    }
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 {
            return Err(Error::InvalidInput("half-space normal must be nonzero".into()));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidInput("half-space offset must be finite".into()));
        }
        Ok(HalfSpace { normal, offset })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed distance `(⟨a, x⟩ − b) / ‖a‖`; positive outside.
    pub fn signed_distance(&self, x: &Vector) -> f64 {
        (self.normal.dot(x) - self.offset) / self.normal.norm()
    }

    fn unit(&self) -> (Vector, f64) {
        let n = self.normal.norm();
        (self.normal.scaled(1.0 / n), self.offset / n)
    }

    fn project(&self, x: &Vector) -> Vector {
        let excess = self.normal.dot(x) - self.offset;
        if excess <= 0.0 {
            x.clone()
        } else {
            x.add_scaled(-excess / self.normal.norm_sq(), &self.normal)
        }
    }
}

/// Finite intersection of half-spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolyhedron")]
pub struct Polyhedron {
    halfspaces: Vec<HalfSpace>,
}

#[derive(Deserialize)]
struct RawPolyhedron {
    halfspaces: Vec<HalfSpace>,
}

impl TryFrom<RawPolyhedron> for Polyhedron {
    type Error = Error;
    fn try_from(r: RawPolyhedron) -> Result<Self> {
        Polyhedron::new(r.halfspaces)
    }
}

impl Polyhedron {
    /// Nonemptiness of the feasible region is checked on first projection.
    pub fn new(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        let first = halfspaces
            .first()
            .ok_or_else(|| Error::InvalidInput("polyhedron needs at least one half-space".into()))?;
        let dim = first.dim();
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
        }
        Ok(Polyhedron { halfspaces })
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn dim(&self) -> usize {
        self.halfspaces[0].dim()
    }

    fn project(&self, x: &Vector, tol: &Tolerance) -> Result<Vector> {
        let n = x.dim();
        let units: Vec<(Vector, f64)> = self.halfspaces.iter().map(HalfSpace::unit).collect();
        let scale = 1f64.max(x.norm());
        let slack = tol.eps_feas * scale;
        let feasible = |p: &Vector| units.iter().all(|(a, b)| a.dot(p) - b <= slack);

        let mut any_feasible = false;
        let mut best: Option<(f64, Vector)> = None;
        for size in 0..=units.len().min(n) {
            for subset in (0..units.len()).combinations(size) {
                let (p, multipliers) = if subset.is_empty() {
                    (x.clone(), Vec::new())
                } else {
                    let normals: Vec<Vector> = subset.iter().map(|&i| units[i].0.clone()).collect();
                    let excess: Vec<f64> = subset.iter().map(|&i| units[i].0.dot(x) - units[i].1).collect();
                    let Ok(lambda) = refined_gram_solve(&normals, &excess, tol) else {
                        continue;
                    };
                    let p = normals.iter().zip(&lambda).fold(x.clone(), |p, (a, l)| p.add_scaled(-l, a));
                    (p, lambda)
                };
                if !feasible(&p) {
                    continue;
                }
                any_feasible = true;
                if multipliers.iter().any(|&l| l < -slack) {
                    continue;
                }
                let d = x.distance(&p);
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, p));
                }
            }
        }
        match best {
            Some((_, p)) => Ok(p),
            None if !any_feasible => Err(Error::InfeasibleSet),
            None => Err(Error::NumericalFailure("no polyhedral face satisfied the optimality conditions".into())),
        }
    }

    /// An admissible local-conicity radius at `x`.
    ///
    /// Half the minimum distance from `x` to the hyperplanes of the constraints
    /// that are inactive at `x`; `+∞` when every constraint is active.
    pub fn local_cone_radius(&self, x: &Vector, tol: &Tolerance) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        let mut min_gap = f64::INFINITY;
        for h in &self.halfspaces {
            let gap = -h.signed_distance(x);
            if gap < -tol.eps_feas {
                return Err(Error::PointNotInSet);
            }
            if gap > tol.eps_feas {
                min_gap = min_gap.min(gap);
            }
        }
        Ok(if min_gap.is_finite() { 0.5 * min_gap } else { f64::INFINITY })
    }
}

/// `cone(generators)`: all nonnegative combinations of the generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCone")]
pub struct ConeV {
    generators: Vec<Vector>,
}

#[derive(Deserialize)]
struct RawCone {
    generators: Vec<Vector>,
}

impl TryFrom<RawCone> for ConeV {
    type Error = Error;
    fn try_from(r: RawCone) -> Result<Self> {
        ConeV::new(r.generators)
    }
}

impl ConeV {
    pub fn new(generators: Vec<Vector>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("cone needs at least one generator".into()))?;
        let dim = first.dim();
        for g in &generators {
            check_dim(dim, g.dim())?;
            if g.norm() == 0.0 {
                return Err(Error::InvalidInput("cone generators must be nonzero".into()));
            }
        }
        Ok(ConeV { generators })
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub(crate) fn unit_generators(&self) -> Vec<Vector> {
        self.generators.iter().map(|g| g.normalized().expect("nonzero generator")).collect()
    }

    /// Whether `⟨x, g⟩ ≤ eps_feas` for every (unit-normalized) generator `g`.
    pub fn in_polar_cone(&self, x: &Vector, tol: &Tolerance) -> Result<bool> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.unit_generators().iter().all(|g| g.dot(x) <= tol.eps_feas))
    }

    fn project(&self, x: &Vector, tol: &Tolerance) -> Result<Vector> {
        let n = x.dim();
        let scale = x.norm();
        if scale == 0.0 {
            return Ok(x.clone());
        }
        let gens = self.unit_generators();
        let slack = tol.eps_feas * scale;

        let mut best: Option<(f64, Vector)> = None;
        for size in 0..=gens.len().min(n) {
            for subset in (0..gens.len()).combinations(size) {
                let p = if subset.is_empty() {
                    Vector::zeros(n)
                } else {
                    let basis: Vec<Vector> = subset.iter().map(|&i| gens[i].clone()).collect();
                    let rhs: Vec<f64> = basis.iter().map(|g| g.dot(x)).collect();
                    let Ok(coeffs) = refined_gram_solve(&basis, &rhs, tol) else {
                        continue;
                    };
                    if coeffs.iter().any(|&c| c < -slack) {
                        continue;
                    }
                    basis
                        .iter()
                        .zip(&coeffs)
                        .fold(Vector::zeros(n), |p, (g, c)| p.add_scaled(c.max(0.0), g))
                };
                // optimality: x − p lies in the polar cone and is orthogonal to p
                let r = x - &p;
                if gens.iter().any(|g| g.dot(&r) > slack) || p.dot(&r).abs() > slack * scale {
                    continue;
                }
                let d = r.norm();
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, p));
                }
            }
        }
        best.map(|(_, p)| p)
            .ok_or_else(|| Error::NumericalFailure("no generator face satisfied the optimality conditions".into()))
    }
}

/// `span(basis)`; an empty basis is the zero subspace of `ambient_dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSubspace")]
pub struct LinearSubspace {
    #[serde(rename = "dim")]
    ambient_dim: usize,
    basis: Vec<Vector>,
}

#[derive(Deserialize)]
struct RawSubspace {
    dim: usize,
    basis: Vec<Vector>,
}

impl TryFrom<RawSubspace> for LinearSubspace {
    type Error = Error;
    fn try_from(r: RawSubspace) -> Result<Self> {
        LinearSubspace::new(r.dim, r.basis, &Tolerance::default())
    }
}

impl LinearSubspace {
    pub fn new(ambient_dim: usize, basis: Vec<Vector>, tol: &Tolerance) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be >= 1".into()));
        }
        for b in &basis {
            check_dim(ambient_dim, b.dim())?;
        }
        if basis.len() > ambient_dim {
            return Err(Error::RankDeficient);
        }
        if !basis.is_empty() {
            solve_gram(&basis, &vec![0.0; basis.len()], tol)?;
        }
        Ok(LinearSubspace { ambient_dim, basis })
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim
    }

    fn project(&self, x: &Vector, tol: &Tolerance) -> Result<Vector> {
        if self.basis.is_empty() {
            return Ok(Vector::zeros(self.ambient_dim));
        }
        let rhs: Vec<f64> = self.basis.iter().map(|b| b.dot(x)).collect();
        let t = refined_gram_solve(&self.basis, &rhs, tol)?;
        Ok(self.basis.iter().zip(&t).fold(Vector::zeros(self.ambient_dim), |p, (b, ti)| p.add_scaled(*ti, b)))
    }
}

/// `[d] = {λd : λ ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRay")]
pub struct Ray {
    direction: Vector,
}

#[derive(Deserialize)]
struct RawRay {
    direction: Vector,
}

impl TryFrom<RawRay> for Ray {
    type Error = Error;
    fn try_from(r: RawRay) -> Result<Self> {
        Ray::new(r.direction)
    }
}

impl Ray {
    pub fn new(direction: Vector) -> Result<Self> {
        if direction.norm() == 0.0 {
            return Err(Error::InvalidInput("ray direction must be nonzero".into()));
        }
        Ok(Ray { direction })
    }

    pub fn direction(&self) -> &Vector {
        &self.direction
    }

    fn project(&self, x: &Vector) -> Vector {
        let t = (x.dot(&self.direction) / self.direction.norm_sq()).max(0.0);
        self.direction.scaled(t)
    }
}

/// A closed convex set with an exact projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum ConvexSet {
    HalfSpace(HalfSpace),
    Polyhedron(Polyhedron),
    Cone(ConeV),
    Subspace(LinearSubspace),
    Ray(Ray),
}

impl ConvexSet {
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::HalfSpace(h) => h.dim(),
            ConvexSet::Polyhedron(p) => p.dim(),
            ConvexSet::Cone(c) => c.dim(),
            ConvexSet::Subspace(s) => s.dim(),
            ConvexSet::Ray(r) => r.direction.dim(),
        }
    }

    /// Whether the set is a cone (closed under nonnegative scaling).
    pub fn is_conic(&self) -> bool {
        match self {
            ConvexSet::HalfSpace(h) => h.offset == 0.0,
            ConvexSet::Polyhedron(p) => p.halfspaces.iter().all(|h| h.offset == 0.0),
            ConvexSet::Cone(_) | ConvexSet::Subspace(_) | ConvexSet::Ray(_) => true,
        }
    }

    /// Euclidean projection `P_C(x)`.
    pub fn project(&self, x: &Vector, tol: &Tolerance) -> Result<Vector> {
        check_dim(self.dim(), x.dim())?;
        match self {
            ConvexSet::HalfSpace(h) => Ok(h.project(x)),
            ConvexSet::Polyhedron(p) => p.project(x, tol),
            ConvexSet::Cone(c) => c.project(x, tol),
            ConvexSet::Subspace(s) => s.project(x, tol),
            ConvexSet::Ray(r) => Ok(r.project(x)),
        }
    }

    /// Reflection `R_C(x) = 2 P_C(x) − x`.
    pub fn reflect(&self, x: &Vector, tol: &Tolerance) -> Result<Vector> {
        Ok(reflect_through(&self.project(x, tol)?, x))
    }

    /// `‖x − P_C(x)‖`.
    pub fn distance(&self, x: &Vector, tol: &Tolerance) -> Result<f64> {
        Ok(x.distance(&self.project(x, tol)?))
    }

    /// Whether `‖x − P_C(x)‖ ≤ eps_feas`.
    pub fn membership(&self, x: &Vector, tol: &Tolerance) -> Result<bool> {
        Ok(self.distance(x, tol)? <= tol.eps_feas)
    }
}

/// `2p − x`.
pub(crate) fn reflect_through(p: &Vector, x: &Vector) -> Vector {
    p.scaled(2.0).add_scaled(-1.0, x)
}

impl From<HalfSpace> for ConvexSet {
    fn from(h: HalfSpace) -> Self {
        ConvexSet::HalfSpace(h)
    }
}

impl From<Polyhedron> for ConvexSet {
    fn from(p: Polyhedron) -> Self {
        ConvexSet::Polyhedron(p)
    }
}

impl From<ConeV> for ConvexSet {
    fn from(c: ConeV) -> Self {
        ConvexSet::Cone(c)
    }
}

impl From<LinearSubspace> for ConvexSet {
    fn from(s: LinearSubspace) -> Self {
        ConvexSet::Subspace(s)
    }
}

impl From<Ray> for ConvexSet {
    fn from(r: Ray) -> Self {
        ConvexSet::Ray(r)
    }
}

/// Gram solve followed by one step of iterative refinement on the residual.
fn refined_gram_solve(basis: &[Vector], rhs: &[f64], tol: &Tolerance) -> Result<Vec<f64>> {
    let mut t = solve_gram(basis, rhs, tol)?;
    let combo = basis.iter().zip(&t).fold(Vector::zeros(basis[0].dim()), |acc, (b, ti)| acc.add_scaled(*ti, b));
    let residual: Vec<f64> = basis.iter().zip(rhs).map(|(b, r)| r - b.dot(&combo)).collect();
    if let Ok(dt) = solve_gram(basis, &residual, tol) {
        for (ti, d) in t.iter_mut().zip(dt) {
            *ti += d;
        }
    }
    Ok(t)
}

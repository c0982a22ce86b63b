//! Geometry on the unit sphere S² induced by convex cones in R³.
//!
//! A closed convex cone `C ⊂ R³` meets S² in a geodesically convex set `C′`.
//! Spherical projection is the normalized Euclidean projection onto `C`,
//! spherical reflection is the Euclidean reflection (which preserves norms
//! for cones), and the sphere-centered reflection operator replaces the
//! circumcenter with the nearest point of S² equidistant to three points.

use serde::{Deserialize, Serialize};

use crate::crm::{in_kernel_ct, CardinalityCase, CrmStep, IterationTrace, Termination};
use crate::error::{check_dim, Error, Result};
use crate::geometry::distinct_points;
use crate::sets::{ConeV, ConvexSet};
use crate::vector::{Tolerance, Vector};

/// A point of S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVec3([f64; 3]);

impl TryFrom<[f64; 3]> for UnitVec3 {
    type Error = Error;
    fn try_from(c: [f64; 3]) -> Result<Self> {
        UnitVec3::normalize(c)
    }
}

impl From<UnitVec3> for [f64; 3] {
    fn from(u: UnitVec3) -> Self {
        u.0
    }
}

impl std::ops::Neg for UnitVec3 {
    type Output = UnitVec3;

    fn neg(self) -> UnitVec3 {
        UnitVec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl UnitVec3 {
    /// `c / ‖c‖`; fails for the zero vector or non-finite input.
    pub fn normalize(c: [f64; 3]) -> Result<Self> {
        let v = Vector::new(c.to_vec())?;
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        Ok(UnitVec3([c[0] / n, c[1] / n, c[2] / n]))
    }

    pub fn from_vector(v: &Vector) -> Result<Self> {
        check_dim(3, v.dim())?;
        let c = v.coords();
        Self::normalize([c[0], c[1], c[2]])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn to_vector(self) -> Vector {
        Vector::from(self.0)
    }

    pub fn dot(&self, other: &UnitVec3) -> f64 {
        dot(self.0, other.0)
    }

    /// The point reached by walking `angle` radians from `self` along the
    /// great circle through the tangent direction `tangent`.
    ///
    /// Only the component of `tangent` orthogonal to `self` matters.
    pub fn rotate_toward(self, tangent: [f64; 3], angle: f64) -> Result<UnitVec3> {
        let t = sub(tangent, scale(self.0, dot(tangent, self.0)));
        let t = UnitVec3::normalize(t)
            .map_err(|_| Error::InvalidInput("tangent direction is parallel to the base point".into()))?;
        UnitVec3::normalize(add(scale(self.0, angle.cos()), scale(t.0, angle.sin())))
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn norm(a: [f64; 3]) -> f64 {
    a[0].hypot(a[1]).hypot(a[2])
}

/// Arc length between two points of S², in `[0, π]`.
pub fn geodesic_distance(x: &UnitVec3, y: &UnitVec3) -> f64 {
    // atan2 keeps full precision near 0 and π, where arccos does not
    norm(cross(x.0, y.0)).atan2(x.dot(y))
}

/// The shorter great-circle arc between two non-antipodal points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreatArc {
    start: UnitVec3,
    end: UnitVec3,
    normal: UnitVec3,
}

impl GreatArc {
    pub fn new(start: UnitVec3, end: UnitVec3) -> Result<Self> {
        let normal = UnitVec3::normalize(cross(start.0, end.0)).map_err(|_| {
            if start.dot(&end) < 0.0 {
                Error::AntipodalPair
            } else {
                Error::InvalidInput("arc endpoints coincide".into())
            }
        })?;
        Ok(GreatArc { start, end, normal })
    }

    pub fn start(&self) -> UnitVec3 {
        self.start
    }

    pub fn end(&self) -> UnitVec3 {
        self.end
    }

    pub fn plane_normal(&self) -> UnitVec3 {
        self.normal
    }

    pub fn length(&self) -> f64 {
        geodesic_distance(&self.start, &self.end)
    }

    /// Nearest point of the arc to `p`.
    pub fn nearest_point(&self, p: &UnitVec3) -> UnitVec3 {
        let n = self.normal.0;
        let s = dot(p.0, n);
        if let Ok(foot) = UnitVec3::normalize(sub(p.0, scale(n, s))) {
            if dot(cross(self.start.0, foot.0), n) >= 0.0 && dot(cross(foot.0, self.end.0), n) >= 0.0 {
                return foot;
            }
        }
        if geodesic_distance(p, &self.start) <= geodesic_distance(p, &self.end) {
            self.start
        } else {
            self.end
        }
    }

    /// Geodesic distance from `p` to the arc.
    pub fn distance(&self, p: &UnitVec3) -> f64 {
        let n = self.normal.0;
        let s = dot(p.0, n);
        let inplane = sub(p.0, scale(n, s));
        if let Ok(foot) = UnitVec3::normalize(inplane) {
            if dot(cross(self.start.0, foot.0), n) >= 0.0 && dot(cross(foot.0, self.end.0), n) >= 0.0 {
                return s.abs().atan2(norm(inplane));
            }
        }
        geodesic_distance(p, &self.start).min(geodesic_distance(p, &self.end))
    }

    /// Point at fraction `t ∈ [0, 1]` of the arc length from `start`.
    pub fn point_at(&self, t: f64) -> UnitVec3 {
        let theta = self.length();
        let (a, b) = (((1.0 - t) * theta).sin(), (t * theta).sin());
        let s = theta.sin();
        UnitVec3::normalize(add(scale(self.start.0, a / s), scale(self.end.0, b / s))).unwrap_or(self.start)
    }
}

/// `{u ∈ S² : ⟨aᵢ, u⟩ ≤ 0 for all i}` with its vertex and edge structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalPolytope {
    normals: Vec<UnitVec3>,
    vertices: Vec<UnitVec3>,
    edges: Vec<GreatArc>,
}

impl SphericalPolytope {
    pub fn normals(&self) -> &[UnitVec3] {
        &self.normals
    }

    pub fn vertices(&self) -> &[UnitVec3] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GreatArc] {
        &self.edges
    }

    /// Whether every half-sphere constraint holds at `eps_feas`.
    pub fn contains(&self, u: &UnitVec3, tol: &Tolerance) -> bool {
        self.normals.iter().all(|a| a.dot(u) <= tol.eps_feas)
    }

    /// Geodesic distance from `u` to the polytope.
    pub fn distance(&self, u: &UnitVec3, tol: &Tolerance) -> f64 {
        if self.contains(u, tol) {
            return 0.0;
        }
        let to_edges = self.edges.iter().map(|e| e.distance(u));
        let to_vertices = self.vertices.iter().map(|v| geodesic_distance(u, v));
        to_edges.chain(to_vertices).fold(f64::INFINITY, f64::min)
    }

    /// Polytope cut out by `normals`; vertices are the feasible points
    /// `±aᵢ × aⱼ`, edges join the extreme active vertices of each constraint.
    pub fn from_normals(normals: Vec<UnitVec3>, tol: &Tolerance) -> Result<Self> {
        let normals = dedup_units(normals, tol);
        let feasible = |u: &UnitVec3| normals.iter().all(|a| a.dot(u) <= tol.eps_feas);
        let mut vertices = Vec::new();
        for (i, a) in normals.iter().enumerate() {
            for b in &normals[i + 1..] {
                if let Ok(v) = UnitVec3::normalize(cross(a.0, b.0)) {
                    for c in [v, -v] {
                        if feasible(&c) {
                            vertices.push(c);
                        }
                    }
                }
            }
        }
        let vertices = dedup_units(vertices, tol);
        if vertices.is_empty() {
            return Err(Error::EmptyIntersection);
        }
        let edges = edges_from_facets(&normals, &vertices, tol);
        Ok(SphericalPolytope { normals, vertices, edges })
    }

    /// The polytope `A′ ∩ B′`, keeping every constraint of both.
    pub fn intersection(&self, other: &SphericalPolytope, tol: &Tolerance) -> Result<SphericalPolytope> {
        SphericalPolytope::from_normals(self.normals.iter().chain(&other.normals).copied().collect(), tol)
    }
}

fn dedup_units(points: Vec<UnitVec3>, tol: &Tolerance) -> Vec<UnitVec3> {
    let mut out: Vec<UnitVec3> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| geodesic_distance(&p, q) <= tol.eps_feas) {
            out.push(p);
        }
    }
    out
}

fn edges_from_facets(normals: &[UnitVec3], vertices: &[UnitVec3], tol: &Tolerance) -> Vec<GreatArc> {
    let mut edges = Vec::new();
    for a in normals {
        let active: Vec<&UnitVec3> = vertices.iter().filter(|v| a.dot(v).abs() <= tol.eps_feas).collect();
        let mut best: Option<(f64, UnitVec3, UnitVec3)> = None;
        for (i, u) in active.iter().enumerate() {
            for v in &active[i + 1..] {
                let d = geodesic_distance(u, v);
                if best.map_or(true, |(bd, _, _)| d > bd) {
                    best = Some((d, **u, **v));
                }
            }
        }
        if let Some((_, u, v)) = best {
            if let Ok(arc) = GreatArc::new(u, v) {
                edges.push(arc);
            }
        }
    }
    edges
}

/// Facet normals, vertices and edges of `cone ∩ S²` for a proper cone.
pub fn build_spherical_polytope(cone: &ConeV, tol: &Tolerance) -> Result<SphericalPolytope> {
    check_dim(3, cone.dim())?;
    let gens: Vec<UnitVec3> = cone
        .generators()
        .iter()
        .map(UnitVec3::from_vector)
        .collect::<Result<_>>()?;

    let solid = gens.iter().enumerate().any(|(i, a)| {
        gens[i + 1..]
            .iter()
            .enumerate()
            .any(|(j, b)| gens[i + j + 2..].iter().any(|c| dot(a.0, cross(b.0, c.0)).abs() > tol.eps_feas))
    });
    if !solid {
        return Err(Error::NotProper("generators do not span R³".into()));
    }
    let set = ConvexSet::Cone(cone.clone());
    for g in &gens {
        if set.membership(&(-*g).to_vector(), tol)? {
            return Err(Error::NotProper("cone contains a line".into()));
        }
    }

    let mut normals = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let Ok(n) = UnitVec3::normalize(cross(a.0, b.0)) else {
                continue;
            };
            let signs: Vec<f64> = gens.iter().map(|g| n.dot(g)).collect();
            if signs.iter().all(|&s| s <= tol.eps_feas) {
                normals.push(n);
            } else if signs.iter().all(|&s| s >= -tol.eps_feas) {
                normals.push(-n);
            }
        }
    }
    let normals = dedup_units(normals, tol);
    let vertices: Vec<UnitVec3> = gens
        .iter()
        .filter(|g| normals.iter().filter(|a| a.dot(g).abs() <= tol.eps_feas).count() >= 2)
        .copied()
        .collect();
    let vertices = dedup_units(vertices, tol);
    let edges = edges_from_facets(&normals, &vertices, tol);
    Ok(SphericalPolytope { normals, vertices, edges })
}

/// Radius `r` of the finite-convergence zone around `A′ ∩ B′`.
///
/// For every vertex of the intersection, the distance to the nearest arc of
/// `A′` or `B′` that does not pass through it; `r` is the smallest of these.
pub fn zone_radius(ap: &SphericalPolytope, bp: &SphericalPolytope, tol: &Tolerance) -> Result<f64> {
    let inter = ap.intersection(bp, tol)?;
    Ok(zone_radius_with(&inter, ap, bp, tol))
}

fn zone_radius_with(inter: &SphericalPolytope, ap: &SphericalPolytope, bp: &SphericalPolytope, tol: &Tolerance) -> f64 {
    let arcs: Vec<&GreatArc> = ap.edges.iter().chain(&bp.edges).collect();
    let mut r = f64::INFINITY;
    for v in &inter.vertices {
        for arc in &arcs {
            let d = arc.distance(v);
            if d > tol.eps_feas {
                r = r.min(d);
            }
        }
    }
    // every arc passes through every vertex only for a degenerate single
    // point; any radius below π/2 is then admissible
    if r.is_finite() {
        r
    } else {
        std::f64::consts::FRAC_PI_2
    }
}

/// The intersection polytope of a proper cone pair with its zone radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceZone {
    pub a: SphericalPolytope,
    pub b: SphericalPolytope,
    pub intersection: SphericalPolytope,
    pub radius: f64,
}

impl ConvergenceZone {
    pub fn new(a: &ConeV, b: &ConeV, tol: &Tolerance) -> Result<Self> {
        let ap = build_spherical_polytope(a, tol)?;
        let bp = build_spherical_polytope(b, tol)?;
        let intersection = ap.intersection(&bp, tol)?;
        let radius = zone_radius_with(&intersection, &ap, &bp, tol);
        Ok(ConvergenceZone { a: ap, b: bp, intersection, radius })
    }

    /// Whether `x̂` lies within `radius` of `A′ ∩ B′`.
    pub fn contains_direction(&self, u: &UnitVec3, tol: &Tolerance) -> bool {
        self.intersection.distance(u, tol) <= self.radius
    }
}

/// Whether `x` lies in `Ker C_T ∪ cone(D)`, `D` being the zone around `A′ ∩ B′`.
pub fn in_zone(a: &ConeV, b: &ConeV, x: &Vector, tol: &Tolerance) -> Result<bool> {
    check_dim(3, x.dim())?;
    let zone = ConvergenceZone::new(a, b, tol)?;
    let Some(u) = x.normalized() else {
        return Ok(true);
    };
    if in_kernel_ct(a, b, &u, tol)? {
        return Ok(true);
    }
    Ok(zone.contains_direction(&UnitVec3::from_vector(&u)?, tol))
}

/// `P_C(x) / ‖P_C(x)‖`.
pub fn spherical_project(cone: &ConeV, x: &UnitVec3, tol: &Tolerance) -> Result<UnitVec3> {
    check_dim(3, cone.dim())?;
    let v = x.to_vector();
    if cone.in_polar_cone(&v, tol)? {
        return Err(Error::InPolarCone);
    }
    let p = ConvexSet::Cone(cone.clone()).project(&v, tol)?;
    UnitVec3::from_vector(&p).map_err(|_| Error::InPolarCone)
}

/// `R_C(x)`, which stays on S² for a cone.
pub fn spherical_reflect(cone: &ConeV, x: &UnitVec3, tol: &Tolerance) -> Result<UnitVec3> {
    check_dim(3, cone.dim())?;
    let v = x.to_vector();
    if cone.in_polar_cone(&v, tol)? {
        return Err(Error::InPolarCone);
    }
    UnitVec3::from_vector(&ConvexSet::Cone(cone.clone()).reflect(&v, tol)?)
}

/// Nearest point of S² geodesically equidistant to `x`, `y`, `z`.
///
/// Coincident inputs collapse first: a single point is returned, two
/// distinct points give their geodesic midpoint.
pub fn sphere_center(x: &UnitVec3, y: &UnitVec3, z: &UnitVec3, tol: &Tolerance) -> Result<UnitVec3> {
    let pts = distinct_points(&[x.to_vector(), y.to_vector(), z.to_vector()], tol);
    match pts.as_slice() {
        [p] => UnitVec3::from_vector(p),
        [p, q] => {
            let s = p + q;
            if s.norm() <= tol.eps_degen {
                return Err(Error::AntipodalPair);
            }
            UnitVec3::from_vector(&s)
        }
        _ => {
            if dot(x.0, cross(y.0, z.0)).abs() <= tol.eps_degen {
                return Err(Error::CommonGreatCircle);
            }
            let n = UnitVec3::normalize(cross(sub(x.0, y.0), sub(y.0, z.0)))?;
            Ok(if n.dot(x) >= 0.0 { n } else { -n })
        }
    }
}

/// `S_T(x) = S(x, R_A x, R_B R_A x)`.
pub fn srm_operator(a: &ConeV, b: &ConeV, x: &UnitVec3, tol: &Tolerance) -> Result<UnitVec3> {
    Ok(srm_step(a, b, x, tol)?.2)
}

fn srm_step(a: &ConeV, b: &ConeV, x: &UnitVec3, tol: &Tolerance) -> Result<(UnitVec3, UnitVec3, UnitVec3)> {
    if in_kernel_ct(a, b, &x.to_vector(), tol)? {
        return Err(Error::InKernel);
    }
    let y = spherical_reflect(a, x, tol)?;
    let z = spherical_reflect(b, &y, tol)?;
    Ok((y, z, sphere_center(x, &y, &z, tol)?))
}

/// SRM iteration on S² from `x0 / ‖x0‖`.
///
/// Inputs where the operator is undefined (kernel points, polar-cone
/// reflections, triples on a common great circle) end the trace with
/// [`Termination::OperatorUndefined`].
pub fn run_srm(a: &ConeV, b: &ConeV, x0: &Vector, tol: &Tolerance, max_iters: usize) -> Result<IterationTrace> {
    check_dim(3, a.dim())?;
    check_dim(3, b.dim())?;
    check_dim(3, x0.dim())?;
    if max_iters == 0 {
        return Err(Error::InvalidInput("max_iters must be >= 1".into()));
    }
    let (sa, sb) = (ConvexSet::Cone(a.clone()), ConvexSet::Cone(b.clone()));
    let mut x = UnitVec3::from_vector(x0)?;
    let mut steps = Vec::new();
    loop {
        let v = x.to_vector();
        let (dist_a, dist_b) = (sa.distance(&v, tol)?, sb.distance(&v, tol)?);
        let terminated = if dist_a <= tol.eps_feas && dist_b <= tol.eps_feas {
            Some(Termination::Feasible)
        } else if steps.len() == max_iters {
            Some(Termination::MaxIters)
        } else {
            match srm_step(a, b, &x, tol) {
                Ok((y, z, next)) => {
                    let (yv, zv) = (y.to_vector(), z.to_vector());
                    let case = CardinalityCase::classify(&v, &yv, &zv, tol);
                    steps.push(CrmStep {
                        x: v.clone(),
                        y: yv,
                        z: zv,
                        next: next.to_vector(),
                        case: Some(case),
                        dist_a,
                        dist_b,
                        shadow: None,
                    });
                    x = next;
                    None
                }
                Err(Error::InKernel | Error::InPolarCone | Error::CommonGreatCircle | Error::AntipodalPair) => {
                    Some(Termination::OperatorUndefined)
                }
                Err(e) => return Err(e),
            }
        };
        if let Some(terminated) = terminated {
            return Ok(IterationTrace {
                iterations_used: steps.len(),
                steps,
                terminated,
                final_point: v,
                final_dist_a: dist_a,
                final_dist_b: dist_b,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn u(c: [f64; 3]) -> UnitVec3 {
        UnitVec3::normalize(c).unwrap()
    }

    fn cone(gens: &[[f64; 3]]) -> ConeV {
        ConeV::new(gens.iter().map(|g| Vector::from(*g)).collect()).unwrap()
    }

    fn octant() -> ConeV {
        cone(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    fn example_a() -> ConeV {
        cone(&[[3.0, 0.0, 3.0], [0.0, 1.0, 3.0], [0.0, -1.0, 3.0], [-3.0, 0.0, -2.0]])
    }

    fn example_b() -> ConeV {
        cone(&[[1.0, 3.0, 0.0], [1.0, -3.0, 0.0], [-3.0, 0.0, -1.0]])
    }

    fn close(a: &UnitVec3, b: &UnitVec3, eps: f64) -> bool {
        geodesic_distance(a, b) <= eps
    }

    #[test]
    fn geodesic_distance_basics() {
        let (e1, e2) = (u([1.0, 0.0, 0.0]), u([0.0, 1.0, 0.0]));
        assert!((geodesic_distance(&e1, &e2) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(geodesic_distance(&e1, &e1), 0.0);
        assert!((geodesic_distance(&e1, &-e1) - PI).abs() < 1e-15);
    }

    #[test]
    fn spherical_projection_examples() {
        let t = tol();
        let x = u([1.0, 0.5, 0.0]);
        let p = spherical_project(&example_a(), &x, &t).unwrap();
        assert!(close(&p, &u([1.0, 0.0, 1.0]), 1e-12));

        let p = spherical_project(&octant(), &u([1.0, 1.0, -1.0]), &t).unwrap();
        assert!(close(&p, &u([1.0, 1.0, 0.0]), 1e-12));

        let inside = u([0.3, 0.4, 0.5]);
        assert!(close(&spherical_project(&octant(), &inside, &t).unwrap(), &inside, 1e-15));
        assert_eq!(spherical_project(&octant(), &u([-1.0, -1.0, -1.0]), &t), Err(Error::InPolarCone));
    }

    #[test]
    fn spherical_reflection_examples() {
        let t = tol();
        let r = spherical_reflect(&example_a(), &u([1.0, 0.5, 0.0]), &t).unwrap();
        assert!(close(&r, &u([0.0, -0.5, 1.0]), 1e-12));

        let ray = cone(&[[0.0, 0.0, 1.0]]);
        let r = spherical_reflect(&ray, &u([1.0, 0.0, 1.0]), &t).unwrap();
        assert!(close(&r, &u([-1.0, 0.0, 1.0]), 1e-12));
        assert_eq!(spherical_reflect(&ray, &u([1.0, 0.0, 0.0]), &t), Err(Error::InPolarCone));
    }

    #[test]
    fn sphere_center_of_basis_vectors() {
        let t = tol();
        let (e1, e2, e3) = (u([1.0, 0.0, 0.0]), u([0.0, 1.0, 0.0]), u([0.0, 0.0, 1.0]));
        let c = sphere_center(&e1, &e2, &e3, &t).unwrap();
        assert!(close(&c, &u([1.0, 1.0, 1.0]), 1e-15));
        let d = geodesic_distance(&c, &e1);
        assert!((geodesic_distance(&c, &e2) - d).abs() < 1e-15);
        assert!(d < geodesic_distance(&-c, &e1));
    }

    #[test]
    fn sphere_center_degenerate_cases() {
        let t = tol();
        let p = u([0.3, -0.2, 0.9]);
        assert_eq!(sphere_center(&p, &p, &p, &t).unwrap(), p);

        let (a, b) = (u([1.0, 0.0, 1.0]), u([1.0, 0.0, -0.2]));
        let m = sphere_center(&a, &b, &a, &t).unwrap();
        assert!((geodesic_distance(&m, &a) - geodesic_distance(&m, &b)).abs() < 1e-15);
        assert!(close(&m, &a.rotate_toward(b.coords(), 0.5 * geodesic_distance(&a, &b)).unwrap(), 1e-14));

        assert_eq!(sphere_center(&a, &-a, &a, &t), Err(Error::AntipodalPair));
        let (x, y, z) = (u([1.0, 0.0, 0.0]), u([0.0, 1.0, 0.0]), u([1.0, 1.0, 0.0]));
        assert_eq!(sphere_center(&x, &y, &z, &t), Err(Error::CommonGreatCircle));
    }

    #[test]
    fn octant_polytope() {
        let p = build_spherical_polytope(&octant(), &tol()).unwrap();
        assert_eq!(p.normals().len(), 3);
        for e in 0..3 {
            let mut n = [0.0; 3];
            n[e] = -1.0;
            assert!(p.normals().iter().any(|a| close(a, &u(n), 1e-15)));
        }
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.edges().len(), 3);
        assert!(p.edges().iter().all(|e| (e.length() - FRAC_PI_2).abs() < 1e-15));
    }

    #[test]
    fn example_b_polytope() {
        let b = example_b();
        let p = build_spherical_polytope(&b, &tol()).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.edges().len(), 3);
        for g in b.generators() {
            let g = UnitVec3::from_vector(g).unwrap();
            assert!(p.vertices().iter().any(|v| close(v, &g, 1e-15)));
        }
    }

    #[test]
    fn example_a_polytope_has_four_vertices() {
        let p = build_spherical_polytope(&example_a(), &tol()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.edges().len(), 4);
    }

    #[test]
    fn improper_cones_rejected() {
        let t = tol();
        let line = cone(&[[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        assert!(matches!(build_spherical_polytope(&line, &t), Err(Error::NotProper(_))));
        let flat = cone(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]]);
        assert!(matches!(build_spherical_polytope(&flat, &t), Err(Error::NotProper(_))));
    }

    #[test]
    fn octant_zone_radius() {
        let p = build_spherical_polytope(&octant(), &tol()).unwrap();
        let r = zone_radius(&p, &p, &tol()).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-14, "{r}");
    }

    #[test]
    fn touching_cones_have_positive_radius() {
        let t = tol();
        let a = build_spherical_polytope(&cone(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]), &t).unwrap();
        let b = build_spherical_polytope(&cone(&[[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]), &t).unwrap();
        let inter = a.intersection(&b, &t).unwrap();
        assert_eq!(inter.vertices().len(), 1);
        assert!(zone_radius(&a, &b, &t).unwrap() > 0.0);
    }

    #[test]
    fn disjoint_cones_report_empty_intersection() {
        let t = tol();
        let a = build_spherical_polytope(&octant(), &t).unwrap();
        let b = build_spherical_polytope(&cone(&[[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]), &t).unwrap();
        assert_eq!(zone_radius(&a, &b, &t), Err(Error::EmptyIntersection));
    }

    #[test]
    fn example_zone() {
        let t = tol();
        let (a, b) = (example_a(), example_b());
        let zone = ConvergenceZone::new(&a, &b, &t).unwrap();
        assert!(zone.radius > 0.0);
        assert!(!in_zone(&a, &b, &Vector::from([1.0, 0.5, 0.0]), &t).unwrap());
        assert!(in_zone(&a, &b, &Vector::zeros(3), &t).unwrap());
        let inside = zone.intersection.vertices()[0].to_vector().scaled(4.0);
        assert!(in_zone(&a, &b, &inside, &t).unwrap());
    }

    #[test]
    fn point_to_arc_distance() {
        let arc = GreatArc::new(u([1.0, 0.0, 0.0]), u([0.0, 1.0, 0.0])).unwrap();
        // foot inside the arc
        let p = u([1.0, 1.0, 1.0]);
        assert!((arc.distance(&p) - (1.0 / 3f64.sqrt()).asin()).abs() < 1e-15);
        assert!(close(&arc.nearest_point(&p), &u([1.0, 1.0, 0.0]), 1e-15));
        // foot outside: nearest endpoint
        let q = u([-1.0, -0.1, 0.2]);
        let d = geodesic_distance(&q, &u([1.0, 0.0, 0.0])).min(geodesic_distance(&q, &u([0.0, 1.0, 0.0])));
        assert_eq!(arc.distance(&q), d);
        assert!(close(&arc.point_at(0.5), &u([1.0, 1.0, 0.0]), 1e-15));
    }

    #[test]
    fn srm_fixed_point_and_kernel() {
        let t = tol();
        let (a, b) = (octant(), octant());
        let x = u([0.2, 0.5, 0.7]);
        assert!(close(&srm_operator(&a, &b, &x, &t).unwrap(), &x, 1e-15));
        let k = u([-1.0, -1.0, -1.0]);
        assert_eq!(srm_operator(&a, &b, &k, &t), Err(Error::InKernel));
    }

    #[test]
    fn srm_matches_normalized_crm_near_an_edge() {
        let t = tol();
        let a = octant();
        let b = cone(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, -0.3]]);
        let x = u([0.6, 0.7, -0.05]);
        let s = srm_operator(&a, &b, &x, &t).unwrap();
        let step = crate::crm::crm_operator(&ConvexSet::Cone(a), &ConvexSet::Cone(b), &x.to_vector(), &t).unwrap();
        assert!(close(&s, &UnitVec3::from_vector(&step.next).unwrap(), 1e-12));
    }

    #[test]
    fn run_srm_reaches_intersection() {
        let t = tol();
        let trace = run_srm(&octant(), &octant(), &Vector::from([2.0, 1.0, -0.5]), &t, 10).unwrap();
        assert_eq!(trace.terminated, Termination::Feasible);
        assert!(trace.iterations_used <= 3);
    }
}

//! Brute-force reference routines for testing `circumfeas`.
//!
//! Nothing here shares code with the exact solvers it checks. Projections
//! are computed by iterative schemes (coordinate descent on nonnegative
//! coefficients, Hildreth's dual method, Gauss–Seidel, interval grid search)
//! and then certified by sampling the variational inequality
//! `⟨y − p, x − p⟩ ≤ 0` over points `y` of the set. Geodesic distances to
//! spherical polytopes are found by dense sampling of the boundary arcs.

use circumfeas::sphere::{geodesic_distance, SphericalPolytope, UnitVec3};
use circumfeas::{ConvexSet, Vector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("projection certificate failed: {0}")]
    CertificationFailed(String),
    #[error("oracle supports dimensions 1 to 3, got {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Core(#[from] circumfeas::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Minimum boundary sample count for [`oracle_geodesic_distance_to_set`].
pub const MIN_SPHERE_SAMPLES: usize = 10_000;

/// Projection of `x` onto `set` by an iterative route independent of the
/// library, certified by sampling.
///
/// Each of the `refine_rounds` rounds runs `grid` sweeps (or, for a ray,
/// narrows a `grid`-point search interval), stopping early once a sweep no
/// longer moves the estimate.
pub fn oracle_project(set: &ConvexSet, x: &Vector, grid: usize, refine_rounds: usize) -> Result<Vector> {
    let n = x.dim();
    if !(1..=3).contains(&n) {
        return Err(OracleError::UnsupportedDimension(n));
    }
    if set.dim() != n {
        return Err(circumfeas::Error::DimensionMismatch { expected: set.dim(), found: n }.into());
    }
    let grid = grid.max(2);
    let sweeps = grid * refine_rounds.max(1);
    let p = match set {
        ConvexSet::HalfSpace(h) => hildreth(&[(h.normal().coords().to_vec(), h.offset())], x.coords(), sweeps),
        ConvexSet::Polyhedron(poly) => {
            let cons: Vec<(Vec<f64>, f64)> =
                poly.halfspaces().iter().map(|h| (h.normal().coords().to_vec(), h.offset())).collect();
            hildreth(&cons, x.coords(), sweeps)
        }
        ConvexSet::Cone(c) => {
            let gens: Vec<Vec<f64>> = c.generators().iter().map(|g| g.coords().to_vec()).collect();
            nnls_coordinate_descent(&gens, x.coords(), sweeps)
        }
        ConvexSet::Subspace(s) => {
            let basis: Vec<Vec<f64>> = s.basis().iter().map(|b| b.coords().to_vec()).collect();
            gauss_seidel_span(&basis, x.coords(), sweeps)
        }
        ConvexSet::Ray(r) => ray_grid_search(r.direction().coords(), x.coords(), grid, refine_rounds),
    };
    let p = Vector::new(p)?;
    certify(set, x, &p)?;
    Ok(p)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Hildreth's method for `min ‖p − x‖²` subject to `⟨aᵢ, p⟩ ≤ bᵢ`.
fn hildreth(cons: &[(Vec<f64>, f64)], x: &[f64], sweeps: usize) -> Vec<f64> {
    let mut p = x.to_vec();
    let mut z = vec![0.0; cons.len()];
    for _ in 0..sweeps {
        let mut moved = 0.0_f64;
        for ((a, b), zi) in cons.iter().zip(z.iter_mut()) {
            let aa = dot(a, a);
            // dual step: keep multiplier nonnegative
            let c = ((b - dot(a, &p)) / aa).min(*zi);
            *zi -= c;
            for (pj, aj) in p.iter_mut().zip(a) {
                *pj += c * aj;
            }
            moved = moved.max(c.abs() * aa.sqrt());
        }
        if moved == 0.0 {
            break;
        }
    }
    p
}

/// Cyclic coordinate descent on `min ‖Σ λᵢgᵢ − x‖²`, `λ ≥ 0`.
fn nnls_coordinate_descent(gens: &[Vec<f64>], x: &[f64], sweeps: usize) -> Vec<f64> {
    let mut lambda = vec![0.0; gens.len()];
    let mut resid = x.to_vec(); // x − Σ λᵢgᵢ
    for _ in 0..sweeps {
        let mut moved = 0.0_f64;
        for (g, li) in gens.iter().zip(lambda.iter_mut()) {
            let gg = dot(g, g);
            let new = (*li + dot(g, &resid) / gg).max(0.0);
            let d = new - *li;
            if d != 0.0 {
                for (r, gj) in resid.iter_mut().zip(g) {
                    *r -= d * gj;
                }
                *li = new;
                moved = moved.max(d.abs() * gg.sqrt());
            }
        }
        if moved == 0.0 {
            break;
        }
    }
    x.iter().zip(&resid).map(|(xi, ri)| xi - ri).collect()
}

/// Gauss–Seidel on the normal equations of `min ‖Σ tᵢbᵢ − x‖²`.
fn gauss_seidel_span(basis: &[Vec<f64>], x: &[f64], sweeps: usize) -> Vec<f64> {
    if basis.is_empty() {
        return vec![0.0; x.len()];
    }
    let mut resid = x.to_vec();
    for _ in 0..sweeps {
        let mut moved = 0.0_f64;
        for b in basis {
            let bb = dot(b, b);
            let d = dot(b, &resid) / bb;
            for (r, bj) in resid.iter_mut().zip(b) {
                *r -= d * bj;
            }
            moved = moved.max(d.abs() * bb.sqrt());
        }
        if moved == 0.0 {
            break;
        }
    }
    x.iter().zip(&resid).map(|(xi, ri)| xi - ri).collect()
}

/// Grid search for `t ≥ 0` minimizing `‖t·d − x‖`.
///
/// The cost is flat at its minimum, so the grid is scanned for the sign
/// change of its derivative `⟨t·d − x, d⟩` instead; each round shrinks the
/// bracket to one grid cell.
fn ray_grid_search(d: &[f64], x: &[f64], grid: usize, rounds: usize) -> Vec<f64> {
    let dd = dot(d, d);
    let xn = dot(x, x).sqrt();
    // the projection norm never exceeds ‖x‖
    let (mut lo, mut hi) = (0.0, 2.0 * xn / dd.sqrt());
    let slope = |t: f64| d.iter().zip(x).map(|(di, xi)| (t * di - xi) * di).sum::<f64>();
    if slope(0.0) >= 0.0 {
        return vec![0.0; d.len()];
    }
    for _ in 0..rounds.max(1) {
        let step = (hi - lo) / grid as f64;
        let k = (1..=grid).find(|&k| slope(lo + step * k as f64) >= 0.0).unwrap_or(grid);
        let new_lo = lo + step * (k - 1) as f64;
        hi = lo + step * k as f64;
        lo = new_lo;
        if step == 0.0 {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    d.iter().map(|di| t * di).collect()
}

/// Samples points `y` of the set and checks `⟨y − p, x − p⟩ ≤ ε` along
/// with feasibility of `p`.
fn certify(set: &ConvexSet, x: &Vector, p: &Vector) -> Result<()> {
    let scale = 1f64.max(x.norm());
    let eps = 1e-7 * scale;
    let r = x - p;
    let fail = |what: String| Err(OracleError::CertificationFailed(what));

    let mut witnesses: Vec<Vector> = Vec::new();
    match set {
        ConvexSet::HalfSpace(h) => {
            if h.normal().dot(p) - h.offset() > eps * h.normal().norm() {
                return fail("projection violates the half-space".into());
            }
            witnesses.extend(tangent_witnesses(p, &[h.normal().clone()], scale));
            witnesses.push(p.add_scaled(-scale / h.normal().norm(), h.normal()));
        }
        ConvexSet::Polyhedron(poly) => {
            for h in poly.halfspaces() {
                if h.normal().dot(p) - h.offset() > eps * h.normal().norm() {
                    return fail("projection violates a polyhedron constraint".into());
                }
            }
            let normals: Vec<Vector> = poly.halfspaces().iter().map(|h| h.normal().clone()).collect();
            for y in lattice_around(p, scale) {
                if poly.halfspaces().iter().all(|h| h.normal().dot(&y) <= h.offset()) {
                    witnesses.push(y);
                }
            }
            witnesses.extend(
                tangent_witnesses(p, &normals, scale)
                    .into_iter()
                    .filter(|y| poly.halfspaces().iter().all(|h| h.normal().dot(y) <= h.offset() + eps)),
            );
        }
        ConvexSet::Cone(c) => {
            let gens = c.generators();
            witnesses.push(Vector::zeros(x.dim()));
            witnesses.push(p.scaled(2.0));
            for g in gens {
                witnesses.push(p.add_scaled(scale / g.norm(), g));
            }
            for (i, g) in gens.iter().enumerate() {
                for h in &gens[i + 1..] {
                    witnesses.push(p.add_scaled(scale / g.norm(), g).add_scaled(scale / h.norm(), h));
                }
            }
            // p itself must be a nonnegative combination: it is if its
            // distance to the cone, found independently, is negligible
            let gens_raw: Vec<Vec<f64>> = gens.iter().map(|g| g.coords().to_vec()).collect();
            let q = nnls_coordinate_descent(&gens_raw, p.coords(), 20_000);
            let gap = p.coords().iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if gap > eps {
                return fail(format!("projection lies {gap:e} outside the cone"));
            }
        }
        ConvexSet::Subspace(s) => {
            for b in s.basis() {
                witnesses.push(p.add_scaled(scale / b.norm(), b));
                witnesses.push(p.add_scaled(-scale / b.norm(), b));
            }
            let q = gauss_seidel_span(&s.basis().iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>(), p.coords(), 10_000);
            let gap = p.coords().iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if gap > eps {
                return fail(format!("projection lies {gap:e} outside the subspace"));
            }
        }
        ConvexSet::Ray(ray) => {
            let d = ray.direction();
            let t = p.dot(d) / d.norm_sq();
            if t < -eps || p.distance(&d.scaled(t)) > eps {
                return fail("projection is off the ray".into());
            }
            witnesses.push(Vector::zeros(x.dim()));
            witnesses.push(d.scaled(2.0 * t.max(0.0) + scale / d.norm()));
        }
    }
    for y in &witnesses {
        let vi = (y - p).dot(&r);
        if vi > eps * scale {
            return fail(format!("variational inequality violated by {vi:e} at witness {y:?}"));
        }
    }
    Ok(())
}

fn lattice_around(p: &Vector, scale: f64) -> Vec<Vector> {
    let n = p.dim();
    let steps = [-1.0, -0.1, -1e-3, 0.0, 1e-3, 0.1, 1.0];
    let mut out = Vec::new();
    let total = steps.len().pow(n as u32);
    for mut code in 0..total {
        let mut y = p.clone();
        for i in 0..n {
            let s = steps[code % steps.len()];
            code /= steps.len();
            y = y.add_scaled(s * scale, &Vector::unit(n, i));
        }
        out.push(y);
    }
    out
}

/// Points `p ± s·t` for directions `t` orthogonal to each normal, which stay
/// on a boundary hyperplane through `p`.
fn tangent_witnesses(p: &Vector, normals: &[Vector], scale: f64) -> Vec<Vector> {
    let n = p.dim();
    let mut out = Vec::new();
    for a in normals {
        for i in 0..n {
            let e = Vector::unit(n, i);
            let t = e.add_scaled(-a.dot(&e) / a.norm_sq(), a);
            if t.norm() > 1e-6 {
                for s in [scale, -scale, 1e-3 * scale, -1e-3 * scale] {
                    out.push(p.add_scaled(s / t.norm(), &t));
                }
            }
        }
    }
    out
}

/// Sampled geodesic distance from `x` to a spherical polytope.
///
/// Points satisfying every half-sphere constraint are at distance zero.
/// Otherwise the boundary arcs are sampled on dyadic grids (so a larger
/// `samples` only adds points) along with the vertices. The result bounds
/// the true distance from above. `samples` below [`MIN_SPHERE_SAMPLES`] is
/// raised to it.
pub fn oracle_geodesic_distance_to_set(poly: &SphericalPolytope, x: &UnitVec3, samples: usize) -> f64 {
    if poly.normals().iter().all(|a| a.dot(x) <= 0.0) {
        return 0.0;
    }
    let samples = samples.max(MIN_SPHERE_SAMPLES);
    let mut best = poly.vertices().iter().map(|v| geodesic_distance(x, v)).fold(f64::INFINITY, f64::min);
    let edges = poly.edges();
    if edges.is_empty() {
        return best;
    }
    let per_edge = (samples / edges.len()).max(2).next_power_of_two();
    for e in edges {
        let (a, b) = (e.start().coords(), e.end().coords());
        for k in 0..=per_edge {
            let t = k as f64 / per_edge as f64;
            // slerp by angle; computed without the library's arc helpers
            let theta = dot(&a, &b).clamp(-1.0, 1.0).acos();
            let (wa, wb) = (((1.0 - t) * theta).sin(), (t * theta).sin());
            let c = [wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]];
            if let Ok(u) = UnitVec3::normalize(c) {
                best = best.min(geodesic_distance(x, &u));
            }
        }
    }
    best
}

//! The circumcentered-reflection operator and iteration drivers.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{circumcenter, distinct_points, midpoint};
use crate::sets::{reflect_through, ConeV, ConvexSet};
use crate::vector::{Tolerance, Vector};

pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// Which of `x`, `R_A x`, `R_B R_A x` coincided when the circumcenter was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CardinalityCase {
    /// All three coincide.
    One,
    /// `x = y ≠ z`.
    TwoXY,
    /// `y = z ≠ x`.
    TwoYZ,
    /// `x = z ≠ y`.
    TwoXZ,
    /// Three distinct points.
    Three,
}

impl CardinalityCase {
    pub fn classify(x: &Vector, y: &Vector, z: &Vector, tol: &Tolerance) -> Self {
        match distinct_points(&[x.clone(), y.clone(), z.clone()], tol).len() {
            1 => CardinalityCase::One,
            3 => CardinalityCase::Three,
            _ if tol.coincide(x, y) => CardinalityCase::TwoXY,
            _ if tol.coincide(y, z) => CardinalityCase::TwoYZ,
            _ => CardinalityCase::TwoXZ,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CardinalityCase::One => "One",
            CardinalityCase::TwoXY => "TwoXY",
            CardinalityCase::TwoYZ => "TwoYZ",
            CardinalityCase::TwoXZ => "TwoXZ",
            CardinalityCase::Three => "Three",
        }
    }
}

impl std::str::FromStr for CardinalityCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "One" => CardinalityCase::One,
            "TwoXY" => CardinalityCase::TwoXY,
            "TwoYZ" => CardinalityCase::TwoYZ,
            "TwoXZ" => CardinalityCase::TwoXZ,
            "Three" => CardinalityCase::Three,
            _ => return Err(Error::Trace(format!("unknown cardinality case {s:?}"))),
        })
    }
}

/// One application of an iteration map.
///
/// For CRM, `y = R_A x`, `z = R_B y` and `next = C(x, y, z)`. For the
/// product-space driver `x` and `next` are diagonal components while `y`
/// and `z` live in the doubled space. For MAP, `y = P_A x` and
/// `z = next = P_B y`. For Douglas–Rachford `x` is the governing point,
/// `shadow = P_A x`, and the distances refer to the shadow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrmStep {
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    pub next: Vector,
    pub case: Option<CardinalityCase>,
    pub dist_a: f64,
    pub dist_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shadow: Option<Vector>,
}

impl CrmStep {
    /// The point whose feasibility is monitored.
    pub fn monitored(&self) -> &Vector {
        self.shadow.as_ref().unwrap_or(&self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Feasible,
    MaxIters,
    OperatorUndefined,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Feasible => "Feasible",
            Termination::MaxIters => "MaxIters",
            Termination::OperatorUndefined => "OperatorUndefined",
        }
    }
}

/// Iterates `x₀ … x_N` as `steps[0..N].monitored()` followed by `final_point`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub steps: Vec<CrmStep>,
    pub terminated: Termination,
    pub iterations_used: usize,
    pub final_point: Vector,
    pub final_dist_a: f64,
    pub final_dist_b: f64,
}

impl IterationTrace {
    /// Monitored iterates `x₀, …, x_N` with their distances to A and B.
    pub fn iterates(&self) -> impl Iterator<Item = (&Vector, f64, f64)> {
        self.steps
            .iter()
            .map(|s| (s.monitored(), s.dist_a, s.dist_b))
            .chain(std::iter::once((&self.final_point, self.final_dist_a, self.final_dist_b)))
    }

    /// Checks the structural invariants a deserialized trace must satisfy.
    pub fn validate(&self) -> Result<()> {
        if self.steps.len() != self.iterations_used {
            return Err(Error::Trace(format!(
                "{} steps recorded but iterations_used = {}",
                self.steps.len(),
                self.iterations_used
            )));
        }
        let dim = self.final_point.dim();
        for (x, da, db) in self.iterates() {
            check_dim(dim, x.dim())?;
            if !(da >= 0.0 && db >= 0.0 && da.is_finite() && db.is_finite()) {
                return Err(Error::Trace("distances must be finite and nonnegative".into()));
            }
        }
        Ok(())
    }
}

/// `C_T(x) = C(x, R_A x, R_B R_A x)`.
pub fn crm_operator(a: &ConvexSet, b: &ConvexSet, x: &Vector, tol: &Tolerance) -> Result<CrmStep> {
    let pa = a.project(x, tol)?;
    let pb = b.project(x, tol)?;
    let y = reflect_through(&pa, x);
    let z = b.reflect(&y, tol)?;
    let case = CardinalityCase::classify(x, &y, &z, tol);
    let next = circumcenter(&[x.clone(), y.clone(), z.clone()], tol).map_err(|e| match e {
        Error::DegenerateConfiguration => Error::OperatorUndefined,
        e => e,
    })?;
    Ok(CrmStep { dist_a: x.distance(&pa), dist_b: x.distance(&pb), x: x.clone(), y, z, next, case: Some(case), shadow: None })
}

/// Whether `C_T(x) = 0` at `eps_feas`.
pub fn in_kernel_ct(a: &ConeV, b: &ConeV, x: &Vector, tol: &Tolerance) -> Result<bool> {
    let step = crm_operator(&ConvexSet::Cone(a.clone()), &ConvexSet::Cone(b.clone()), x, tol)?;
    Ok(step.next.norm() <= tol.eps_feas)
}

/// Feasibility threshold for the iterate following a point of norm `prev_norm`.
///
/// Pairs of cones are scale invariant, so the absolute tolerance is shrunk
/// with the iterates once they fall below unit norm; otherwise a sequence
/// converging to the apex would be declared feasible at a fixed small norm.
fn threshold(conic: bool, prev_norm: f64, tol: &Tolerance) -> f64 {
    if conic {
        tol.eps_feas * prev_norm.min(1.0)
    } else {
        tol.eps_feas
    }
}

fn check_inputs(a: &ConvexSet, b: &ConvexSet, x0: &Vector, max_iters: usize) -> Result<()> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), x0.dim())?;
    if max_iters == 0 {
        return Err(Error::InvalidInput("max_iters must be >= 1".into()));
    }
    Ok(())
}

/// Generic driver: `step` maps the current state to a recorded step and the
/// next state; `monitor` extracts the point tested for feasibility.
fn drive(
    a: &ConvexSet,
    b: &ConvexSet,
    x0: &Vector,
    tol: &Tolerance,
    max_iters: usize,
    monitor: impl Fn(&Vector) -> Result<Vector>,
    mut step: impl FnMut(&Vector, Vector, f64, f64) -> Result<Option<(CrmStep, Vector)>>,
) -> Result<IterationTrace> {
    check_inputs(a, b, x0, max_iters)?;
    let conic = a.is_conic() && b.is_conic();
    let mut steps = Vec::new();
    let mut state = x0.clone();
    let mut prev_norm = monitor(x0)?.norm();
    loop {
        let point = monitor(&state)?;
        let dist_a = a.distance(&point, tol)?;
        let dist_b = b.distance(&point, tol)?;
        let eps = threshold(conic, prev_norm, tol);
        let done = if dist_a <= eps && dist_b <= eps {
            Some(Termination::Feasible)
        } else if steps.len() == max_iters {
            Some(Termination::MaxIters)
        } else {
            None
        };
        if let Some(terminated) = done {
            return Ok(finish(steps, terminated, point, dist_a, dist_b));
        }
        prev_norm = point.norm();
        match step(&state, point.clone(), dist_a, dist_b) {
            Ok(Some((s, next_state))) => {
                steps.push(s);
                state = next_state;
            }
            Ok(None) => return Ok(finish(steps, Termination::OperatorUndefined, point, dist_a, dist_b)),
            Err(e) => return Err(e),
        }
    }
}

fn finish(steps: Vec<CrmStep>, terminated: Termination, point: Vector, dist_a: f64, dist_b: f64) -> IterationTrace {
    IterationTrace {
        iterations_used: steps.len(),
        steps,
        terminated,
        final_point: point,
        final_dist_a: dist_a,
        final_dist_b: dist_b,
    }
}

/// CRM iteration `x_{k+1} = C_T(x_k)` until both memberships hold.
///
/// A collinear triple of distinct points ends the trace with
/// [`Termination::OperatorUndefined`]; the partial trace is returned.
pub fn run_crm(a: &ConvexSet, b: &ConvexSet, x0: &Vector, tol: &Tolerance, max_iters: usize) -> Result<IterationTrace> {
    drive(a, b, x0, tol, max_iters, |x| Ok(x.clone()), |x, _, _, _| match crm_operator(a, b, x, tol) {
        Ok(s) => {
            let next = s.next.clone();
            Ok(Some((s, next)))
        }
        Err(Error::OperatorUndefined) => Ok(None),
        Err(e) => Err(e),
    })
}

/// CRM on the pair `X = {(x, x)}`, `Y = A × B` in the doubled space,
/// started from `(x₀, x₀)`.
///
/// Each step reflects through `Y` and then through `X`. Iterates stay on
/// the diagonal, and the trace records their common component.
pub fn run_crm_product_space(
    a: &ConvexSet,
    b: &ConvexSet,
    x0: &Vector,
    tol: &Tolerance,
    max_iters: usize,
) -> Result<IterationTrace> {
    let n = x0.dim();
    drive(a, b, x0, tol, max_iters, |x| Ok(x.clone()), |x, _, dist_a, dist_b| {
        let w = x.concat(x);
        let y = a.reflect(x, tol)?.concat(&b.reflect(x, tol)?);
        let avg = midpoint(&y.slice(0..n), &y.slice(n..2 * n));
        let z = reflect_through(&avg.concat(&avg), &y);
        let case = CardinalityCase::classify(&w, &y, &z, tol);
        let c = match circumcenter(&[w, y.clone(), z.clone()], tol) {
            Ok(c) => c,
            Err(Error::DegenerateConfiguration) => return Ok(None),
            Err(e) => return Err(e),
        };
        let next = midpoint(&c.slice(0..n), &c.slice(n..2 * n));
        let s = CrmStep { x: x.clone(), y, z, next: next.clone(), case: Some(case), dist_a, dist_b, shadow: None };
        Ok(Some((s, next)))
    })
}

/// Alternating projections `x_{k+1} = P_B P_A x_k`.
pub fn run_map(a: &ConvexSet, b: &ConvexSet, x0: &Vector, tol: &Tolerance, max_iters: usize) -> Result<IterationTrace> {
    drive(a, b, x0, tol, max_iters, |x| Ok(x.clone()), |x, _, dist_a, dist_b| {
        let y = a.project(x, tol)?;
        let z = b.project(&y, tol)?;
        let s = CrmStep { x: x.clone(), y, z: z.clone(), next: z.clone(), case: None, dist_a, dist_b, shadow: None };
        Ok(Some((s, z)))
    })
}

/// Douglas–Rachford `x_{k+1} = ½(x_k + R_B R_A x_k)`, monitored through the
/// shadow `P_A x_k`.
pub fn run_dr(a: &ConvexSet, b: &ConvexSet, x0: &Vector, tol: &Tolerance, max_iters: usize) -> Result<IterationTrace> {
    drive(a, b, x0, tol, max_iters, |x| a.project(x, tol), |x, shadow, dist_a, dist_b| {
        let y = reflect_through(&shadow, x);
        let z = b.reflect(&y, tol)?;
        let next = midpoint(x, &z);
        let s = CrmStep { x: x.clone(), y, z, next: next.clone(), case: None, dist_a, dist_b, shadow: Some(shadow) };
        Ok(Some((s, next)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{LinearSubspace, Ray};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn ray(d: [f64; 2]) -> ConvexSet {
        Ray::new(Vector::from(d)).unwrap().into()
    }

    fn axis(i: usize) -> ConvexSet {
        LinearSubspace::new(2, vec![Vector::unit(2, i)], &tol()).unwrap().into()
    }

    fn cone(gens: &[[f64; 3]]) -> ConvexSet {
        ConeV::new(gens.iter().map(|g| Vector::from(*g)).collect()).unwrap().into()
    }

    fn example() -> (ConvexSet, ConvexSet) {
        (
            cone(&[[3.0, 0.0, 3.0], [0.0, 1.0, 3.0], [0.0, -1.0, 3.0], [-3.0, 0.0, -2.0]]),
            cone(&[[1.0, 3.0, 0.0], [1.0, -3.0, 0.0], [-3.0, 0.0, -1.0]]),
        )
    }

    #[test]
    fn two_rays_from_below() {
        let s = crm_operator(&ray([1.0, 0.0]), &ray([0.0, 1.0]), &Vector::from([0.0, -1.0]), &tol()).unwrap();
        assert_eq!(s.y, Vector::from([0.0, 1.0]));
        assert_eq!(s.z, Vector::from([0.0, 1.0]));
        assert_eq!(s.next, Vector::from([0.0, 0.0]));
        assert_eq!(s.case, Some(CardinalityCase::TwoYZ));
    }

    #[test]
    fn fixed_point_in_intersection() {
        let a = cone(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let x = Vector::from([0.2, 0.3, 0.4]);
        let s = crm_operator(&a, &a, &x, &tol()).unwrap();
        assert_eq!(s.case, Some(CardinalityCase::One));
        assert!(s.next.distance(&x) < 1e-15);
    }

    #[test]
    fn example_first_step_is_three_point_case() {
        let (a, b) = example();
        let s = crm_operator(&a, &b, &Vector::from([1.0, 0.5, 0.0]), &tol()).unwrap();
        assert_eq!(s.case, Some(CardinalityCase::Three));
        // exact values: R_A x = (0, −0.5, 1), P_B(R_A x) = (0.15, −0.45, 0)
        assert!(s.y.distance(&Vector::from([0.0, -0.5, 1.0])) < 1e-12);
        assert!(s.z.distance(&Vector::from([0.3, -0.4, -1.0])) < 1e-12);
        for p in [&s.x, &s.y, &s.z] {
            assert!((s.next.distance(p) - s.next.distance(&s.x)).abs() < 1e-12);
        }
        assert!((s.x.norm() - s.z.norm()).abs() < 1e-12);
    }

    #[test]
    fn example_never_becomes_feasible() {
        let (a, b) = example();
        let trace = run_crm(&a, &b, &Vector::from([1.0, 0.5, 0.0]), &tol(), 100).unwrap();
        assert_eq!(trace.terminated, Termination::MaxIters);
        assert_eq!(trace.iterations_used, 100);
        let norms: Vec<f64> = trace.iterates().map(|(x, _, _)| x.norm()).collect();
        assert!(norms.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn quadrant_cones_three_steps() {
        let a: ConvexSet = ConeV::new(vec![Vector::from([1.0, 0.0]), Vector::from([1.0, 1.0])]).unwrap().into();
        let b: ConvexSet = ConeV::new(vec![Vector::from([0.0, 1.0]), Vector::from([1.0, 1.0])]).unwrap().into();
        for x in [[-1.0, 0.3], [2.0, -5.0], [0.1, 3.0], [-4.0, -4.0]] {
            let t = run_crm(&a, &b, &Vector::from(x), &tol(), 100).unwrap();
            assert_eq!(t.terminated, Termination::Feasible, "{x:?}");
            assert!(t.iterations_used <= 3, "{x:?}: {}", t.iterations_used);
        }
    }

    #[test]
    fn zero_iterations_from_feasible_start() {
        let (a, b) = (axis(0), axis(0));
        let x0 = Vector::from([3.0, 0.0]);
        for run in [run_crm, run_crm_product_space, run_map, run_dr] {
            let t = run(&a, &b, &x0, &tol(), 10).unwrap();
            assert_eq!((t.terminated, t.iterations_used), (Termination::Feasible, 0));
        }
    }

    #[test]
    fn map_on_axes() {
        let t = run_map(&axis(0), &axis(1), &Vector::from([1.0, 1.0]), &tol(), 10).unwrap();
        assert_eq!(t.iterations_used, 1);
        assert_eq!(t.final_point, Vector::from([0.0, 0.0]));
    }

    #[test]
    fn dr_on_axes() {
        let t = run_dr(&axis(0), &axis(1), &Vector::from([1.0, 1.0]), &tol(), 10).unwrap();
        // R_A(1,1) = (1,−1), R_B(1,−1) = (−1,−1), average with (1,1) is 0
        let s = &t.steps[0];
        assert_eq!(s.y, Vector::from([1.0, -1.0]));
        assert_eq!(s.z, Vector::from([-1.0, -1.0]));
        assert_eq!(s.next, Vector::from([0.0, 0.0]));
        assert_eq!(s.shadow, Some(Vector::from([1.0, 0.0])));
        assert_eq!(t.terminated, Termination::Feasible);
    }

    #[test]
    fn product_space_stays_on_diagonal() {
        let (a, b) = example();
        let t = run_crm_product_space(&a, &b, &Vector::from([1.0, 0.5, 0.0]), &tol(), 50).unwrap();
        assert!(t.iterations_used > 0);
        let norms: Vec<f64> = t.iterates().map(|(x, _, _)| x.norm()).collect();
        assert!(norms.last().unwrap() < &norms[0]);
    }

    #[test]
    fn kernel_membership() {
        let a = ConeV::new(vec![Vector::from([1.0, 0.0, 0.0]), Vector::from([0.0, 1.0, 0.0])]).unwrap();
        let b = ConeV::new(vec![Vector::from([1.0, 1.0, 0.0]), Vector::from([0.0, 0.0, 1.0])]).unwrap();
        let t = tol();
        let x = Vector::from([-1.0, -1.0, -1.0]);
        assert!(a.in_polar_cone(&x, &t).unwrap() && b.in_polar_cone(&x, &t).unwrap());
        assert!(in_kernel_ct(&a, &b, &x, &t).unwrap());
        assert!(in_kernel_ct(&a, &b, &Vector::zeros(3), &t).unwrap());
        assert!(!in_kernel_ct(&a, &b, &Vector::from([1.0, 1.0, 0.0]), &t).unwrap());
    }

    #[test]
    fn operator_undefined_is_reported_with_partial_trace() {
        // two parallel lines: no intersection, collinear triples
        let a: ConvexSet = crate::sets::Polyhedron::new(vec![
            crate::sets::HalfSpace::new(Vector::from([0.0, 1.0]), 0.0).unwrap(),
            crate::sets::HalfSpace::new(Vector::from([0.0, -1.0]), 0.0).unwrap(),
        ])
        .unwrap()
        .into();
        let b: ConvexSet = crate::sets::Polyhedron::new(vec![
            crate::sets::HalfSpace::new(Vector::from([0.0, 1.0]), 1.0).unwrap(),
            crate::sets::HalfSpace::new(Vector::from([0.0, -1.0]), -1.0).unwrap(),
        ])
        .unwrap()
        .into();
        let t = run_crm(&a, &b, &Vector::from([0.0, 0.5]), &tol(), 10).unwrap();
        assert_eq!(t.terminated, Termination::OperatorUndefined);
    }

    #[test]
    fn rejects_zero_budget_and_mismatched_dims() {
        let a = axis(0);
        assert!(run_crm(&a, &a, &Vector::from([1.0, 0.0]), &tol(), 0).is_err());
        assert!(matches!(run_crm(&a, &a, &Vector::from([1.0]), &tol(), 5), Err(Error::DimensionMismatch { .. })));
    }
}

//! Named feasibility instances: a small registry, wedge lifting, and seeded
//! random generators.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::crm::DEFAULT_MAX_ITERS;
use crate::error::{check_dim, Error, Result};
use crate::sets::{ConeV, ConvexSet, HalfSpace, LinearSubspace, Polyhedron};
use crate::sphere::{ConvergenceZone, UnitVec3};
use crate::vector::{Tolerance, Vector};

/// What a run of the scenario is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub finite: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario")]
pub struct Scenario {
    pub name: String,
    pub dim: usize,
    pub set_a: ConvexSet,
    pub set_b: ConvexSet,
    pub initial_points: Vec<Vector>,
    pub tol: Tolerance,
    pub max_iters: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expectation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    dim: usize,
    set_a: ConvexSet,
    set_b: ConvexSet,
    initial_points: Vec<Vector>,
    #[serde(default)]
    tol: Tolerance,
    #[serde(default = "default_max_iters")]
    max_iters: usize,
    #[serde(default)]
    expected: Option<Expectation>,
}

fn default_max_iters() -> usize {
    DEFAULT_MAX_ITERS
}

impl TryFrom<RawScenario> for Scenario {
    type Error = Error;
    fn try_from(r: RawScenario) -> Result<Self> {
        let s = Scenario {
            name: r.name,
            dim: r.dim,
            set_a: r.set_a,
            set_b: r.set_b,
            initial_points: r.initial_points,
            tol: r.tol,
            max_iters: r.max_iters,
            expected: r.expected,
        };
        s.validate()?;
        Ok(s)
    }
}

/// Names accepted by [`Scenario::builtin`] besides the seeded generators.
pub const REGISTRY: &[&str] = &["counterexample", "r2_cones", "axes", "wedge_r4", "r3_zone"];

/// Seeded generators, addressable as `<name>:<seed>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    RandomConePairR2,
    RandomPolyhedraR2,
    RandomProperConePairR3,
}

impl Generator {
    pub const ALL: [Generator; 3] =
        [Generator::RandomConePairR2, Generator::RandomPolyhedraR2, Generator::RandomProperConePairR3];

    pub fn name(self) -> &'static str {
        match self {
            Generator::RandomConePairR2 => "random_cone_pair_r2",
            Generator::RandomPolyhedraR2 => "random_polyhedra_r2",
            Generator::RandomProperConePairR3 => "random_proper_cone_pair_r3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn generate(self, seed: u64) -> Scenario {
        match self {
            Generator::RandomConePairR2 => random_cone_pair_r2(seed),
            Generator::RandomPolyhedraR2 => random_polyhedra_r2(seed),
            Generator::RandomProperConePairR3 => random_proper_cone_pair_r3(seed),
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Scenario("name must be nonempty".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Scenario("max_iters must be >= 1".into()));
        }
        if self.initial_points.is_empty() {
            return Err(Error::Scenario("at least one initial point is required".into()));
        }
        check_dim(self.dim, self.set_a.dim())?;
        check_dim(self.dim, self.set_b.dim())?;
        for p in &self.initial_points {
            check_dim(self.dim, p.dim())?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// A registry entry or a seeded generator written `<generator>:<seed>`.
    pub fn builtin(name: &str) -> Option<Scenario> {
        if let Some((gen, seed)) = name.split_once(':') {
            let seed = seed.parse().ok()?;
            return Generator::from_name(gen).map(|g| g.generate(seed));
        }
        Some(match name {
            "counterexample" => example_counterexample(),
            "r2_cones" => r2_cones(),
            "axes" => axes(),
            "wedge_r4" => wedge_r4(),
            "r3_zone" => r3_zone(),
            _ => return None,
        })
    }

    /// Resolves an existing JSON file path, then a builtin name, then
    /// `<dir>/<name>.json` for each search directory in order.
    pub fn resolve(spec: &str, search_dirs: &[&Path]) -> Result<Scenario> {
        let direct = Path::new(spec);
        if direct.is_file() {
            return Self::load(direct);
        }
        if let Some(s) = Self::builtin(spec) {
            return Ok(s);
        }
        for dir in search_dirs {
            let candidate = dir.join(format!("{spec}.json"));
            if candidate.is_file() {
                return Self::load(&candidate);
            }
        }
        Err(Error::Scenario(format!("unknown scenario {spec:?}")))
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Both sets as cones, when they are.
    pub fn cone_pair(&self) -> Option<(&ConeV, &ConeV)> {
        match (&self.set_a, &self.set_b) {
            (ConvexSet::Cone(a), ConvexSet::Cone(b)) => Some((a, b)),
            _ => None,
        }
    }
}

fn cone_of(gens: &[&[f64]]) -> ConeV {
    ConeV::new(gens.iter().map(|g| Vector::new(g.to_vec()).expect("finite literal")).collect())
        .expect("valid literal cone")
}

fn halfspace(normal: &[f64], offset: f64) -> HalfSpace {
    HalfSpace::new(Vector::new(normal.to_vec()).expect("finite literal"), offset).expect("nonzero normal")
}

/// The pair of cones in R³ on which CRM fails to terminate.
pub fn example_counterexample() -> Scenario {
    let a = cone_of(&[&[3.0, 0.0, 3.0], &[0.0, 1.0, 3.0], &[0.0, -1.0, 3.0], &[-3.0, 0.0, -2.0]]);
    let b = cone_of(&[&[1.0, 3.0, 0.0], &[1.0, -3.0, 0.0], &[-3.0, 0.0, -1.0]]);
    Scenario {
        name: "counterexample".into(),
        dim: 3,
        set_a: a.into(),
        set_b: b.into(),
        initial_points: vec![
            Vector::from([1.0, 0.5, 0.0]),
            Vector::from([2.0, -0.7, 0.0]),
            Vector::from([1.0, 0.9, 0.0]),
        ],
        tol: Tolerance::default(),
        max_iters: 100,
        expected: Some(Expectation { finite: false, max_steps: None }),
    }
}

fn r2_cones() -> Scenario {
    Scenario {
        name: "r2_cones".into(),
        dim: 2,
        set_a: cone_of(&[&[1.0, 0.0], &[1.0, 1.0]]).into(),
        set_b: cone_of(&[&[0.0, 1.0], &[1.0, 1.0]]).into(),
        initial_points: vec![Vector::from([-1.0, 0.3]), Vector::from([2.0, -5.0]), Vector::from([0.1, 3.0])],
        tol: Tolerance::default(),
        max_iters: 100,
        expected: Some(Expectation { finite: true, max_steps: Some(3) }),
    }
}

fn axes() -> Scenario {
    let t = Tolerance::default();
    let axis = |i| LinearSubspace::new(2, vec![Vector::unit(2, i)], &t).expect("unit basis");
    Scenario {
        name: "axes".into(),
        dim: 2,
        set_a: axis(0).into(),
        set_b: axis(1).into(),
        initial_points: vec![Vector::from([1.0, 1.0])],
        tol: t,
        max_iters: 100,
        expected: Some(Expectation { finite: true, max_steps: None }),
    }
}

fn wedge_r4() -> Scenario {
    let a0 = Polyhedron::new(vec![halfspace(&[-1.0, 0.0], 0.0), halfspace(&[1.0, -2.0], 1.0)]).expect("literal");
    let b0 = Polyhedron::new(vec![halfspace(&[0.0, -1.0], 0.5), halfspace(&[-1.0, 1.0], 2.0)]).expect("literal");
    let a = make_wedge_direct_sum(&a0, 2, 4).expect("dims");
    let b = make_wedge_direct_sum(&b0, 2, 4).expect("dims");
    Scenario {
        name: "wedge_r4".into(),
        dim: 4,
        set_a: a.into(),
        set_b: b.into(),
        initial_points: vec![Vector::from([3.0, -2.0, 0.7, -1.3]), Vector::from([-4.0, 1.0, 2.0, 0.0])],
        tol: Tolerance::default(),
        max_iters: DEFAULT_MAX_ITERS,
        expected: Some(Expectation { finite: true, max_steps: None }),
    }
}

fn r3_zone() -> Scenario {
    let a = cone_of(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
    let b = cone_of(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 1.0, -0.3]]);
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let starts = zone_starts(&a, &b, 5, &mut rng, &tol).expect("octant pair is proper with nonempty intersection");
    Scenario {
        name: "r3_zone".into(),
        dim: 3,
        set_a: a.into(),
        set_b: b.into(),
        initial_points: starts,
        tol,
        max_iters: 100,
        expected: Some(Expectation { finite: true, max_steps: Some(3) }),
    }
}

/// Embeds a planar polyhedron as `A₀ ⊕ M` with `M = span{e₃, …, e_ambient}`.
pub fn make_wedge_direct_sum(poly2d: &Polyhedron, subspace_dim: usize, ambient_dim: usize) -> Result<Polyhedron> {
    check_dim(2, poly2d.dim())?;
    if ambient_dim < 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: ambient_dim });
    }
    check_dim(ambient_dim - 2, subspace_dim)?;
    let lifted = poly2d
        .halfspaces()
        .iter()
        .map(|h| {
            let mut n = h.normal().coords().to_vec();
            n.resize(ambient_dim, 0.0);
            HalfSpace::new(Vector::new(n)?, h.offset())
        })
        .collect::<Result<_>>()?;
    Polyhedron::new(lifted)
}

/// `(x, tail)`: a planar point extended by coordinates in `M`.
pub fn lift_point(x: &Vector, tail: &[f64]) -> Result<Vector> {
    Ok(x.concat(&Vector::new(tail.to_vec())?))
}

fn unit2(angle: f64) -> Vector {
    Vector::from([angle.cos(), angle.sin()])
}

/// Random pair of cones in R² (rays, wedges, half-planes, lines or the
/// whole plane) with ten random starts in `[-5, 5]²`.
pub fn random_cone_pair_r2(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cone = |rng: &mut ChaCha8Rng| {
        let a0 = rng.gen_range(0.0..TAU);
        let angles: Vec<f64> = match rng.gen_range(0..10) {
            0 | 1 => vec![a0],
            2 => vec![a0, a0 + FRAC_PI_2, a0 + PI],
            3 => vec![a0, a0 + PI],
            4 if rng.gen_bool(0.5) => vec![a0, a0 + TAU / 3.0, a0 + 2.0 * TAU / 3.0],
            _ => vec![a0, a0 + rng.gen_range(0.05..PI - 0.05)],
        };
        let gens = angles.iter().map(|&t| unit2(t).scaled(rng.gen_range(0.5..2.0))).collect();
        ConeV::new(gens).expect("nonzero generators")
    };
    let a = cone(&mut rng);
    let b = cone(&mut rng);
    let initial_points =
        (0..10).map(|_| Vector::from([rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])).collect();
    Scenario {
        name: format!("random_cone_pair_r2:{seed}"),
        dim: 2,
        set_a: a.into(),
        set_b: b.into(),
        initial_points,
        tol: Tolerance::default(),
        max_iters: 100,
        expected: Some(Expectation { finite: true, max_steps: Some(3) }),
    }
}

/// Random pair of planar polyhedra sharing a feasible point in `[-1, 1]²`.
///
/// Each set has one to four constraints. No two normals across both sets
/// are within 5° of parallel, which keeps iteration counts modest.
pub fn random_polyhedra_r2(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Vector::from([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
    let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let min_sep = 5f64.to_radians().cos();
    let normals: Vec<Vector> = loop {
        let ns: Vec<Vector> = (0..na + nb).map(|_| unit2(rng.gen_range(0.0..TAU))).collect();
        let separated = ns.iter().enumerate().all(|(i, u)| ns[i + 1..].iter().all(|v| u.dot(v).abs() < min_sep));
        if separated {
            break ns;
        }
    };
    let poly = |ns: &[Vector], rng: &mut ChaCha8Rng| {
        let hs = ns
            .iter()
            .map(|n| {
                let slack = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..1.0) };
                HalfSpace::new(n.clone(), n.dot(&p) + slack).expect("unit normal")
            })
            .collect();
        Polyhedron::new(hs).expect("nonempty constraint list")
    };
    let a = poly(&normals[..na], &mut rng);
    let b = poly(&normals[na..], &mut rng);
    let initial_points =
        (0..3).map(|_| Vector::from([rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])).collect();
    Scenario {
        name: format!("random_polyhedra_r2:{seed}"),
        dim: 2,
        set_a: a.into(),
        set_b: b.into(),
        initial_points,
        tol: Tolerance::default(),
        max_iters: DEFAULT_MAX_ITERS,
        expected: Some(Expectation { finite: true, max_steps: None }),
    }
}

/// Random pair of proper cones in R³ around a common interior axis, with
/// ten starts inside the finite-convergence zone.
pub fn random_proper_cone_pair_r3(seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    let axis = random_unit3(&mut rng);
    let (e1, e2) = tangent_frame(&axis);
    let cone = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(3..=6);
        let azimuths = loop {
            let mut az: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
            az.sort_by(f64::total_cmp);
            let wrap = az[0] + TAU - az[k - 1];
            let widest = az.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
            if widest < 0.95 * PI {
                break az;
            }
        };
        let gens = azimuths
            .iter()
            .map(|&phi| {
                let theta: f64 = rng.gen_range(0.2..1.2);
                let dir: Vec<f64> = (0..3)
                    .map(|i| theta.cos() * axis[i] + theta.sin() * (phi.cos() * e1[i] + phi.sin() * e2[i]))
                    .collect();
                Vector::new(dir).expect("finite").normalized().expect("unit")
            })
            .collect();
        ConeV::new(gens).expect("nonzero generators")
    };
    let a = cone(&mut rng);
    let b = cone(&mut rng);
    let initial_points =
        zone_starts(&a, &b, 10, &mut rng, &tol).expect("cones share an interior axis and are pointed");
    Scenario {
        name: format!("random_proper_cone_pair_r3:{seed}"),
        dim: 3,
        set_a: a.into(),
        set_b: b.into(),
        initial_points,
        tol,
        max_iters: 100,
        expected: Some(Expectation { finite: true, max_steps: Some(3) }),
    }
}

fn random_unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (0.1..=1.0).contains(&n) {
            break [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn tangent_frame(u: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = crate::sphere::cross(*u, helper);
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    let e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    (e1, crate::sphere::cross(*u, e1))
}

/// Starts in `cone(D)`: random points of `A′ ∩ B′` moved by a geodesic
/// distance below the zone radius, then scaled by a factor in `[0.5, 2]`.
pub fn zone_starts(a: &ConeV, b: &ConeV, count: usize, rng: &mut impl Rng, tol: &Tolerance) -> Result<Vec<Vector>> {
    let zone = ConvergenceZone::new(a, b, tol)?;
    let verts = zone.intersection.vertices();
    (0..count)
        .map(|_| {
            let mut s = [0.0; 3];
            for v in verts {
                let w: f64 = rng.gen_range(0.0..1.0);
                for (si, vi) in s.iter_mut().zip(v.coords()) {
                    *si += w * vi;
                }
            }
            let base = UnitVec3::normalize(s).unwrap_or(verts[0]);
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let angle = rng.gen_range(0.0..1.0) * zone.radius;
            let moved = base.rotate_toward(dir, angle).unwrap_or(base);
            Ok(moved.to_vector().scaled(rng.gen_range(0.5..2.0)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_generators_and_default_start() {
        let s = example_counterexample();
        let (a, b) = s.cone_pair().unwrap();
        assert_eq!(a.generators()[3], Vector::from([-3.0, 0.0, -2.0]));
        assert_eq!(b.generators()[2], Vector::from([-3.0, 0.0, -1.0]));
        assert_eq!(s.initial_points[0], Vector::from([1.0, 0.5, 0.0]));
        for p in &s.initial_points {
            assert!(p[2] == 0.0 && 0.0 < p[1].abs() && p[1].abs() < p[0]);
        }
        assert_eq!(s.expected, Some(Expectation { finite: false, max_steps: None }));
    }

    #[test]
    fn wedge_lifting() {
        let p = Polyhedron::new(vec![halfspace(&[1.0, 0.0], 0.0)]).unwrap();
        let w = make_wedge_direct_sum(&p, 1, 3).unwrap();
        assert_eq!(w.halfspaces()[0].normal(), &Vector::from([1.0, 0.0, 0.0]));

        let q = Polyhedron::new(vec![halfspace(&[-1.0, 0.0], 0.0), halfspace(&[0.0, -1.0], 0.0)]).unwrap();
        let w = make_wedge_direct_sum(&q, 2, 4).unwrap();
        assert_eq!(w.halfspaces()[1].normal(), &Vector::from([0.0, -1.0, 0.0, 0.0]));

        assert!(matches!(make_wedge_direct_sum(&q, 1, 4), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(make_wedge_direct_sum(&q, 0, 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(make_wedge_direct_sum(&w, 2, 4), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn generators_are_deterministic() {
        for g in Generator::ALL {
            assert_eq!(g.generate(0), g.generate(0));
            assert_ne!(g.generate(0), g.generate(1));
        }
    }

    #[test]
    fn registry_round_trips_through_json() {
        for name in REGISTRY.iter().copied().chain(["random_proper_cone_pair_r3:4", "random_polyhedra_r2:9"]) {
            let s = Scenario::builtin(name).unwrap();
            let back = Scenario::from_json(&s.to_json()).unwrap();
            assert_eq!(back, s, "{name}");
        }
        assert!(Scenario::builtin("nope").is_none());
        assert!(Scenario::builtin("random_cone_pair_r2:x").is_none());
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let mut s = r2_cones();
        s.initial_points.push(Vector::from([1.0, 2.0, 3.0]));
        assert!(Scenario::from_json(&s.to_json()).is_err());
        let mut s = r2_cones();
        s.max_iters = 0;
        assert!(Scenario::from_json(&s.to_json()).is_err());
        assert!(Scenario::from_json("{}").is_err());
    }

    #[test]
    fn resolve_prefers_files_then_registry_then_dirs() {
        let dir = std::env::temp_dir().join(format!("circumfeas-resolve-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut s = axes();
        s.name = "custom".into();
        std::fs::write(dir.join("custom.json"), s.to_json()).unwrap();
        assert_eq!(Scenario::resolve("custom", &[dir.as_path()]).unwrap(), s);
        assert_eq!(Scenario::resolve(dir.join("custom.json").to_str().unwrap(), &[]).unwrap(), s);
        assert_eq!(Scenario::resolve("axes", &[dir.as_path()]).unwrap().name, "axes");
        assert!(Scenario::resolve("missing", &[dir.as_path()]).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

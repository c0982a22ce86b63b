use circumfeas::scenario::{random_cone_pair_r2, random_polyhedra_r2, random_proper_cone_pair_r3, Scenario};
use circumfeas::sphere::{geodesic_distance, sphere_center, UnitVec3};
use circumfeas::{circumcenter, crm_operator, CardinalityCase, ConeV, ConvexSet, HalfSpace, Polyhedron, Tolerance, Vector};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn vec_n(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-5.0..5.0f64, n).prop_map(|c| Vector::new(c).unwrap())
}

fn nonzero_vec_n(n: usize) -> impl Strategy<Value = Vector> {
    vec_n(n).prop_filter("nonzero", |v| v.norm() > 0.1)
}

fn cone(n: usize) -> impl Strategy<Value = ConvexSet> {
    prop::collection::vec(nonzero_vec_n(n), 1..5).prop_map(|g| ConeV::new(g).unwrap().into())
}

fn polyhedron(n: usize) -> impl Strategy<Value = ConvexSet> {
    (vec_n(n), prop::collection::vec((nonzero_vec_n(n), 0.0..2.0f64), 1..5)).prop_map(|(p, hs)| {
        let hs = hs.into_iter().map(|(a, s)| { let b = a.dot(&p) + s; HalfSpace::new(a, b).unwrap() }).collect();
        Polyhedron::new(hs).unwrap().into()
    })
}

fn set_and_points(n: usize) -> impl Strategy<Value = (ConvexSet, Vector, Vector)> {
    (prop_oneof![cone(n), polyhedron(n)], vec_n(n), vec_n(n))
}

fn unit() -> impl Strategy<Value = UnitVec3> {
    nonzero_vec_n(3).prop_map(|v| UnitVec3::from_vector(&v).unwrap())
}

proptest! {
    #[test]
    fn circumcenter_is_equidistant_and_symmetric(
        pts in prop::collection::vec(vec_n(3), 3),
    ) {
        let t = tol();
        let Ok(c) = circumcenter(&pts, &t) else { return Ok(()) };
        let r = c.distance(&pts[0]);
        let scale = pts.iter().map(Vector::norm).fold(1.0, f64::max);
        for p in &pts[1..] {
            prop_assert!((c.distance(p) - r).abs() <= 1e-7 * scale.max(r));
        }
        let swapped = vec![pts[2].clone(), pts[0].clone(), pts[1].clone()];
        let c2 = circumcenter(&swapped, &t).unwrap();
        prop_assert!(c.distance(&c2) <= 1e-7 * scale.max(r));
    }

    #[test]
    fn circumcenter_lies_in_affine_hull(p in vec_n(3), u in nonzero_vec_n(3), v in nonzero_vec_n(3), s in 0.1..2.0f64) {
        // three points in a plane through p spanned by u, v
        let pts = vec![p.clone(), p.add_scaled(s, &u), p.add_scaled(1.0, &v)];
        let t = tol();
        let Ok(c) = circumcenter(&pts, &t) else { return Ok(()) };
        let n = [
            u.coords()[1] * v.coords()[2] - u.coords()[2] * v.coords()[1],
            u.coords()[2] * v.coords()[0] - u.coords()[0] * v.coords()[2],
            u.coords()[0] * v.coords()[1] - u.coords()[1] * v.coords()[0],
        ];
        let nn = Vector::from(n);
        prop_assume!(nn.norm() > 1e-3);
        let off = (&c - &p).dot(&nn) / nn.norm();
        prop_assert!(off.abs() <= 1e-6 * c.norm().max(1.0));
    }

    #[test]
    fn projection_is_idempotent_and_nonexpansive((set, x, y) in set_and_points(3)) {
        let t = tol();
        let px = set.project(&x, &t).unwrap();
        let py = set.project(&y, &t).unwrap();
        prop_assert!(set.project(&px, &t).unwrap().distance(&px) <= 1e-9);
        prop_assert!(px.distance(&py) <= x.distance(&y) + 1e-9);
        prop_assert!(set.membership(&px, &t).unwrap());
    }

    #[test]
    fn cone_projection_is_orthogonal_and_reflection_preserves_norm(c in cone(3), x in vec_n(3)) {
        let t = tol();
        let p = c.project(&x, &t).unwrap();
        prop_assert!(p.dot(&(&x - &p)).abs() <= 1e-9);
        prop_assert!((c.reflect(&x, &t).unwrap().norm() - x.norm()).abs() <= 1e-9);
    }

    #[test]
    fn crm_is_positively_homogeneous_on_cones(a in cone(3), b in cone(3), x in vec_n(3), lam in 0.1..10.0f64) {
        let t = tol();
        let s1 = crm_operator(&a, &b, &x, &t);
        let s2 = crm_operator(&a, &b, &x.scaled(lam), &t);
        if let (Ok(s1), Ok(s2)) = (s1, s2) {
            prop_assert!(s2.next.distance(&s1.next.scaled(lam)) <= 1e-8 * lam.max(1.0) * x.norm().max(1.0));
        }
    }

    #[test]
    fn crm_case_matches_point_coincidences(a in polyhedron(2), b in polyhedron(2), x in vec_n(2)) {
        let t = tol();
        let Ok(step) = crm_operator(&a, &b, &x, &t) else { return Ok(()) };
        prop_assert_eq!(step.case, Some(CardinalityCase::classify(&step.x, &step.y, &step.z, &t)));
        if step.case == Some(CardinalityCase::One) {
            prop_assert_eq!(&step.next, &x);
        }
        let r = step.next.distance(&step.x);
        prop_assert!((step.next.distance(&step.y) - r).abs() <= 1e-7 * r.max(1.0));
        prop_assert!((step.next.distance(&step.z) - r).abs() <= 1e-7 * r.max(1.0));
    }

    #[test]
    fn geodesic_distance_is_a_metric(x in unit(), y in unit(), z in unit()) {
        let (dxy, dyz, dxz) = (geodesic_distance(&x, &y), geodesic_distance(&y, &z), geodesic_distance(&x, &z));
        prop_assert!((0.0..=std::f64::consts::PI).contains(&dxy));
        prop_assert_eq!(geodesic_distance(&x, &x), 0.0);
        prop_assert!((dxy - geodesic_distance(&y, &x)).abs() <= 1e-15);
        prop_assert!(dxz <= dxy + dyz + 1e-12);
    }

    #[test]
    fn sphere_center_is_equidistant(x in unit(), y in unit(), z in unit()) {
        let t = tol();
        let Ok(c) = sphere_center(&x, &y, &z, &t) else { return Ok(()) };
        let r = geodesic_distance(&c, &x);
        prop_assert!((geodesic_distance(&c, &y) - r).abs() <= 1e-7);
        prop_assert!((geodesic_distance(&c, &z) - r).abs() <= 1e-7);
    }

    #[test]
    fn generated_scenarios_round_trip_through_json(seed in any::<u64>(), which in 0..3usize) {
        let s = match which {
            0 => random_cone_pair_r2(seed),
            1 => random_polyhedra_r2(seed),
            _ => random_proper_cone_pair_r3(seed),
        };
        let back = Scenario::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }
}

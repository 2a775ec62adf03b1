//! Randomized properties of the body algebra.

use convexity::{ConvexBody, Direction};
use proptest::prelude::*;

fn polytope(dim: usize) -> impl Strategy<Value = ConvexBody> {
    prop::collection::vec(prop::collection::vec(-2.0f64..2.0, dim), 1..7)
        .prop_map(|v| ConvexBody::vpolytope(v).unwrap())
}

fn ball(dim: usize) -> impl Strategy<Value = ConvexBody> {
    (prop::collection::vec(-1.0f64..1.0, dim), 0.1f64..2.0)
        .prop_map(move |(c, r)| ConvexBody::ball(dim, c, r).unwrap())
}

fn body(dim: usize) -> impl Strategy<Value = ConvexBody> {
    let leaf = prop_oneof![polytope(dim), ball(dim)];
    leaf.prop_recursive(2, 4, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| ConvexBody::sum(a, b).unwrap())
    })
}

fn direction(dim: usize) -> impl Strategy<Value = Direction> {
    prop::collection::vec(-1.0f64..1.0, dim)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-4)
        .prop_map(Direction::new)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_additive(a in body(3), b in body(3), u in direction(3)) {
        let s = ConvexBody::sum(a.clone(), b.clone()).unwrap();
        let lhs = s.support_value(&u).unwrap();
        let rhs = a.support_value(&u).unwrap() + b.support_value(&u).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn exposed_face_attains_support(c in body(3), u in direction(3)) {
        let h = c.support_value(&u).unwrap();
        let face = c.exposed_face(&u).unwrap();
        for p in face.sample_points(12, 1) {
            prop_assert!((dot(&p, &u.0) - h).abs() <= 1e-9 * (1.0 + h.abs()));
            prop_assert!(c.contains(&p, 1e-8).unwrap());
        }
    }

    #[test]
    fn face_of_face_stays_on_both_hyperplanes(c in body(3), u in direction(3), v in direction(3)) {
        let f = c.exposed_face(&u).unwrap();
        let g = f.exposed_face(&v).unwrap();
        let hu = c.support_value(&u).unwrap();
        let hv = f.support_value(&v).unwrap();
        for p in g.sample_points(8, 2) {
            prop_assert!((dot(&p, &u.0) - hu).abs() <= 1e-9 * (1.0 + hu.abs()));
            prop_assert!((dot(&p, &v.0) - hv).abs() <= 1e-9 * (1.0 + hv.abs()));
        }
        prop_assert!(g.body_dim() <= f.body_dim());
    }

    #[test]
    fn faces_do_not_grow(c in body(4), u in direction(4)) {
        let f = c.exposed_face(&u).unwrap();
        prop_assert!(f.body_dim() <= c.body_dim());
        // A face of full dimension means the direction is normal to the hull.
        if f.body_dim() == c.body_dim() {
            let w = c.support_value(&u).unwrap() + c.support_value(&Direction::new(u.0.iter().map(|x| -x).collect::<Vec<_>>())).unwrap();
            prop_assert!(w.abs() <= 1e-9 * (1.0 + c.support_value(&u).unwrap().abs()));
        }
    }

    #[test]
    fn json_round_trip(c in body(2)) {
        let back = ConvexBody::from_json(&c.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }
}

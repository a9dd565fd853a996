use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use tropsing::covolume::{covol, mixed_covol};
use tropsing::germ::{parse_support_json, SupportDocument};
use tropsing::invariants::{
    diagonal_threshold, directional_weight_polyhedron, lambda_indicator, relative_type,
};
use tropsing::oracle::{grid_lambda, staircase_covol_2d};
use tropsing::polyhedron::support_value_from_facets;
use tropsing::rational::{q, q_frac, ExtRational};
use tropsing::{ExponentPoint, GermSupport, NewtonPolyhedron, Weight, Q};

fn rational() -> impl Strategy<Value = Q> {
    (0i64..=6, 1i64..=3).prop_map(|(n, d)| q_frac(n, d))
}

fn points(n: usize) -> impl Strategy<Value = Vec<ExponentPoint>> {
    prop::collection::vec(
        prop::collection::vec(rational(), n).prop_map(|c| ExponentPoint::new(c).unwrap()),
        1..=6,
    )
}

fn polyhedron(n: usize) -> impl Strategy<Value = NewtonPolyhedron> {
    points(n).prop_map(move |p| NewtonPolyhedron::reduce(n, p).unwrap())
}

/// Adds an axis vertex on every coordinate so the covolume is finite.
fn finite_polyhedron(n: usize) -> impl Strategy<Value = NewtonPolyhedron> {
    (points(n), prop::collection::vec(1i64..=6, n)).prop_map(move |(mut p, axes)| {
        for (k, c) in axes.into_iter().enumerate() {
            let mut coords = vec![Q::zero(); n];
            coords[k] = q(c);
            p.push(ExponentPoint::new(coords).unwrap());
        }
        NewtonPolyhedron::reduce(n, p).unwrap()
    })
}

fn weight(n: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec((1i64..=7, 1i64..=3), n)
        .prop_map(|c| Weight::new(c.into_iter().map(|(a, b)| q_frac(a, b)).collect()).unwrap())
}

fn direction(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((0i64..=6, 1i64..=3), n)
        .prop_map(|c| c.into_iter().map(|(a, b)| q_frac(-a, b)).collect())
}

fn dim() -> impl Strategy<Value = usize> {
    1usize..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn semiring_laws((a, b, c) in dim().prop_flat_map(|n| (polyhedron(n), polyhedron(n), polyhedron(n)))) {
        let n = a.dim();
        let add = |x: &NewtonPolyhedron, y: &NewtonPolyhedron| x.trop_add(y).unwrap();
        let mul = |x: &NewtonPolyhedron, y: &NewtonPolyhedron| x.trop_mul(y).unwrap();
        prop_assert_eq!(add(&a, &a), a.clone());
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&add(&a, &b), &c), add(&mul(&a, &c), &mul(&b, &c)));
        prop_assert_eq!(add(&a, &NewtonPolyhedron::empty(n)), a.clone());
        prop_assert_eq!(mul(&a, &NewtonPolyhedron::orthant(n)), a.clone());
        prop_assert!(mul(&a, &NewtonPolyhedron::empty(n)).is_empty());
    }

    #[test]
    fn directional_number_axioms(
        (a, b, w) in dim().prop_flat_map(|n| (polyhedron(n), polyhedron(n), weight(n))),
        s in (1i64..=9, 1i64..=4),
    ) {
        let s = q_frac(s.0, s.1);
        let nu_a = a.directional_number(&w).unwrap();
        let nu_b = b.directional_number(&w).unwrap();
        let (x, y) = (nu_a.finite().unwrap(), nu_b.finite().unwrap());
        prop_assert_eq!(
            a.scale(&s).unwrap().directional_number(&w).unwrap(),
            ExtRational::Finite(x * &s)
        );
        prop_assert_eq!(
            a.trop_add(&b).unwrap().directional_number(&w).unwrap(),
            ExtRational::Finite(x.min(y).clone())
        );
        prop_assert_eq!(
            a.trop_mul(&b).unwrap().directional_number(&w).unwrap(),
            ExtRational::Finite(x + y)
        );
    }

    #[test]
    fn vertex_set_is_minimal_and_order_free(pts in dim().prop_flat_map(points)) {
        let n = pts[0].dim();
        let g = NewtonPolyhedron::reduce(n, pts.clone()).unwrap();
        let rev = NewtonPolyhedron::reduce(n, pts.iter().rev().cloned()).unwrap();
        prop_assert_eq!(&g, &rev);
        for p in &pts {
            prop_assert!(g.member(p).unwrap());
        }
        for (i, v) in g.vertices().iter().enumerate() {
            let others = g.vertices().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, w)| w.clone());
            prop_assert!(!NewtonPolyhedron::reduce(n, others).unwrap().member(v).unwrap());
        }
    }

    #[test]
    fn facets_agree_with_vertices(
        (g, t, probe) in dim().prop_flat_map(|n| (polyhedron(n), direction(n), prop::collection::vec(rational(), n)))
    ) {
        for f in g.facets() {
            prop_assert!(f.normal.iter().any(|x| x.is_positive()));
            prop_assert!(g.vertices().iter().all(|v| f.satisfied_by(v.coords())));
        }
        let p = ExponentPoint::new(probe.clone()).unwrap();
        prop_assert_eq!(g.member(&p).unwrap(), g.facets().iter().all(|f| f.satisfied_by(&probe)));
        let by_vertices = g.support_value(&t).unwrap();
        let by_facets = support_value_from_facets(&g, &t);
        prop_assert_eq!(by_vertices.finite(), by_facets.value());
    }

    #[test]
    fn relative_type_matches_directional_number(
        (g, w) in dim().prop_flat_map(|n| (polyhedron(n), weight(n)))
    ) {
        let sigma = relative_type(&g, &directional_weight_polyhedron(&w)).unwrap();
        prop_assert_eq!(sigma.value, g.directional_number(&w).unwrap());
    }

    #[test]
    fn relative_type_dominates(
        (u, psi, ts) in (1usize..=3).prop_flat_map(|n| (
            polyhedron(n),
            finite_polyhedron(n),
            prop::collection::vec(direction(n), 9),
        ))
    ) {
        prop_assume!(!psi.contains_origin());
        let sigma = relative_type(&u, &psi).unwrap().value;
        let sigma = sigma.finite().unwrap();
        for t in &ts {
            let lhs = u.support_value(t).unwrap();
            let rhs = psi.support_value(t).unwrap().finite().unwrap() * sigma;
            prop_assert!(lhs <= ExtRational::Finite(rhs));
        }
    }

    #[test]
    fn self_relative_type_is_one(g in (1usize..=4).prop_flat_map(finite_polyhedron)) {
        prop_assume!(!g.contains_origin());
        prop_assert_eq!(relative_type(&g, &g).unwrap().value, ExtRational::Finite(Q::one()));
    }

    #[test]
    fn lambda_routes_agree(g in (1usize..=4).prop_flat_map(polyhedron), k in 1u32..=12) {
        let lp = lambda_indicator(&g).lambda;
        prop_assert_eq!(&lp, &diagonal_threshold(&g));
        let lp = lp.finite().unwrap().clone();
        let grid = grid_lambda(&g, k).unwrap();
        let exact = grid.exact.unwrap();
        prop_assert!(exact <= lp);
        prop_assert!(lp <= exact + grid.resolution.unwrap());
    }

    #[test]
    fn planar_covolume_matches_staircase(g in finite_polyhedron(2)) {
        prop_assert_eq!(covol(&g).value, ExtRational::Finite(staircase_covol_2d(&g).unwrap()));
    }

    #[test]
    fn covolume_is_homogeneous(g in (1usize..=3).prop_flat_map(finite_polyhedron), s in (1i64..=5, 1i64..=3)) {
        let s = q_frac(s.0, s.1);
        let n = g.dim();
        let base = covol(&g).value.finite().unwrap().clone();
        let scaled = covol(&g.scale(&s).unwrap()).value;
        let factor = (0..n).fold(Q::one(), |acc, _| acc * &s);
        prop_assert_eq!(scaled, ExtRational::Finite(base * factor));
    }

    #[test]
    fn mixed_covolume_is_multilinear(
        (a, b) in (2usize..=3).prop_flat_map(|n| (finite_polyhedron(n), finite_polyhedron(n)))
    ) {
        let n = a.dim();
        prop_assert_eq!(mixed_covol(&vec![a.clone(); n]).unwrap().value, covol(&a).value);
        let mut slots = vec![a.clone(); n];
        slots[0] = b.clone();
        let first = mixed_covol(&slots).unwrap().value;
        let mut swapped = slots.clone();
        swapped.swap(0, n - 1);
        prop_assert_eq!(mixed_covol(&swapped).unwrap().value, first.clone());

        let mut summed = slots.clone();
        summed[0] = a.trop_mul(&b).unwrap();
        slots[0] = a.clone();
        let base = mixed_covol(&slots).unwrap().value;
        let (x, y) = (first.finite().unwrap(), base.finite().unwrap());
        prop_assert_eq!(mixed_covol(&summed).unwrap().value, ExtRational::Finite(x + y));
    }

    #[test]
    fn support_json_round_trip(pts in dim().prop_flat_map(points)) {
        let n = pts[0].dim();
        let germ = GermSupport::new(n, pts).unwrap();
        let text = germ.to_json().to_string();
        let SupportDocument::Germ(back) = parse_support_json(&text).unwrap() else {
            panic!("expected a germ document");
        };
        prop_assert_eq!(&back, &germ);
        prop_assert_eq!(back.to_json().to_string(), text);
    }
}

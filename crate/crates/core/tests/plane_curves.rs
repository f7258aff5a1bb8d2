use std::collections::HashMap;

use prank_core::fixtures;
use prank_core::gf::FieldSpec;
use prank_core::planecurve::{
    cartier_manin, hasse_witt, image_table, invariants, report, BasisLabels, PlaneCurveSpec,
};
use prank_core::poly::PolyRing;
use prank_core::{parse_homogeneous, parse_poly};

#[test]
fn sextic_table_in_classical_labels() {
    let f4 = fixtures::f4();
    let lambda = f4.generator();
    let c = fixtures::sextic(&lambda);
    let table = image_table(&hasse_witt(&c), &fixtures::sextic_labels(), "F");
    assert_eq!(
        table,
        vec![
            "F(b1) = b3",
            "F(b2) = b4",
            "F(b3) = b1",
            "F(b4) = b2",
            "F(b5) = b6",
            "F(b6) = b5",
            "F(b7) = b8 + b9 + b10",
            "F(b8) = t*b7",
            "F(b9) = 0",
            "F(b10) = 0",
        ]
    );
}

#[test]
fn sextic_over_prime_field_parameter() {
    // lambda = 1 lies in F_2; the curve is still defined and has the same arithmetic genus
    let f4 = fixtures::f4();
    let c = fixtures::sextic(&f4.one());
    let inv = invariants(&c);
    assert_eq!(inv.pa, 10);
    assert!(inv.sigma + inv.a_number <= inv.pa);
}

#[test]
fn report_is_schema_stable() {
    let f4 = fixtures::f4();
    let c = fixtures::sextic(&f4.generator());
    let r = report(&c, &fixtures::sextic_labels(), Some(2)).unwrap();
    let a = serde_json::to_string(&r).unwrap();
    let b = serde_json::to_string(&report(&c, &fixtures::sextic_labels(), Some(2)).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["sigma"], 8);
    assert_eq!(v["a_number"], 2);
    assert_eq!(v["pa"], 10);
    assert_eq!(v["cartier_manin"]["rank"], 8);
    assert_eq!(v["images"].as_array().unwrap().len(), 10);
}

#[test]
fn quintic_duality_and_genus() {
    for (a, b) in [(1, 2), (2, 5), (6, 3)] {
        let c = fixtures::quintic(a, b).unwrap();
        assert_eq!(c.pa(), 6);
        let hw = hasse_witt(&c);
        let cm = cartier_manin(&c, 2).unwrap();
        assert_eq!(hw.rank(), cm.rank());
        assert_eq!(hw.stable_rank(), cm.stable_rank());
    }
}

#[test]
fn reference_quintic_table_is_what_the_fixture_encodes() {
    let f7 = FieldSpec::prime(7).unwrap();
    let m = fixtures::relations_matrix(&f7, &fixtures::QUINTIC_LISTING, &fixtures::quintic_reference_relations(&f7, 1, 2));
    let map = prank_core::SemilinearMap::new(m, prank_core::Twist::P, "reference");
    let table = image_table(&map, &fixtures::quintic_labels(), "F");
    assert_eq!(table[0], "F(b1) = 3*b2 + b3");
    assert_eq!(table[1], "F(b2) = 0");
    assert_eq!(table[4], "F(b5) = 6*b1 + 3*b5");
    assert_eq!(table[5], "F(b6) = b2");
}

#[test]
fn elliptic_curves_match_point_count_oracle() {
    // y^2 z = x^3 + a x z^2 + b z^3: ordinary iff the Frobenius trace is nonzero mod p
    for p in [5u64, 7, 11, 13] {
        let f = FieldSpec::prime(p).unwrap();
        let ring = PolyRing::plane(&f);
        for (a, b) in [(1i64, 1i64), (2, 3), (0, 1), (1, 0)] {
            let disc = (4 * a * a * a + 27 * b * b).rem_euclid(p as i64);
            if disc == 0 {
                continue;
            }
            let bindings = HashMap::from([("a".to_string(), f.from_int(a)), ("b".to_string(), f.from_int(b))]);
            let g = parse_homogeneous("x^3 + a*x*z^2 + b*z^3 - y^2*z", &ring, &bindings).unwrap();
            let c = PlaneCurveSpec::new(g).unwrap();
            let mut points = 1i64;
            for x in 0..p as i64 {
                let rhs = (x * x * x + a * x + b).rem_euclid(p as i64);
                points += (0..p as i64).filter(|y| (y * y).rem_euclid(p as i64) == rhs).count() as i64;
            }
            let trace = p as i64 + 1 - points;
            let expected_sigma = usize::from(trace.rem_euclid(p as i64) != 0);
            assert_eq!(invariants(&c).sigma, expected_sigma, "p={p} a={a} b={b}");
        }
    }
}

#[test]
fn parser_errors_are_positioned() {
    let f = FieldSpec::prime(3).unwrap();
    let ring = PolyRing::plane(&f);
    let err = parse_poly("x + ", &ring, &HashMap::new()).unwrap_err();
    assert!(err.to_string().contains('4'), "{err}");
    assert!(parse_poly("x + w", &ring, &HashMap::new()).is_err());
    assert!(parse_homogeneous("x^2 + y", &ring, &HashMap::new()).is_err());
}

#[test]
fn lexicographic_labels() {
    let l = BasisLabels::lex(3);
    assert_eq!(l.names, vec!["b1", "b2", "b3"]);
}

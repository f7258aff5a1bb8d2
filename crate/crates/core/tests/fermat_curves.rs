use num_bigint::BigInt;
use prank_core::cohomology::dual_basis;
use prank_core::fermat::*;
use prank_core::fixtures;
use prank_core::gf::{Field, FieldElement, FieldSpec};
use proptest::prelude::*;

fn f16() -> Field {
    FieldSpec::new(2, 4, None).unwrap()
}

fn spec(m: usize, n: usize, field: &Field, lambdas: &[&str]) -> FermatSpec {
    FermatSpec::new(m, n, lambdas.iter().map(|s| field.parse_element(s).unwrap()).collect()).unwrap()
}

/// Coefficient of `x^k` in `prod_i (x^{lo_i} + ... + x^{hi_i})`, by polynomial multiplication.
fn generating_count(bounds: &[(i64, i64)], k: i64) -> u64 {
    let mut poly = vec![1u64];
    for &(lo, hi) in bounds {
        let mut next = vec![0u64; poly.len() + hi as usize];
        for (i, &c) in poly.iter().enumerate() {
            for e in lo..=hi {
                next[i + e as usize] += c;
            }
        }
        poly = next;
    }
    poly.get(k as usize).copied().unwrap_or(0)
}

#[test]
fn s_cardinalities_match_generating_functions() {
    let f = f16();
    for (m, n, ls) in [(3usize, 3usize, vec!["t", "t^2"]), (5, 3, vec!["t", "t^2"]), (3, 4, vec!["t", "t^2", "t^3"])] {
        let sp = spec(m, n, &f, &ls);
        let mut total = 0;
        for r in 0..=n - 2 {
            for s in 0..=n - 2 - r {
                let mi = m as i64;
                let mut bounds = vec![(r as i64 * mi + 1, (r as i64 + 1) * mi), (s as i64 * mi + 1, (s as i64 + 1) * mi)];
                bounds.extend(std::iter::repeat_n((1, mi), n - 1));
                let expected = generating_count(&bounds, (n as i64 - 1) * mi);
                let got = enumerate_s(&sp, r, s).unwrap().len() as u64;
                assert_eq!(got, expected, "S({r},{s}) for ({m},{n})");
                total += got;
            }
        }
        assert_eq!(BigInt::from(total), h1_dim(m, n));
    }
    // |S(0,0)| for (3,3) is the x^2 coefficient of (1 + x + x^2)^4
    assert_eq!(generating_count(&[(0, 2); 4], 2), 10);
}

#[test]
fn t00_by_brute_force() {
    let f4 = fixtures::f4();
    let sp = spec(3, 3, &f4, &["t", "t+1"]);
    let mut brute = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                for d in 1..=3 {
                    let t = [a, b, c, d];
                    if t.iter().sum::<i32>() == 6 && t.iter().filter(|&&x| x <= 1).count() >= 3 {
                        brute.push(t.to_vec());
                    }
                }
            }
        }
    }
    assert_eq!(enumerate_t(&sp, 0, 0).unwrap().tuples, brute);
}

#[test]
fn kernel_dimension_by_rank_nullity() {
    let f = f16();
    for sp in [spec(3, 3, &f, &["t", "t^2"]), spec(5, 3, &f, &["1", "t"]), spec(3, 4, &f, &["t", "t^2", "t^3"])] {
        let mat = multiplication_matrix(&sp);
        let source = dual_basis(sp.n(), ((sp.n() - 1) * sp.m()) as i64);
        assert_eq!(kernel_basis(&sp).len(), source.len() - mat.rank());
        assert_eq!(BigInt::from(kernel_basis(&sp).len()), genus(sp.m(), sp.n()));
    }
}

#[test]
fn ambient_dimensions() {
    // H^4(P^4, O(-9)) and H^4(P^4, O(-6)) for (3,4)
    let f = f16();
    let sp = spec(3, 4, &f, &["t", "t^2", "t^3"]);
    assert_eq!(sp.source_basis().len(), 70);
    assert_eq!(sp.target_basis().len(), 5);
}

#[test]
fn plane_fermat_cubic_in_char_two() {
    // f * x^-2 y^-2 z^-2 has no monomial with all exponents negative
    let f4 = fixtures::f4();
    let sp = spec(3, 2, &f4, &["t"]);
    let data = frobenius_matrix(&sp, BasisChoice::Explicit).unwrap();
    assert_eq!(data.map.dim(), 1);
    assert!(data.map.matrix.is_zero());
    assert_eq!(data.map.stable_rank(), 0);
}

#[test]
fn plane_case_matches_plane_curve_module() {
    let f7 = FieldSpec::prime(7).unwrap();
    for lambda in 1..7 {
        let sp = FermatSpec::new(4, 2, vec![f7.from_int(lambda)]).unwrap();
        let plane = prank_core::PlaneCurveSpec::new(sp.equations()[0].clone()).unwrap();
        let a = frobenius_matrix(&sp, BasisChoice::Kernel).unwrap();
        let b = prank_core::planecurve::hasse_witt(&plane);
        assert_eq!(a.map.stable_rank(), b.stable_rank());
        assert_eq!(a.map.a_number(), b.a_number());
    }
}

#[test]
fn both_bases_give_the_same_invariants() {
    let f = f16();
    for sp in [spec(3, 3, &f, &["t", "t^3"]), spec(5, 3, &f, &["t", "t^2"]), spec(3, 4, &f, &["1", "t", "t^2"])] {
        let e = frobenius_matrix(&sp, BasisChoice::Explicit).unwrap();
        let k = frobenius_matrix(&sp, BasisChoice::Kernel).unwrap();
        assert!(!e.used_fallback);
        assert_eq!(e.map.stable_rank(), k.map.stable_rank());
        assert_eq!(e.map.a_number(), k.map.a_number());
    }
}

#[test]
fn general_characteristic() {
    let f7 = FieldSpec::prime(7).unwrap();
    let sp = spec(3, 3, &f7, &["2", "3"]);
    let r = fermat_invariants(&sp, None).unwrap();
    assert_eq!(r.basis_size, 10);
    assert!(r.sigma + r.a_number <= 10);
    assert!(r.anum_formula.is_none());
    assert!(r.t_cardinalities.is_none());
}

#[test]
fn report_keys_and_determinism() {
    let f4 = fixtures::f4();
    let sp = spec(3, 3, &f4, &["t", "t+1"]);
    let a = serde_json::to_string(&fermat_invariants(&sp, None).unwrap()).unwrap();
    let b = serde_json::to_string(&fermat_invariants(&sp, None).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for key in [
        "m", "n", "p", "k", "lambdas", "genus", "h1_dim", "sigma", "a_number", "anum_formula", "genericity",
        "prank_lower_bound", "S_cardinalities", "T_cardinalities",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["a_number"], 4);
    assert_eq!(v["anum_formula"], 4);
    assert_eq!(v["genus"], 10);
    assert_eq!(v["S_cardinalities"]["0,0"], 10);
}

#[test]
fn singular_mode_uses_the_kernel() {
    let f4 = fixtures::f4();
    let sp = spec(3, 3, &f4, &["t", "t"]);
    assert!(!sp.is_smooth());
    let r = fermat_invariants(&sp, None).unwrap();
    assert_eq!(r.basis_choice, BasisChoice::Kernel);
    assert_eq!(r.basis_size, 10);
    assert!(r.prank_lower_bound.is_some());
}

#[test]
fn discrepancies_are_flagged_not_hidden() {
    // beyond n = 3 the printed T sets overcount the Frobenius kernel
    let f = f16();
    let sp = spec(3, 4, &f, &["t", "t^2", "t^3"]);
    let r = fermat_invariants(&sp, None).unwrap();
    assert!(r.genericity.all_nonzero);
    assert_eq!(r.a_number, 15);
    assert_eq!(r.anum_formula, Some(20));
    assert!(r.flags.iter().any(|f| f.contains("T-set count")));
}

#[test]
fn p_rank_terms_for_n4() {
    let f = f16();
    let sp = spec(3, 4, &f, &["t", "t^2", "t^3"]);
    let pb = prank_lower_bound(&sp).unwrap();
    assert_eq!(pb.terms.iter().filter(|t| t.t == 2).count(), 3);
    assert_eq!(pb.terms.iter().filter(|t| t.t == 3).count(), 3);
    let expected: i64 = pb
        .terms
        .iter()
        .map(|t| if t.t % 2 == 0 { 1 } else { -1 } * t.sigma.unwrap() as i64)
        .sum();
    assert_eq!(pb.bound, Some(expected));
}

#[test]
fn closed_forms_for_s_t0() {
    let f = f16();
    for (m, n, ls) in [(3usize, 4usize, vec!["t", "t^2", "t^3"]), (5, 3, vec!["t", "t^2"])] {
        let sp = spec(m, n, &f, &ls);
        let r = fermat_invariants(&sp, Some(BasisChoice::Kernel)).unwrap();
        for c in r.cross_checks.iter().filter(|c| c.name.starts_with("|S(")) {
            assert!(c.agrees, "{c:?}");
        }
    }
}

fn nonzero_f16() -> Vec<FieldElement> {
    f16().elements().filter(|e| !e.is_zero()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn explicit_basis_always_verifies_for_3_3(i in 0usize..15, j in 0usize..15) {
        prop_assume!(i != j);
        let nz = nonzero_f16();
        let sp = FermatSpec::new(3, 3, vec![nz[i].clone(), nz[j].clone()]).unwrap();
        let basis = explicit_basis(&sp).unwrap();
        prop_assert_eq!(basis.len(), 10);
        let r = fermat_invariants(&sp, None).unwrap();
        prop_assert!(r.sigma + r.a_number <= 10);
        prop_assert!(r.sigma as i64 >= r.prank_lower_bound.unwrap());
        prop_assert_eq!(r.a_number, r.anum_formula.unwrap());
    }

    #[test]
    fn beta_table_matches_elementary_symmetric(i in 0usize..15, j in 0usize..15, k in 0usize..15) {
        let nz = nonzero_f16();
        let f = f16();
        let sp = FermatSpec::new(3, 4, vec![nz[i].clone(), nz[j].clone(), nz[k].clone()]).unwrap();
        for ((l, _q, subset), v) in beta_table(&sp, 2, 2) {
            let vals: Vec<FieldElement> = subset.iter().map(|&x| sp.lambdas()[x - 2].clone()).collect();
            prop_assert_eq!(v, elementary_symmetric(&f, &vals, l));
        }
    }

    #[test]
    fn binomial_identity(n in 1usize..40, t in 0usize..39) {
        prop_assume!(t < n);
        prop_assert!(binom_identity(n, t).2);
    }

    #[test]
    fn complete_intersection_recovers_h1(m in 2usize..7, n in 2usize..6) {
        let degrees = vec![m; n - 1];
        prop_assert_eq!(complete_intersection_h(n, &degrees, 1, 0), h1_dim(m, n));
        prop_assert_eq!(genus(m, n), h1_dim(m, n));
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use prank_core::cohomology::{SemilinearMap, Twist};
use prank_core::combinatorics::{BoundedCompositionQuery, CountMethod};
use prank_core::fermat::{
    binom_identity, column_vanishing, complete_intersection_h, enumerate_t, explicit_basis, fermat_invariants,
    frobenius_matrix, genericity, genus, h1_dim, kernel_basis, BasisChoice, FermatSpec,
};
use prank_core::fixtures;
use prank_core::gf::{Field, FieldElement, FieldSpec};
use prank_core::jacobian::{decompose, singular_fermat_preset, smooth_model_invariants};
use prank_core::matrix::Matrix;
use prank_core::planecurve::{cartier_manin, hasse_witt, invariants, residue_duality_check, LaurentSeries};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let e = start.elapsed();
    (e < limit, format!("{:.2?} (limit {:?})", e, limit))
}

fn f16() -> Field {
    FieldSpec::new(2, 4, None).unwrap()
}

fn elems(field: &Field, texts: &[&str]) -> Vec<FieldElement> {
    texts.iter().map(|s| field.parse_element(s).unwrap()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f4 = fixtures::f4();
    let mut notes = Vec::new();
    let mut ok = true;
    for lambda in f4.elements().filter(|e| !e.is_prime_field()) {
        let c = fixtures::sextic(&lambda);
        let hw = hasse_witt(&c);
        let expected = fixtures::relations_matrix(&f4, &fixtures::SEXTIC_LISTING, &fixtures::sextic_reference_relations(&lambda));
        let inv = invariants(&c);
        let good = hw.matrix == expected && (inv.sigma, inv.a_number, inv.pa) == (8, 2, 10);
        ok &= good;
        notes.push(format!("lambda={lambda}: images {} (sigma,a,pa)=({},{},{})", if hw.matrix == expected { "match" } else { "DIFFER" }, inv.sigma, inv.a_number, inv.pa));
    }
    let (fast, t) = within(start, Duration::from_secs(1));
    outcome(ok && fast, format!("{}; {t}", notes.join("; ")))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let f7 = FieldSpec::prime(7).unwrap();
    let mut matched = 0;
    let mut sigma_one = 0;
    let mut total = 0;
    let mut seen_sigma = std::collections::BTreeSet::new();
    for a in 1..7 {
        for b in 1..7 {
            if a == b {
                continue;
            }
            total += 1;
            let c = fixtures::quintic(a, b).unwrap();
            let hw = hasse_witt(&c);
            let expected = fixtures::relations_matrix(&f7, &fixtures::QUINTIC_LISTING, &fixtures::quintic_reference_relations(&f7, a, b));
            matched += usize::from(hw.matrix == expected);
            let s = hw.stable_rank();
            seen_sigma.insert(s);
            sigma_one += usize::from(s == 1);
        }
    }
    let (fast, t) = within(start, Duration::from_secs(5));
    outcome(
        matched == total && sigma_one == total && fast,
        format!("{matched}/{total} image tables match, {sigma_one}/{total} have sigma=1 (computed sigma values {seen_sigma:?}); {t}"),
    )
}

fn criterion_3() -> Outcome {
    let lambda = fixtures::f4().generator();
    let inv = invariants(&fixtures::sextic(&lambda));
    let d = decompose(&fixtures::sextic_singularities());
    match smooth_model_invariants(inv.pa as u64, inv.sigma as u64, Some(inv.a_number as u64), &d) {
        Ok(m) => outcome(
            (m.g, m.sigma_smooth, m.a_lower_bound, m.ordinary) == (4, 4, Some(0), true),
            format!("(pa,sigma',a')=({},{},{}) -> g={} sigma={} a_lower={:?} ordinary={}", inv.pa, inv.sigma, inv.a_number, m.g, m.sigma_smooth, m.a_lower_bound, m.ordinary),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_4() -> Outcome {
    let d = decompose(&fixtures::quintic_singularities());
    match smooth_model_invariants(6, 1, None, &d) {
        Ok(m) => outcome(
            m.sigma_smooth == 1 && d.toric_rank == 0,
            format!("toric rank {}, dim G {}, sigma={}, g={}", d.toric_rank, d.dim_g, m.sigma_smooth, m.g),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

/// Curves used by criteria 5 and 6: `(3,3)` over `F_4`, `(5,3)` and `(3,4)` over `F_16`.
fn dimension_specs() -> Vec<(FermatSpec, usize)> {
    let f4 = fixtures::f4();
    let f16 = f16();
    vec![
        (FermatSpec::new(3, 3, elems(&f4, &["t", "t+1"])).unwrap(), 10),
        (FermatSpec::new(5, 3, elems(&f16, &["t", "t^2"])).unwrap(), 76),
        (FermatSpec::new(3, 4, elems(&f16, &["t", "t^2", "t^3"])).unwrap(), 55),
    ]
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (spec, expected) in dimension_specs() {
        let (m, n) = (spec.m(), spec.n());
        let e = BigInt::from(expected);
        let explicit = explicit_basis(&spec).map(|b| b.len());
        let kernel = kernel_basis(&spec).len();
        let good = genus(m, n) == e && h1_dim(m, n) == e && explicit == Ok(expected) && kernel == expected;
        ok &= good;
        notes.push(format!("({m},{n}): genus {} h1 {} explicit {:?} kernel {kernel}", genus(m, n), h1_dim(m, n), explicit));
    }
    let (fast, t) = within(start, Duration::from_secs(60));
    outcome(ok && fast, format!("{}; {t}", notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (spec, _) in dimension_specs() {
        let label = format!("({},{})", spec.m(), spec.n());
        // explicit_basis asserts f_i * alpha = 0 for every i and element
        let Ok(basis) = explicit_basis(&spec) else {
            ok = false;
            notes.push(format!("{label}: verification failed"));
            continue;
        };
        let source = spec.source_basis();
        let field = spec.field();
        let mut cols: Vec<Vec<FieldElement>> = basis.iter().map(|b| b.expansion.to_dense(field)).collect();
        let g = cols.len();
        cols.extend(kernel_basis(&spec).iter().map(|k| k.to_dense(field)));
        let joint = Matrix::from_columns(field, source.len(), &cols).rank();
        let good = joint == g;
        ok &= good;
        notes.push(format!("{label}: {g} elements, rank of union {joint}"));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let f16 = f16();
    let nonzero: Vec<FieldElement> = f16.elements().filter(|e| !e.is_zero()).collect();
    let mut tested = 0;
    let mut failures = Vec::new();
    for pair in nonzero.iter().permutations(2) {
        let spec = FermatSpec::new(3, 3, vec![pair[0].clone(), pair[1].clone()]).unwrap();
        if !genericity(&spec).all_nonzero {
            continue;
        }
        tested += 1;
        let data = frobenius_matrix(&spec, BasisChoice::Explicit).unwrap();
        let kernel = data.map.a_number();
        let t_sum: usize = enumerate_t(&spec, 0, 0).unwrap().len();
        let cols = column_vanishing(&spec, &data).unwrap();
        if kernel != 4 || t_sum != 4 || !cols.mismatches.is_empty() {
            failures.push(format!("({},{}): kernel {kernel}, sum|T| {t_sum}, column mismatches {}", pair[0], pair[1], cols.mismatches.len()));
        }
    }
    outcome(
        tested > 0 && failures.is_empty(),
        format!("{tested} generic lambda pairs over F16, kernel dim = sum|T| = 4 and column criterion hold on all but {}: {failures:?}", failures.len()),
    )
}

fn criterion_8() -> Outcome {
    let f16 = f16();
    let nonzero: Vec<FieldElement> = f16.elements().filter(|e| !e.is_zero()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [3usize, 4] {
        let mut tested = 0;
        let mut attempts = 0;
        while tested < 10 && attempts < 1000 {
            attempts += 1;
            let lambdas: Vec<FieldElement> = (0..n - 1).map(|_| nonzero[rng.gen_range(0..nonzero.len())].clone()).collect();
            let spec = FermatSpec::new(3, n, lambdas).unwrap();
            if !spec.is_smooth() || !genericity(&spec).all_nonzero {
                continue;
            }
            tested += 1;
            let report = fermat_invariants(&spec, Some(BasisChoice::Kernel)).unwrap();
            match report.prank_lower_bound {
                Some(b) if report.sigma as i64 >= b => {}
                other => {
                    ok = false;
                    notes.push(format!("n={n} lambda={:?}: sigma {} vs bound {other:?}, flags {:?}", report.lambdas, report.sigma, report.flags));
                }
            }
        }
        ok &= tested >= 10;
        notes.push(format!("n={n}: {tested} generic choices"));
    }
    outcome(ok, notes.join("; "))
}

fn random_series(field: &Field, rng: &mut ChaCha8Rng, low: i64, precision: i64) -> LaurentSeries {
    let coeffs: Vec<(i64, FieldElement)> = (low..precision)
        .map(|n| (n, field.element_from_index(rng.gen_range(0..field.order()))))
        .collect();
    LaurentSeries::new(field, coeffs, precision)
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let f4 = fixtures::f4();
    let mut curves = vec![];
    for lambda in f4.elements().filter(|e| !e.is_prime_field()) {
        curves.push((format!("sextic lambda={lambda}"), fixtures::sextic(&lambda)));
    }
    for (a, b) in (1..7).cartesian_product(1..7).filter(|(a, b)| a != b) {
        curves.push((format!("quintic A={a} B={b}"), fixtures::quintic(a, b).unwrap()));
    }
    let mut agree = 0;
    for (label, c) in &curves {
        let hw = hasse_witt(c);
        match cartier_manin(c, 2) {
            Ok(cm) if cm.rank() == hw.rank() && cm.a_number() == hw.a_number() => agree += 1,
            Ok(cm) => {
                ok = false;
                notes.push(format!("{label}: rank HW {} vs CM {}", hw.rank(), cm.rank()));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{label}: {e}"));
            }
        }
    }
    notes.push(format!("rank(HW)=rank(CM) on {agree}/{} curves", curves.len()));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [2u64, 7] {
        let field = FieldSpec::prime(p).unwrap();
        let mut passed = 0;
        for _ in 0..200 {
            let f = random_series(&field, &mut rng, -3, 10);
            let omega = random_series(&field, &mut rng, -20, 40);
            if residue_duality_check(&f, &omega) == Ok(true) {
                passed += 1;
            }
        }
        ok &= passed == 200;
        notes.push(format!("residue duality over F{p}: {passed}/200"));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    for n in 1..=12 {
        for t in 0..n {
            cases += 1;
            let (l, r, eq) = binom_identity(n, t);
            if !eq {
                bad.push(format!("(n={n},t={t}): {l} vs {r}"));
            }
        }
    }
    let h = complete_intersection_h(2, &[6], 1, 0);
    outcome(
        bad.is_empty() && h == BigInt::from(10),
        format!("identity holds on {}/{cases} pairs (0 <= t < n <= 12); h^1 for the plane sextic = {h}", cases - bad.len()),
    )
}

fn criterion_11() -> Outcome {
    let mut ok = true;
    let mut checked = 0;
    let mut notes = Vec::new();
    for m in 2..=5u64 {
        for n in 3..=5u64 {
            let p = singular_fermat_preset(m, n).unwrap();
            let d = p.decomposition;
            let points = m.pow((n - 2) as u32);
            let good = p.points.len() as u64 == points
                && p.toric_rank_enumerated == points * (m - 1)
                && p.toric_rank_closed_form == (n - 2).pow(m as u32) * (m - 1)
                && d.dim_g == d.toric_rank + d.unipotent_dim
                && (m != 2 || d.dim_g == d.toric_rank)
                && p.relations.iter().any(|r| r == "a(X) = a(X')")
                && (p.toric_rank_closed_form == p.toric_rank_enumerated || !p.flags.is_empty());
            checked += 1;
            if !good {
                ok = false;
                notes.push(format!("(m={m},n={n}) inconsistent"));
            }
        }
    }
    let p23 = singular_fermat_preset(2, 3).unwrap();
    ok &= !p23.flags.is_empty();
    notes.push(format!(
        "{checked} presets consistent; (2,3): enumerated {} vs closed form {}, flag raised: {}",
        p23.toric_rank_enumerated,
        p23.toric_rank_closed_form,
        !p23.flags.is_empty()
    ));
    outcome(ok, notes.join("; "))
}

fn runner(seed: u8) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: 64,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn fields() -> Vec<Field> {
    [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (7, 1)]
        .into_iter()
        .map(|(p, k)| FieldSpec::new(p, k, None).unwrap())
        .collect()
}

fn random_matrix(field: &Field, g: usize, idx: &[u64]) -> Matrix {
    let rows = (0..g)
        .map(|i| (0..g).map(|j| field.element_from_index(idx[i * g + j] % field.order())).collect())
        .collect();
    Matrix::from_rows(field, rows)
}

fn criterion_12() -> Outcome {
    let fs = fields();
    let mut notes = Vec::new();
    let mut ok = true;

    let semilinear = runner(1).run(
        &(0..fs.len(), 1usize..6, proptest::collection::vec(any::<u64>(), 36 + 6 + 1), any::<bool>()),
        |(fi, g, idx, inverse)| {
            let f = &fs[fi];
            let twist = if inverse { Twist::PInverse } else { Twist::P };
            let map = SemilinearMap::new(random_matrix(f, g, &idx), twist, "random");
            let v: Vec<FieldElement> = (0..g).map(|i| f.element_from_index(idx[36 + i] % f.order())).collect();
            let c = f.element_from_index(idx[42] % f.order());
            let cv: Vec<FieldElement> = v.iter().map(|x| &c * x).collect();
            let cp = if inverse { c.pth_root() } else { c.frobenius() };
            let expected: Vec<FieldElement> = map.apply(&v).iter().map(|x| &cp * x).collect();
            prop_assert_eq!(map.apply(&cv), expected);
            Ok(())
        },
    );
    ok &= semilinear.is_ok();
    notes.push(format!("semilinearity {}", if semilinear.is_ok() { "ok" } else { "FAILED" }));

    let base_change = runner(2).run(
        &(0..fs.len(), 1usize..6, proptest::collection::vec(any::<u64>(), 72)),
        |(fi, g, idx)| {
            let f = &fs[fi];
            let map = SemilinearMap::new(random_matrix(f, g, &idx[..36]), Twist::P, "random");
            let p = random_matrix(f, g, &idx[36..]);
            if let Some(changed) = map.change_basis(&p) {
                prop_assert_eq!(changed.stable_rank(), map.stable_rank());
                prop_assert_eq!(changed.a_number(), map.a_number());
            }
            Ok(())
        },
    );
    ok &= base_change.is_ok();
    notes.push(format!("base-change invariance {}", if base_change.is_ok() { "ok" } else { "FAILED" }));

    let roots = runner(3).run(&(0..fs.len(), any::<u64>(), -4i64..5), |(fi, i, j)| {
        let f = &fs[fi];
        let a = f.element_from_index(i % f.order());
        prop_assert_eq!(a.frobenius().pth_root(), a.clone());
        prop_assert_eq!(a.pth_root().frobenius(), a.clone());
        prop_assert_eq!(a.frobenius_power(j).frobenius_power(-j), a);
        Ok(())
    });
    ok &= roots.is_ok();
    notes.push(format!("frobenius/pth_root inverses {}", if roots.is_ok() { "ok" } else { "FAILED" }));

    let counts = runner(4).run(
        &(proptest::collection::vec((0i64..4, 0i64..6), 1..6), 0i64..25),
        |(bounds, total)| {
            let q = BoundedCompositionQuery {
                total,
                lower: bounds.iter().map(|b| b.0).collect(),
                upper: bounds.iter().map(|b| b.0 + b.1).collect(),
            };
            prop_assert_eq!(q.count(CountMethod::Enumerate).unwrap(), q.count(CountMethod::InclusionExclusion).unwrap());
            Ok(())
        },
    );
    ok &= counts.is_ok();
    notes.push(format!("enumerate vs inclusion-exclusion {}", if counts.is_ok() { "ok" } else { "FAILED" }));

    outcome(ok, notes.join("; "))
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; listing mode must stay quiet.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("p=2 sextic image table and invariants", criterion_1),
        ("p=7 quintic image table and sigma=1", criterion_2),
        ("two triple points: g=4, sigma=4, a_lower=0, ordinary", criterion_3),
        ("z^2=x^5 cusp: sigma(X)=1, toric rank 0", criterion_4),
        ("genus = h1_dim = |explicit basis| = dim kernel", criterion_5),
        ("explicit basis lies in every ker(f_i) and spans the kernel", criterion_6),
        ("a-number = sum |T(r,s)| = 4 and column vanishing, (3,3) p=2", criterion_7),
        ("p-rank >= inclusion-exclusion bound, (3,3..4) p=2", criterion_8),
        ("rank(Cartier-Manin) = rank(Hasse-Witt); residue duality", criterion_9),
        ("binomial identity for 0 <= t < n <= 12; plane sextic h^1 = 10", criterion_10),
        ("singular Fermat preset consistency and discrepancy flag", criterion_11),
        ("randomized property suites", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name} -- {}", i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

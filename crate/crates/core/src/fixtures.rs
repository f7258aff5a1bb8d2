//! Reference curves with published Frobenius tables, in their classical labelling.
//!
//! The classical listings number the dual basis in a bespoke order; each
//! fixture carries the permutation to the lexicographic order used internally.

use std::collections::HashMap;

use crate::gf::{Field, FieldElement, FieldSpec, GfError};
use crate::jacobian::{SingularityDatum, SingularityKind};
use crate::matrix::Matrix;
use crate::parse::parse_homogeneous;
use crate::planecurve::{BasisLabels, PlaneCurveSpec};
use crate::poly::PolyRing;

pub const SEXTIC: &str = "x^3*y^3 + x^3*z^3 + y^3*z^3 + lambda*z^6";
pub const QUINTIC: &str = "x^5 + y^3*z^2 + A*x*y*z^3 + B*x*z^4";

/// Classical listing of `H^1` of the sextic: `b1 = 1/(x y^2 z^3)`, ...
pub const SEXTIC_LISTING: [[i32; 3]; 10] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
    [2, 2, 2],
    [1, 1, 4],
    [1, 4, 1],
    [4, 1, 1],
];

/// Classical listing of `H^1` of the quintic.
pub const QUINTIC_LISTING: [[i32; 3]; 6] = [[3, 1, 1], [1, 3, 1], [1, 1, 3], [2, 2, 1], [2, 1, 2], [1, 2, 2]];

/// `perm[i]` = lexicographic index of the `i`-th listed tuple.
pub fn listing_permutation(listing: &[[i32; 3]]) -> Vec<usize> {
    let mut sorted: Vec<[i32; 3]> = listing.to_vec();
    sorted.sort();
    listing
        .iter()
        .map(|t| sorted.iter().position(|s| s == t).expect("listing entries are distinct"))
        .collect()
}

pub fn sextic_labels() -> BasisLabels {
    BasisLabels::from_listing(&listing_permutation(&SEXTIC_LISTING))
}

pub fn quintic_labels() -> BasisLabels {
    BasisLabels::from_listing(&listing_permutation(&QUINTIC_LISTING))
}

/// Classical labels for degrees with a reference listing, lexicographic labels otherwise.
pub fn labels_for_degree(d: usize) -> BasisLabels {
    match d {
        5 => quintic_labels(),
        6 => sextic_labels(),
        _ => BasisLabels::lex((d - 1) * (d - 2) / 2),
    }
}

pub fn f4() -> Field {
    FieldSpec::new(2, 2, Some(vec![1, 1, 1])).expect("t^2 + t + 1 is irreducible over F_2")
}

/// `x^3 y^3 + x^3 z^3 + y^3 z^3 + lambda z^6` over the field of `lambda`.
pub fn sextic(lambda: &FieldElement) -> PlaneCurveSpec {
    let ring = PolyRing::plane(lambda.field());
    let bindings = HashMap::from([("lambda".to_string(), lambda.clone())]);
    let f = parse_homogeneous(SEXTIC, &ring, &bindings).expect("reference sextic parses");
    PlaneCurveSpec::new(f).expect("reference sextic is a plane curve")
}

/// `x^5 + y^3 z^2 + A x y z^3 + B x z^4` over `F_7`.
pub fn quintic(a: i64, b: i64) -> Result<PlaneCurveSpec, GfError> {
    let f7 = FieldSpec::prime(7)?;
    let ring = PolyRing::plane(&f7);
    let bindings = HashMap::from([("A".to_string(), f7.from_int(a)), ("B".to_string(), f7.from_int(b))]);
    let f = parse_homogeneous(QUINTIC, &ring, &bindings).expect("reference quintic parses");
    Ok(PlaneCurveSpec::new(f).expect("reference quintic is a plane curve"))
}

/// One image relation `F(b_src) = sum coeff * b_dst`, labels 1-based in listing order.
pub type Relation = (usize, Vec<(usize, FieldElement)>);

/// Published Frobenius images of the sextic's basis.
pub fn sextic_reference_relations(lambda: &FieldElement) -> Vec<Relation> {
    let one = lambda.field().one();
    let single = |src: usize, dst: usize| (src, vec![(dst, one.clone())]);
    vec![
        single(1, 3),
        single(2, 4),
        single(3, 1),
        single(4, 2),
        single(5, 6),
        single(6, 5),
        (7, vec![(8, one.clone()), (9, one.clone()), (10, one.clone())]),
        (8, vec![(7, lambda.clone())]),
        (9, vec![]),
        (10, vec![]),
    ]
}

/// Published Frobenius images of the quintic's basis (only these six relations are listed).
pub fn quintic_reference_relations(field: &Field, a: i64, b: i64) -> Vec<Relation> {
    let c = |v: i64| field.from_int(v);
    let (a, b) = (c(a), c(b));
    let a2 = &a * &a;
    let b2 = &b * &b;
    let a3 = &a2 * &a;
    vec![
        (1, vec![(3, field.one()), (2, &c(5) * &b)]),
        (2, vec![]),
        (3, vec![]),
        (4, vec![]),
        (5, vec![(1, &c(5) * &(&a * &b2)), (5, &c(5) * &(&a2 * &b))]),
        (6, vec![(2, &c(4) * &(&a3 * &b))]),
    ]
}

/// Matrix in the lexicographic basis encoded by classical relations.
pub fn relations_matrix(field: &Field, listing: &[[i32; 3]], relations: &[Relation]) -> Matrix {
    let perm = listing_permutation(listing);
    let g = listing.len();
    let mut m = Matrix::zeros(field, g, g);
    for (src, images) in relations {
        for (dst, coeff) in images {
            let (i, j) = (perm[dst - 1], perm[src - 1]);
            let v = m.get(i, j) + coeff;
            m.set(i, j, v);
        }
    }
    m
}

/// Two ordinary triple points (the singularities of the sextic).
pub fn sextic_singularities() -> Vec<SingularityDatum> {
    vec![SingularityDatum {
        kind: SingularityKind::OrdinaryMultiplePoint { branches: 3 },
        count: 2,
    }]
}

/// One cusp `z^2 = x^5` (the singularity of the quintic).
pub fn quintic_singularities() -> Vec<SingularityDatum> {
    vec![SingularityDatum {
        kind: SingularityKind::Cusp { r: 5 },
        count: 1,
    }]
}

//! Inputs shared by the benchmarks.

use prank_core::fermat::FermatSpec;
use prank_core::{fixtures, FieldSpec, PlaneCurveSpec};

/// The sextic over `F_4` at `lambda = t`.
pub fn sextic() -> PlaneCurveSpec {
    fixtures::sextic(&fixtures::f4().generator())
}

/// `C^3(t, t^2, t^3)` in `P^4` over `F_16`.
pub fn fermat_3_4() -> FermatSpec {
    let f = FieldSpec::new(2, 4, None).expect("F_16 exists");
    let lambdas = ["t", "t^2", "t^3"].iter().map(|s| f.parse_element(s).expect("valid")).collect();
    FermatSpec::new(3, 4, lambdas).expect("valid spec")
}

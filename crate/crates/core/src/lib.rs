//! p-ranks and a-numbers of curves over finite fields of characteristic p.
//!
//! Frobenius is computed on `H^1(X, O_X)` realised inside the top cohomology of
//! projective space, and the Cartier operator on regular differentials of plane
//! curves. Everything is exact: finite-field arithmetic and big integers only.

pub mod cohomology;
pub mod combinatorics;
pub mod fermat;
pub mod fixtures;
pub mod gf;
pub mod jacobian;
pub mod matrix;
pub mod parse;
pub mod planecurve;
pub mod poly;

pub use cohomology::{dual_basis, reduce, CohomologyClass, DualBasis, SemilinearMap, Twist};
pub use fermat::{BasisChoice, FermatReport, FermatSpec};
pub use gf::{Field, FieldElement, FieldSpec};
pub use jacobian::{JacobianDecomposition, SingularityDatum, SingularityKind};
pub use matrix::Matrix;
pub use parse::{parse_homogeneous, parse_poly};
pub use planecurve::{PlaneCurveReport, PlaneCurveSpec};
pub use poly::{ExponentVector, MultiPoly, PolyRing, Ring};

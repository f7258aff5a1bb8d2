//! The monomial model of `H^n(P^n, O(-s))` and p-semilinear operators on it.
//!
//! A class is a combination of Laurent monomials `x_0^{-a_0} ... x_n^{-a_n}` with
//! every `a_i >= 1` and `sum a_i = s`. Laurent polynomials map into this space by
//! discarding every monomial with a nonnegative exponent.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::poly::{ExponentVector, MultiPoly, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("term of degree {found} cannot lie in H^n(O(-{s}))")]
    DegreeMismatch { s: i64, found: i64 },
    #[error("ring has {found} variables but the basis lives on P^{n}")]
    VariableCount { n: usize, found: usize },
    #[error("image {index} is expressed in a different basis")]
    InconsistentBasis { index: usize },
}

/// The basis `x^{-a}`, `a_i >= 1`, `sum a_i = s`, in lexicographic order of `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualBasis {
    n: usize,
    s: i64,
    monomials: Vec<Vec<i32>>,
    index: HashMap<Vec<i32>, usize>,
}

impl DualBasis {
    pub fn new(n: usize, s: i64) -> Arc<DualBasis> {
        let mut monomials = Vec::new();
        let mut current = Vec::with_capacity(n + 1);
        compositions(n + 1, s, &mut current, &mut monomials);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Arc::new(DualBasis {
            n,
            s,
            monomials,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The positive tuple `(a_0, ..., a_n)` of basis element `j`.
    pub fn tuple(&self, j: usize) -> &[i32] {
        &self.monomials[j]
    }

    pub fn tuples(&self) -> &[Vec<i32>] {
        &self.monomials
    }

    pub fn index_of(&self, tuple: &[i32]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Exponent vector `(-a_0, ..., -a_n)` of basis element `j`.
    pub fn exponent(&self, j: usize) -> ExponentVector {
        ExponentVector(self.monomials[j].iter().map(|a| -a).collect())
    }

    /// Basis element `j` as a Laurent monomial of `ring`.
    pub fn monomial(&self, ring: &Ring, j: usize) -> MultiPoly {
        MultiPoly::monomial(ring, self.exponent(j), ring.field().one())
    }
}

/// Shorthand for [`DualBasis::new`].
pub fn dual_basis(n: usize, s: i64) -> Arc<DualBasis> {
    DualBasis::new(n, s)
}

fn compositions(parts: usize, total: i64, current: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if parts == 0 {
        if total == 0 {
            out.push(current.clone());
        }
        return;
    }
    let max_here = total - (parts as i64 - 1);
    for a in 1..=max_here {
        current.push(a as i32);
        compositions(parts - 1, total - a, current, out);
        current.pop();
    }
}

/// An element of `H^n(P^n, O(-s))` in a [`DualBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    basis: Arc<DualBasis>,
    coords: BTreeMap<usize, FieldElement>,
}

impl CohomologyClass {
    pub fn zero(basis: &Arc<DualBasis>) -> Self {
        CohomologyClass {
            basis: Arc::clone(basis),
            coords: BTreeMap::new(),
        }
    }

    pub fn from_coords(basis: &Arc<DualBasis>, dense: &[FieldElement]) -> Self {
        assert_eq!(dense.len(), basis.len(), "coordinate vector length");
        CohomologyClass {
            basis: Arc::clone(basis),
            coords: dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn basis(&self) -> &Arc<DualBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &BTreeMap<usize, FieldElement> {
        &self.coords
    }

    pub fn coord(&self, j: usize) -> Option<&FieldElement> {
        self.coords.get(&j)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_dense(&self, field: &Field) -> Vec<FieldElement> {
        let mut v = vec![field.zero(); self.basis.len()];
        for (&i, c) in &self.coords {
            v[i] = c.clone();
        }
        v
    }

    pub fn to_poly(&self, ring: &Ring) -> MultiPoly {
        MultiPoly::from_terms(
            ring,
            self.coords
                .iter()
                .map(|(&i, c)| (self.basis.exponent(i), c.clone())),
        )
    }
}

/// Image of a Laurent polynomial of degree `-s` in `H^n(P^n, O(-s))`: the terms
/// with every exponent at most `-1` survive, everything else is zero in cohomology.
pub fn reduce(l: &MultiPoly, target: &Arc<DualBasis>) -> Result<CohomologyClass, CohomologyError> {
    let nvars = l.ring().nvars();
    if nvars != target.n + 1 {
        return Err(CohomologyError::VariableCount {
            n: target.n,
            found: nvars,
        });
    }
    let mut coords = BTreeMap::new();
    for (e, c) in l.terms() {
        let d = e.degree();
        if d != -target.s {
            return Err(CohomologyError::DegreeMismatch {
                s: target.s,
                found: d,
            });
        }
        if e.0.iter().all(|&x| x <= -1) {
            let tuple: Vec<i32> = e.0.iter().map(|x| -x).collect();
            let j = target.index_of(&tuple).expect("negative exponents of degree -s lie in the basis");
            coords.insert(j, c.clone());
        }
    }
    Ok(CohomologyClass {
        basis: Arc::clone(target),
        coords,
    })
}

/// Direction of the semilinearity: `M(cv) = c^p M(v)` or `M(cv) = c^{1/p} M(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Twist {
    P,
    PInverse,
}

impl Twist {
    fn exponent(self) -> i64 {
        match self {
            Twist::P => 1,
            Twist::PInverse => -1,
        }
    }
}

/// A semilinear endomorphism in a fixed basis: columns are the images of the
/// basis vectors and `apply(v) = A * v^(twist)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    pub matrix: Matrix,
    pub twist: Twist,
    pub basis_label: String,
}

impl SemilinearMap {
    pub fn new(matrix: Matrix, twist: Twist, basis_label: &str) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "semilinear maps are square");
        SemilinearMap {
            matrix,
            twist,
            basis_label: basis_label.to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let j = self.twist.exponent();
        let twisted: Vec<FieldElement> = v.iter().map(|c| c.frobenius_power(j)).collect();
        self.matrix.mul_vec(&twisted)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Dimension of the kernel of one application.
    pub fn a_number(&self) -> usize {
        self.dim() - self.rank()
    }

    /// Rank of the `g`-th iterate `A A^(q) A^(q^2) ... A^(q^{g-1})`, `q` the twist.
    /// Iteration stops once the rank repeats, since the image chain is then stationary.
    pub fn stable_rank(&self) -> usize {
        let g = self.dim();
        if g == 0 {
            return 0;
        }
        let j = self.twist.exponent();
        let mut product = self.matrix.clone();
        let mut twisted = self.matrix.clone();
        let mut rank = product.rank();
        for _ in 1..g {
            twisted = twisted.twist(j);
            product = product.mul(&twisted);
            let next = product.rank();
            debug_assert!(next <= rank, "iterated images must shrink");
            if next == rank {
                break;
            }
            rank = next;
        }
        rank
    }

    /// Dimension of `M^g(V)` computed by pushing a basis of the image through `g` times.
    pub fn iterated_image_rank(&self) -> usize {
        let field = self.field().clone();
        let g = self.dim();
        let mut span: Vec<Vec<FieldElement>> = (0..g)
            .map(|i| {
                let mut e = vec![field.zero(); g];
                e[i] = field.one();
                e
            })
            .collect();
        for _ in 0..g {
            let images: Vec<Vec<FieldElement>> = span.iter().map(|v| self.apply(v)).collect();
            span = column_space_basis(&field, g, &images);
            if span.is_empty() {
                break;
            }
        }
        span.len()
    }

    /// The matrix of the same map in the basis given by the columns of `p`:
    /// `P^{-1} A P^(twist)`.
    pub fn change_basis(&self, p: &Matrix) -> Option<SemilinearMap> {
        let inv = p.inverse().ok()?;
        let m = inv.mul(&self.matrix).mul(&p.twist(self.twist.exponent()));
        Some(SemilinearMap {
            matrix: m,
            twist: self.twist,
            basis_label: format!("{} (changed basis)", self.basis_label),
        })
    }
}

fn column_space_basis(field: &Field, dim: usize, vectors: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    // rows of the transpose span the same space; keep the nonzero rows of its rref
    let m = Matrix::from_rows(field, vectors.to_vec());
    let e = m.rref();
    debug_assert_eq!(m.cols(), dim);
    (0..e.pivots.len()).map(|i| e.matrix.row(i).to_vec()).collect()
}

/// Assembles the matrix whose column `j` holds the coordinates of `images[j]`.
pub fn semilinear_matrix(
    basis: &Arc<DualBasis>,
    field: &Field,
    images: &[CohomologyClass],
    twist: Twist,
    basis_label: &str,
) -> Result<SemilinearMap, CohomologyError> {
    let g = basis.len();
    if images.len() != g {
        return Err(CohomologyError::InconsistentBasis {
            index: images.len().min(g),
        });
    }
    let mut m = Matrix::zeros(field, g, g);
    for (j, img) in images.iter().enumerate() {
        if !(Arc::ptr_eq(img.basis(), basis) || **img.basis() == **basis) {
            return Err(CohomologyError::InconsistentBasis { index: j });
        }
        for (&i, c) in img.coords() {
            m.set(i, j, c.clone());
        }
    }
    Ok(SemilinearMap::new(m, twist, basis_label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binom;
    use crate::gf::FieldSpec;
    use crate::poly::PolyRing;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dual_basis_sizes() {
        assert_eq!(dual_basis(2, 6).len(), 10);
        assert_eq!(dual_basis(2, 3).tuples(), &[vec![1, 1, 1]]);
        assert_eq!(dual_basis(3, 6).len(), 10);
        assert_eq!(dual_basis(2, 2).len(), 0);
        assert_eq!(dual_basis(3, 0).len(), 0);
        for n in 1..5 {
            for s in 0..14 {
                assert_eq!(BigInt::from(dual_basis(n, s).len()), binom(s - 1, n as i64));
            }
        }
        let b = dual_basis(2, 6);
        let mut sorted = b.tuples().to_vec();
        sorted.sort();
        assert_eq!(sorted, b.tuples());
    }

    #[test]
    fn reduce_discards_nonnegative_exponents() {
        let f = FieldSpec::prime(2).unwrap();
        let r = PolyRing::plane(&f);
        let b = dual_basis(2, 6);
        let keep = MultiPoly::monomial(&r, ExponentVector(vec![-1, -2, -3]), f.one());
        let drop = MultiPoly::monomial(&r, ExponentVector(vec![-6, 0, 0]), f.one());
        let c = reduce(&(&keep + &drop), &b).unwrap();
        assert_eq!(c.coords().len(), 1);
        assert_eq!(c.to_poly(&r), keep);
        let bad = MultiPoly::monomial(&r, ExponentVector(vec![-1, -1, -1]), f.one());
        assert_eq!(
            reduce(&bad, &b).unwrap_err(),
            CohomologyError::DegreeMismatch { s: 6, found: -3 }
        );
    }

    #[test]
    fn identity_and_zero_maps() {
        let f = FieldSpec::new(2, 2, None).unwrap();
        let b = dual_basis(2, 5);
        let images: Vec<_> = (0..b.len())
            .map(|j| {
                let mut v = vec![f.zero(); b.len()];
                v[j] = f.one();
                CohomologyClass::from_coords(&b, &v)
            })
            .collect();
        let m = semilinear_matrix(&b, &f, &images, Twist::P, "id").unwrap();
        assert_eq!(m.matrix, Matrix::identity(&f, b.len()));
        assert_eq!(m.stable_rank(), 6);
        assert_eq!(m.a_number(), 0);
        let z = SemilinearMap::new(Matrix::zeros(&f, 4, 4), Twist::P, "zero");
        assert_eq!(z.stable_rank(), 0);
        assert_eq!(z.a_number(), 4);
        let other = dual_basis(2, 6);
        let wrong = vec![CohomologyClass::zero(&other); b.len()];
        assert!(matches!(
            semilinear_matrix(&b, &f, &wrong, Twist::P, "x"),
            Err(CohomologyError::InconsistentBasis { index: 0 })
        ));
    }

    #[test]
    fn nilpotent_shift() {
        let f = FieldSpec::prime(3).unwrap();
        let mut m = Matrix::zeros(&f, 4, 4);
        for i in 0..3 {
            m.set(i + 1, i, f.one());
        }
        let s = SemilinearMap::new(m, Twist::P, "shift");
        assert_eq!(s.rank(), 3);
        assert_eq!(s.stable_rank(), 0);
        assert_eq!(s.iterated_image_rank(), 0);
    }

    #[test]
    fn random_semilinear_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, k) in [(2u64, 1usize), (2, 2), (2, 3), (3, 2)] {
            let f = FieldSpec::new(p, k, None).unwrap();
            for _ in 0..25 {
                let g = rng.gen_range(1..7);
                let rows = (0..g)
                    .map(|_| {
                        (0..g)
                            .map(|_| {
                                if rng.gen_bool(0.5) {
                                    f.zero()
                                } else {
                                    f.element_from_index(rng.gen_range(0..f.order()))
                                }
                            })
                            .collect()
                    })
                    .collect();
                let twist = if rng.gen_bool(0.5) { Twist::P } else { Twist::PInverse };
                let m = SemilinearMap::new(Matrix::from_rows(&f, rows), twist, "r");
                assert_eq!(m.stable_rank(), m.iterated_image_rank());
                assert!(m.stable_rank() <= m.rank());
                assert_eq!(m.a_number() + m.rank(), g);
            }
        }
    }
}

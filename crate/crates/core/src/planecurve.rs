//! Hasse–Witt and Cartier–Manin matrices of plane curves, and the formal
//! Cartier operator on truncated Laurent series.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{dual_basis, reduce, semilinear_matrix, CohomologyClass, DualBasis, SemilinearMap, Twist};
use crate::gf::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::poly::{ExponentVector, MultiPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneCurveError {
    #[error("a plane curve needs a polynomial in exactly 3 variables, got {0}")]
    VariableCount(usize),
    #[error("defining polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("defining polynomial is zero")]
    ZeroPolynomial,
    #[error("defining polynomial has negative exponents")]
    NotAPolynomial,
    #[error("degree {0} is below 3")]
    DegreeTooSmall(i64),
    #[error("chart variable {0} is not one of 0, 1, 2")]
    BadChart(usize),
    #[error("the affine equation has vanishing derivative in the second chart variable")]
    ZeroPartialFy,
    #[error("Cartier image of basis element {index} leaves the adjoint basis")]
    BasisEscape { index: usize },
    #[error("series known below t^{known} but t^{needed} is required")]
    InsufficientPrecision { known: i64, needed: i64 },
    #[error("series are defined over different fields")]
    FieldMismatch,
}

/// A curve `f(x, y, z) = 0` in `P^2`, possibly singular.
#[derive(Debug, Clone)]
pub struct PlaneCurveSpec {
    f: MultiPoly,
    degree: usize,
}

impl PlaneCurveSpec {
    pub fn new(f: MultiPoly) -> Result<Self, PlaneCurveError> {
        if f.ring().nvars() != 3 {
            return Err(PlaneCurveError::VariableCount(f.ring().nvars()));
        }
        if f.is_zero() {
            return Err(PlaneCurveError::ZeroPolynomial);
        }
        if !f.is_polynomial() {
            return Err(PlaneCurveError::NotAPolynomial);
        }
        let d = f.homogeneous_degree().ok_or(PlaneCurveError::NotHomogeneous)?;
        if d < 3 {
            return Err(PlaneCurveError::DegreeTooSmall(d));
        }
        Ok(PlaneCurveSpec { f, degree: d as usize })
    }

    pub fn polynomial(&self) -> &MultiPoly {
        &self.f
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Arithmetic genus `(d-1)(d-2)/2`.
    pub fn pa(&self) -> usize {
        (self.degree - 1) * (self.degree - 2) / 2
    }

    /// The basis `1/(x^a y^b z^c)`, `a + b + c = d`, of `H^1(X, O_X)`.
    pub fn basis(&self) -> Arc<DualBasis> {
        dual_basis(2, self.degree as i64)
    }
}

/// Images `reduce(f^{p-1} beta^p)` of the dual basis elements.
pub fn frobenius_images(c: &PlaneCurveSpec) -> Vec<CohomologyClass> {
    let basis = c.basis();
    let ring = c.f.ring();
    let p = c.field().characteristic() as u64;
    let fp1 = c.f.pow(p - 1);
    (0..basis.len())
        .map(|j| {
            let beta_p = basis.monomial(ring, j).frobenius();
            reduce(&(&fp1 * &beta_p), &basis).expect("f^{p-1} beta^p has degree -d")
        })
        .collect()
}

/// Matrix of the Frobenius on `H^1(X, O_X)` in the lexicographic dual basis.
pub fn hasse_witt(c: &PlaneCurveSpec) -> SemilinearMap {
    let basis = c.basis();
    semilinear_matrix(&basis, c.field(), &frobenius_images(c), Twist::P, "dual monomial basis")
        .expect("images are expressed in the curve's own basis")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlaneInvariants {
    pub sigma: usize,
    pub a_number: usize,
    pub pa: usize,
}

pub fn invariants(c: &PlaneCurveSpec) -> PlaneInvariants {
    let hw = hasse_witt(c);
    PlaneInvariants {
        sigma: hw.stable_rank(),
        a_number: hw.a_number(),
        pa: c.pa(),
    }
}

/// Display names for basis vectors and the order in which image lines are listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabels {
    /// `names[j]` names the `j`-th lexicographic basis vector.
    pub names: Vec<String>,
    /// Lexicographic indices in listing order.
    pub order: Vec<usize>,
}

impl BasisLabels {
    /// `b1, b2, ...` in lexicographic order.
    pub fn lex(len: usize) -> Self {
        BasisLabels {
            names: (1..=len).map(|i| format!("b{i}")).collect(),
            order: (0..len).collect(),
        }
    }

    /// `perm[i]` is the lexicographic index of the vector listed as `b{i+1}`.
    pub fn from_listing(perm: &[usize]) -> Self {
        let mut names = vec![String::new(); perm.len()];
        for (i, &j) in perm.iter().enumerate() {
            names[j] = format!("b{}", i + 1);
        }
        BasisLabels {
            names,
            order: perm.to_vec(),
        }
    }
}

fn format_combination(col: &[FieldElement], labels: &BasisLabels) -> String {
    let mut parts = Vec::new();
    for &i in &labels.order {
        let c = &col[i];
        if c.is_zero() {
            continue;
        }
        let name = &labels.names[i];
        if c.is_one() {
            parts.push(name.clone());
        } else {
            let s = c.to_string();
            if s.contains('+') {
                parts.push(format!("({s})*{name}"));
            } else {
                parts.push(format!("{s}*{name}"));
            }
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Lines such as `F(b7) = b8 + b9 + b10`, one per basis vector.
pub fn image_table(map: &SemilinearMap, labels: &BasisLabels, op: &str) -> Vec<String> {
    labels
        .order
        .iter()
        .map(|&j| {
            format!(
                "{op}({}) = {}",
                labels.names[j],
                format_combination(&map.matrix.column(j), labels)
            )
        })
        .collect()
}

/// The adjoint basis `(a, b)`, `a + b <= d - 3`, in lexicographic order.
pub fn adjoint_basis(d: usize) -> Vec<(usize, usize)> {
    let top = d.saturating_sub(3);
    let mut out = Vec::new();
    if d < 3 {
        return out;
    }
    for a in 0..=top {
        for b in 0..=(top - a) {
            out.push((a, b));
        }
    }
    out
}

/// Cartier operator on `h dx/f_y` in the affine chart `infinity_var = 1`, via
/// `C(h dx/f_y) = (d^{2p-2}(f^{p-1} h) / dx^{p-1} dy^{p-1})^{1/p} dx/f_y`, where
/// `x, y` are the remaining two variables in increasing index order.
pub fn cartier_manin(c: &PlaneCurveSpec, infinity_var: usize) -> Result<SemilinearMap, PlaneCurveError> {
    if infinity_var > 2 {
        return Err(PlaneCurveError::BadChart(infinity_var));
    }
    let (u, v) = match infinity_var {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let field = c.field();
    let ring = c.f.ring();
    let p = field.characteristic();
    let g = c.f.dehomogenize(infinity_var).expect("curve polynomial is homogeneous");
    if g.partial_derivative(v, 1).is_zero() {
        return Err(PlaneCurveError::ZeroPartialFy);
    }
    let basis = adjoint_basis(c.degree);
    let index: BTreeMap<(usize, usize), usize> = basis.iter().enumerate().map(|(i, &ab)| (ab, i)).collect();
    let gp1 = g.pow(p as u64 - 1);
    let mut columns = Vec::with_capacity(basis.len());
    for (j, &(a, b)) in basis.iter().enumerate() {
        let mut e = vec![0i32; 3];
        e[u] = a as i32;
        e[v] = b as i32;
        let h = MultiPoly::monomial(ring, ExponentVector(e), field.one());
        let d = (&gp1 * &h).partial_derivative(u, p - 1).partial_derivative(v, p - 1);
        let root = d.pth_root().map_err(|_| PlaneCurveError::BasisEscape { index: j })?;
        let mut col = vec![field.zero(); basis.len()];
        for (exp, coef) in root.terms() {
            let key = (exp.0[u], exp.0[v]);
            let pos = (key.0 >= 0 && key.1 >= 0)
                .then(|| index.get(&(key.0 as usize, key.1 as usize)))
                .flatten()
                .ok_or(PlaneCurveError::BasisEscape { index: j })?;
            col[*pos] = coef.clone();
        }
        columns.push(col);
    }
    let m = Matrix::from_columns(field, basis.len(), &columns);
    Ok(SemilinearMap::new(m, Twist::PInverse, "adjoint differentials x^a y^b dx/f_y"))
}

/// Machine-readable summary of a plane curve computation.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneCurveReport {
    pub p: u32,
    pub k: usize,
    pub degree: usize,
    pub pa: usize,
    pub sigma: usize,
    pub a_number: usize,
    pub hasse_witt: Vec<Vec<String>>,
    pub images: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cartier_manin: Option<CartierReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CartierReport {
    pub chart: usize,
    pub rank: usize,
    pub sigma: usize,
    pub a_number: usize,
    pub matrix: Vec<Vec<String>>,
    pub images: Vec<String>,
}

pub fn report(
    c: &PlaneCurveSpec,
    labels: &BasisLabels,
    cartier_chart: Option<usize>,
) -> Result<PlaneCurveReport, PlaneCurveError> {
    let hw = hasse_witt(c);
    let cartier_manin = match cartier_chart {
        None => None,
        Some(chart) => {
            let cm = cartier_manin(c, chart)?;
            let names = BasisLabels {
                names: adjoint_basis(c.degree)
                    .iter()
                    .map(|&(a, b)| format!("w({a},{b})"))
                    .collect(),
                order: (0..cm.dim()).collect(),
            };
            Some(CartierReport {
                chart,
                rank: cm.rank(),
                sigma: cm.stable_rank(),
                a_number: cm.a_number(),
                matrix: cm.matrix.to_strings(),
                images: image_table(&cm, &names, "C"),
            })
        }
    };
    Ok(PlaneCurveReport {
        p: c.field().characteristic(),
        k: c.field().degree(),
        degree: c.degree,
        pa: c.pa(),
        sigma: hw.stable_rank(),
        a_number: hw.a_number(),
        hasse_witt: hw.matrix.to_strings(),
        images: image_table(&hw, labels, "F"),
        cartier_manin,
    })
}

// ---------------------------------------------------------------------------
// formal Laurent series

/// `sum a_n t^n` with coefficients known for every `n < precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    coeffs: BTreeMap<i64, FieldElement>,
    precision: i64,
}

/// Precision used for series that are known exactly (finite sums).
pub const EXACT: i64 = i64::MAX / 4;

impl LaurentSeries {
    /// Coefficients at or above `precision` are discarded.
    pub fn new<I>(field: &Field, coeffs: I, precision: i64) -> Self
    where
        I: IntoIterator<Item = (i64, FieldElement)>,
    {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            if n < precision && !c.is_zero() {
                map.insert(n, c);
            }
        }
        LaurentSeries {
            field: field.clone(),
            coeffs: map,
            precision: precision.min(EXACT),
        }
    }

    pub fn monomial(field: &Field, n: i64, c: FieldElement, precision: i64) -> Self {
        Self::new(field, [(n, c)], precision)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision >= EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &FieldElement)> {
        self.coeffs.iter()
    }

    /// Lowest exponent with a known nonzero coefficient, or the precision if none is known.
    pub fn valuation(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.precision)
    }

    pub fn coeff(&self, n: i64) -> Result<FieldElement, PlaneCurveError> {
        if n >= self.precision {
            return Err(PlaneCurveError::InsufficientPrecision {
                known: self.precision,
                needed: n,
            });
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(|| self.field.zero()))
    }

    /// Coefficient of `t^{-1} dt`.
    pub fn residue(&self) -> Result<FieldElement, PlaneCurveError> {
        self.coeff(-1)
    }

    fn check(&self, other: &Self) -> Result<(), PlaneCurveError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PlaneCurveError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PlaneCurveError> {
        self.check(other)?;
        let precision = self.precision.min(other.precision);
        let mut map = self.coeffs.clone();
        for (&n, c) in &other.coeffs {
            let e = map.entry(n).or_insert_with(|| self.field.zero());
            *e = &*e + c;
        }
        Ok(Self::new(&self.field, map, precision))
    }

    /// Product; known below `min(N_a + v_b, N_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self, PlaneCurveError> {
        self.check(other)?;
        let precision = self
            .precision
            .saturating_add(other.valuation())
            .min(other.precision.saturating_add(self.valuation()))
            .min(EXACT);
        let mut map: BTreeMap<i64, FieldElement> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                if i + j >= precision {
                    continue;
                }
                let e = map.entry(i + j).or_insert_with(|| self.field.zero());
                *e = &*e + &(a * b);
            }
        }
        Ok(Self::new(&self.field, map, precision))
    }

    /// `u -> u^p`, known below `p N`.
    pub fn frobenius(&self) -> Self {
        let p = self.field.characteristic() as i64;
        Self::new(
            &self.field,
            self.coeffs.iter().map(|(&n, c)| (n * p, c.frobenius())),
            self.precision.saturating_mul(p).min(EXACT),
        )
    }
}

/// `C(sum a_n t^n dt) = sum a_{pn-1}^{1/p} t^{n-1} dt`, known below `floor(N / p)`.
pub fn formal_cartier(omega: &LaurentSeries) -> LaurentSeries {
    let p = omega.field.characteristic() as i64;
    let precision = if omega.is_exact() {
        EXACT
    } else {
        omega.precision.div_euclid(p)
    };
    let terms = omega
        .coeffs
        .iter()
        .filter(|(&k, _)| (k + 1).rem_euclid(p) == 0)
        .map(|(&k, c)| ((k + 1) / p - 1, c.pth_root()));
    LaurentSeries::new(&omega.field, terms, precision)
}

/// As [`formal_cartier`], requiring the output to be known below `t^{order}`.
pub fn formal_cartier_to(omega: &LaurentSeries, order: i64) -> Result<LaurentSeries, PlaneCurveError> {
    let out = formal_cartier(omega);
    if out.precision < order {
        let p = omega.field.characteristic() as i64;
        return Err(PlaneCurveError::InsufficientPrecision {
            known: omega.precision,
            needed: p * order,
        });
    }
    Ok(out)
}

/// Whether `Res(f^p omega) = Res(f C(omega))^p`.
pub fn residue_duality_check(f: &LaurentSeries, omega: &LaurentSeries) -> Result<bool, PlaneCurveError> {
    f.check(omega)?;
    let lhs = f.frobenius().mul(omega)?.residue()?;
    let rhs = f.mul(&formal_cartier(omega))?.residue()?.frobenius();
    Ok(lhs == rhs)
}

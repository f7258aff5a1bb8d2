//! Sparse multivariate polynomials and Laurent polynomials over `F_{p^k}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands belong to different polynomial rings")]
    RingMismatch,
    #[error("exponent {exponent} of variable {var} is not divisible by p")]
    NotAPthPower { var: usize, exponent: i32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected {expected} coordinates, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Variable names together with the coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    field: Field,
    names: Vec<String>,
}

pub type Ring = Arc<PolyRing>;

impl PolyRing {
    pub fn new(field: &Field, names: Vec<String>) -> Ring {
        assert!(!names.is_empty(), "a polynomial ring needs at least one variable");
        Arc::new(PolyRing {
            field: Arc::clone(field),
            names,
        })
    }

    /// Variables `x0, ..., x_{nvars-1}`.
    pub fn indexed(field: &Field, nvars: usize) -> Ring {
        Self::new(field, (0..nvars).map(|i| format!("x{i}")).collect())
    }

    /// Variables `x, y, z`.
    pub fn plane(field: &Field) -> Ring {
        Self::new(field, vec!["x".into(), "y".into(), "z".into()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a variable by its name, by `x<i>`, or by the aliases `x, y, z` in three variables.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Some(i);
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(i) = rest.parse::<usize>() {
                if i < self.nvars() && !rest.starts_with('+') {
                    return Some(i);
                }
            }
        }
        if self.nvars() == 3 {
            return ["x", "y", "z"].iter().position(|&a| a == name);
        }
        None
    }
}

/// Exponents of a (Laurent) monomial, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<i32>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize, e: i32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        ExponentVector(v)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i32) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse (Laurent) polynomial; zero coefficients are never stored.
#[derive(Clone)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<ExponentVector, FieldElement>,
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Ring, c: FieldElement) -> Self {
        Self::monomial(ring, ExponentVector::zero(ring.nvars()), c)
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, ExponentVector::unit(ring.nvars(), i, 1), ring.field.one())
    }

    pub fn monomial(ring: &Ring, exp: ExponentVector, c: FieldElement) -> Self {
        assert_eq!(exp.len(), ring.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiPoly {
            ring: Arc::clone(ring),
            terms,
        }
    }

    /// Sums duplicate exponents and drops zeros.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, FieldElement)>,
    {
        let mut out = Self::zero(ring);
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        &self.ring.field
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &FieldElement)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<ExponentVector, FieldElement> {
        self.terms
    }

    pub fn coeff(&self, exp: &ExponentVector) -> FieldElement {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|e| e.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.is_polynomial())
    }

    pub(crate) fn add_term(&mut self, exp: ExponentVector, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Self::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(&self.ring);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    /// Multiplies by the monomial `x^exp`.
    pub fn shift(&self, exp: &ExponentVector) -> Self {
        MultiPoly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(e, c)| (e.add(exp), c.clone())).collect(),
        }
    }

    /// Repeated squaring. For `e = p` the result is checked against [`Self::frobenius`] in debug builds.
    pub fn pow(&self, mut e: u64) -> Self {
        let exponent = e;
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if exponent == self.ring.field.characteristic() as u64 {
            debug_assert!(acc == self.frobenius(), "a^p differs from the term-wise Frobenius");
        }
        acc
    }

    /// Term-wise `p`-th power: coefficients to the `p`, exponents times `p`.
    pub fn frobenius(&self) -> Self {
        let p = self.ring.field.characteristic() as i32;
        MultiPoly {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.scale(p), c.frobenius()))
                .collect(),
        }
    }

    /// The unique `b` with `b^p = self`.
    pub fn pth_root(&self) -> Result<Self, PolyError> {
        let p = self.ring.field.characteristic() as i32;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut root = Vec::with_capacity(e.len());
            for (var, &x) in e.0.iter().enumerate() {
                if x % p != 0 {
                    return Err(PolyError::NotAPthPower { var, exponent: x });
                }
                root.push(x / p);
            }
            terms.insert(ExponentVector(root), c.pth_root());
        }
        Ok(MultiPoly {
            ring: Arc::clone(&self.ring),
            terms,
        })
    }

    /// `order`-fold formal derivative in `var`; the falling factorial is reduced mod p.
    pub fn partial_derivative(&self, var: usize, order: u32) -> Self {
        let p = self.ring.field.characteristic() as i64;
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let x = e.0[var] as i64;
            let mut factor = 1i64;
            for j in 0..order as i64 {
                factor = factor * (x - j).rem_euclid(p) % p;
                if factor == 0 {
                    break;
                }
            }
            if factor == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp.0[var] -= order as i32;
            out.add_term(exp, &c.scale_int(factor as u64));
        }
        out
    }

    /// Sets variable `var` to 1. The input must be homogeneous.
    pub fn dehomogenize(&self, var: usize) -> Result<Self, PolyError> {
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut exp = e.clone();
            exp.0[var] = 0;
            out.add_term(exp, c);
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.nvars(),
                found: point.len(),
            });
        }
        let field = &self.ring.field;
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                let base = if k < 0 { x.inv()? } else { x.clone() };
                term = term.try_mul(&base.pow(k.unsigned_abs() as u64))?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Keeps the terms accepted by `keep`.
    pub fn filter<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Self {
        MultiPoly {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn format_monomial(&self, e: &ExponentVector) -> String {
        let mut parts = Vec::new();
        for (name, &k) in self.ring.names.iter().zip(&e.0) {
            match k {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{k}")),
            }
        }
        parts.join("*")
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = self.format_monomial(e);
            let coef = c.to_string();
            let coef = if c.is_prime_field() {
                coef
            } else {
                format!("({coef})")
            };
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{coef}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

// Operator impls panic on mixed rings; the `try_*` methods report it instead.
macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$try(rhs).expect("polynomial operands from different rings")
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

//! Arithmetic in prime fields `F_p` and extension fields `F_{p^k} = F_p[t]/(m(t))`.
//!
//! Elements are stored as coordinate vectors in the power basis `1, t, ..., t^{k-1}`
//! and carry a shared handle to their field, so mixing elements of different
//! fields is detected at runtime.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Shared handle to a validated field.
pub type Field = Arc<FieldSpec>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} does not fit below 2^31")]
    CharacteristicTooLarge(u64),
    #[error("modulus {0} is reducible over F_p")]
    ReducibleModulus(String),
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic")]
    NotMonic,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("cannot parse field element {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// `F_p[t]/(modulus)` with `modulus` monic irreducible of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    k: usize,
    /// Coefficients of the modulus, constant term first, length `k + 1`, monic.
    modulus: Vec<u32>,
}

/// Binary operation selector for [`arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^k}`. When `modulus` is `None` the smallest monic irreducible
    /// polynomial of degree `k` is used, ordering candidates by the integer
    /// `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
    pub fn new(p: u64, k: usize, modulus: Option<Vec<u32>>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(GfError::CharacteristicTooLarge(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                let m = trim(m.into_iter().map(|c| c % p).collect());
                if m.len() != k + 1 {
                    return Err(GfError::DegreeMismatch {
                        expected: k,
                        found: m.len().saturating_sub(1),
                    });
                }
                if m[k] != 1 {
                    return Err(GfError::NotMonic);
                }
                if !is_irreducible(&m, p) {
                    return Err(GfError::ReducibleModulus(format_poly_t(&m)));
                }
                m
            }
            None => default_modulus(p, k),
        };
        Ok(Arc::new(FieldSpec { p, k, modulus }))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field, GfError> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements `p^k`, saturating at `u64::MAX`.
    pub fn order(&self) -> u64 {
        (self.p as u64).saturating_pow(self.k as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    /// The class of `t`, a generator of the extension (equal to `-m_0` when `k = 1`).
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        if self.k == 1 {
            let c = (self.p - self.modulus[0]) % self.p;
            return self.element(&[c]);
        }
        let mut coeffs = vec![0; self.k];
        coeffs[1] = 1;
        FieldElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = n.rem_euclid(self.p as i64) as u32;
        FieldElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    /// Element with the given power-basis coordinates; longer inputs are reduced.
    pub fn element(self: &Arc<Self>, coords: &[u32]) -> FieldElement {
        let raw: Vec<u64> = coords.iter().map(|&c| (c % self.p) as u64).collect();
        FieldElement {
            field: Arc::clone(self),
            coeffs: self.reduce(raw),
        }
    }

    /// Element whose coordinates are the base-`p` digits of `index`; enumerates
    /// the field as `index` runs over `0..p^k`.
    pub fn element_from_index(self: &Arc<Self>, mut index: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        for c in coeffs.iter_mut() {
            *c = (index % self.p as u64) as u32;
            index /= self.p as u64;
        }
        FieldElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.element_from_index(i))
    }

    /// Parses the printed form, e.g. `"t^2+3*t+1"`, `"5"`, `"-t"`.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<FieldElement, GfError> {
        let err = |reason: &str| GfError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut acc = self.zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut negative = false;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    negative = !negative;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &s[start..i];
            if term.is_empty() {
                return Err(err("dangling sign"));
            }
            let value = self.parse_term(term).map_err(|r| err(&r))?;
            acc = if negative { &acc - &value } else { &acc + &value };
        }
        Ok(acc)
    }

    fn parse_term(self: &Arc<Self>, term: &str) -> Result<FieldElement, String> {
        let parse_int = |s: &str| -> Result<u64, String> {
            s.parse::<u64>().map_err(|_| format!("bad integer {s:?}"))
        };
        let (coef, rest) = match term.find('t') {
            None => return Ok(self.from_int((parse_int(term)? % self.p as u64) as i64)),
            Some(pos) => {
                let head = &term[..pos];
                let coef = if head.is_empty() {
                    1
                } else {
                    let head = head.strip_suffix('*').ok_or("expected '*' before t")?;
                    parse_int(head)? % self.p as u64
                };
                (coef, &term[pos + 1..])
            }
        };
        let exp = if rest.is_empty() {
            1
        } else {
            let e = rest.strip_prefix('^').ok_or("expected '^' after t")?;
            parse_int(e)?
        };
        Ok(self.generator().pow(exp).scale_int(coef))
    }

    /// Reduces a coefficient vector (constant term first) modulo the field modulus.
    fn reduce(&self, mut raw: Vec<u64>) -> Vec<u32> {
        let p = self.p as u64;
        let k = self.k;
        for c in raw.iter_mut() {
            *c %= p;
        }
        if raw.len() > k {
            for deg in (k..raw.len()).rev() {
                let c = raw[deg];
                if c == 0 {
                    continue;
                }
                raw[deg] = 0;
                // t^deg = -sum_{i<k} m_i t^{deg-k+i}
                for i in 0..k {
                    let m = self.modulus[i] as u64;
                    if m != 0 {
                        let idx = deg - k + i;
                        raw[idx] = (raw[idx] + (p - c) * m) % p;
                    }
                }
            }
        }
        let mut out = vec![0u32; k];
        for (i, c) in raw.into_iter().take(k).enumerate() {
            out[i] = c as u32;
        }
        out
    }
}

fn default_modulus(p: u32, k: usize) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut candidate = vec![0u32; k + 1];
    candidate[k] = 1;
    loop {
        if candidate[0] != 0 && is_irreducible(&candidate, p) {
            return candidate;
        }
        // next candidate in base-p counting order over c_0..c_{k-1}
        let mut i = 0;
        loop {
            candidate[i] += 1;
            if candidate[i] < p {
                break;
            }
            candidate[i] = 0;
            i += 1;
            assert!(i < k, "an irreducible polynomial of every degree exists");
        }
    }
}

// ---------------------------------------------------------------------------
// dense F_p[t] helpers used for irreducibility checks and inversion

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    pow_mod_p(a, p - 2, p)
}

fn pow_mod_p(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Returns `(quotient, remainder)`; `b` must be nonzero.
fn poly_divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = inv_mod_p(*b.last().unwrap(), p) as u64;
    let p64 = p as u64;
    let mut q = vec![0u32; r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * lead_inv % p64) as u32;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_mod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    poly_divmod(a, m, p).1
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_mod(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mod(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_mod(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Distinct-degree test: `m` (degree `k`) is irreducible iff it has no common
/// factor with `t^{p^d} - t` for `1 <= d <= k/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    if k <= 3 {
        // a reducible polynomial of degree <= 3 has a linear factor
        return (0..p).all(|x| eval_mod_p(m, x, p) != 0);
    }
    let t = vec![0u32, 1];
    let mut frob = t.clone();
    for _ in 1..=k / 2 {
        frob = poly_powmod(&frob, p as u64, m, p);
        let g = poly_gcd(m, &poly_sub(&frob, &t, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn eval_mod_p(a: &[u32], x: u32, p: u32) -> u32 {
    let p64 = p as u64;
    a.iter()
        .rev()
        .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p64) as u32
}

fn format_poly_t(c: &[u32]) -> String {
    let mut parts = Vec::new();
    for (e, &coef) in c.iter().enumerate().rev() {
        if coef == 0 {
            continue;
        }
        let mono = match e {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{e}"),
        };
        parts.push(match (coef, mono.is_empty()) {
            (_, true) => coef.to_string(),
            (1, false) => mono,
            (_, false) => format!("{coef}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

// ---------------------------------------------------------------------------

/// An element of `F_{p^k}`.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Power-basis coordinates, constant term first.
    pub fn coords(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Index in `0..p^k` with coordinates as base-`p` digits.
    pub fn index(&self) -> u64 {
        let p = self.field.p as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check(&self, other: &Self) -> Result<(), GfError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GfError> {
        self.check(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(self.with(coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GfError> {
        self.check(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        Ok(self.with(coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GfError> {
        self.check(other)?;
        let p = self.field.p as u64;
        if self.field.k == 1 {
            let c = self.coeffs[0] as u64 * other.coeffs[0] as u64 % p;
            return Ok(self.with(vec![c as u32]));
        }
        let k = self.field.k;
        let mut raw = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                raw[i + j] = (raw[i + j] + a as u64 * b as u64) % p;
            }
        }
        Ok(self.with(self.field.reduce(raw)))
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let p = self.field.p;
        if self.field.k == 1 {
            return Ok(self.with(vec![inv_mod_p(self.coeffs[0], p)]));
        }
        // extended Euclid in F_p[t]: s*a + u*m = 1
        let m = self.field.modulus.clone();
        let (mut r0, mut r1) = (m, trim(self.coeffs.clone()));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant
        let c = inv_mod_p(r0[0], p) as u64;
        let raw: Vec<u64> = s0.iter().map(|&x| x as u64 * c).collect();
        Ok(self.with(self.field.reduce(raw)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, GfError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p as u64)
    }

    /// The unique `b` with `b^p = a`, computed as `a^{p^{k-1}}`.
    pub fn pth_root(&self) -> Self {
        let mut out = self.clone();
        for _ in 1..self.field.k {
            out = out.frobenius();
        }
        out
    }

    /// Applies the Frobenius `j` times; negative `j` applies the p-th root.
    pub fn frobenius_power(&self, j: i64) -> Self {
        let k = self.field.k as i64;
        let steps = j.rem_euclid(k);
        let mut out = self.clone();
        for _ in 0..steps {
            out = out.frobenius();
        }
        out
    }

    pub fn scale_int(&self, c: u64) -> Self {
        let p = self.field.p as u64;
        let c = c % p;
        self.with(
            self.coeffs
                .iter()
                .map(|&a| (a as u64 * c % p) as u32)
                .collect(),
        )
    }

    fn with(&self, coeffs: Vec<u32>) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    /// True when this element lies in the prime field and is printed without `t`.
    pub fn is_prime_field(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }
}

/// Binary field arithmetic with explicit error reporting.
pub fn arithmetic(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, GfError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly_t(&self.coeffs))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (F_{}^{})", self, self.field.p, self.field.k)
    }
}

// Operator impls panic on mixed fields; use the `try_*` methods to handle that case.
macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("field element operands from different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p;
        self.with(self.coeffs.iter().map(|&a| (p - a) % p).collect())
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

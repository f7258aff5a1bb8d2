//! Exact integer combinatorics: binomials, bounded compositions and the
//! closed-form counts used as cross-checks by the Fermat module.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("search space of {0} states exceeds the enumeration limit")]
    SearchSpaceTooLarge(u128),
    #[error("coordinate {index} has lower bound {lower} above upper bound {upper}")]
    EmptyInterval { index: usize, lower: i64, upper: i64 },
}

/// Largest search space `count_compositions` will walk with [`CountMethod::Enumerate`].
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

/// `C(a, b)` with the convention `C(a, b) = 0` whenever `a < 0`, `b < 0` or `a < b`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || a < b {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Integer vectors `(x_0, ..., x_{len-1})` with `lower[i] <= x_i <= upper[i]` and
/// `sum x_i = total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedCompositionQuery {
    pub total: i64,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Enumerate,
    InclusionExclusion,
}

impl BoundedCompositionQuery {
    /// Every coordinate in the same closed interval.
    pub fn uniform(len: usize, total: i64, lower: i64, upper: i64) -> Self {
        BoundedCompositionQuery {
            total,
            lower: vec![lower; len],
            upper: vec![upper; len],
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    fn validate(&self) -> Result<(), CombinatoricsError> {
        assert_eq!(self.lower.len(), self.upper.len(), "bound vectors differ in length");
        for (i, (&lo, &hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if lo > hi {
                return Err(CombinatoricsError::EmptyInterval {
                    index: i,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(())
    }

    fn widths(&self) -> Vec<i64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo + 1)
            .collect()
    }

    /// Product of the interval widths, saturating.
    pub fn search_space(&self) -> u128 {
        self.widths()
            .iter()
            .fold(1u128, |acc, &w| acc.saturating_mul(w.max(0) as u128))
    }

    /// All solutions in lexicographic order; subject to the enumeration guard.
    pub fn solutions(&self) -> Result<Vec<Vec<i64>>, CombinatoricsError> {
        self.validate()?;
        let space = self.search_space();
        if space > ENUMERATION_LIMIT {
            return Err(CombinatoricsError::SearchSpaceTooLarge(space));
        }
        let mut out = Vec::new();
        if self.is_empty() {
            if self.total == 0 {
                out.push(vec![]);
            }
            return Ok(out);
        }
        // suffix sums of the bounds prune branches that cannot reach the total
        let n = self.len();
        let mut min_tail = vec![0i64; n + 1];
        let mut max_tail = vec![0i64; n + 1];
        for i in (0..n).rev() {
            min_tail[i] = min_tail[i + 1] + self.lower[i];
            max_tail[i] = max_tail[i + 1] + self.upper[i];
        }
        let mut current = Vec::with_capacity(n);
        self.walk(0, self.total, &min_tail, &max_tail, &mut current, &mut out);
        Ok(out)
    }

    fn walk(
        &self,
        i: usize,
        remaining: i64,
        min_tail: &[i64],
        max_tail: &[i64],
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if i == self.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let lo = self.lower[i].max(remaining - max_tail[i + 1]);
        let hi = self.upper[i].min(remaining - min_tail[i + 1]);
        for x in lo..=hi {
            current.push(x);
            self.walk(i + 1, remaining - x, min_tail, max_tail, current, out);
            current.pop();
        }
    }

    pub fn count(&self, method: CountMethod) -> Result<BigInt, CombinatoricsError> {
        match method {
            CountMethod::Enumerate => Ok(BigInt::from(self.solutions()?.len())),
            CountMethod::InclusionExclusion => self.count_inclusion_exclusion(),
        }
    }

    /// Shifts to `y_i = x_i - lower_i in [0, w_i - 1]` and sums
    /// `(-1)^|J| C(T - sum_J w_j + len - 1, len - 1)` over subsets `J` of
    /// coordinates forced past their upper bound. Subsets sharing the same
    /// overflow total are merged through the expansion of `prod (1 - z^{w_j})`.
    fn count_inclusion_exclusion(&self) -> Result<BigInt, CombinatoricsError> {
        self.validate()?;
        let len = self.len() as i64;
        let shifted: i64 = self.total - self.lower.iter().sum::<i64>();
        if shifted < 0 {
            return Ok(BigInt::zero());
        }
        if len == 0 {
            return Ok(if shifted == 0 { BigInt::one() } else { BigInt::zero() });
        }
        // coefficients of prod (1 - z^{w_j}), truncated at z^shifted
        let cap = shifted as usize;
        let mut poly = vec![BigInt::zero(); cap + 1];
        poly[0] = BigInt::one();
        for w in self.widths() {
            let w = w as usize;
            if w > cap {
                continue;
            }
            for d in (w..=cap).rev() {
                let sub = poly[d - w].clone();
                poly[d] -= sub;
            }
        }
        let mut acc = BigInt::zero();
        for (d, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * binom(shifted - d as i64 + len - 1, len - 1);
        }
        Ok(acc)
    }
}

/// Counts with both methods and asserts agreement when enumeration is feasible.
pub fn count_compositions(q: &BoundedCompositionQuery) -> Result<BigInt, CombinatoricsError> {
    let ie = q.count(CountMethod::InclusionExclusion)?;
    match q.count(CountMethod::Enumerate) {
        Ok(en) => {
            assert_eq!(en, ie, "enumeration and inclusion-exclusion disagree on {q:?}");
            Ok(en)
        }
        Err(CombinatoricsError::SearchSpaceTooLarge(_)) => Ok(ie),
        Err(e) => Err(e),
    }
}

/// Outcome of comparing a closed-form count against a ground-truth count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub closed_form: String,
    pub ground_truth: String,
    pub agrees: bool,
}

impl CrossCheck {
    pub fn new(name: &str, closed_form: &BigInt, ground_truth: &BigInt) -> Self {
        CrossCheck {
            name: name.to_string(),
            closed_form: closed_form.to_string(),
            ground_truth: ground_truth.to_string(),
            agrees: closed_form == ground_truth,
        }
    }
}

/// `sum_{i=0}^{n-t-2} (-1)^i C(n+1, i) C((n-t-i-1)m - 1, n)`: the
/// inclusion-exclusion count of tuples with `tm < a_0 <= (t+1)m`,
/// `0 < a_j <= m` otherwise, summing to `(n-1)m`.
pub fn card_s_t0_closed_form(m: i64, n: i64, t: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=(n - t - 2) {
        let term = binom(n + 1, i) * binom((n - t - i - 1) * m - 1, n);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `T_i(0,0)` as printed: `C(n+1, i) C((n-1)m - i(m-1)/2 - 1, n)`.
pub fn t_i_closed_form(m: i64, n: i64, i: i64) -> BigInt {
    binom(n + 1, i) * binom((n - 1) * m - i * (m - 1) / 2 - 1, n)
}

/// The two readings of the closed form for `|T(0,0)|` (odd `m`):
/// `with_factor` multiplies the binomial prefactor into the `T_i` that already
/// contain `C(n+1, i)`; `without_factor` uses the bare `C((n-1)m - i(m-1)/2 - 1, n)`.
pub fn t00_closed_form_readings(m: i64, n: i64, card_s00: &BigInt) -> (BigInt, BigInt) {
    let mut with_factor = card_s00.clone();
    let mut without_factor = card_s00.clone();
    for (i, sign) in [(n - 1, -1i32), (n, 1), (n + 1, -1)] {
        let bare = binom((n - 1) * m - i * (m - 1) / 2 - 1, n);
        let pref = binom(n + 1, i);
        let wf = &pref * t_i_closed_form(m, n, i);
        let nf = pref * bare;
        if sign < 0 {
            with_factor -= wf;
            without_factor -= nf;
        } else {
            with_factor += wf;
            without_factor += nf;
        }
    }
    (with_factor, without_factor)
}

/// `h^n(O_{P^n}(-s)) = C(s-1, n)`, zero for `s <= n`.
pub fn hn_pn(n: i64, s: i64) -> BigInt {
    binom(s - 1, n)
}

/// Renders a big integer as `i64` when it fits.
pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal(a: usize, b: usize) -> BigInt {
        let mut row = vec![BigInt::one()];
        for _ in 0..a {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row.get(b).cloned().unwrap_or_default()
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 3), BigInt::from(10));
        assert_eq!(binom(-1, 3), BigInt::zero());
        assert_eq!(binom(2, 5), BigInt::zero());
        assert_eq!(binom(50, 25), BigInt::from(126_410_606_437_752u64));
        assert_eq!(binom(50, 25), pascal(50, 25));
        for a in 0..40 {
            for b in 0..=a {
                assert_eq!(binom(a as i64, b as i64), pascal(a, b));
            }
        }
    }

    #[test]
    fn compositions() {
        let q = BoundedCompositionQuery::uniform(4, 6, 1, 3);
        assert_eq!(count_compositions(&q).unwrap(), BigInt::from(10));
        let q = BoundedCompositionQuery::uniform(4, 3, 1, 3);
        assert_eq!(count_compositions(&q).unwrap(), BigInt::zero());
        let big = BoundedCompositionQuery::uniform(12, 60, 0, 20);
        assert!(matches!(
            big.count(CountMethod::Enumerate),
            Err(CombinatoricsError::SearchSpaceTooLarge(_))
        ));
        assert!(count_compositions(&big).is_ok());
    }

    #[test]
    fn card_s_t0_matches_enumeration() {
        for (m, n) in [(3i64, 4i64), (3, 3), (5, 3), (5, 4), (3, 5)] {
            for t in 0..=(n - 2) {
                let mut q = BoundedCompositionQuery::uniform((n + 1) as usize, (n - 1) * m, 1, m);
                q.lower[0] = t * m + 1;
                q.upper[0] = (t + 1) * m;
                assert_eq!(
                    q.count(CountMethod::Enumerate).unwrap(),
                    card_s_t0_closed_form(m, n, t),
                    "m={m} n={n} t={t}"
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]
        #[test]
        fn methods_agree(len in 0usize..6, total in -3i64..30,
                         bounds in proptest::collection::vec((-2i64..4, 0i64..7), 6)) {
            let lower: Vec<i64> = bounds.iter().take(len).map(|b| b.0).collect();
            let upper: Vec<i64> = bounds.iter().take(len).map(|b| b.0 + b.1).collect();
            let q = BoundedCompositionQuery { total, lower, upper };
            prop_assert_eq!(q.count(CountMethod::Enumerate).unwrap(),
                            q.count(CountMethod::InclusionExclusion).unwrap());
        }
    }
}

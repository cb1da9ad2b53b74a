//! Exponent vectors and the weighted degrevlex order.
//!
//! The order compares weighted degree first (weights `ã1..ãn`). Ties are
//! broken reverse-lexicographically scanning `x1, x2, ..., xn`: at the first
//! differing variable, the monomial with the larger exponent is the smaller
//! one. `x1` is therefore the cheapest variable and never leads a binomial
//! of the toric ideal.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::GeneratorSet;

/// Exponents `(k2, ..., kn)` of the non-parameter variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zero(dims: usize) -> Self {
        ExponentVector(vec![0; dims])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&k| k as u64).sum()
    }

    /// `Π (ki + 1)`.
    pub fn cube(&self) -> Result<u64> {
        cube(&self.0).ok_or(Error::Overflow("cube product"))
    }

    /// Weighted degree over the reduced weights of `g`.
    pub fn qsum(&self, g: &GeneratorSet) -> Result<u64> {
        weighted_degree(&self.0, g)
    }

    pub fn divides(&self, other: &ExponentVector) -> bool {
        divides(&self.0, &other.0)
    }

    /// Monomial string such as `x2^3*x4`; `1` for the empty monomial.
    pub fn to_monomial_string(&self) -> String {
        format_monomial(0, &self.0)
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_monomial_string())
    }
}

pub(crate) fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn cube(k: &[u32]) -> Option<u64> {
    k.iter()
        .try_fold(1u64, |acc, &e| acc.checked_mul(e as u64 + 1))
}

pub(crate) fn dot(k: &[u32], weights: &[u64]) -> Option<u64> {
    k.iter().zip(weights).try_fold(0u64, |acc, (&e, &w)| {
        acc.checked_add((e as u64).checked_mul(w)?)
    })
}

/// `Σ ki·ãi` over the non-parameter variables of `g`.
pub fn weighted_degree(k: &[u32], g: &GeneratorSet) -> Result<u64> {
    if k.len() != g.dims() {
        return Err(Error::LengthMismatch {
            expected: g.dims(),
            got: k.len(),
        });
    }
    dot(k, g.weights()).ok_or(Error::Overflow("weighted degree"))
}

fn format_monomial(param: u64, rest: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut push = |var: usize, e: u64| match e {
        0 => {}
        1 => parts.push(format!("x{var}")),
        _ => parts.push(format!("x{var}^{e}")),
    };
    push(1, param);
    for (i, &e) in rest.iter().enumerate() {
        push(i + 2, e as u64);
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// A monomial over all variables: `x1^param * x2^k2 * ... * xn^kn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub param: u64,
    pub rest: ExponentVector,
}

impl Monomial {
    pub fn new(param: u64, rest: ExponentVector) -> Self {
        Monomial { param, rest }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.param <= other.param && self.rest.divides(&other.rest)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            param: self.param + other.param,
            rest: ExponentVector(
                self.rest
                    .0
                    .iter()
                    .zip(&other.rest.0)
                    .map(|(a, b)| a + b)
                    .collect(),
            ),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            param: self.param.max(other.param),
            rest: ExponentVector(
                self.rest
                    .0
                    .iter()
                    .zip(&other.rest.0)
                    .map(|(&a, &b)| a.max(b))
                    .collect(),
            ),
        }
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            param: self.param - other.param,
            rest: ExponentVector(
                self.rest
                    .0
                    .iter()
                    .zip(&other.rest.0)
                    .map(|(a, b)| a - b)
                    .collect(),
            ),
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_monomial(self.param, &self.rest.0))
    }
}

/// Weighted degrevlex with `x1` revlex-last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    param_weight: u64,
    weights: Vec<u64>,
}

impl MonomialOrder {
    pub fn new(g: &GeneratorSet) -> Self {
        Self::from_weights(g.parameter(), g.weights().to_vec())
    }

    /// Order for an explicit variable weighting `x1 -> param_weight`,
    /// `x2.. -> weights`.
    pub fn from_weights(param_weight: u64, weights: Vec<u64>) -> Self {
        MonomialOrder {
            param_weight,
            weights,
        }
    }

    // u32 exponents times u64 weights stay below 2^96 per term, so the sum
    // cannot leave u128 for any realistic number of variables.
    fn wide_degree(&self, param: u64, rest: &[u32]) -> u128 {
        param as u128 * self.param_weight as u128
            + rest
                .iter()
                .zip(&self.weights)
                .map(|(&e, &w)| e as u128 * w as u128)
                .sum::<u128>()
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.rest.len(), self.weights.len());
        debug_assert_eq!(b.rest.len(), self.weights.len());
        self.wide_degree(a.param, &a.rest.0)
            .cmp(&self.wide_degree(b.param, &b.rest.0))
            .then_with(|| revlex_tiebreak(a.param, &a.rest.0, b.param, &b.rest.0))
    }

    /// Compares two `x1`-free monomials.
    pub fn compare_rest(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.wide_degree(0, a)
            .cmp(&self.wide_degree(0, b))
            .then_with(|| revlex_tiebreak(0, a, 0, b))
    }
}

/// Revlex tie-break on `x1, x2, ...`: larger exponent at the first
/// difference means smaller monomial.
pub(crate) fn revlex_tiebreak(pa: u64, a: &[u32], pb: u64, b: &[u32]) -> Ordering {
    if pa != pb {
        return pb.cmp(&pa);
    }
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(param: u64, rest: &[u32]) -> Monomial {
        Monomial::new(param, ExponentVector::new(rest.to_vec()))
    }

    #[test]
    fn weighted_degree_examples() {
        let g = GeneratorSet::normalize(&[6, 9, 20]).unwrap();
        assert_eq!(weighted_degree(&[1, 2], &g), Ok(49));
        assert_eq!(weighted_degree(&[2, 0], &g), Ok(18));
        let g = GeneratorSet::normalize(&[2, 3]).unwrap();
        assert_eq!(weighted_degree(&[0], &g), Ok(0));
        assert!(matches!(
            weighted_degree(&[0, 1], &g),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn weighted_degree_overflow_is_reported() {
        let g = GeneratorSet::normalize(&[2, i64::MAX]).unwrap();
        assert_eq!(
            weighted_degree(&[3], &g),
            Err(Error::Overflow("weighted degree"))
        );
    }

    #[test]
    fn lead_of_ten_seven_nine() {
        // x1 = 10, x2 = 7, x3 = 9
        let g = GeneratorSet::normalize(&[10, 7, 9])
            .unwrap()
            .with_param_index(2)
            .unwrap();
        let ord = MonomialOrder::new(&g);
        let tail = mono(1, &[0, 2]);
        let lead = mono(0, &[4, 0]);
        assert_eq!(ord.compare(&tail, &lead), Ordering::Less);
        assert_eq!(ord.compare(&lead, &lead), Ordering::Equal);
    }

    #[test]
    fn different_weights_decide() {
        let g = GeneratorSet::normalize(&[6, 9, 20]).unwrap();
        let ord = MonomialOrder::new(&g);
        assert_eq!(ord.compare_rest(&[1, 0], &[0, 1]), Ordering::Less);
    }

    #[test]
    fn display_strings() {
        assert_eq!(mono(0, &[3, 0, 1]).to_string(), "x2^3*x4");
        assert_eq!(mono(3, &[0, 0]).to_string(), "x1^3");
        assert_eq!(mono(0, &[]).to_string(), "1");
        assert_eq!(ExponentVector::new(vec![1, 2]).to_string(), "x2*x3^2");
    }

    fn arb_mono(dims: usize) -> impl Strategy<Value = Monomial> {
        (0u64..6, prop::collection::vec(0u32..6, dims))
            .prop_map(|(p, r)| Monomial::new(p, ExponentVector::new(r)))
    }

    proptest! {
        #[test]
        fn order_is_total_and_multiplicative(
            a in arb_mono(3), b in arb_mono(3), c in arb_mono(3), m in arb_mono(3)
        ) {
            let g = GeneratorSet::normalize(&[7, 11, 12, 15]).unwrap();
            let ord = MonomialOrder::new(&g);
            let ab = ord.compare(&a, &b);
            prop_assert_eq!(ab, ord.compare(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab == Ordering::Less && ord.compare(&b, &c) == Ordering::Less {
                prop_assert_eq!(ord.compare(&a, &c), Ordering::Less);
            }
            if ab != Ordering::Equal {
                prop_assert_eq!(ord.compare(&a.mul(&m), &b.mul(&m)), ab);
            }
            let one = mono(0, &[0, 0, 0]);
            if a != one {
                prop_assert_eq!(ord.compare(&one, &a), Ordering::Less);
            }
        }

        #[test]
        fn parameter_is_revlex_last(a in arb_mono(3), b in arb_mono(3)) {
            // Equal weighted degree, a has x1 and b does not: a is smaller.
            let g = GeneratorSet::normalize(&[7, 11, 12, 15]).unwrap();
            let ord = MonomialOrder::new(&g);
            let wa = ord.wide_degree(a.param, a.rest.exps());
            let wb = ord.wide_degree(0, b.rest.exps());
            if a.param > 0 && wa == wb {
                let b0 = Monomial::new(0, b.rest.clone());
                prop_assert_eq!(ord.compare(&a, &b0), Ordering::Less);
            }
        }
    }
}

//! Validated generator sets.
//!
//! A [`GeneratorSet`] fixes the variable numbering used by every other
//! module: `x1` is the Noether parameter (by default the smallest
//! generator) and `x2..xn` are the remaining generators in increasing
//! order. All arithmetic downstream works on the gcd-reduced generators;
//! outputs are scaled back by `lambda` where the caller asks for original
//! values.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    raw: Vec<i64>,
    sorted: Vec<u64>,
    lambda: u64,
    reduced: Vec<u64>,
    param_index: usize,
    /// `order[v]` is the index into `sorted` of variable `x_{v+1}`.
    order: Vec<usize>,
    /// Reduced weights of `x2..xn`.
    weights: Vec<u64>,
}

impl GeneratorSet {
    /// Sorts, deduplicates and gcd-reduces `raw`. The parameter is the
    /// smallest generator.
    pub fn normalize(raw: &[i64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = raw.iter().find(|&&a| a <= 0) {
            return Err(Error::NonPositiveGenerator(bad));
        }
        let mut sorted: Vec<u64> = raw.iter().map(|&a| a as u64).collect();
        sorted.sort_unstable();
        sorted.dedup();
        let lambda = sorted.iter().fold(0, |g, &a| gcd(g, a));
        let reduced = sorted.iter().map(|&a| a / lambda).collect();
        let mut set = GeneratorSet {
            raw: raw.to_vec(),
            sorted,
            lambda,
            reduced,
            param_index: 0,
            order: Vec::new(),
            weights: Vec::new(),
        };
        set.rebuild_order();
        Ok(set)
    }

    /// Selects which (sorted) generator serves as the parameter `x1`.
    pub fn with_param_index(mut self, index: usize) -> Result<Self> {
        if index >= self.sorted.len() {
            return Err(Error::InvalidParamIndex {
                index,
                len: self.sorted.len(),
            });
        }
        self.param_index = index;
        self.rebuild_order();
        Ok(self)
    }

    fn rebuild_order(&mut self) {
        self.order = std::iter::once(self.param_index)
            .chain((0..self.sorted.len()).filter(|&i| i != self.param_index))
            .collect();
        self.weights = self.order[1..].iter().map(|&i| self.reduced[i]).collect();
    }

    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    pub fn sorted(&self) -> &[u64] {
        &self.sorted
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn reduced(&self) -> &[u64] {
        &self.reduced
    }

    pub fn param_index(&self) -> usize {
        self.param_index
    }

    /// Number of distinct generators `n`.
    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Number of non-parameter variables, `n - 1`.
    pub fn dims(&self) -> usize {
        self.sorted.len() - 1
    }

    /// Reduced parameter `ã1`.
    pub fn parameter(&self) -> u64 {
        self.reduced[self.param_index]
    }

    /// Reduced weights of `x2..xn`, in variable order.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Index into [`sorted`](Self::sorted) for each variable `x1..xn`.
    pub fn variable_order(&self) -> &[usize] {
        &self.order
    }

    /// Original-scale generator attached to each variable `x1..xn`.
    pub fn variable_generators(&self) -> Vec<u64> {
        self.order.iter().map(|&i| self.sorted[i]).collect()
    }

    /// Smallest non-parameter weight, if any.
    pub fn min_weight(&self) -> Option<u64> {
        self.weights.iter().copied().min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_sorted_input() {
        let g = GeneratorSet::normalize(&[6, 9, 20]).unwrap();
        assert_eq!(g.sorted(), &[6, 9, 20]);
        assert_eq!(g.lambda(), 1);
        assert_eq!(g.reduced(), &[6, 9, 20]);
        assert_eq!(g.param_index(), 0);
        assert_eq!(g.weights(), &[9, 20]);
    }

    #[test]
    fn normalize_dedupes_and_reduces() {
        let g = GeneratorSet::normalize(&[9, 6, 6]).unwrap();
        assert_eq!(g.sorted(), &[6, 9]);
        assert_eq!(g.lambda(), 3);
        assert_eq!(g.reduced(), &[2, 3]);
        assert_eq!(g.raw(), &[9, 6, 6]);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert_eq!(
            GeneratorSet::normalize(&[0, 5]),
            Err(Error::NonPositiveGenerator(0))
        );
        assert_eq!(
            GeneratorSet::normalize(&[3, -4]),
            Err(Error::NonPositiveGenerator(-4))
        );
        assert_eq!(GeneratorSet::normalize(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn param_override_reorders_variables() {
        let g = GeneratorSet::normalize(&[10, 7, 9])
            .unwrap()
            .with_param_index(2)
            .unwrap();
        assert_eq!(g.parameter(), 10);
        assert_eq!(g.weights(), &[7, 9]);
        assert_eq!(g.variable_generators(), vec![10, 7, 9]);
        assert!(GeneratorSet::normalize(&[10, 7, 9])
            .unwrap()
            .with_param_index(3)
            .is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(raw in prop::collection::vec(1i64..500, 1..8)) {
            let g = GeneratorSet::normalize(&raw).unwrap();
            let resorted: Vec<i64> = g.sorted().iter().map(|&a| a as i64).collect();
            let h = GeneratorSet::normalize(&resorted).unwrap();
            prop_assert_eq!(g.sorted(), h.sorted());
            prop_assert_eq!(g.lambda(), h.lambda());
            prop_assert_eq!(g.reduced(), h.reduced());
            prop_assert_eq!(g.reduced().iter().fold(0, |a, &b| gcd(a, b)), 1);
            prop_assert!(g.sorted().iter().all(|&a| a % g.lambda() == 0));
        }
    }
}

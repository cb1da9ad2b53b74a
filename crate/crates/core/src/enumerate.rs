//! Graded enumeration of exponent vectors under the multiplicative
//! knapsack bound `Π (ki + 1) <= cap`.
//!
//! Vectors of a level `s` (total degree `Σ ki = s`) are emitted in
//! descending lexicographic order: `(2,0), (1,1), (0,2)`. A subtree is cut
//! as soon as the partial product, times the smallest product the remaining
//! coordinates can still contribute, exceeds the cap.

use crate::monomial::ExponentVector;
use crate::semigroup::GeneratorSet;

/// Cap value meaning "no pruning".
pub const NO_CAP: u64 = u64::MAX;

/// Calls `f` on every vector of length `dims` with total degree `level`
/// and cube product at most `cap`.
pub fn for_each_in_level<F: FnMut(&[u32])>(dims: usize, level: u32, cap: u64, mut f: F) {
    if dims == 0 {
        if level == 0 && cap >= 1 {
            f(&[]);
        }
        return;
    }
    let mut buf = vec![0u32; dims];
    walk(&mut buf, 0, level, 1, cap, &mut f);
}

/// Same as [`for_each_in_level`] restricted to vectors whose first
/// coordinate equals `first`. Used to split a level across workers.
pub fn for_each_with_first<F: FnMut(&[u32])>(
    dims: usize,
    level: u32,
    cap: u64,
    first: u32,
    mut f: F,
) {
    if dims == 0 || first > level {
        return;
    }
    let partial = first as u128 + 1;
    let rest = level - first;
    if dims == 1 {
        if rest == 0 && partial <= cap as u128 {
            f(&[first]);
        }
        return;
    }
    if partial * (rest as u128 + 1) > cap as u128 {
        return;
    }
    let mut buf = vec![0u32; dims];
    buf[0] = first;
    walk(&mut buf, 1, rest, partial, cap, &mut f);
}

fn walk<F: FnMut(&[u32])>(
    buf: &mut [u32],
    pos: usize,
    remaining: u32,
    partial: u128,
    cap: u64,
    f: &mut F,
) {
    let wide_cap = cap as u128;
    if pos + 1 == buf.len() {
        if partial * (remaining as u128 + 1) <= wide_cap {
            buf[pos] = remaining;
            f(buf);
        }
        return;
    }
    for k in (0..=remaining).rev() {
        let next = partial * (k as u128 + 1);
        // the remaining coordinates contribute at least (rest + 1)
        if next * ((remaining - k) as u128 + 1) > wide_cap {
            continue;
        }
        buf[pos] = k;
        walk(buf, pos + 1, remaining - k, next, cap, f);
    }
    buf[pos] = 0;
}

/// Every exponent vector of `level` passing the product cap, in the
/// documented order.
pub fn level_vectors(g: &GeneratorSet, level: u32, cap: u64) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    for_each_in_level(g.dims(), level, cap, |k| {
        out.push(ExponentVector::new(k.to_vec()))
    });
    out
}

pub fn count_level(g: &GeneratorSet, level: u32, cap: u64) -> u64 {
    let mut n = 0;
    for_each_in_level(g.dims(), level, cap, |_| n += 1);
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecs(g: &GeneratorSet, s: u32, cap: u64) -> Vec<Vec<u32>> {
        level_vectors(g, s, cap)
            .into_iter()
            .map(|v| v.exps().to_vec())
            .collect()
    }

    // all compositions of s into `dims` parts, descending lex
    fn brute(dims: usize, s: u32) -> Vec<Vec<u32>> {
        if dims == 0 {
            return if s == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for k in (0..=s).rev() {
            for mut tail in brute(dims - 1, s - k) {
                tail.insert(0, k);
                out.push(tail);
            }
        }
        out
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn mcnugget_level_two() {
        let g = GeneratorSet::normalize(&[6, 9, 20]).unwrap();
        assert_eq!(vecs(&g, 2, 7), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(count_level(&g, 2, 7), 3);
    }

    #[test]
    fn level_zero_is_the_zero_vector() {
        let g = GeneratorSet::normalize(&[6, 9, 20]).unwrap();
        assert_eq!(vecs(&g, 0, 1), vec![vec![0, 0]]);
        assert_eq!(count_level(&g, 0, 1), 1);
        let single = GeneratorSet::normalize(&[7]).unwrap();
        assert_eq!(count_level(&single, 0, 1), 1);
        assert_eq!(count_level(&single, 3, NO_CAP), 0);
    }

    #[test]
    fn cap_prunes_interior_compositions() {
        let g = GeneratorSet::normalize(&[5, 6, 29]).unwrap();
        assert_eq!(vecs(&g, 5, 6), vec![vec![5, 0], vec![0, 5]]);
        assert_eq!(count_level(&g, 5, 6), 2);
    }

    #[test]
    fn split_by_first_coordinate_matches_whole_level() {
        for dims in 1..5 {
            for s in 0..7 {
                for cap in [1, 3, 6, 12, NO_CAP] {
                    let mut whole = Vec::new();
                    for_each_in_level(dims, s, cap, |k| whole.push(k.to_vec()));
                    let mut parts = Vec::new();
                    for first in (0..=s).rev() {
                        for_each_with_first(dims, s, cap, first, |k| parts.push(k.to_vec()));
                    }
                    assert_eq!(whole, parts, "dims={dims} s={s} cap={cap}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matches_brute_force_filter(dims in 1usize..5, s in 0u32..8, cap in 1u64..40) {
            let mut got = Vec::new();
            for_each_in_level(dims, s, cap, |k| got.push(k.to_vec()));
            let want: Vec<Vec<u32>> = brute(dims, s)
                .into_iter()
                .filter(|k| k.iter().map(|&e| e as u64 + 1).product::<u64>() <= cap)
                .collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn uncapped_count_is_binomial(dims in 1usize..6, s in 0u32..10) {
            let mut n = 0u64;
            for_each_in_level(dims, s, NO_CAP, |_| n += 1);
            prop_assert_eq!(n, binom(s as u64 + dims as u64 - 1, dims as u64 - 1));
        }
    }
}

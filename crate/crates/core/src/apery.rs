//! The Apéry engine.
//!
//! Levels `s = 1, 2, ...` of exponent vectors over `x2..xn` are scanned in
//! order of total degree. Each vector `k` lands in slot `qsum(k) mod ã1` and
//! replaces the stored entry when its weighted degree is smaller, or equal
//! with `k` smaller in the monomial order. The surviving entries are the
//! Apéry set together with its revlex-minimal witnesses, i.e. the standard
//! monomials of the toric ideal.
//!
//! The scan stops on the first of:
//! * a level that changes nothing (every later vector is a multiple of a
//!   non-standard one);
//! * all slots filled and `min_weight * (s + 1)` above every slot value;
//! * `s = ã1` (a standard monomial has total degree below `ã1`).
//!
//! Seeing every residue once is *not* a stopping condition: for
//! `(5, 6, 29)` all residues appear at level 2 but two slot values are
//! still wrong.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{for_each_in_level, for_each_with_first};
use crate::error::{Error, Result};
use crate::monomial::{dot, revlex_tiebreak, ExponentVector};
use crate::semigroup::GeneratorSet;

const EMPTY: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// A whole level was dominated.
    LevelExhausted,
    /// No vector of the next level can reach any slot value.
    WeightBound,
    /// Reached `s = ã1`.
    HardCap,
    /// Stopped at a caller-supplied level cap; the table is not certified.
    LevelCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads used inside a level. `1` scans serially.
    pub threads: usize,
    /// Optional lower hard cap on the scanned level.
    pub level_cap: Option<u32>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            threads: 1,
            level_cap: None,
        }
    }
}

/// Minimal element of `S̃` in each residue class mod `ã1`, with witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyTable {
    base: u64,
    lambda: u64,
    dims: usize,
    values: Vec<u64>,
    witnesses: Vec<u32>,
    levels_scanned: u32,
    stop: StopReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot<'a> {
    pub residue: u64,
    pub value: u64,
    pub witness: &'a [u32],
}

impl AperyTable {
    /// Reduced parameter `ã1`; also the number of slots.
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Slot values in the reduced scale, indexed by residue.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, residue: u64) -> u64 {
        self.values[residue as usize]
    }

    pub fn witness(&self, residue: u64) -> &[u32] {
        let d = self.dims;
        let r = residue as usize;
        &self.witnesses[r * d..(r + 1) * d]
    }

    pub fn witness_vector(&self, residue: u64) -> ExponentVector {
        ExponentVector::new(self.witness(residue).to_vec())
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot<'_>> + '_ {
        (0..self.base).map(move |r| Slot {
            residue: r,
            value: self.value(r),
            witness: self.witness(r),
        })
    }

    pub fn levels_scanned(&self) -> u32 {
        self.levels_scanned
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop
    }

    pub fn max_value(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Whether `k` (over `x2..xn`, reduced `weights`) is a stored witness.
    pub fn is_witness(&self, k: &[u32], weights: &[u64]) -> bool {
        match dot(k, weights) {
            Some(q) => {
                let r = q % self.base;
                self.value(r) == q && self.witness(r) == k
            }
            None => false,
        }
    }
}

/// `true` when `(q, k)` should replace the slot entry `(v, w)`.
fn improves(q: u64, k: &[u32], v: u64, w: &[u32]) -> bool {
    match q.cmp(&v) {
        Ordering::Less => true,
        Ordering::Greater => false,
        // equal weighted degree: the order reduces to the revlex tie-break
        Ordering::Equal => revlex_tiebreak(0, k, 0, w) == Ordering::Less,
    }
}

struct Scan {
    base: u64,
    dims: usize,
    weights: Vec<u64>,
    values: Vec<u64>,
    witnesses: Vec<u32>,
    filled: u64,
    max_value: u64,
    max_dirty: bool,
}

impl Scan {
    fn slot_witness(&self, r: usize) -> &[u32] {
        &self.witnesses[r * self.dims..(r + 1) * self.dims]
    }

    fn offer(&mut self, q: u64, k: &[u32]) -> bool {
        let r = (q % self.base) as usize;
        let v = self.values[r];
        if v != EMPTY && !improves(q, k, v, self.slot_witness(r)) {
            return false;
        }
        if v == EMPTY {
            self.filled += 1;
        } else if v == self.max_value {
            self.max_dirty = true;
        }
        if q > self.max_value {
            self.max_value = q;
        }
        self.values[r] = q;
        let d = self.dims;
        self.witnesses[r * d..(r + 1) * d].copy_from_slice(k);
        true
    }

    fn max_value(&mut self) -> u64 {
        if self.max_dirty {
            self.max_value = self
                .values
                .iter()
                .copied()
                .filter(|&v| v != EMPTY)
                .max()
                .unwrap_or(0);
            self.max_dirty = false;
        }
        self.max_value
    }

    fn scan_serial(&mut self, level: u32, cap: u64) -> Result<bool> {
        let mut changed = false;
        let mut overflow = false;
        let weights = std::mem::take(&mut self.weights);
        for_each_in_level(self.dims, level, cap, |k| match dot(k, &weights) {
            Some(q) => changed |= self.offer(q, k),
            None => overflow = true,
        });
        self.weights = weights;
        if overflow {
            return Err(Error::Overflow("weighted degree"));
        }
        Ok(changed)
    }

    /// Splits the level by first coordinate. Each part collects the best
    /// candidate per residue against the table as it stood before the
    /// level; candidates are then merged in part order. Since `improves`
    /// is a strict total order the merged table does not depend on the
    /// split.
    fn scan_parallel(&mut self, level: u32, cap: u64) -> Result<bool> {
        type Candidates = HashMap<u64, (u64, Vec<u32>)>;
        let this = &*self;
        let parts: Vec<Result<Candidates>> = (0..=level)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|first| {
                let mut best: Candidates = HashMap::new();
                let mut overflow = false;
                for_each_with_first(this.dims, level, cap, first, |k| {
                    let Some(q) = dot(k, &this.weights) else {
                        overflow = true;
                        return;
                    };
                    let r = q % this.base;
                    let v = this.values[r as usize];
                    if v != EMPTY && !improves(q, k, v, this.slot_witness(r as usize)) {
                        return;
                    }
                    match best.get_mut(&r) {
                        Some((bq, bk)) => {
                            if improves(q, k, *bq, bk) {
                                *bq = q;
                                bk.copy_from_slice(k);
                            }
                        }
                        None => {
                            best.insert(r, (q, k.to_vec()));
                        }
                    }
                });
                if overflow {
                    Err(Error::Overflow("weighted degree"))
                } else {
                    Ok(best)
                }
            })
            .collect();
        let mut changed = false;
        for part in parts {
            let mut cands: Vec<(u64, (u64, Vec<u32>))> = part?.into_iter().collect();
            cands.sort_unstable_by_key(|(r, _)| *r);
            for (_, (q, k)) in cands {
                changed |= self.offer(q, &k);
            }
        }
        Ok(changed)
    }
}

pub fn compute_apery(g: &GeneratorSet) -> Result<AperyTable> {
    compute_apery_with(g, &ScanOptions::default())
}

pub fn compute_apery_with(g: &GeneratorSet, opts: &ScanOptions) -> Result<AperyTable> {
    if opts.threads > 1 && g.dims() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("failed to build worker pool");
        pool.install(|| run_scan(g, opts, true))
    } else {
        run_scan(g, opts, false)
    }
}

fn run_scan(g: &GeneratorSet, opts: &ScanOptions, parallel: bool) -> Result<AperyTable> {
    let base = g.parameter();
    let dims = g.dims();
    let slots = usize::try_from(base).map_err(|_| Error::Overflow("slot count"))?;
    let cap = base.checked_add(1).ok_or(Error::Overflow("product cap"))?;
    let natural_cap = u32::try_from(base).unwrap_or(u32::MAX);
    let (limit, limit_reason) = match opts.level_cap {
        Some(c) if c < natural_cap => (c, StopReason::LevelCap),
        _ => (natural_cap, StopReason::HardCap),
    };

    let mut scan = Scan {
        base,
        dims,
        weights: g.weights().to_vec(),
        values: vec![EMPTY; slots],
        witnesses: vec![0; slots * dims],
        filled: 1,
        max_value: 0,
        max_dirty: false,
    };
    scan.values[0] = 0;

    let min_weight = g.min_weight().unwrap_or(0) as u128;
    let mut level = 0u32;
    let stop = loop {
        if level >= limit {
            break limit_reason;
        }
        level += 1;
        let changed = if parallel {
            scan.scan_parallel(level, cap)?
        } else {
            scan.scan_serial(level, cap)?
        };
        if !changed {
            break StopReason::LevelExhausted;
        }
        if scan.filled == base && min_weight * (level as u128 + 1) > scan.max_value() as u128 {
            break StopReason::WeightBound;
        }
    };

    if scan.filled < base {
        return Err(Error::IncompleteTable {
            missing: base - scan.filled,
            levels: level as u64,
        });
    }
    Ok(AperyTable {
        base,
        lambda: g.lambda(),
        dims,
        values: scan.values,
        witnesses: scan.witnesses,
        levels_scanned: level,
        stop,
    })
}

/// `g(S) = λ·(max slot value - ã1)`; `-λ` when `S̃ = ℕ`.
pub fn frobenius(t: &AperyTable) -> Result<i64> {
    let span = t.max_value() as i128 - t.base as i128;
    i64::try_from(span * t.lambda as i128).map_err(|_| Error::Overflow("Frobenius number"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipCertificate {
    /// Coefficients over the sorted original generators.
    Member { representation: Vec<u64> },
    /// `blocking` is the scaled Apéry value of the query's class; absent
    /// when the query is not a multiple of `λ`.
    NotMember { blocking: Option<u64> },
}

impl MembershipCertificate {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipCertificate::Member { .. })
    }
}

pub fn is_member(t: &AperyTable, g: &GeneratorSet, b: i64) -> Result<MembershipCertificate> {
    if b < 0 {
        return Err(Error::NegativeQuery(b));
    }
    let b = b as u64;
    if !b.is_multiple_of(t.lambda) {
        return Ok(MembershipCertificate::NotMember { blocking: None });
    }
    let reduced = b / t.lambda;
    let r = reduced % t.base;
    let v = t.value(r);
    if reduced < v {
        let blocking = v
            .checked_mul(t.lambda)
            .ok_or(Error::Overflow("blocking value"))?;
        return Ok(MembershipCertificate::NotMember {
            blocking: Some(blocking),
        });
    }
    let extra = (reduced - v) / t.base;
    let mut representation = vec![0u64; g.len()];
    let order = g.variable_order();
    representation[order[0]] = extra;
    for (var, &k) in t.witness(r).iter().enumerate() {
        representation[order[var + 1]] = k as u64;
    }
    Ok(MembershipCertificate::Member { representation })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    /// Sorted, original scale.
    pub numerator_exponents: Vec<u64>,
    pub denominator_exponent: u64,
    pub degree: i64,
}

/// `P(u) = Σ u^{λ·w} / (1 - u^{a1})` over the Apéry values `w`.
pub fn hilbert_series(t: &AperyTable) -> Result<HilbertSeries> {
    let numerator_exponents = module_decomposition(t)?;
    let denominator_exponent = t
        .base
        .checked_mul(t.lambda)
        .ok_or(Error::Overflow("parameter"))?;
    let top = *numerator_exponents.last().expect("table has slot 0");
    let degree = i64::try_from(top as i128 - denominator_exponent as i128)
        .map_err(|_| Error::Overflow("series degree"))?;
    Ok(HilbertSeries {
        numerator_exponents,
        denominator_exponent,
        degree,
    })
}

/// Degrees of the free generators of `A` over `K[t^{a1}]`, sorted.
pub fn module_decomposition(t: &AperyTable) -> Result<Vec<u64>> {
    let mut degs = t
        .values
        .iter()
        .map(|&v| {
            v.checked_mul(t.lambda)
                .ok_or(Error::Overflow("module degree"))
        })
        .collect::<Result<Vec<_>>>()?;
    degs.sort_unstable();
    Ok(degs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;

    fn table(raw: &[i64]) -> AperyTable {
        compute_apery(&GeneratorSet::normalize(raw).unwrap()).unwrap()
    }

    // Smallest element of S in each class mod a1, by a reachability sweep.
    fn brute_apery(gens: &[u64]) -> Vec<u64> {
        let a1 = gens[0];
        let limit = (a1 * gens.iter().max().unwrap() + 1) as usize;
        let mut reach = vec![false; limit];
        reach[0] = true;
        for b in 1..limit {
            reach[b] = gens.iter().any(|&a| b as u64 >= a && reach[b - a as usize]);
        }
        (0..a1)
            .map(|r| {
                (r..limit as u64)
                    .step_by(a1 as usize)
                    .find(|&b| reach[b as usize])
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn two_three() {
        let t = table(&[2, 3]);
        assert_eq!(t.values(), &[0, 3]);
        assert_eq!(t.witness(0), &[0]);
        assert_eq!(t.witness(1), &[1]);
        assert_eq!(frobenius(&t), Ok(1));
    }

    #[test]
    fn mcnugget() {
        let t = table(&[6, 9, 20]);
        assert_eq!(brute_apery(&[6, 9, 20]), vec![0, 49, 20, 9, 40, 29]);
        assert_eq!(t.values(), &[0, 49, 20, 9, 40, 29]);
        let w: Vec<&[u32]> = (0..6).map(|r| t.witness(r)).collect();
        assert_eq!(
            w,
            vec![&[0, 0][..], &[1, 2], &[0, 1], &[1, 0], &[0, 2], &[1, 1]]
        );
        assert_eq!(frobenius(&t), Ok(43));
    }

    #[test]
    fn residue_coverage_is_not_enough_to_stop() {
        let t = table(&[5, 6, 29]);
        assert_eq!(brute_apery(&[5, 6, 29]), vec![0, 6, 12, 18, 24]);
        assert_eq!(t.values(), &[0, 6, 12, 18, 24]);
        assert!((0..5).all(|r| t.witness(r)[1] == 0));
        assert_eq!(frobenius(&t), Ok(19));
    }

    #[test]
    fn non_coprime_scales() {
        let t = table(&[4, 6]);
        assert_eq!(t.lambda(), 2);
        assert_eq!(t.values(), &[0, 3]);
        assert_eq!(frobenius(&t), Ok(2));
        let h = hilbert_series(&t).unwrap();
        assert_eq!(h.numerator_exponents, vec![0, 6]);
        assert_eq!(h.denominator_exponent, 4);
        assert_eq!(h.degree, 2);
    }

    #[test]
    fn single_generator() {
        let t = table(&[7]);
        assert_eq!(t.len(), 1);
        assert_eq!(frobenius(&t), Ok(-7));
        assert_eq!(module_decomposition(&t).unwrap(), vec![0]);
        let t = table(&[1, 5]);
        assert_eq!(frobenius(&t), Ok(-1));
    }

    #[test]
    fn hilbert_and_decomposition() {
        let t = table(&[2, 3]);
        let h = hilbert_series(&t).unwrap();
        assert_eq!(h.numerator_exponents, vec![0, 3]);
        assert_eq!(h.denominator_exponent, 2);
        assert_eq!(h.degree, 1);
        assert_eq!(module_decomposition(&t).unwrap(), vec![0, 3]);

        let t = table(&[6, 9, 20]);
        let h = hilbert_series(&t).unwrap();
        assert_eq!(h.numerator_exponents, vec![0, 9, 20, 29, 40, 49]);
        assert_eq!(h.degree, 43);
        assert_eq!(
            module_decomposition(&t).unwrap(),
            vec![0, 9, 20, 29, 40, 49]
        );
    }

    #[test]
    fn membership_certificates() {
        let g = GeneratorSet::normalize(&[6, 9, 20]).unwrap();
        let t = compute_apery(&g).unwrap();
        assert_eq!(
            is_member(&t, &g, 43).unwrap(),
            MembershipCertificate::NotMember { blocking: Some(49) }
        );
        assert_eq!(
            is_member(&t, &g, 44).unwrap(),
            MembershipCertificate::Member {
                representation: vec![4, 0, 1]
            }
        );
        assert_eq!(
            is_member(&t, &g, 0).unwrap(),
            MembershipCertificate::Member {
                representation: vec![0, 0, 0]
            }
        );
        assert_eq!(is_member(&t, &g, -1), Err(Error::NegativeQuery(-1)));

        let g = GeneratorSet::normalize(&[4, 6]).unwrap();
        let t = compute_apery(&g).unwrap();
        assert_eq!(
            is_member(&t, &g, 7).unwrap(),
            MembershipCertificate::NotMember { blocking: None }
        );
        assert_eq!(
            is_member(&t, &g, 2).unwrap(),
            MembershipCertificate::NotMember { blocking: Some(6) }
        );
    }

    #[test]
    fn witnesses_are_downward_closed_and_minimal() {
        for raw in [
            &[6i64, 9, 20][..],
            &[11, 13, 17, 19],
            &[8, 9, 10, 11, 30],
            &[15, 22, 36],
        ] {
            let g = GeneratorSet::normalize(raw).unwrap();
            let t = compute_apery(&g).unwrap();
            let ord = MonomialOrder::new(&g);
            for r in 0..t.base() {
                let w = t.witness(r);
                assert!(crate::monomial::cube(w).unwrap() <= t.base());
                for i in 0..w.len() {
                    if w[i] > 0 {
                        let mut d = w.to_vec();
                        d[i] -= 1;
                        assert!(t.is_witness(&d, g.weights()), "{raw:?} {w:?}");
                    }
                }
                // every representation of the value is >= the witness
                let v = t.value(r);
                let mut k = vec![0u32; g.dims()];
                reps(g.weights(), v, 0, &mut k, &mut |rep| {
                    assert_ne!(ord.compare_rest(rep, w), Ordering::Less);
                });
            }
        }
    }

    fn reps(w: &[u64], left: u64, i: usize, k: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if i == w.len() {
            if left == 0 {
                f(k);
            }
            return;
        }
        for e in 0..=left / w[i] {
            k[i] = e as u32;
            reps(w, left - e * w[i], i + 1, k, f);
        }
        k[i] = 0;
    }

    #[test]
    fn parallel_matches_serial() {
        for raw in [
            &[6i64, 9, 20][..],
            &[31, 37, 41, 43, 47, 53],
            &[100, 123, 157, 201, 333],
        ] {
            let g = GeneratorSet::normalize(raw).unwrap();
            let serial = compute_apery(&g).unwrap();
            let par = compute_apery_with(
                &g,
                &ScanOptions {
                    threads: 3,
                    level_cap: None,
                },
            )
            .unwrap();
            assert_eq!(serial, par);
        }
    }

    #[test]
    fn level_cap_can_leave_table_incomplete() {
        let g = GeneratorSet::normalize(&[7, 8]).unwrap();
        let err = compute_apery_with(
            &g,
            &ScanOptions {
                threads: 1,
                level_cap: Some(3),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::IncompleteTable { missing: 3, .. }));
    }
}

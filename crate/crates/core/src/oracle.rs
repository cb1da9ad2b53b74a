//! Independent checkers.
//!
//! Nothing here calls into the level scan of [`crate::apery`] or the
//! extraction in [`crate::grobner`]: Apéry values come from a shortest-path
//! search over residues, membership from a reachability table, and the
//! Gröbner property from explicit S-pair reduction. A bug in the engine
//! therefore cannot hide behind the same bug in its checker.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet, VecDeque};

use bitvec::prelude::*;
use serde::Serialize;

use crate::apery::AperyTable;
use crate::error::{Error, Result};
use crate::grobner::Binomial;
use crate::monomial::{ExponentVector, Monomial, MonomialOrder};
use crate::semigroup::GeneratorSet;

/// Apéry values (reduced scale, indexed by residue mod `ã1`) as shortest
/// distances from residue 0, with an edge `r -> r + ãi` of weight `ãi` for
/// every non-parameter generator.
pub fn apery_shortest_path(g: &GeneratorSet) -> Result<Vec<u64>> {
    let modulus = g.reduced()[g.param_index()];
    let steps: Vec<u64> = g
        .reduced()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != g.param_index())
        .map(|(_, &a)| a)
        .collect();
    let n = usize::try_from(modulus).map_err(|_| Error::Overflow("residue count"))?;
    let mut dist = vec![u64::MAX; n];
    dist[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, 0usize)));
    while let Some(Reverse((d, node))) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &step in &steps {
            let nd = d.checked_add(step).ok_or(Error::Overflow("path length"))?;
            let next = ((node as u64 + step % modulus) % modulus) as usize;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    Ok(dist)
}

/// Reachability over the original generators: bit `b` is set iff `b ∈ S`.
pub fn reachability(g: &GeneratorSet, upto: u64) -> BitVec {
    let len = upto as usize + 1;
    let mut reach = bitvec![0; len];
    reach.set(0, true);
    let gens: Vec<usize> = g.sorted().iter().map(|&a| a as usize).collect();
    for b in 1..len {
        if gens.iter().any(|&a| a <= b && reach[b - a]) {
            reach.set(b, true);
        }
    }
    reach
}

pub fn member_dp(g: &GeneratorSet, b: u64) -> bool {
    reachability(g, b)[b as usize]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    fn new() -> Self {
        VerificationReport {
            checks: Vec::new(),
            overall: true,
        }
    }

    fn push(&mut self, name: &str, failures: Vec<String>) {
        let passed = failures.is_empty();
        let detail = if passed {
            "ok".to_string()
        } else {
            let shown: Vec<_> = failures.iter().take(3).cloned().collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        };
        self.overall &= passed;
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn wide_qsum(m: &Monomial, param: u64, weights: &[u64]) -> u128 {
    m.param as u128 * param as u128
        + m.rest
            .exps()
            .iter()
            .zip(weights)
            .map(|(&k, &w)| k as u128 * w as u128)
            .sum::<u128>()
}

/// Monomials over `x2..xn` divisible by none of `leads`, grown from `1`
/// by multiplication with single variables. Gives up after `limit`.
fn staircase_of(leads: &[ExponentVector], dims: usize, limit: usize) -> Option<HashSet<Vec<u32>>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    let one = vec![0u32; dims];
    if leads.iter().any(|l| l.exps() == one.as_slice()) {
        return Some(seen);
    }
    seen.insert(one.clone());
    queue.push_back(one);
    while let Some(m) = queue.pop_front() {
        for i in 0..dims {
            let mut next = m.clone();
            next[i] += 1;
            if seen.contains(&next) {
                continue;
            }
            if leads
                .iter()
                .any(|l| l.exps().iter().zip(&next).all(|(a, b)| a <= b))
            {
                continue;
            }
            if seen.len() >= limit {
                return None;
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    Some(seen)
}

/// Structural checks of a Gröbner basis against its Apéry table; with
/// `spairs`, every S-pair is also reduced.
pub fn verify_groebner(
    g: &GeneratorSet,
    gb: &[Binomial],
    t: &AperyTable,
    spairs: bool,
) -> VerificationReport {
    let param = g.reduced()[g.param_index()];
    let weights = g.weights();
    let ord = MonomialOrder::new(g);
    let mut report = VerificationReport::new();

    let mut bad = Vec::new();
    for b in gb {
        if wide_qsum(&b.lead_monomial(), param, weights)
            != wide_qsum(&b.tail_monomial(), param, weights)
        {
            bad.push(b.to_string());
        }
    }
    report.push("homogeneity", bad);

    let bad = gb
        .iter()
        .filter(|b| ord.compare(&b.lead_monomial(), &b.tail_monomial()) != Ordering::Greater)
        .map(|b| b.to_string())
        .collect();
    report.push("lead_dominates_tail", bad);

    let mut bad = Vec::new();
    for (i, a) in gb.iter().enumerate() {
        for (j, b) in gb.iter().enumerate() {
            if i != j && a.lead.divides(&b.lead) {
                bad.push(format!("{} | {}", a.lead, b.lead));
            }
        }
    }
    report.push("leads_minimal", bad);

    let leads: Vec<ExponentVector> = gb.iter().map(|b| b.lead.clone()).collect();
    let witnesses: HashSet<Vec<u32>> = t.slots().map(|s| s.witness.to_vec()).collect();
    let mut bad = Vec::new();
    if witnesses.len() as u64 != param {
        bad.push(format!(
            "{} distinct witnesses, expected {param}",
            witnesses.len()
        ));
    }
    match staircase_of(&leads, g.dims(), param as usize + 1) {
        None => bad.push(format!("more than {param} monomials outside the leads")),
        Some(stairs) => {
            if stairs.len() as u64 != param {
                bad.push(format!(
                    "{} monomials outside the leads, expected {param}",
                    stairs.len()
                ));
            }
            if let Some(m) = stairs.iter().find(|m| !witnesses.contains(*m)) {
                bad.push(format!(
                    "{} is outside the leads but not a witness",
                    ExponentVector::new(m.clone())
                ));
            }
        }
    }
    report.push("staircase", bad);

    let bad = gb
        .iter()
        .filter(|b| {
            !t.is_witness(b.tail_witness.exps(), weights)
                || leads.iter().any(|l| l.divides(&b.tail_witness))
        })
        .map(|b| b.to_string())
        .collect();
    report.push("tails_standard", bad);

    if spairs {
        let mut bad = Vec::new();
        'outer: for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                match spair_reduce(&gb[i], &gb[j], gb, g) {
                    Ok(true) => {}
                    Ok(false) => bad.push(format!("S({}, {}) does not reduce to 0", gb[i], gb[j])),
                    Err(e) => bad.push(e.to_string()),
                }
                if bad.len() >= 3 {
                    break 'outer;
                }
            }
        }
        report.push("spair_closure", bad);
    }
    report
}

/// Reduces the S-polynomial of `b1, b2` by `gb`; `true` iff it vanishes.
pub fn spair_reduce(
    b1: &Binomial,
    b2: &Binomial,
    gb: &[Binomial],
    g: &GeneratorSet,
) -> Result<bool> {
    let param = g.reduced()[g.param_index()];
    let budget = 10u64.saturating_mul(param).saturating_mul(param);
    let ord = MonomialOrder::new(g);
    let (l1, l2) = (b1.lead_monomial(), b2.lead_monomial());
    let lcm = l1.lcm(&l2);
    let mut u = lcm.checked_div(&l1).expect("lcm").mul(&b1.tail_monomial());
    let mut v = lcm.checked_div(&l2).expect("lcm").mul(&b2.tail_monomial());
    let rules: Vec<(Monomial, Monomial)> = gb
        .iter()
        .map(|b| (b.lead_monomial(), b.tail_monomial()))
        .collect();
    let rewrite = |m: &Monomial| -> Option<Monomial> {
        rules
            .iter()
            .find(|(lead, _)| lead.divides(m))
            .map(|(lead, tail)| m.checked_div(lead).expect("divides").mul(tail))
    };
    let mut steps = 0u64;
    loop {
        if u == v {
            return Ok(true);
        }
        if ord.compare(&u, &v) == Ordering::Less {
            std::mem::swap(&mut u, &mut v);
        }
        if let Some(next) = rewrite(&u) {
            u = next;
        } else if let Some(next) = rewrite(&v) {
            v = next;
        } else {
            return Ok(false);
        }
        steps += 1;
        if steps > budget {
            return Err(Error::NonTermination(budget));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apery::compute_apery;
    use crate::grobner::groebner_basis;

    fn gs(raw: &[i64]) -> GeneratorSet {
        GeneratorSet::normalize(raw).unwrap()
    }

    #[test]
    fn shortest_path_examples() {
        assert_eq!(
            apery_shortest_path(&gs(&[6, 9, 20])).unwrap(),
            vec![0, 49, 20, 9, 40, 29]
        );
        assert_eq!(apery_shortest_path(&gs(&[2, 3])).unwrap(), vec![0, 3]);
        assert_eq!(
            apery_shortest_path(&gs(&[5, 6, 29])).unwrap(),
            vec![0, 6, 12, 18, 24]
        );
        assert_eq!(apery_shortest_path(&gs(&[7])).unwrap(), vec![0]);
    }

    #[test]
    fn dp_examples() {
        let g = gs(&[6, 9, 20]);
        assert!(!member_dp(&g, 43));
        assert!(member_dp(&g, 44));
        assert!(member_dp(&g, 0));
        assert!(!member_dp(&gs(&[4, 6]), 7));
        assert!(member_dp(&gs(&[4, 6]), 10));
    }

    fn setup(raw: &[i64], param: usize) -> (GeneratorSet, AperyTable, Vec<Binomial>) {
        let g = gs(raw).with_param_index(param).unwrap();
        let t = compute_apery(&g).unwrap();
        let gb = groebner_basis(&g, &t).unwrap();
        (g, t, gb)
    }

    #[test]
    fn engine_basis_passes() {
        let (g, t, gb) = setup(&[6, 9, 20], 0);
        let report = verify_groebner(&g, &gb, &t, true);
        assert!(report.overall, "{report:?}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn deleted_binomial_breaks_staircase() {
        let (g, t, mut gb) = setup(&[6, 9, 20], 0);
        gb.remove(1);
        let report = verify_groebner(&g, &gb, &t, false);
        assert!(!report.overall);
        assert!(!report.check("staircase").unwrap().passed);
    }

    #[test]
    fn non_standard_tail_is_caught() {
        // x3^3 - x1^10 has qsum 60; x1^7·x2^2 has the same weight but x2^2 is not standard
        let (g, t, mut gb) = setup(&[6, 9, 20], 0);
        gb[1].tail_param_exp = 7;
        gb[1].tail_witness = ExponentVector::new(vec![2, 0]);
        let report = verify_groebner(&g, &gb, &t, false);
        assert!(report.check("homogeneity").unwrap().passed);
        assert!(!report.check("tails_standard").unwrap().passed);
    }

    #[test]
    fn spair_examples() {
        let (g, _, gb) = setup(&[6, 9, 20], 0);
        assert_eq!(spair_reduce(&gb[0], &gb[1], &gb, &g), Ok(true));
        assert_eq!(spair_reduce(&gb[0], &gb[0], &gb, &g), Ok(true));

        let (g, _, gb) = setup(&[10, 7, 9], 2);
        assert_eq!(gb.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(spair_reduce(&gb[i], &gb[j], &gb, &g), Ok(true));
            }
        }
    }

    #[test]
    fn incomplete_basis_fails_spairs() {
        // without x3^3 - x1^2*x2, S(x2^4 - x1*x3^2, x2^3*x3 - x1^3) = x1*x3^3 - x1^3*x2 is stuck
        let (g, _, gb) = setup(&[10, 7, 9], 2);
        let partial: Vec<Binomial> = gb
            .iter()
            .filter(|b| b.lead.exps() != [0, 3])
            .cloned()
            .collect();
        assert_eq!(partial.len(), 2);
        assert_eq!(
            spair_reduce(&partial[0], &partial[1], &partial, &g),
            Ok(false)
        );
    }
}

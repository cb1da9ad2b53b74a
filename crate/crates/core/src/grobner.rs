//! Standard monomials, the initial ideal and the reduced Gröbner basis of
//! `I(S)`, all read off a finished [`AperyTable`].
//!
//! The `x1`-free standard monomials are exactly the Apéry witnesses. A
//! monomial `m` over `x2..xn` is a minimal generator of `in(I(S))` iff it
//! is not a witness while every `m / xi` is one. Its Gröbner element is `m`
//! minus its normal form `x1^e · w`, where `w` is the witness of the
//! residue class of `qsum(m)`.

use std::cmp::Ordering;
use std::fmt;

use crate::apery::AperyTable;
use crate::enumerate::for_each_in_level;
use crate::error::{Error, Result};
use crate::monomial::{dot, revlex_tiebreak, ExponentVector, Monomial, MonomialOrder};
use crate::semigroup::GeneratorSet;

/// `lead - x1^tail_param_exp * tail_witness`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub lead: ExponentVector,
    pub tail_param_exp: u64,
    pub tail_witness: ExponentVector,
}

impl Binomial {
    pub fn lead_monomial(&self) -> Monomial {
        Monomial::new(0, self.lead.clone())
    }

    pub fn tail_monomial(&self) -> Monomial {
        Monomial::new(self.tail_param_exp, self.tail_witness.clone())
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lead, self.tail_monomial())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseReport {
    pub standard: Vec<ExponentVector>,
    pub generators: Vec<ExponentVector>,
    pub max_standard_totaldeg: u64,
}

/// The `ã1` witnesses, ascending in the monomial order.
pub fn standard_monomials(t: &AperyTable) -> Vec<ExponentVector> {
    let mut slots: Vec<_> = t.slots().collect();
    // witnesses have qsum equal to their slot value
    slots.sort_by(|a, b| {
        a.value
            .cmp(&b.value)
            .then_with(|| revlex_tiebreak(0, a.witness, 0, b.witness))
    });
    slots
        .into_iter()
        .map(|s| ExponentVector::new(s.witness.to_vec()))
        .collect()
}

fn witness_at(t: &AperyTable, q: u64, k: &[u32]) -> bool {
    let r = q % t.base();
    t.value(r) == q && t.witness(r) == k
}

/// Minimal monomial generators of `in(I(S))`, ascending in the monomial
/// order.
pub fn initial_ideal(g: &GeneratorSet, t: &AperyTable) -> Result<Vec<ExponentVector>> {
    let weights = g.weights();
    let top = max_standard_totaldeg(t);
    let top = u32::try_from(top + 1).map_err(|_| Error::Overflow("level"))?;
    let cap = t
        .base()
        .checked_add(1)
        .ok_or(Error::Overflow("product cap"))?;
    let mut gens = Vec::new();
    let mut overflow = false;
    let mut quotient = vec![0u32; g.dims()];
    for level in 1..=top {
        for_each_in_level(g.dims(), level, cap, |k| {
            let Some(q) = dot(k, weights) else {
                overflow = true;
                return;
            };
            if witness_at(t, q, k) {
                return;
            }
            quotient.copy_from_slice(k);
            let all_standard = (0..k.len()).filter(|&i| k[i] > 0).all(|i| {
                quotient[i] -= 1;
                let ok = witness_at(t, q - weights[i], &quotient);
                quotient[i] += 1;
                ok
            });
            if all_standard {
                gens.push(ExponentVector::new(k.to_vec()));
            }
        });
    }
    if overflow {
        return Err(Error::Overflow("weighted degree"));
    }
    let ord = MonomialOrder::new(g);
    gens.sort_by(|a, b| ord.compare_rest(a.exps(), b.exps()));
    Ok(gens)
}

/// Largest total degree among the standard monomials.
pub fn max_standard_totaldeg(t: &AperyTable) -> u64 {
    t.slots()
        .map(|s| s.witness.iter().map(|&k| k as u64).sum::<u64>())
        .max()
        .unwrap_or(0)
}

pub fn staircase_report(g: &GeneratorSet, t: &AperyTable) -> Result<StaircaseReport> {
    Ok(StaircaseReport {
        standard: standard_monomials(t),
        generators: initial_ideal(g, t)?,
        max_standard_totaldeg: max_standard_totaldeg(t),
    })
}

/// The reduced Gröbner basis, one binomial per minimal generator of the
/// initial ideal, in the same order.
pub fn groebner_basis(g: &GeneratorSet, t: &AperyTable) -> Result<Vec<Binomial>> {
    initial_ideal(g, t)?
        .into_iter()
        .map(|lead| {
            let (tail_param_exp, tail_witness) =
                normal_form(g, t, &Monomial::new(0, lead.clone()))?;
            Ok(Binomial {
                lead,
                tail_param_exp,
                tail_witness,
            })
        })
        .collect()
}

/// The unique `x1^e · w` with `w` a witness that equals `m` modulo `I(S)`.
pub fn normal_form(
    g: &GeneratorSet,
    t: &AperyTable,
    m: &Monomial,
) -> Result<(u64, ExponentVector)> {
    if m.rest.len() != g.dims() {
        return Err(Error::LengthMismatch {
            expected: g.dims(),
            got: m.rest.len(),
        });
    }
    let q = m
        .param
        .checked_mul(t.base())
        .and_then(|p| p.checked_add(dot(m.rest.exps(), g.weights())?))
        .ok_or(Error::Overflow("weighted degree"))?;
    let r = q % t.base();
    let e = (q - t.value(r)) / t.base();
    Ok((e, t.witness_vector(r)))
}

/// Orders binomials by lead.
pub fn sort_binomials(g: &GeneratorSet, gb: &mut [Binomial]) {
    let ord = MonomialOrder::new(g);
    gb.sort_by(
        |a, b| match ord.compare_rest(a.lead.exps(), b.lead.exps()) {
            Ordering::Equal => ord.compare(&a.tail_monomial(), &b.tail_monomial()),
            o => o,
        },
    );
}

//! Three generators in `O(log a)` arithmetic steps.
//!
//! For a triple `(a, b, c)` with `a` as parameter (`x1 -> a`, `x2 -> b`,
//! `x3 -> c`, taken in the given order) the negative-remainder Euclidean
//! algorithm on `(s0, s1)` drives sequences `s_i, p_i, r_i` with
//! `s_i·b - p_i·c = r_i·a`. At the unique `μ` with `r_μ > 0 >= r_{μ+1}` the
//! reduced Gröbner basis is
//!
//! ```text
//! x2^{s_μ} - x1^{r_μ} x3^{p_μ}
//! x3^{p_{μ+1}} - x1^{-r_{μ+1}} x2^{s_{μ+1}}
//! x2^{s_μ - s_{μ+1}} x3^{p_{μ+1} - p_μ} - x1^{r_μ - r_{μ+1}}
//! ```
//!
//! and the staircase is an L-shape of `s_μ p_{μ+1} - s_{μ+1} p_μ = a / gcd`
//! cells.

use crate::apery::compute_apery;
use crate::error::{Error, Result};
use crate::grobner::{self, Binomial, StaircaseReport};
use crate::monomial::{ExponentVector, MonomialOrder};
use crate::semigroup::{gcd, GeneratorSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Euclid3Table {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    /// `q_2, ..., q_{m+1}`.
    pub q: Vec<u64>,
    pub s: Vec<i64>,
    pub p: Vec<i64>,
    pub r: Vec<i64>,
    pub mu: usize,
}

/// Quotients and remainders of `s_{i-1} = q_i s_i - s_{i+1}`, with
/// `0 <= s_{i+1} < s_i`, down to a zero remainder.
pub fn neg_remainder_euclid(s0: u64, s1: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    if s1 == 0 || s1 >= s0 {
        return Err(Error::InvalidPair(s0, s1));
    }
    let mut q = Vec::new();
    let mut s = vec![s0, s1];
    let (mut prev, mut cur) = (s0, s1);
    while cur != 0 {
        let qi = prev.div_ceil(cur);
        let next = qi * cur - prev;
        q.push(qi);
        s.push(next);
        prev = cur;
        cur = next;
    }
    Ok((q, s))
}

/// Inverse of `x` modulo `m` (`gcd(x, m) = 1`, `m > 1`).
fn mod_inverse(x: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (x as i128 % m as i128, m as i128);
    let (mut old_t, mut t) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_t, t) = (t, old_t - quot * t);
    }
    (old_r == 1).then(|| old_t.rem_euclid(m as i128) as u64)
}

fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("Euclid sequence"))
}

pub fn sequences3(a: u64, b: u64, c: u64) -> Result<Euclid3Table> {
    for x in [a, b, c] {
        if x == 0 {
            return Err(Error::NonPositiveGenerator(0));
        }
        if x > i64::MAX as u64 {
            return Err(Error::Overflow("generator"));
        }
    }
    let d = gcd(a, b);
    let g3 = gcd(d, c);
    let s0 = a / d;
    let r0 = b / d;
    let p1 = d / g3;
    // s1: least s >= 0 with s·b ≡ p1·c (mod a), i.e. (b/d)·s ≡ c/g3 (mod s0)
    let s1 = if s0 == 1 {
        0
    } else {
        let inv = mod_inverse(r0 % s0, s0)
            .ok_or_else(|| Error::DegenerateInput(format!("{r0} not invertible mod {s0}")))?;
        ((inv as u128 * ((c / g3) % s0) as u128) % s0 as u128) as u64
    };
    let num = s1 as i128 * b as i128 - p1 as i128 * c as i128;
    if num % a as i128 != 0 {
        return Err(Error::DegenerateInput(format!(
            "s1 = {s1} does not solve the congruence for ({a}, {b}, {c})"
        )));
    }
    let r1 = num / a as i128;

    let (q, s_u) = if s1 == 0 {
        (Vec::new(), vec![s0, 0])
    } else {
        neg_remainder_euclid(s0, s1)?
    };
    let s: Vec<i128> = s_u.iter().map(|&x| x as i128).collect();
    let mut p = vec![0i128, p1 as i128];
    let mut r = vec![r0 as i128, r1];
    for (i, &qi) in q.iter().enumerate() {
        let qi = qi as i128;
        let i = i + 1;
        p.push(p[i] * qi - p[i - 1]);
        r.push(r[i] * qi - r[i - 1]);
    }

    let det = (a / g3) as i128;
    for i in 0..s.len() - 1 {
        if s[i] * p[i + 1] - s[i + 1] * p[i] != det {
            return Err(Error::DegenerateInput(format!(
                "determinant identity fails at index {i} for ({a}, {b}, {c})"
            )));
        }
    }
    let crossings: Vec<usize> = (0..r.len() - 1)
        .filter(|&i| r[i] > 0 && r[i + 1] <= 0)
        .collect();
    let &[mu] = crossings.as_slice() else {
        return Err(Error::DegenerateInput(format!(
            "expected one sign change in r, found {} for ({a}, {b}, {c})",
            crossings.len()
        )));
    };

    let conv = |v: Vec<i128>| v.into_iter().map(to_i64).collect::<Result<Vec<_>>>();
    Ok(Euclid3Table {
        a,
        b,
        c,
        q,
        s: conv(s)?,
        p: conv(p)?,
        r: conv(r)?,
        mu,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gb3 {
    pub table: Euclid3Table,
    pub binomials: Vec<Binomial>,
    pub staircase: StaircaseReport,
    pub frobenius: i64,
    /// The closed form failed its count check and the general engine
    /// produced the result.
    pub fallback: bool,
}

fn exps(k: i64, l: i64) -> Result<ExponentVector> {
    let k = u32::try_from(k).map_err(|_| Error::Overflow("exponent"))?;
    let l = u32::try_from(l).map_err(|_| Error::Overflow("exponent"))?;
    Ok(ExponentVector::new(vec![k, l]))
}

fn order3(a: u64, b: u64, c: u64) -> MonomialOrder {
    let g = gcd(gcd(a, b), c);
    MonomialOrder::from_weights(a / g, vec![b / g, c / g])
}

pub fn gb3(a: u64, b: u64, c: u64) -> Result<Gb3> {
    let table = sequences3(a, b, c)?;
    let mu = table.mu;
    let (s, p, r) = (&table.s, &table.p, &table.r);
    let candidates = [
        (exps(s[mu], 0)?, r[mu], exps(0, p[mu])?),
        (exps(0, p[mu + 1])?, -r[mu + 1], exps(s[mu + 1], 0)?),
        (
            exps(s[mu] - s[mu + 1], p[mu + 1] - p[mu])?,
            r[mu] - r[mu + 1],
            exps(0, 0)?,
        ),
    ];
    let mut binomials: Vec<Binomial> = Vec::new();
    for (i, (lead, e, tail)) in candidates.iter().enumerate() {
        if lead.is_one() {
            continue;
        }
        let redundant = candidates.iter().enumerate().any(|(j, (other, _, _))| {
            j != i && !other.is_one() && other.divides(lead) && (other != lead || j < i)
        });
        if redundant {
            continue;
        }
        binomials.push(Binomial {
            lead: lead.clone(),
            tail_param_exp: *e as u64,
            tail_witness: tail.clone(),
        });
    }

    let expected = a / gcd(gcd(a, b), c);
    let corner = s[mu] - s[mu + 1];
    let count =
        corner as i128 * p[mu + 1] as i128 + s[mu + 1] as i128 * (p[mu + 1] - p[mu]) as i128;
    if count != expected as i128 {
        return fallback(table, a, b, c);
    }

    let mut standard = Vec::with_capacity(expected as usize);
    for k in 0..s[mu] {
        let rows = if k < corner {
            p[mu + 1]
        } else {
            p[mu + 1] - p[mu]
        };
        for l in 0..rows {
            standard.push(exps(k, l)?);
        }
    }
    let ord = order3(a, b, c);
    standard.sort_by(|x, y| ord.compare_rest(x.exps(), y.exps()));
    binomials.sort_by(|x, y| ord.compare_rest(x.lead.exps(), y.lead.exps()));
    let generators = binomials.iter().map(|bn| bn.lead.clone()).collect();
    let max_standard_totaldeg = standard.iter().map(|m| m.total_degree()).max().unwrap_or(0);

    // the largest weight sits on an outer corner of the L
    let weight = |k: i64, l: i64| k as i128 * b as i128 + l as i128 * c as i128;
    let mut top = weight(corner - 1, p[mu + 1] - 1);
    if s[mu + 1] > 0 && p[mu + 1] > p[mu] {
        top = top.max(weight(s[mu] - 1, p[mu + 1] - p[mu] - 1));
    }
    let frobenius = to_i64(top - a as i128)?;

    Ok(Gb3 {
        table,
        binomials,
        staircase: StaircaseReport {
            standard,
            generators,
            max_standard_totaldeg,
        },
        frobenius,
        fallback: false,
    })
}

/// General engine with `a` as parameter. Only possible when the variable
/// numbering agrees, i.e. `a, b, c` distinct and `b < c`.
fn fallback(table: Euclid3Table, a: u64, b: u64, c: u64) -> Result<Gb3> {
    if a == b || a == c || b >= c {
        return Err(Error::DegenerateInput(format!(
            "closed form failed for ({a}, {b}, {c}) and the general engine orders variables differently"
        )));
    }
    let raw = [a, b, c].map(|x| x as i64);
    let g0 = GeneratorSet::normalize(&raw)?;
    let index = g0
        .sorted()
        .iter()
        .position(|&x| x == a)
        .expect("a is a generator");
    let g = g0.with_param_index(index)?;
    let t = compute_apery(&g)?;
    let binomials = grobner::groebner_basis(&g, &t)?;
    let staircase = grobner::staircase_report(&g, &t)?;
    let frobenius = crate::apery::frobenius(&t)?;
    Ok(Gb3 {
        table,
        binomials,
        staircase,
        frobenius,
        fallback: true,
    })
}

/// `(a1 - 1)(a2 - 1) - 1` for coprime `a1, a2`.
pub fn frobenius2(a1: u64, a2: u64) -> Result<i64> {
    if a1 == 0 || a2 == 0 {
        return Err(Error::NonPositiveGenerator(0));
    }
    if gcd(a1, a2) != 1 {
        return Err(Error::NotCoprime(a1, a2));
    }
    let g = (a1 as i128 - 1) * (a2 as i128 - 1) - 1;
    i64::try_from(g).map_err(|_| Error::Overflow("Frobenius number"))
}

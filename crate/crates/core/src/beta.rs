//! Gödel's β-function and the arithmetic of finite value sequences.
//!
//! `β(b, c, i) = b mod (1 + (i + 1)·c)`. Every finite sequence of naturals
//! is reproduced by some pair `(b, c)`, and in fact by infinitely many; the
//! pairs found inside a bounded grid give a counting measure over the
//! possible next value of the sequence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BetaError {
    #[error("c must be at least 1")]
    ZeroC,
    #[error("value sequence must not be empty")]
    EmptySequence,
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("no (b, c) pair within bound {0} matches the sequence")]
    EmptyMatchSet(u64),
    #[error("tag {0} appears in both sequences")]
    TagCollision(u64),
    #[error("tags must be strictly increasing (got {0} after {1})")]
    UnorderedTags(u64, u64),
    #[error("cannot parse `{0}` as a natural number")]
    BadNumber(String),
    #[error("cannot parse `{0}` as tag:value")]
    BadTaggedEntry(String),
}

/// A representing pair for the β-function. Always `c >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BetaPair {
    // Field order gives the derived ordering the (c, b) lexicographic sense.
    c: BigUint,
    b: BigUint,
}

impl BetaPair {
    pub fn new(b: impl Into<BigUint>, c: impl Into<BigUint>) -> Result<Self, BetaError> {
        let c = c.into();
        if c.is_zero() {
            return Err(BetaError::ZeroC);
        }
        Ok(Self { b: b.into(), c })
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn c(&self) -> &BigUint {
        &self.c
    }

    /// Both components as `u64`, when they fit.
    pub fn to_small(&self) -> Option<(u64, u64)> {
        Some((self.b.to_u64()?, self.c.to_u64()?))
    }
}

impl fmt::Display for BetaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(b={}, c={})", self.b, self.c)
    }
}

/// A non-empty sequence `m_0, ..., m_n` of naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ValueSequence(Vec<u64>);

impl ValueSequence {
    pub fn new(values: Vec<u64>) -> Result<Self, BetaError> {
        if values.is_empty() {
            return Err(BetaError::EmptySequence);
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    /// `self ++ [m]`.
    pub fn extended(&self, m: u64) -> Self {
        let mut v = self.0.clone();
        v.push(m);
        Self(v)
    }
}

impl std::ops::Deref for ValueSequence {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl FromStr for ValueSequence {
    type Err = BetaError;

    /// Comma-separated naturals, e.g. `3,1,4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| BetaError::BadNumber(t.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }
}

fn modulus(c: &BigUint, i: u64) -> BigUint {
    BigUint::one() + (BigUint::from(i) + 1u32) * c
}

pub fn beta_eval(pair: &BetaPair, i: u64) -> BigUint {
    &pair.b % modulus(&pair.c, i)
}

/// β on machine words; a modulus that overflows `u128` exceeds any `b`.
fn beta_small(b: u64, c: u64, i: u64) -> u64 {
    let m = (u128::from(i) + 1)
        .checked_mul(u128::from(c))
        .and_then(|x| x.checked_add(1));
    match m {
        Some(m) => (u128::from(b) % m) as u64,
        None => b,
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    e.x.mod_floor(&m).to_biguint()
}

/// The classical construction: `c = u!` with `u = max(n + 1, max m_i)`,
/// which makes the moduli `1 + (i + 1)·c` pairwise coprime and larger than
/// every `m_i`; `b` is the least solution of the resulting congruences.
pub fn beta_encode(seq: &ValueSequence) -> BetaPair {
    let len = seq.len() as u64;
    let u = seq.iter().copied().max().unwrap_or(0).max(len);
    let c = factorial(u);
    let moduli: Vec<BigUint> = (0..len).map(|i| modulus(&c, i)).collect();
    for (i, mi) in moduli.iter().enumerate() {
        for mj in &moduli[i + 1..] {
            assert!(mi.gcd(mj).is_one(), "β moduli must be pairwise coprime");
        }
    }

    // Incremental CRT: x ≡ acc (mod product) extended one congruence at a time.
    let mut acc = BigUint::zero();
    let mut product = BigUint::one();
    for (value, m) in seq.iter().zip(&moduli) {
        let target = BigUint::from(*value);
        let current = &acc % m;
        let delta = if target >= current {
            target - current
        } else {
            m - (current - target)
        };
        let inv = mod_inverse(&(&product % m), m).expect("coprime moduli");
        let k = (delta * inv) % m;
        acc += &product * k;
        product *= m;
    }
    BetaPair { b: acc, c }
}

/// Pairs `(b, c)` with `0 <= b <= bound`, `1 <= c <= bound` reproducing
/// `seq`, in increasing `(c, b)` order.
pub fn matches_iter(seq: &ValueSequence, bound: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
    let first = seq[0];
    (1..=bound).flat_map(move |c| {
        // b ≡ m_0 (mod 1 + c) fixes the residue class of b.
        let stride = c + 1;
        let start = (first < stride).then_some(first);
        let candidates = start
            .into_iter()
            .flat_map(move |s| (0..).map(move |j| s as u128 + j as u128 * stride as u128))
            .take_while(move |b| *b <= bound as u128)
            .map(|b| b as u64);
        candidates
            .filter(move |&b| {
                seq.iter()
                    .enumerate()
                    .skip(1)
                    .all(|(i, &m)| beta_small(b, c, i as u64) == m)
            })
            .map(move |b| (b, c))
    })
}

pub fn enumerate_matches(seq: &ValueSequence, bound: u64) -> Result<Vec<BetaPair>, BetaError> {
    if bound == 0 {
        return Err(BetaError::ZeroBound);
    }
    Ok(matches_iter(seq, bound)
        .map(|(b, c)| BetaPair {
            b: b.into(),
            c: c.into(),
        })
        .collect())
}

/// The least matching pair in `(c, b)` order, if any lies within `bound`.
pub fn fit_characteristic_beta(seq: &ValueSequence, bound: u64) -> Option<BetaPair> {
    if bound == 0 {
        return None;
    }
    matches_iter(seq, bound).next().map(|(b, c)| BetaPair {
        b: b.into(),
        c: c.into(),
    })
}

/// Tally of the value each matching pair predicts at index `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NextValueDistribution {
    pub bound: u64,
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl NextValueDistribution {
    /// Exact relative frequency of `value`; zero when unseen.
    pub fn frequency(&self, value: u64) -> Ratio<u64> {
        Ratio::new(self.counts.get(&value).copied().unwrap_or(0), self.total)
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (u64, Ratio<u64>)> + '_ {
        self.counts
            .iter()
            .map(|(v, n)| (*v, Ratio::new(*n, self.total)))
    }
}

pub fn next_value_distribution(
    seq: &ValueSequence,
    bound: u64,
) -> Result<NextValueDistribution, BetaError> {
    if bound == 0 {
        return Err(BetaError::ZeroBound);
    }
    let next = seq.len() as u64;
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for (b, c) in matches_iter(seq, bound) {
        *counts.entry(beta_small(b, c, next)).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Err(BetaError::EmptyMatchSet(bound));
    }
    Ok(NextValueDistribution {
        bound,
        counts,
        total,
    })
}

/// Values tagged with the interaction at which they were observed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TaggedSequence(Vec<(u64, u64)>);

impl TaggedSequence {
    pub fn new(entries: Vec<(u64, u64)>) -> Result<Self, BetaError> {
        for w in entries.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(BetaError::UnorderedTags(w[1].0, w[0].0));
            }
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The values alone, in chronological order.
    pub fn values(&self) -> Vec<u64> {
        self.0.iter().map(|(_, v)| *v).collect()
    }
}

impl FromStr for TaggedSequence {
    type Err = BetaError;

    /// Comma-separated `tag:value` pairs, e.g. `0:1,2:3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                let bad = || BetaError::BadTaggedEntry(t.to_owned());
                let (tag, value) = t.split_once(':').ok_or_else(bad)?;
                Ok((
                    tag.trim().parse().map_err(|_| bad())?,
                    value.trim().parse().map_err(|_| bad())?,
                ))
            })
            .collect::<Result<Vec<_>, BetaError>>()?;
        Self::new(entries)
    }
}

/// Chronological merge of two tagged sequences with disjoint tags.
pub fn superpose(a: &TaggedSequence, b: &TaggedSequence) -> Result<TaggedSequence, BetaError> {
    let (mut x, mut y) = (a.0.iter().peekable(), b.0.iter().peekable());
    let mut out = Vec::with_capacity(a.len() + b.len());
    loop {
        let next = match (x.peek(), y.peek()) {
            (Some(p), Some(q)) if p.0 == q.0 => return Err(BetaError::TagCollision(p.0)),
            (Some(p), Some(q)) => {
                if p.0 < q.0 {
                    x.next()
                } else {
                    y.next()
                }
            }
            (Some(_), None) => x.next(),
            (None, Some(_)) => y.next(),
            (None, None) => break,
        };
        out.extend(next.copied());
    }
    Ok(TaggedSequence(out))
}

//! Steenrod squares on `H*(BSO(r); Z/2) = Z/2[w_2, ..., w_r]`.
//!
//! Squares of generators come from the Wu formula
//!
//! ```text
//! Sq^i(w_j) = sum_{t=0}^{i} C(j - i + t - 1, t) w_{i-t} w_{j+t}
//! ```
//!
//! with `w_0 = 1`, `w_1 = 0` and `w_m = 0` for `m > r`; products use the
//! Cartan formula. On top of that sit the degree-doubling square
//! `Sq_1(x) = Sq^{|x|-1}(x)`, reduction modulo decomposables, the cup-1
//! heights of the even generators, and the resulting presentation of
//! `H*(Omega BSO(r))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{AlgebraPresentation, GeneratorSpec, Label};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteenrodError {
    #[error("generator index {j} outside 2..={r}")]
    GeneratorOutOfRange { j: u32, r: u32 },
    #[error("Sq_1 needs a homogeneous class of positive degree")]
    NonHomogeneous,
    #[error("cup-1 height needs an even index 2 <= k <= r (got k = {k}, r = {r})")]
    BadHeightIndex { k: u32, r: u32 },
    #[error("invalid polynomial JSON: {0}")]
    Parse(String),
}

/// `C(n, k) mod 2` for `n >= -1`. Lucas: odd iff the bits of `k` are a subset
/// of the bits of `n`. `C(-1, 0) = 1` is the only negative case the Wu
/// formula reaches.
pub fn binomial_mod2(n: i64, k: u64) -> bool {
    if n < 0 {
        return n == -1 && k == 0;
    }
    let n = n as u64;
    k <= n && (k & n) == k
}

/// A monomial `prod w_j^{e_j}`; the empty monomial is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SWMonomial(BTreeMap<u32, u32>);

impl SWMonomial {
    pub fn unit() -> Self {
        SWMonomial(BTreeMap::new())
    }

    pub fn generator(j: u32) -> Self {
        SWMonomial(BTreeMap::from([(j, 1)]))
    }

    pub fn from_exponents(pairs: &[(u32, u32)]) -> Self {
        let mut m = SWMonomial::unit();
        for &(j, e) in pairs {
            if e > 0 {
                *m.0.entry(j).or_insert(0) += e;
            }
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(j, e)| j * e).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(&j, &e)| (j, e))
    }

    /// `Some(j)` when this monomial is the single generator `w_j`.
    pub fn as_generator(&self) -> Option<u32> {
        match self.0.iter().next() {
            Some((&j, &1)) if self.0.len() == 1 => Some(j),
            _ => None,
        }
    }

    pub fn mul(&self, other: &SWMonomial) -> SWMonomial {
        let mut out = self.clone();
        for (&j, &e) in &other.0 {
            *out.0.entry(j).or_insert(0) += e;
        }
        out
    }

    /// Splits off one factor of the lowest generator.
    fn split_first(&self) -> Option<(u32, SWMonomial)> {
        let (&j, &e) = self.0.iter().next()?;
        let mut rest = self.clone();
        if e == 1 {
            rest.0.remove(&j);
        } else {
            rest.0.insert(j, e - 1);
        }
        Some((j, rest))
    }
}

impl fmt::Display for SWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (&j, &e) in &self.0 {
            write!(f, "w{j}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A mod-2 polynomial in `w_2, ..., w_r`; a monomial is present iff its
/// coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolynomialRecord", try_from = "PolynomialRecord")]
pub struct SWPolynomial {
    rank: u32,
    terms: BTreeSet<SWMonomial>,
}

impl SWPolynomial {
    pub fn zero(rank: u32) -> Self {
        SWPolynomial {
            rank,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(rank: u32) -> Self {
        Self::from_monomial(rank, SWMonomial::unit())
    }

    /// `w_j` in rank `r`. `w_0 = 1`; `w_1` and `w_j` with `j > r` vanish.
    pub fn w(j: u32, rank: u32) -> Self {
        match j {
            0 => Self::one(rank),
            1 => Self::zero(rank),
            _ if j > rank => Self::zero(rank),
            _ => Self::from_monomial(rank, SWMonomial::generator(j)),
        }
    }

    /// The monomial as an element of the rank-`r` ring (zero if it mentions
    /// `w_1` or an index above `r`).
    pub fn from_monomial(rank: u32, m: SWMonomial) -> Self {
        let mut p = Self::zero(rank);
        if m.0.keys().all(|&j| (2..=rank).contains(&j)) {
            p.terms.insert(m);
        }
        p
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &SWMonomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.iter().map(SWMonomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn toggle(&mut self, m: SWMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &SWPolynomial) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &SWPolynomial) -> SWPolynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &SWPolynomial) -> SWPolynomial {
        let mut out = SWPolynomial::zero(self.rank.max(other.rank));
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }
}

impl fmt::Display for SWPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct PowerRecord {
    gen: u32,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRecord {
    rank: u32,
    monomials: Vec<Vec<PowerRecord>>,
}

impl From<SWPolynomial> for PolynomialRecord {
    fn from(p: SWPolynomial) -> Self {
        PolynomialRecord {
            rank: p.rank,
            monomials: p
                .terms
                .iter()
                .map(|m| m.exponents().map(|(gen, exp)| PowerRecord { gen, exp }).collect())
                .collect(),
        }
    }
}

impl TryFrom<PolynomialRecord> for SWPolynomial {
    type Error = SteenrodError;

    fn try_from(r: PolynomialRecord) -> Result<Self, SteenrodError> {
        let mut p = SWPolynomial::zero(r.rank);
        for mono in r.monomials {
            let mut m = SWMonomial::unit();
            for PowerRecord { gen, exp } in mono {
                if !(2..=r.rank).contains(&gen) {
                    return Err(SteenrodError::GeneratorOutOfRange { j: gen, r: r.rank });
                }
                if exp == 0 {
                    return Err(SteenrodError::Parse(format!("w{gen} has exponent 0")));
                }
                m = m.mul(&SWMonomial::from_exponents(&[(gen, exp)]));
            }
            p.toggle(m);
        }
        Ok(p)
    }
}

/// `Sq^i(w_j)` in rank `r`, by the Wu formula. Zero when `i > j`.
pub fn wu_sq_on_generator(i: u32, j: u32, r: u32) -> Result<SWPolynomial, SteenrodError> {
    if !(2..=r).contains(&j) {
        return Err(SteenrodError::GeneratorOutOfRange { j, r });
    }
    Ok(wu_unchecked(i, j, r))
}

fn wu_unchecked(i: u32, j: u32, r: u32) -> SWPolynomial {
    let mut out = SWPolynomial::zero(r);
    if i > j {
        return out;
    }
    for t in 0..=i {
        let top = j as i64 - i as i64 + t as i64 - 1;
        if binomial_mod2(top, t as u64) {
            out.add_assign(&SWPolynomial::w(i - t, r).mul(&SWPolynomial::w(j + t, r)));
        }
    }
    out
}

type SqCache = HashMap<(u32, SWMonomial), SWPolynomial>;

fn sq_monomial(i: u32, m: &SWMonomial, r: u32, cache: &mut SqCache) -> SWPolynomial {
    if i > m.degree() {
        return SWPolynomial::zero(r);
    }
    let Some((j, rest)) = m.split_first() else {
        return if i == 0 {
            SWPolynomial::one(r)
        } else {
            SWPolynomial::zero(r)
        };
    };
    if i == 0 {
        return SWPolynomial::from_monomial(r, m.clone());
    }
    let key = (i, m.clone());
    if let Some(hit) = cache.get(&key) {
        return hit.clone();
    }
    // Cartan: Sq^i(w_j * rest) = sum_a Sq^a(w_j) Sq^{i-a}(rest)
    let mut out = SWPolynomial::zero(r);
    for a in 0..=i.min(j) {
        let left = wu_unchecked(a, j, r);
        if left.is_zero() {
            continue;
        }
        let right = sq_monomial(i - a, &rest, r, cache);
        out.add_assign(&left.mul(&right));
    }
    cache.insert(key, out.clone());
    out
}

/// `Sq^i(p)`, additive in `p`, Cartan on products.
pub fn sq(i: u32, p: &SWPolynomial) -> SWPolynomial {
    let mut cache = SqCache::new();
    let mut out = SWPolynomial::zero(p.rank);
    for m in &p.terms {
        out.add_assign(&sq_monomial(i, m, p.rank, &mut cache));
    }
    out
}

/// `Sq_1(p) = Sq^{m-1}(p)` for `p` homogeneous of degree `m >= 1`. Zero maps to zero.
pub fn sq1(p: &SWPolynomial) -> Result<SWPolynomial, SteenrodError> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    match p.homogeneous_degree() {
        Some(m) if m >= 1 => Ok(sq(m - 1, p)),
        _ => Err(SteenrodError::NonHomogeneous),
    }
}

/// Indices `j` such that `w_j` itself (exponent 1) occurs in `p`. Everything
/// else lies in `H+ . H+`.
pub fn indecomposable_part(p: &SWPolynomial) -> BTreeSet<u32> {
    p.terms.iter().filter_map(SWMonomial::as_generator).collect()
}

/// Generators `w_k`, `2 <= k <= r`, not hit by `Sq_1` modulo decomposables.
pub fn s_set(r: u32) -> BTreeSet<u32> {
    let mut hit = BTreeSet::new();
    for j in 2..=r {
        let image = sq1(&SWPolynomial::w(j, r)).expect("generators are homogeneous");
        hit.extend(indecomposable_part(&image));
    }
    (2..=r).filter(|k| !hit.contains(k)).collect()
}

/// The chain `w_k, Sq_1 w_k, Sq_1 Sq_1 w_k, ...` of indecomposable
/// representatives, as generator indices, until the image is decomposable.
///
/// Since `Sq_1` maps `H+ . H+` into itself, iterating on the single
/// indecomposable representative gives the same heights as iterating on the
/// full polynomial.
pub fn indecomposable_chain(k: u32, r: u32) -> Result<Vec<u32>, SteenrodError> {
    if !(2..=r).contains(&k) {
        return Err(SteenrodError::GeneratorOutOfRange { j: k, r });
    }
    let mut chain = vec![k];
    let mut current = k;
    loop {
        let image = sq1(&SWPolynomial::w(current, r))?;
        let mut ind = indecomposable_part(&image).into_iter();
        let Some(next) = ind.next() else { break };
        debug_assert!(ind.next().is_none(), "Sq_1 of a generator has one linear term");
        chain.push(next);
        current = next;
    }
    Ok(chain)
}

/// Cup-1 height `nu_k`: one less than the number of `Sq_1` applications that
/// take `w_k` into the decomposables.
pub fn cup1_height(k: u32, r: u32) -> Result<u32, SteenrodError> {
    if !k.is_multiple_of(2) || !(2..=r).contains(&k) {
        return Err(SteenrodError::BadHeightIndex { k, r });
    }
    Ok(indecomposable_chain(k, r)?.len() as u32 - 1)
}

/// `H*(Omega BSO(r); Z/2)`: one truncated generator `wbar_{2k}` of degree
/// `2k - 1` and height `2^{nu_{2k}+1}` for each even `2k <= r` in the set of
/// generators missed by `Sq_1`.
pub fn omega_bso_presentation(r: u32) -> AlgebraPresentation {
    let gens = s_set(r)
        .into_iter()
        .filter(|k| k % 2 == 0)
        .map(|k| {
            let nu = cup1_height(k, r).expect("even index within range");
            GeneratorSpec::truncated(Label::new("wbar", None, Some(k)), k - 1, 1 << (nu + 1))
        })
        .collect();
    AlgebraPresentation::new(gens)
        .expect("labels are distinct by construction")
        .with_meta("source", "omega_bso")
        .with_meta("rank", r)
}

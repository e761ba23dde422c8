//! Free graded-commutative algebra presentations over GF(2) and their
//! truncated Poincaré series.
//!
//! Every algebra handled here is a tensor product of one-generator factors:
//! a polynomial algebra, an exterior algebra, or a truncated polynomial
//! algebra `Z/2[x]/(x^p)` with `p` a power of two. Series coefficients are
//! exact `u128` values; overflow is reported, never wrapped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TRUNCATION: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("integer overflow in Poincaré series coefficient at degree {0}")]
    Overflow(usize),
    #[error("generator {0} has degree 0; generators must have positive degree")]
    ZeroDegree(Label),
    #[error("generator {label}: truncation exponent {exponent} is not a power of two >= 2")]
    BadExponent { label: Label, exponent: u32 },
    #[error("duplicate generator label {0}")]
    DuplicateLabel(Label),
    #[error("series truncation {truncation} does not match {len} coefficients")]
    BadLength { truncation: usize, len: usize },
}

/// A generator name: base symbol plus optional superscript and subscript.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub base: String,
    pub sup: Option<u32>,
    pub sub: Option<u32>,
}

impl Label {
    pub fn new(base: &str, sup: Option<u32>, sub: Option<u32>) -> Self {
        Label {
            base: base.to_owned(),
            sup,
            sub,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if let Some(s) = self.sup {
            write!(f, "^{s}")?;
        }
        if let Some(s) = self.sub {
            write!(f, "_{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Polynomial,
    Exterior,
    Truncated { exponent: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "GeneratorRecord", try_from = "GeneratorRecord")]
pub struct GeneratorSpec {
    pub label: Label,
    pub degree: u32,
    pub kind: GeneratorKind,
}

impl GeneratorSpec {
    pub fn polynomial(label: Label, degree: u32) -> Self {
        GeneratorSpec {
            label,
            degree,
            kind: GeneratorKind::Polynomial,
        }
    }

    pub fn exterior(label: Label, degree: u32) -> Self {
        GeneratorSpec {
            label,
            degree,
            kind: GeneratorKind::Exterior,
        }
    }

    pub fn truncated(label: Label, degree: u32, exponent: u32) -> Self {
        GeneratorSpec {
            label,
            degree,
            kind: GeneratorKind::Truncated { exponent },
        }
    }

    /// Largest exponent a monomial may carry on this generator, if bounded.
    pub fn max_exponent(&self) -> Option<u32> {
        match self.kind {
            GeneratorKind::Polynomial => None,
            GeneratorKind::Exterior => Some(1),
            GeneratorKind::Truncated { exponent } => Some(exponent - 1),
        }
    }

    fn validate(&self) -> Result<(), SeriesError> {
        if self.degree == 0 {
            return Err(SeriesError::ZeroDegree(self.label.clone()));
        }
        if let GeneratorKind::Truncated { exponent } = self.kind {
            if exponent < 2 || !exponent.is_power_of_two() {
                return Err(SeriesError::BadExponent {
                    label: self.label.clone(),
                    exponent,
                });
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorRecord {
    label: String,
    sup: Option<u32>,
    sub: Option<u32>,
    degree: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<u32>,
}

impl From<GeneratorSpec> for GeneratorRecord {
    fn from(g: GeneratorSpec) -> Self {
        let (kind, exponent) = match g.kind {
            GeneratorKind::Polynomial => ("polynomial", None),
            GeneratorKind::Exterior => ("exterior", None),
            GeneratorKind::Truncated { exponent } => ("truncated", Some(exponent)),
        };
        GeneratorRecord {
            label: g.label.base,
            sup: g.label.sup,
            sub: g.label.sub,
            degree: g.degree,
            kind: kind.to_owned(),
            exponent,
        }
    }
}

impl TryFrom<GeneratorRecord> for GeneratorSpec {
    type Error = String;

    fn try_from(r: GeneratorRecord) -> Result<Self, String> {
        let kind = match (r.kind.as_str(), r.exponent) {
            ("polynomial", None) => GeneratorKind::Polynomial,
            ("exterior", None) => GeneratorKind::Exterior,
            ("truncated", Some(exponent)) => GeneratorKind::Truncated { exponent },
            (k, e) => return Err(format!("bad generator kind {k:?} with exponent {e:?}")),
        };
        let spec = GeneratorSpec {
            label: Label {
                base: r.label,
                sup: r.sup,
                sub: r.sub,
            },
            degree: r.degree,
            kind,
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

/// Tensor product over GF(2) of one free factor per generator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl AlgebraPresentation {
    pub fn new(generators: Vec<GeneratorSpec>) -> Result<Self, SeriesError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            g.validate()?;
            if !seen.insert(&g.label) {
                return Err(SeriesError::DuplicateLabel(g.label.clone()));
            }
        }
        Ok(AlgebraPresentation {
            generators,
            meta: BTreeMap::new(),
        })
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_owned(), value.into());
        self
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Tensor product: concatenation of the generator lists.
    pub fn tensor(&self, other: &AlgebraPresentation) -> Result<Self, SeriesError> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        AlgebraPresentation::new(gens)
    }

    /// Generator multiset as `(degree, kind)` pairs, sorted; ignores labels.
    pub fn shape(&self) -> Vec<(u32, GeneratorKind)> {
        let mut v: Vec<_> = self.generators.iter().map(|g| (g.degree, g.kind)).collect();
        v.sort_by_key(|&(d, k)| (d, kind_rank(k)));
        v
    }

    pub fn count_kind(&self, pred: impl Fn(GeneratorKind) -> bool) -> usize {
        self.generators.iter().filter(|g| pred(g.kind)).count()
    }
}

fn kind_rank(k: GeneratorKind) -> (u8, u32) {
    match k {
        GeneratorKind::Polynomial => (0, 0),
        GeneratorKind::Exterior => (1, 0),
        GeneratorKind::Truncated { exponent } => (2, exponent),
    }
}

/// Renders in the usual notation, e.g. `Z/2[omega^1] (x) /\[alpha^1_1,alpha^1_2]`.
/// Consecutive generators of the same base symbol and kind share one factor.
impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("Z/2");
        }
        let mut groups: Vec<(&str, GeneratorKind, Vec<&GeneratorSpec>)> = Vec::new();
        for g in &self.generators {
            let same_group = groups.last().is_some_and(|(base, kind, _)| {
                *base == g.label.base
                    && std::mem::discriminant(kind) == std::mem::discriminant(&g.kind)
                    && !matches!(g.kind, GeneratorKind::Truncated { .. })
            });
            if same_group {
                groups.last_mut().unwrap().2.push(g);
            } else {
                groups.push((&g.label.base, g.kind, vec![g]));
            }
        }
        for (i, (_, kind, gens)) in groups.iter().enumerate() {
            if i > 0 {
                f.write_str(" (x) ")?;
            }
            let names: Vec<String> = gens.iter().map(|g| g.label.to_string()).collect();
            match kind {
                GeneratorKind::Polynomial => write!(f, "Z/2[{}]", names.join(","))?,
                GeneratorKind::Exterior => write!(f, "/\\[{}]", names.join(","))?,
                GeneratorKind::Truncated { exponent } => {
                    write!(f, "Z/2[{0}]/({0}^{1})", names[0], exponent)?
                }
            }
        }
        Ok(())
    }
}

/// Truncated power series with exact nonnegative coefficients, degrees `0..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRecord")]
pub struct PoincareSeries {
    truncation: usize,
    coefficients: Vec<u128>,
}

#[derive(Deserialize)]
struct SeriesRecord {
    truncation: usize,
    coefficients: Vec<u128>,
}

impl TryFrom<SeriesRecord> for PoincareSeries {
    type Error = SeriesError;

    fn try_from(r: SeriesRecord) -> Result<Self, SeriesError> {
        PoincareSeries::from_coefficients(r.truncation, r.coefficients)
    }
}

impl PoincareSeries {
    pub fn one(truncation: usize) -> Self {
        let mut coefficients = vec![0; truncation + 1];
        coefficients[0] = 1;
        PoincareSeries {
            truncation,
            coefficients,
        }
    }

    pub fn from_coefficients(truncation: usize, coefficients: Vec<u128>) -> Result<Self, SeriesError> {
        if coefficients.len() != truncation + 1 {
            return Err(SeriesError::BadLength {
                truncation,
                len: coefficients.len(),
            });
        }
        Ok(PoincareSeries {
            truncation,
            coefficients,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coefficients(&self) -> &[u128] {
        &self.coefficients
    }

    pub fn coefficient(&self, d: usize) -> u128 {
        self.coefficients.get(d).copied().unwrap_or(0)
    }

    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.truncation);
        PoincareSeries {
            truncation: n,
            coefficients: self.coefficients[..=n].to_vec(),
        }
    }

    /// Multiply by `1 + t^k`.
    pub fn mul_one_plus(&mut self, k: usize) -> Result<(), SeriesError> {
        debug_assert!(k > 0);
        for d in (k..=self.truncation).rev() {
            self.coefficients[d] = self.coefficients[d]
                .checked_add(self.coefficients[d - k])
                .ok_or(SeriesError::Overflow(d))?;
        }
        Ok(())
    }

    /// Multiply by `1 / (1 - t^k)`.
    pub fn mul_geometric(&mut self, k: usize) -> Result<(), SeriesError> {
        debug_assert!(k > 0);
        for d in k..=self.truncation {
            self.coefficients[d] = self.coefficients[d]
                .checked_add(self.coefficients[d - k])
                .ok_or(SeriesError::Overflow(d))?;
        }
        Ok(())
    }

    /// Multiply by `1 + t^k + ... + t^{k(p-1)}`.
    pub fn mul_truncated(&mut self, k: usize, p: usize) -> Result<(), SeriesError> {
        let old = self.coefficients.clone();
        for d in 0..=self.truncation {
            let mut acc: u128 = 0;
            for e in 0..p {
                let Some(src) = d.checked_sub(e * k) else { break };
                acc = acc.checked_add(old[src]).ok_or(SeriesError::Overflow(d))?;
            }
            self.coefficients[d] = acc;
        }
        Ok(())
    }

    /// Cauchy product, truncated to the smaller truncation degree.
    pub fn mul(&self, other: &PoincareSeries) -> Result<PoincareSeries, SeriesError> {
        let n = self.truncation.min(other.truncation);
        let mut out = vec![0u128; n + 1];
        for (i, &a) in self.coefficients[..=n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients[..=n - i].iter().enumerate() {
                let prod = a.checked_mul(b).ok_or(SeriesError::Overflow(i + j))?;
                out[i + j] = out[i + j]
                    .checked_add(prod)
                    .ok_or(SeriesError::Overflow(i + j))?;
            }
        }
        Ok(PoincareSeries {
            truncation: n,
            coefficients: out,
        })
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(u128::to_string).collect();
        write!(f, "[{}] + O(t^{})", parts.join(", "), self.truncation + 1)
    }
}

pub fn series_mul(a: &PoincareSeries, b: &PoincareSeries) -> Result<PoincareSeries, SeriesError> {
    a.mul(b)
}

/// Coefficientwise equality up to the smaller truncation degree.
pub fn series_eq(a: &PoincareSeries, b: &PoincareSeries) -> bool {
    let n = a.truncation.min(b.truncation);
    a.coefficients[..=n] == b.coefficients[..=n]
}

pub fn series_of(p: &AlgebraPresentation, truncation: usize) -> Result<PoincareSeries, SeriesError> {
    let mut s = PoincareSeries::one(truncation);
    for g in &p.generators {
        g.validate()?;
        let k = g.degree as usize;
        match g.kind {
            GeneratorKind::Polynomial => s.mul_geometric(k)?,
            GeneratorKind::Exterior => s.mul_one_plus(k)?,
            GeneratorKind::Truncated { exponent } => s.mul_truncated(k, exponent as usize)?,
        }
    }
    Ok(s)
}

/// Dimension of the degree-`d` piece.
pub fn dim_in_degree(p: &AlgebraPresentation, d: usize) -> Result<u128, SeriesError> {
    Ok(series_of(p, d)?.coefficient(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorShape {
    /// `(1 + t^k)`
    OnePlus,
    /// `1 / (1 - t^k)`
    Geometric,
}

/// One factor `shape(t^degree)^multiplicity` of a closed-form product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedFormFactor {
    pub shape: FactorShape,
    pub degree: u32,
    pub multiplicity: u32,
}

impl ClosedFormFactor {
    pub fn one_plus(degree: u32, multiplicity: u32) -> Self {
        ClosedFormFactor {
            shape: FactorShape::OnePlus,
            degree,
            multiplicity,
        }
    }

    pub fn geometric(degree: u32, multiplicity: u32) -> Self {
        ClosedFormFactor {
            shape: FactorShape::Geometric,
            degree,
            multiplicity,
        }
    }
}

pub fn product_closed_form(
    factors: &[ClosedFormFactor],
    truncation: usize,
) -> Result<PoincareSeries, SeriesError> {
    let mut s = PoincareSeries::one(truncation);
    for f in factors {
        assert!(f.degree >= 1, "closed-form factors need positive degree");
        for _ in 0..f.multiplicity {
            match f.shape {
                FactorShape::OnePlus => s.mul_one_plus(f.degree as usize)?,
                FactorShape::Geometric => s.mul_geometric(f.degree as usize)?,
            }
        }
    }
    Ok(s)
}

/// `prod_{i=lo}^{hi} (1 + t^i)^m`
pub fn one_plus_range(lo: u32, hi: u32, m: u32) -> Vec<ClosedFormFactor> {
    (lo..=hi).map(|i| ClosedFormFactor::one_plus(i, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(name: &str, i: u32, d: u32) -> GeneratorSpec {
        GeneratorSpec::exterior(Label::new(name, None, Some(i)), d)
    }

    #[test]
    fn exterior_degree_one_gives_binomials() {
        let g = 7;
        let p = AlgebraPresentation::new((1..=g).map(|i| ext("a", i, 1)).collect()).unwrap();
        let s = series_of(&p, 10).unwrap();
        let binom = [1u128, 7, 21, 35, 35, 21, 7, 1, 0, 0, 0];
        assert_eq!(s.coefficients(), &binom);
    }

    #[test]
    fn polynomial_and_truncated_generators() {
        let p = AlgebraPresentation::new(vec![GeneratorSpec::polynomial(Label::new("x", None, None), 1)]).unwrap();
        assert!(series_of(&p, 12).unwrap().coefficients().iter().all(|&c| c == 1));

        let p = AlgebraPresentation::new(vec![GeneratorSpec::truncated(Label::new("x", None, None), 1, 4)]).unwrap();
        assert_eq!(series_of(&p, 6).unwrap().coefficients(), &[1, 1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn cauchy_product_and_equality() {
        let a = PoincareSeries::from_coefficients(2, vec![1, 1, 0]).unwrap();
        assert_eq!(series_mul(&a, &a).unwrap().coefficients(), &[1, 2, 1]);

        let p1 = AlgebraPresentation::new(vec![ext("x", 1, 1), ext("x", 2, 3)]).unwrap();
        let p2 = AlgebraPresentation::new(vec![ext("x", 2, 3), ext("x", 1, 1)]).unwrap();
        assert!(series_eq(&series_of(&p1, 10).unwrap(), &series_of(&p2, 10).unwrap()));

        let short = PoincareSeries::from_coefficients(1, vec![1, 2]).unwrap();
        let long = PoincareSeries::from_coefficients(3, vec![1, 2, 5, 9]).unwrap();
        assert!(series_eq(&short, &long));
        assert_eq!(short.mul(&long).unwrap().truncation(), 1);
    }

    #[test]
    fn closed_forms() {
        let s = product_closed_form(&[ClosedFormFactor::one_plus(1, 4)], 6).unwrap();
        assert_eq!(s.coefficients(), &[1, 4, 6, 4, 1, 0, 0]);

        let s = product_closed_form(&one_plus_range(1, 3, 1), 8).unwrap();
        assert_eq!(s.coefficients(), &[1, 1, 1, 2, 1, 1, 1, 0, 0]);

        let s = product_closed_form(&[ClosedFormFactor::geometric(2, 1)], 7).unwrap();
        assert_eq!(s.coefficients(), &[1, 0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn truncated_factor_identity() {
        // (1 + t^k + ... + t^{k(p-1)}) (1 - t^k) = 1 - t^{kp}
        for k in 1..=5u32 {
            for p in [2u32, 4, 8] {
                let pres = AlgebraPresentation::new(vec![GeneratorSpec::truncated(Label::new("x", None, None), k, p)]).unwrap();
                let s = series_of(&pres, 60).unwrap();
                let c = s.coefficients();
                for d in 0..=60usize {
                    let lower = if d >= k as usize { c[d - k as usize] as i128 } else { 0 };
                    let expect = match d {
                        0 => 1,
                        _ if d == (k * p) as usize => -1,
                        _ => 0,
                    };
                    assert_eq!(c[d] as i128 - lower, expect, "k={k} p={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let gens = (1..=200).map(|i| ext("a", i, 1)).collect();
        let p = AlgebraPresentation::new(gens).unwrap();
        assert!(matches!(series_of(&p, 150), Err(SeriesError::Overflow(_))));
    }

    #[test]
    fn presentation_validation() {
        let x = Label::new("x", None, None);
        assert!(matches!(
            AlgebraPresentation::new(vec![ext("x", 1, 1), ext("x", 1, 2)]),
            Err(SeriesError::DuplicateLabel(_))
        ));
        assert!(matches!(
            AlgebraPresentation::new(vec![GeneratorSpec::exterior(x.clone(), 0)]),
            Err(SeriesError::ZeroDegree(_))
        ));
        assert!(matches!(
            AlgebraPresentation::new(vec![GeneratorSpec::truncated(x, 1, 3)]),
            Err(SeriesError::BadExponent { .. })
        ));
    }

    #[test]
    fn json_shapes() {
        let p = AlgebraPresentation::new(vec![
            GeneratorSpec::polynomial(Label::new("omega", Some(2), None), 2),
            GeneratorSpec::truncated(Label::new("wbar", None, Some(2)), 1, 4),
        ])
        .unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "generators": [
                    {"label":"omega","sup":2,"sub":null,"degree":2,"kind":"polynomial"},
                    {"label":"wbar","sup":null,"sub":2,"degree":1,"kind":"truncated","exponent":4}
                ],
                "meta": {}
            })
        );
        let back: AlgebraPresentation = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);

        let s = PoincareSeries::from_coefficients(2, vec![1, 3, 4]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"truncation":2,"coefficients":[1,3,4]}"#);
        assert!(serde_json::from_str::<PoincareSeries>(r#"{"truncation":3,"coefficients":[1]}"#).is_err());
    }

    #[test]
    fn display_notation() {
        let p = AlgebraPresentation::new(vec![
            GeneratorSpec::polynomial(Label::new("w", None, Some(1)), 1),
            ext("a", 1, 1),
            ext("a", 2, 1),
            ext("b", 1, 1),
        ])
        .unwrap();
        assert_eq!(p.to_string(), "Z/2[w_1] (x) /\\[a_1,a_2] (x) /\\[b_1]");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn generator(i: usize) -> impl Strategy<Value = GeneratorSpec> {
            (1u32..=5, 0u8..3, 1u32..=3).prop_map(move |(deg, kind, e)| {
                let label = Label::new("x", None, Some(i as u32));
                match kind {
                    0 => GeneratorSpec::polynomial(label, deg),
                    1 => GeneratorSpec::exterior(label, deg),
                    _ => GeneratorSpec::truncated(label, deg, 1 << e),
                }
            })
        }

        fn presentation(max: usize) -> impl Strategy<Value = Vec<GeneratorSpec>> {
            (0..=max).prop_flat_map(|n| (0..n).map(generator).collect::<Vec<_>>())
        }

        // Count monomials of each degree by direct enumeration.
        fn enumerate(gens: &[GeneratorSpec], n: usize) -> Vec<u128> {
            let mut out = vec![0u128; n + 1];
            fn go(gens: &[GeneratorSpec], deg: usize, n: usize, out: &mut [u128]) {
                let Some((g, rest)) = gens.split_first() else {
                    out[deg] += 1;
                    return;
                };
                let mut e = 0;
                while deg + e * g.degree as usize <= n
                    && g.max_exponent().is_none_or(|m| e <= m as usize)
                {
                    go(rest, deg + e * g.degree as usize, n, out);
                    e += 1;
                }
            }
            go(gens, 0, n, &mut out);
            out
        }

        proptest! {
            #[test]
            fn matches_monomial_enumeration(gens in presentation(6)) {
                let p = AlgebraPresentation::new(gens.clone()).unwrap();
                let s = series_of(&p, 12).unwrap();
                prop_assert_eq!(s.coefficients(), &enumerate(&gens, 12)[..]);
            }

            #[test]
            fn series_is_multiplicative(a in presentation(4), b in presentation(4)) {
                let pa = AlgebraPresentation::new(a).unwrap();
                let mut pb = AlgebraPresentation::new(b).unwrap();
                for g in pb.generators.iter_mut() {
                    g.label.base = "y".into();
                }
                let joint = pa.tensor(&pb).unwrap();
                let lhs = series_of(&joint, 30).unwrap();
                let rhs = series_of(&pa, 30).unwrap().mul(&series_of(&pb, 30).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}

//! Cohomology presentations and Poincaré series of the moduli stack of real
//! rank-`r` bundles on a type I curve with invariants `(g', n)`, where
//! `g = 2g' + n - 1`.
//!
//! The presentation generators are
//!
//! | symbol        | label                  | degree   | kind                  |
//! |---------------|------------------------|----------|-----------------------|
//! | `omega_k`     | `omega^k`              | `k`      | polynomial            |
//! | `alpha^k_i`   | `alpha^k_i`            | `2k - 1` | exterior              |
//! | `beta^k_i`    | `beta^k_i`             | `k`      | exterior              |
//! | `d^j_{2k}`    | `d^j_{2k}`             | `2k - 1` | truncated, `2^{nu+1}` |
//! | `f_k`, `k>=2` | `f^k`                  | `2k - 2` | polynomial            |
//!
//! The `d^j` block is the `j`-th copy of `H*(Omega BSO(r))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{
    product_closed_form, series_eq, series_of, AlgebraPresentation, ClosedFormFactor,
    GeneratorSpec, Label, PoincareSeries, SeriesError,
};
use crate::steenrod::omega_bso_presentation;
use crate::surface::{classify, CurveInvariants, CurveType, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuliError {
    #[error("type I curves have n >= 1 real components (got n = 0)")]
    NoRealComponents,
    #[error("bundle rank must be >= 1")]
    ZeroRank,
    #[error("curve ({g},{n},{a}) is of type {found}, not type I")]
    NotTypeOne { g: u32, n: u32, a: u32, found: CurveType },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A validated type I curve plus bundle rank and degree. The degree is
/// carried for provenance only; nothing computed here depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliParams {
    pub g: u32,
    pub n: u32,
    pub a: u32,
    pub g_prime: u32,
    pub r: u32,
    pub d: i64,
}

impl ModuliParams {
    pub fn new(curve: CurveInvariants, r: u32, d: i64) -> Result<Self, ModuliError> {
        let derived = classify(curve.g, curve.n, curve.a)?;
        if derived.curve_type != CurveType::TypeI {
            return Err(ModuliError::NotTypeOne {
                g: curve.g,
                n: curve.n,
                a: curve.a,
                found: derived.curve_type,
            });
        }
        if r == 0 {
            return Err(ModuliError::ZeroRank);
        }
        Ok(ModuliParams {
            g: curve.g,
            n: curve.n,
            a: 0,
            g_prime: derived.g_prime,
            r,
            d,
        })
    }

    /// From `(g', n)`; the genus `2g' + n - 1` must be at least 2.
    pub fn from_type_one(g_prime: u32, n: u32, r: u32, d: i64) -> Result<Self, ModuliError> {
        if n == 0 {
            return Err(ModuliError::NoRealComponents);
        }
        Self::new(CurveInvariants::new(2 * g_prime + n - 1, n, 0)?, r, d)
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        rankr_presentation(self.g_prime, self.n, self.r)
            .expect("validated parameters")
            .with_meta("g", self.g)
            .with_meta("d", self.d)
    }
}

fn check_formula_domain(n: u32, r: u32) -> Result<(), ModuliError> {
    if n == 0 {
        return Err(ModuliError::NoRealComponents);
    }
    if r == 0 {
        return Err(ModuliError::ZeroRank);
    }
    Ok(())
}

fn omega(k: u32) -> GeneratorSpec {
    GeneratorSpec::polynomial(Label::new("omega", Some(k), None), k)
}

fn alpha(k: u32, i: u32) -> GeneratorSpec {
    GeneratorSpec::exterior(Label::new("alpha", Some(k), Some(i)), 2 * k - 1)
}

fn beta(k: u32, i: u32) -> GeneratorSpec {
    GeneratorSpec::exterior(Label::new("beta", Some(k), Some(i)), k)
}

fn f_class(k: u32) -> GeneratorSpec {
    GeneratorSpec::polynomial(Label::new("f", Some(k), None), 2 * k - 2)
}

fn tag(p: AlgebraPresentation, source: &str, g_prime: u32, n: u32, r: u32) -> AlgebraPresentation {
    p.with_meta("source", source)
        .with_meta("g_prime", g_prime)
        .with_meta("n", n)
        .with_meta("r", r)
}

/// Line bundles: `Z/2[omega_1] (x) /\[alpha_1..alpha_{2g'}] (x) /\[beta_1..beta_{n-1}]`,
/// every generator of degree 1.
pub fn rank1_presentation(g_prime: u32, n: u32) -> Result<AlgebraPresentation, ModuliError> {
    check_formula_domain(n, 1)?;
    let mut gens = vec![omega(1)];
    gens.extend((1..=2 * g_prime).map(|i| alpha(1, i)));
    gens.extend((1..n).map(|i| beta(1, i)));
    Ok(tag(AlgebraPresentation::new(gens)?, "rank1", g_prime, n, 1))
}

/// Everything in the rank-`r` presentation except the `f_k`.
fn em_generators(g_prime: u32, n: u32, r: u32) -> Vec<GeneratorSpec> {
    let mut gens: Vec<GeneratorSpec> = (1..=r).map(omega).collect();
    for k in 1..=r {
        gens.extend((1..=2 * g_prime).map(|i| alpha(k, i)));
    }
    for k in 1..=r {
        gens.extend((1..n).map(|i| beta(k, i)));
    }
    let so = omega_bso_presentation(r);
    for j in 1..=n {
        for g in &so.generators {
            let mut copy = g.clone();
            copy.label = Label::new("d", Some(j), g.label.sub);
            gens.push(copy);
        }
    }
    gens
}

/// The column algebra `V_{n,r} (x) A_{g',r} (x) Z/2[c_1..c_r]` as a free presentation.
pub fn em_presentation(g_prime: u32, n: u32, r: u32) -> Result<AlgebraPresentation, ModuliError> {
    check_formula_domain(n, r)?;
    let gens = em_generators(g_prime, n, r);
    Ok(tag(AlgebraPresentation::new(gens)?, "em_column", g_prime, n, r))
}

pub fn rankr_presentation(g_prime: u32, n: u32, r: u32) -> Result<AlgebraPresentation, ModuliError> {
    check_formula_domain(n, r)?;
    if r == 1 {
        return rank1_presentation(g_prime, n);
    }
    let mut gens = em_generators(g_prime, n, r);
    gens.extend((2..=r).map(f_class));
    Ok(tag(AlgebraPresentation::new(gens)?, "rankr", g_prime, n, r))
}

/// `prod_{i<=r}(1+t^i)^n prod_{i<r}(1+t^i)^n prod_{i<=r}(1+t^{2i-1})^{2g'} / prod_{k<=r}(1-t^{2k})`.
pub fn em_column_series(
    g_prime: u32,
    n: u32,
    r: u32,
    truncation: usize,
) -> Result<PoincareSeries, ModuliError> {
    check_formula_domain(n, r)?;
    let mut factors = Vec::new();
    factors.extend((1..=r).map(|i| ClosedFormFactor::one_plus(i, n)));
    factors.extend((1..r).map(|i| ClosedFormFactor::one_plus(i, n)));
    factors.extend((1..=r).map(|i| ClosedFormFactor::one_plus(2 * i - 1, 2 * g_prime)));
    // c_k has degree 2k
    factors.extend((1..=r).map(|k| ClosedFormFactor::geometric(2 * k, 1)));
    Ok(product_closed_form(&factors, truncation)?)
}

/// Column series times the `B(Omega^2 U(r))` factor `prod_{k=2}^r 1/(1-t^{2k-2})`.
pub fn stack_series(
    g_prime: u32,
    n: u32,
    r: u32,
    truncation: usize,
) -> Result<PoincareSeries, ModuliError> {
    let em = em_column_series(g_prime, n, r, truncation)?;
    let loops: Vec<_> = (2..=r).map(|k| ClosedFormFactor::geometric(2 * k - 2, 1)).collect();
    Ok(em.mul(&product_closed_form(&loops, truncation)?)?)
}

/// Outcome of the three series identities for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub g_prime: u32,
    pub n: u32,
    pub r: u32,
    pub truncation: usize,
    /// Presentation without the `f_k` against the column series.
    pub em_matches: bool,
    /// Full presentation against the stack series.
    pub stack_matches: bool,
    /// Rank 1 only: presentation against `(1+t)^g / (1-t)`.
    pub rank1_matches: Option<bool>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.em_matches && self.stack_matches && self.rank1_matches.unwrap_or(true)
    }
}

pub fn cross_check(
    g_prime: u32,
    n: u32,
    r: u32,
    truncation: usize,
) -> Result<CrossCheckReport, ModuliError> {
    let em_pres = series_of(&em_presentation(g_prime, n, r)?, truncation)?;
    let full_pres = series_of(&rankr_presentation(g_prime, n, r)?, truncation)?;
    let em_matches = series_eq(&em_pres, &em_column_series(g_prime, n, r, truncation)?);
    let stack_matches = series_eq(&full_pres, &stack_series(g_prime, n, r, truncation)?);
    let rank1_matches = if r == 1 {
        let g = 2 * g_prime + n - 1;
        let closed = product_closed_form(
            &[ClosedFormFactor::one_plus(1, g), ClosedFormFactor::geometric(1, 1)],
            truncation,
        )?;
        let rank1 = series_of(&rank1_presentation(g_prime, n)?, truncation)?;
        Some(series_eq(&rank1, &closed))
    } else {
        None
    };
    Ok(CrossCheckReport {
        g_prime,
        n,
        r,
        truncation,
        em_matches,
        stack_matches,
        rank1_matches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ABClassKind {
    #[serde(rename = "c")]
    Chern,
    #[serde(rename = "a")]
    Odd,
    #[serde(rename = "f")]
    Fundamental,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABClass {
    pub kind: ABClassKind,
    /// The rank level `i`.
    pub level: u32,
    /// `j` for the odd classes `a^{(i)}_j`.
    pub index: Option<u32>,
    pub degree: u32,
    /// Set for `f_1`, which lives in degree 0.
    pub unit_degree: bool,
}

impl ABClass {
    pub fn label(&self) -> String {
        match self.kind {
            ABClassKind::Chern => format!("c_{}", self.level),
            ABClassKind::Odd => format!("a^({})_{}", self.level, self.index.unwrap_or(0)),
            ABClassKind::Fundamental => format!("f_{}", self.level),
        }
    }
}

/// Degree table of the complex Atiyah-Bott classes from the Künneth
/// decomposition of the universal Chern classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABClassInventory {
    pub r: u32,
    pub g: u32,
    pub classes: Vec<ABClass>,
}

impl ABClassInventory {
    pub fn of_kind(&self, kind: ABClassKind) -> impl Iterator<Item = &ABClass> {
        self.classes.iter().filter(move |c| c.kind == kind)
    }
}

/// `c_i` (degree `2i`), `a^{(i)}_j` (degree `2i - 1`, `j <= 2g`), `f_i`
/// (degree `2i - 2`) for `i = 1..=r`. `f_1` sits in degree 0.
pub fn ab_inventory(r: u32, g: u32) -> ABClassInventory {
    let mut classes = Vec::new();
    classes.extend((1..=r).map(|i| ABClass {
        kind: ABClassKind::Chern,
        level: i,
        index: None,
        degree: 2 * i,
        unit_degree: false,
    }));
    for i in 1..=r {
        classes.extend((1..=2 * g).map(|j| ABClass {
            kind: ABClassKind::Odd,
            level: i,
            index: Some(j),
            degree: 2 * i - 1,
            unit_degree: false,
        }));
    }
    classes.extend((1..=r).map(|i| ABClass {
        kind: ABClassKind::Fundamental,
        level: i,
        index: None,
        degree: 2 * i - 2,
        unit_degree: i == 1,
    }));
    ABClassInventory { r, g, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{dim_in_degree, GeneratorKind};

    fn labels(p: &AlgebraPresentation) -> Vec<String> {
        p.generators.iter().map(|g| g.label.to_string()).collect()
    }

    #[test]
    fn rank1_examples() {
        // M-curve, g = 4
        let p = rank1_presentation(0, 5).unwrap();
        assert_eq!(p.count_kind(|k| k == GeneratorKind::Polynomial), 1);
        assert_eq!(labels(&p), ["omega^1", "beta^1_1", "beta^1_2", "beta^1_3", "beta^1_4"]);

        let p = rank1_presentation(1, 1).unwrap();
        assert_eq!(labels(&p), ["omega^1", "alpha^1_1", "alpha^1_2"]);
        assert_eq!(p.to_string(), "Z/2[omega^1] (x) /\\[alpha^1_1,alpha^1_2]");

        let p = rank1_presentation(1, 2).unwrap();
        assert_eq!(
            p.to_string(),
            "Z/2[omega^1] (x) /\\[alpha^1_1,alpha^1_2] (x) /\\[beta^1_1]"
        );
        assert!(p.generators.iter().all(|g| g.degree == 1));
        assert_eq!(rank1_presentation(1, 0), Err(ModuliError::NoRealComponents));
    }

    #[test]
    fn rankr_examples() {
        for gp in 0..=3 {
            for n in 1..=4 {
                assert_eq!(rankr_presentation(gp, n, 1).unwrap(), rank1_presentation(gp, n).unwrap());
            }
        }
        let p = rankr_presentation(0, 2, 2).unwrap();
        let got: Vec<(String, u32, GeneratorKind)> = p
            .generators
            .iter()
            .map(|g| (g.label.to_string(), g.degree, g.kind))
            .collect();
        let t2 = GeneratorKind::Truncated { exponent: 2 };
        let expect = vec![
            ("omega^1".to_string(), 1, GeneratorKind::Polynomial),
            ("omega^2".to_string(), 2, GeneratorKind::Polynomial),
            ("beta^1_1".to_string(), 1, GeneratorKind::Exterior),
            ("beta^2_1".to_string(), 2, GeneratorKind::Exterior),
            ("d^1_2".to_string(), 1, t2),
            ("d^2_2".to_string(), 1, t2),
            ("f^2".to_string(), 2, GeneratorKind::Polynomial),
        ];
        assert_eq!(got, expect);
    }

    #[test]
    fn generator_counts() {
        for gp in 0..=3u32 {
            for n in 1..=5u32 {
                for r in 1..=7u32 {
                    let p = rankr_presentation(gp, n, r).unwrap();
                    let count = |base: &str| p.generators.iter().filter(|g| g.label.base == base).count() as u32;
                    assert_eq!(count("omega"), r);
                    assert_eq!(count("alpha") + count("beta"), 2 * gp * r + (n - 1) * r);
                    assert_eq!(count("d"), n * (r / 2));
                    assert_eq!(count("f"), r - 1);
                }
            }
        }
    }

    #[test]
    fn em_column_examples() {
        let s = em_column_series(1, 1, 1, 5).unwrap();
        assert_eq!(s.coefficients(), &[1, 3, 4, 4, 4, 4]);
        for n in 1..=6 {
            // (1+t)^n / (1-t^2) = (1+t)^{n-1} / (1-t)
            let lhs = em_column_series(0, n, 1, 30).unwrap();
            let rhs = product_closed_form(
                &[ClosedFormFactor::one_plus(1, n - 1), ClosedFormFactor::geometric(1, 1)],
                30,
            )
            .unwrap();
            assert_eq!(lhs, rhs);
        }
        for (gp, n, r) in [(0, 1, 1), (2, 3, 4), (4, 6, 8)] {
            assert_eq!(em_column_series(gp, n, r, 10).unwrap().coefficient(0), 1);
        }
    }

    #[test]
    fn stack_examples() {
        for (gp, n) in [(0, 3), (1, 1), (2, 4)] {
            assert_eq!(stack_series(gp, n, 1, 20).unwrap(), em_column_series(gp, n, 1, 20).unwrap());
        }
        let pres = series_of(&rankr_presentation(0, 2, 2).unwrap(), 6).unwrap();
        assert_eq!(stack_series(0, 2, 2, 6).unwrap(), pres);
        for gp in 0..=2u32 {
            for n in 1..=4u32 {
                for r in 1..=4u32 {
                    let s = stack_series(gp, n, r, 3).unwrap();
                    let p = rankr_presentation(gp, n, r).unwrap();
                    assert_eq!(s.coefficient(1), dim_in_degree(&p, 1).unwrap());
                }
            }
        }
    }

    #[test]
    fn rank1_degree_one_dimension() {
        for gp in 0..=5u32 {
            for n in 1..=6u32 {
                let g = 2 * gp + n - 1;
                assert_eq!(stack_series(gp, n, 1, 4).unwrap().coefficient(1), (g + 1) as u128);
            }
        }
    }

    #[test]
    fn cross_check_examples() {
        assert!(cross_check(0, 2, 1, 20).unwrap().passed());
        assert!(cross_check(1, 2, 3, 40).unwrap().passed());
        for g in 2..=6 {
            for r in 1..=5 {
                assert!(cross_check(0, g + 1, r, 40).unwrap().passed());
            }
        }
    }

    #[test]
    fn params_validation() {
        let p = ModuliParams::from_type_one(1, 2, 3, 7).unwrap();
        assert_eq!((p.g, p.n, p.a, p.g_prime), (3, 2, 0, 1));
        assert!(matches!(
            ModuliParams::new(CurveInvariants::new(5, 5, 1).unwrap(), 2, 0),
            Err(ModuliError::NotTypeOne { .. })
        ));
        assert!(matches!(ModuliParams::from_type_one(0, 2, 1, 0), Err(ModuliError::Surface(_))));
        assert_eq!(ModuliParams::from_type_one(1, 1, 0, 0), Err(ModuliError::ZeroRank));
        // degree is metadata only
        let a = ModuliParams::from_type_one(1, 2, 3, 0).unwrap().presentation();
        let b = ModuliParams::from_type_one(1, 2, 3, 11).unwrap().presentation();
        assert_eq!(a.generators, b.generators);
    }

    #[test]
    fn ab_inventory_examples() {
        let inv = ab_inventory(1, 2);
        let table: Vec<(String, u32)> = inv.classes.iter().map(|c| (c.label(), c.degree)).collect();
        assert_eq!(
            table,
            vec![
                ("c_1".into(), 2),
                ("a^(1)_1".into(), 1),
                ("a^(1)_2".into(), 1),
                ("a^(1)_3".into(), 1),
                ("a^(1)_4".into(), 1),
                ("f_1".into(), 0),
            ]
        );
        let inv = ab_inventory(2, 2);
        assert_eq!(inv.of_kind(ABClassKind::Chern).count(), 2);
        let units: Vec<_> = inv.classes.iter().filter(|c| c.unit_degree).map(|c| c.label()).collect();
        assert_eq!(units, ["f_1"]);
        assert_eq!(inv.of_kind(ABClassKind::Odd).count(), 8);
        assert_eq!(inv.of_kind(ABClassKind::Fundamental).count(), 2);
        assert!(inv.classes.contains(&ABClass { kind: ABClassKind::Chern, level: 2, index: None, degree: 4, unit_degree: false }));
        assert!(inv.classes.contains(&ABClass { kind: ABClassKind::Fundamental, level: 2, index: None, degree: 2, unit_degree: false }));
        // odd classes share degrees with the real alpha^k_i
        let p = rankr_presentation(1, 1, 2).unwrap();
        for c in inv.of_kind(ABClassKind::Odd) {
            let a = p
                .generators
                .iter()
                .find(|g| g.label.base == "alpha" && g.label.sup == Some(c.level))
                .unwrap();
            assert_eq!(a.degree, c.degree);
        }
    }
}

//! The ten acceptance criteria as runnable checks.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::f2::{adapted_basis, dickson_invariant, normal_form_matrix, BitMatrix, RoleKind};
use crate::moduli::{cross_check, rank1_presentation, rankr_presentation};
use crate::oracle::{monomial_counts, random_matrix, random_presentation, rank_by_row_space};
use crate::series::{product_closed_form, series_of, ClosedFormFactor, GeneratorSpec};
use crate::steenrod::{cup1_height, indecomposable_part, omega_bso_presentation, s_set, sq1, SWMonomial, SWPolynomial};
use crate::surface::{type1_involution_matrix, type2_involution_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckConfig {
    /// Grid bounds for the presentation cross-check and rank-1 specialization.
    pub max_gprime: u32,
    pub max_n: u32,
    pub max_rank: u32,
    pub cap: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_gprime: 4,
            max_n: 6,
            max_rank: 8,
            cap: 40,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<32} {:>9.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(&CheckConfig) -> Result<String, String>;

pub const CRITERIA: [(u32, &str, Check); 10] = [
    (1, "type I Dickson invariant", type_one_dickson),
    (2, "type II Dickson invariant", type_two_dickson),
    (3, "adapted basis normal form", normal_form_conjugates),
    (4, "cup-1 heights and generator set", cup1_closed_form),
    (5, "Omega BSO(r) series", omega_bso_series),
    (6, "rank-1 series", rank1_series),
    (7, "presentation series cross-check", series_cross_check),
    (8, "rank-1 specialization", rank1_specialization),
    (9, "Steenrod point values", steenrod_points),
    (10, "oracle equivalence", oracle_equivalence),
];

pub fn run_criterion(id: u32, config: &CheckConfig) -> Option<CriterionOutcome> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let result = check(config);
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
    })
}

pub fn run_all(config: &CheckConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|c| run_criterion(c.0, config).expect("id from table"))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn type_one_dickson(_: &CheckConfig) -> Result<String, String> {
    let mut points = 0;
    for gp in 0..=5u32 {
        for n in 1..=6u32 {
            if 2 * gp + n - 1 < 2 {
                continue;
            }
            let s = type1_involution_matrix(gp, n).map_err(|e| format!("({gp},{n}): {e}"))?;
            let d = dickson_invariant(&s);
            ensure(d == 2 * gp as usize, || format!("(g'={gp}, n={n}): rank {d}, expected {}", 2 * gp))?;
            points += 1;
        }
    }
    Ok(format!("{points} grid points"))
}

fn type_two_dickson(_: &CheckConfig) -> Result<String, String> {
    let mut points = 0;
    for g in 2..=12u32 {
        for n in 1..g {
            let s = type2_involution_matrix(g, n).map_err(|e| format!("({g},{n}): {e}"))?;
            let c = (g - n) % 2;
            let gp = (g - n - c) / 2;
            let expected = 2 * gp + if (g - n) % 2 == 0 { 1 } else { 2 };
            let d = dickson_invariant(&s) as u32;
            ensure(d == expected, || format!("(g={g}, n={n}): rank {d}, expected {expected}"))?;
            points += 1;
        }
    }
    Ok(format!("{points} grid points"))
}

fn normal_form_conjugates(config: &CheckConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for trial in 0..1000 {
        let g = rng.gen_range(1..=10usize);
        let s = rng.gen_range(0..=g);
        let p = BitMatrix::random_invertible(2 * g, &mut rng);
        let conj = normal_form_matrix(g, s)
            .and_then(|n| n.conjugate_by(&p))
            .map_err(|e| e.to_string())?;
        let basis = adapted_basis(&conj).map_err(|e| e.to_string())?;
        let fail = || format!("trial {trial}: g={g}, s={s}");
        ensure(basis.dickson == s, fail)?;
        ensure(basis.change_of_basis.is_invertible(), fail)?;
        ensure(basis.verify(&conj).map_err(|e| e.to_string())?, fail)?;
        let count = |k| basis.roles.iter().filter(|r| r.kind == k).count();
        ensure(count(RoleKind::Alpha) == s && count(RoleKind::BigA) == s, fail)?;
        ensure(count(RoleKind::Beta) == g - s && count(RoleKind::Gamma) == g - s, fail)?;
    }
    Ok("1000 conjugates, g <= 10".into())
}

fn cup1_closed_form(_: &CheckConfig) -> Result<String, String> {
    let mut heights = 0;
    for r in 2..=64u32 {
        for k in (2..=r).step_by(2) {
            let nu = cup1_height(k, r).map_err(|e| e.to_string())?;
            let mut p = 1u32;
            while (k - 1) * p < r {
                p *= 2;
            }
            ensure(1u32 << (nu + 1) == p, || format!("k={k}, r={r}: 2^(nu+1)={}, closed form {p}", 1u32 << (nu + 1)))?;
            heights += 1;
        }
    }
    for r in 2..=16u32 {
        let evens: Vec<u32> = (2..=r).filter(|k| k % 2 == 0).collect();
        let got: Vec<u32> = s_set(r).into_iter().collect();
        ensure(got == evens, || format!("r={r}: generator set {got:?}"))?;
    }
    Ok(format!("{heights} heights, generator sets r <= 16"))
}

fn omega_bso_series(_: &CheckConfig) -> Result<String, String> {
    for r in 1..=16u32 {
        let lhs = series_of(&omega_bso_presentation(r), 60).map_err(|e| e.to_string())?;
        let factors: Vec<_> = (1..r).map(|i| ClosedFormFactor::one_plus(i, 1)).collect();
        let rhs = product_closed_form(&factors, 60).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("r={r}: {lhs} vs {rhs}"))?;
    }
    Ok("r <= 16 to degree 60".into())
}

fn rank1_series(_: &CheckConfig) -> Result<String, String> {
    for gp in 0..=5u32 {
        for n in 1..=6u32 {
            let g = 2 * gp + n - 1;
            let lhs = series_of(&rank1_presentation(gp, n).map_err(|e| e.to_string())?, 40)
                .map_err(|e| e.to_string())?;
            let rhs = product_closed_form(
                &[ClosedFormFactor::one_plus(1, g), ClosedFormFactor::geometric(1, 1)],
                40,
            )
            .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("(g'={gp}, n={n}) mismatch"))?;
            if (gp, n) == (1, 1) {
                ensure(lhs.coefficients()[..5] == [1, 3, 4, 4, 4], || format!("(1,1): {lhs}"))?;
            }
        }
    }
    Ok("g' <= 5, n <= 6 to degree 40".into())
}

fn series_cross_check(config: &CheckConfig) -> Result<String, String> {
    let grid: Vec<(u32, u32, u32)> = (0..=config.max_gprime)
        .flat_map(|gp| (1..=config.max_n).flat_map(move |n| (1..=config.max_rank).map(move |r| (gp, n, r))))
        .collect();
    let results: Vec<Result<(), String>> = std::thread::scope(|scope| {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
        let chunk = grid.len().div_ceil(workers).max(1);
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|points| {
                scope.spawn(move || {
                    points
                        .iter()
                        .map(|&(gp, n, r)| {
                            let report = cross_check(gp, n, r, config.cap).map_err(|e| format!("({gp},{n},{r}): {e}"))?;
                            ensure(report.passed(), || format!("({gp},{n},{r}): {report:?}"))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("{} grid points at truncation {}", grid.len(), config.cap))
}

fn multiset(gens: &[GeneratorSpec]) -> Vec<String> {
    let mut v: Vec<String> = gens
        .iter()
        .map(|g| format!("{}:{}:{:?}", g.label, g.degree, g.kind))
        .collect();
    v.sort();
    v
}

fn rank1_specialization(config: &CheckConfig) -> Result<String, String> {
    let mut points = 0;
    for gp in 0..=config.max_gprime {
        for n in 1..=config.max_n {
            let a = rankr_presentation(gp, n, 1).map_err(|e| e.to_string())?;
            let b = rank1_presentation(gp, n).map_err(|e| e.to_string())?;
            ensure(multiset(&a.generators) == multiset(&b.generators), || format!("(g'={gp}, n={n})"))?;
            points += 1;
        }
    }
    Ok(format!("{points} grid points"))
}

fn steenrod_points(_: &CheckConfig) -> Result<String, String> {
    let r = 3;
    let w2 = sq1(&SWPolynomial::w(2, r)).map_err(|e| e.to_string())?;
    let ind = indecomposable_part(&w2);
    ensure(ind.iter().eq([3].iter()), || format!("Sq_1(w_2) indecomposables {ind:?}"))?;
    let w3 = sq1(&SWPolynomial::w(3, r)).map_err(|e| e.to_string())?;
    let w2w3 = SWPolynomial::from_monomial(r, SWMonomial::from_exponents(&[(2, 1), (3, 1)]));
    ensure(w3 == w2w3, || format!("Sq_1(w_3) = {w3:?}"))?;
    let nu_2_2 = cup1_height(2, 2).map_err(|e| e.to_string())?;
    let nu_2_3 = cup1_height(2, 3).map_err(|e| e.to_string())?;
    ensure(nu_2_2 == 0 && nu_2_3 == 1, || format!("nu_2: {nu_2_2} at r=2, {nu_2_3} at r=3"))?;
    Ok("Sq_1(w_2), Sq_1(w_3), nu_2 at r = 2, 3".into())
}

fn oracle_equivalence(config: &CheckConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x0ac1e);
    let trials = 500;
    for t in 0..trials {
        let p = random_presentation(&mut rng, 6, 5);
        let engine = series_of(&p, 12).map_err(|e| e.to_string())?;
        ensure(engine.coefficients() == monomial_counts(&p, 12).as_slice(), || format!("trial {t}: {p}"))?;
        let m = random_matrix(&mut rng, 6, 6);
        ensure(m.rank() == rank_by_row_space(&m), || format!("trial {t}: matrix\n{m}"))?;
    }
    Ok(format!("{trials} presentations and {trials} matrices"))
}

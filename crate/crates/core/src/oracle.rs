//! Brute-force reference implementations, deliberately free of shared code
//! with the fast paths they check.

use std::collections::HashSet;

use rand::Rng;

use crate::f2::BitMatrix;
use crate::series::{AlgebraPresentation, GeneratorKind, GeneratorSpec, Label};

/// Rank as `log2 |row space|`, enumerating all `2^rows` subset sums.
pub fn rank_by_row_space(m: &BitMatrix) -> usize {
    assert!(m.n_rows() <= 16, "row-space enumeration is exponential");
    let rows: Vec<Vec<bool>> = (0..m.n_rows())
        .map(|i| (0..m.n_cols()).map(|j| m.get(i, j)).collect())
        .collect();
    let mut span = HashSet::new();
    for mask in 0u32..(1 << rows.len()) {
        let mut v = vec![false; m.n_cols()];
        for (i, row) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (x, &b) in v.iter_mut().zip(row) {
                    *x ^= b;
                }
            }
        }
        span.insert(v);
    }
    span.len().trailing_zeros() as usize
}

fn exponent_cap(kind: GeneratorKind) -> Option<u32> {
    match kind {
        GeneratorKind::Polynomial => None,
        GeneratorKind::Exterior => Some(1),
        GeneratorKind::Truncated { exponent } => Some(exponent - 1),
    }
}

/// Counts monomials `prod x_i^{e_i}` by degree, walking every admissible
/// exponent vector of total degree at most `max_degree`.
pub fn monomial_counts(p: &AlgebraPresentation, max_degree: usize) -> Vec<u128> {
    fn walk(gens: &[GeneratorSpec], deg: usize, max: usize, counts: &mut [u128]) {
        let Some((first, rest)) = gens.split_first() else {
            counts[deg] += 1;
            return;
        };
        let step = first.degree as usize;
        let mut e = 0u32;
        let mut d = deg;
        loop {
            walk(rest, d, max, counts);
            e += 1;
            d += step;
            if d > max || exponent_cap(first.kind).is_some_and(|c| e > c) {
                break;
            }
        }
    }
    let mut counts = vec![0u128; max_degree + 1];
    walk(&p.generators, 0, max_degree, &mut counts);
    counts
}

/// A random presentation with `1..=max_generators` generators of degree `1..=max_degree`.
pub fn random_presentation<R: Rng + ?Sized>(
    rng: &mut R,
    max_generators: usize,
    max_degree: u32,
) -> AlgebraPresentation {
    let count = rng.gen_range(1..=max_generators);
    let gens = (0..count)
        .map(|i| {
            let label = Label::new("x", None, Some(i as u32 + 1));
            let degree = rng.gen_range(1..=max_degree);
            match rng.gen_range(0..3) {
                0 => GeneratorSpec::polynomial(label, degree),
                1 => GeneratorSpec::exterior(label, degree),
                _ => GeneratorSpec::truncated(label, degree, 1 << rng.gen_range(1..=3)),
            }
        })
        .collect();
    AlgebraPresentation::new(gens).expect("distinct labels, positive degrees")
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, max_rows: usize, max_cols: usize) -> BitMatrix {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let mut m = BitMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series_of;

    #[test]
    fn row_space_rank_small_cases() {
        assert_eq!(rank_by_row_space(&BitMatrix::identity(5)), 5);
        assert_eq!(rank_by_row_space(&BitMatrix::zeros(3, 4)), 0);
        let m = BitMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        assert_eq!(rank_by_row_space(&m), 2);
    }

    #[test]
    fn monomial_counts_small_cases() {
        let p = AlgebraPresentation::new(vec![
            GeneratorSpec::polynomial(Label::new("x", None, None), 2),
            GeneratorSpec::exterior(Label::new("y", None, None), 1),
        ])
        .unwrap();
        assert_eq!(monomial_counts(&p, 5), vec![1, 1, 1, 1, 1, 1]);
        let p = AlgebraPresentation::new(vec![GeneratorSpec::truncated(Label::new("z", None, None), 3, 4)]).unwrap();
        assert_eq!(monomial_counts(&p, 10), vec![1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn oracles_agree_with_engine_on_random_inputs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = random_presentation(&mut rng, 6, 4);
            assert_eq!(series_of(&p, 12).unwrap().coefficients(), monomial_counts(&p, 12).as_slice());
            let m = random_matrix(&mut rng, 6, 6);
            assert_eq!(m.rank(), rank_by_row_space(&m));
        }
    }
}

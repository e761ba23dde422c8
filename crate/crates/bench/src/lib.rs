//! Deterministic inputs shared by the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use realbun_core::{normal_form_matrix, BitMatrix, InvolutionMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense_square(n: usize, seed: u64) -> BitMatrix {
    BitMatrix::random_invertible(n, &mut rng(seed))
}

/// A conjugate of the normal form with `dickson` blocks in genus `g`.
pub fn scrambled_involution(g: usize, dickson: usize, seed: u64) -> InvolutionMatrix {
    let p = BitMatrix::random_invertible(2 * g, &mut rng(seed));
    normal_form_matrix(g, dickson)
        .and_then(|n| n.conjugate_by(&p))
        .expect("valid block count")
}

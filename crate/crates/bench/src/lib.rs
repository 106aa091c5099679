//! Seeded random inputs for the benchmarks.

use framekit::{CVector, Complex64, VectorSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` Gaussian-ish complex vectors in `C^dim`, rescaled so the largest
/// singular value of the synthesis matrix is at most 1.
pub fn random_bessel(seed: u64, dim: usize, n: usize) -> VectorSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<CVector> = (0..n)
        .map(|_| {
            CVector::from_fn(dim, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
        })
        .collect();
    // Frobenius norm bounds the spectral norm.
    let total: f64 = vectors.iter().map(|v| v.norm_squared()).sum();
    let seq = VectorSequence::new(dim, vectors).expect("consistent dimensions");
    seq.scaled(1.0 / total.sqrt())
}

/// Random sequence with `n` vectors repeated twice, so it has excess `n`
/// whenever `n >= dim`.
pub fn random_redundant(seed: u64, dim: usize, n: usize) -> VectorSequence {
    let base = random_bessel(seed, dim, n);
    let doubled: Vec<CVector> = base.iter().chain(base.iter()).cloned().collect();
    VectorSequence::new(dim, doubled).expect("consistent dimensions")
}

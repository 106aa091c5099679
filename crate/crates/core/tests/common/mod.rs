#![allow(dead_code)]

use framekit::{CMatrix, CVector, Complex64, Tolerances, VectorSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> CVector {
    CVector::from_iterator(
        dim,
        (0..dim).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
    )
}

/// `n` random vectors in `C^dim`, confined to a random subspace of
/// dimension `rank` when `rank < dim`.
pub fn random_sequence<R: Rng>(rng: &mut R, dim: usize, n: usize, rank: usize) -> VectorSequence {
    let vectors = if rank >= dim {
        (0..n).map(|_| random_vector(rng, dim)).collect()
    } else {
        let generators: Vec<CVector> = (0..rank).map(|_| random_vector(rng, dim)).collect();
        (0..n)
            .map(|_| {
                let mut v = CVector::zeros(dim);
                for g in &generators {
                    let c =
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    v += g * c;
                }
                v
            })
            .collect()
    };
    VectorSequence::new(dim, vectors).unwrap()
}

/// Random Bessel sequence with `dim <= 32`, `n <= 64`, sometimes rank
/// deficient, never identically zero.
pub fn random_bessel<R: Rng>(rng: &mut R) -> VectorSequence {
    let dim = rng.random_range(1..=32);
    let n = rng.random_range(1..=64);
    let rank = if rng.random_bool(0.25) {
        rng.random_range(1..=dim)
    } else {
        dim
    };
    random_sequence(rng, dim, n, rank)
}

/// Random frame with `dim <= 32`, `dim <= n <= 64`.
pub fn random_frame<R: Rng>(rng: &mut R) -> VectorSequence {
    let dim = rng.random_range(1..=32);
    let n = rng.random_range(dim..=64);
    random_sequence(rng, dim, n, dim)
}

/// Largest singular value squared of the synthesis matrix.
pub fn upper_bound_oracle(seq: &VectorSequence) -> f64 {
    if seq.is_empty() {
        return 0.0;
    }
    let synthesis = CMatrix::from_columns(seq.vectors());
    let s = jacobi_singular_values(&synthesis);
    s.iter().fold(0.0_f64, |a, &b| a.max(b)).powi(2)
}

/// Rescales so that the optimal upper bound is exactly `target`.
pub fn with_upper_bound(seq: &VectorSequence, target: f64) -> VectorSequence {
    seq.scaled((target / upper_bound_oracle(seq)).sqrt())
}

/// `sum_n f_n f_n*` accumulated entry by entry.
pub fn gram_oracle(seq: &VectorSequence) -> CMatrix {
    let d = seq.dim();
    let mut s = CMatrix::zeros(d, d);
    for f in seq.iter() {
        for i in 0..d {
            for j in 0..d {
                s[(i, j)] += f[i] * f[j].conj();
            }
        }
    }
    s
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Numerical rank by one-sided Jacobi with the crate's threshold rule, computed
/// independently of the library.
pub fn rank_oracle(m: &CMatrix, tol: &Tolerances) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = jacobi_singular_values(m);
    let smax = s.iter().fold(0.0_f64, |a, &b| a.max(b));
    let tau = tol.rank_rtol * smax + tol.rank_atol;
    s.iter().filter(|&&x| x > tau).count()
}

pub fn synthesis_rank(seq: &VectorSequence, tol: &Tolerances) -> usize {
    if seq.is_empty() {
        return 0;
    }
    rank_oracle(&CMatrix::from_columns(seq.vectors()), tol)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

pub fn max_eigenvalue(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

/// One-sided Jacobi singular values, orthogonalizing the columns of the
/// narrower orientation until every pair is numerically orthogonal.
pub fn jacobi_singular_values(m: &CMatrix) -> Vec<f64> {
    let mut a = if m.ncols() > m.nrows() {
        m.adjoint()
    } else {
        m.clone()
    };
    let n = a.ncols();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..a.nrows() {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)] * phase.conj();
                    a[(i, p)] = ap * c - aq * s;
                    a[(i, q)] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

#[test]
fn jacobi_matches_known_values() {
    let m = CMatrix::from_row_slice(
        2,
        3,
        &[
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 4.0),
            Complex64::new(0.0, 0.0),
        ],
    );
    let s = jacobi_singular_values(&m);
    assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
}

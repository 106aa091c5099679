//! Finite extensions of Bessel sequences: minimal extension to a frame,
//! minimal and non-minimal Parseval completions, tight completions,
//! Parseval perturbations and the subspace on which the sequence already
//! reconstructs like a Parseval frame.
//!
//! Every construction works from one eigen-decomposition of the frame
//! operator `S = U*U`. The defect operator `c I - S` shares its
//! eigenvectors, so its square root applied to an eigenvector `w` with
//! defect `delta` is `sqrt(delta) w`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::model::{
    analysis_matrix, CMatrix, CVector, Extension, SubspaceBasis, Tolerances, VectorSequence,
};
use crate::spectral::{
    frame_operator, hermitian_spectrum, numerical_rank, parseval_residual, rank_of_values,
    require_frame, singular_values, HermitianSpectrum,
};

/// Defect data for a Parseval completion.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionPlan {
    /// Numerical rank of `I - U*U`.
    pub k: usize,
    /// Orthonormal basis of `Im(I - U*U)`, largest defect first.
    pub defect_basis: SubspaceBasis,
    /// Eigenvalues of `I - U*U` matching `defect_basis`.
    pub defects: Vec<f64>,
    /// Number of vectors the completion adds, `slots >= k`.
    pub slots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationResult {
    /// `g_n`, one per input vector.
    pub perturbations: Vec<CVector>,
    /// Orthonormal basis of `L = Im(I - U*U)`.
    pub subspace: SubspaceBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalCheck {
    pub is_parseval: bool,
    /// `||U*U - I||_F`.
    pub residual: f64,
}

// Eigenpairs of `level * I - S` whose defect exceeds the rank threshold,
// sorted by defect descending. Negative defects are clamped to zero.
fn clamped_defects(
    spectrum: &HermitianSpectrum,
    level: f64,
    tol: &Tolerances,
) -> (Vec<f64>, Vec<CVector>) {
    let mut pairs: Vec<(f64, &CVector)> = spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvectors)
        .rev()
        .map(|(&mu, v)| ((level - mu).max(0.0), v))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let tau = tol.rank_threshold(pairs.first().map_or(0.0, |p| p.0));
    pairs
        .into_iter()
        .filter(|(delta, _)| *delta > tau)
        .map(|(delta, v)| (delta, v.clone()))
        .unzip()
}

// Splits the eigenvectors of `S` into those with `|1 - mu| > tau` (the
// range of `I - S`) and the rest (its kernel).
fn split_identity_defect(
    spectrum: &HermitianSpectrum,
    tol: &Tolerances,
) -> (Vec<CVector>, Vec<CVector>) {
    let scale = spectrum
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, mu| acc.max((1.0 - mu).abs()));
    let tau = tol.rank_threshold(scale);
    let mut range = Vec::new();
    let mut kernel = Vec::new();
    let mut order: Vec<usize> = (0..spectrum.dim()).rev().collect();
    order.sort_by(|&a, &b| {
        let da = (1.0 - spectrum.eigenvalues[a]).abs();
        let db = (1.0 - spectrum.eigenvalues[b]).abs();
        db.total_cmp(&da)
    });
    for i in order {
        let v = spectrum.eigenvectors[i].clone();
        if (1.0 - spectrum.eigenvalues[i]).abs() > tau {
            range.push(v);
        } else {
            kernel.push(v);
        }
    }
    (range, kernel)
}

fn spectrum_of(seq: &VectorSequence, tol: &Tolerances) -> HermitianSpectrum {
    hermitian_spectrum(&frame_operator(seq), tol).expect("frame operator is square")
}

/// Numerical rank of `I - U*U`.
pub fn defect_rank(seq: &VectorSequence, tol: &Tolerances) -> usize {
    let d = seq.dim();
    numerical_rank(&(CMatrix::identity(d, d) - frame_operator(seq)), tol)
}

fn upper_bound(seq: &VectorSequence) -> f64 {
    singular_values(analysis_matrix(seq).matrix())
        .first()
        .map_or(0.0, |s| s * s)
}

/// Adds `sqrt(B) w_j` for an orthonormal basis `(w_j)` of `Ker U`.
///
/// The result is a frame whose optimal upper bound is still `B`.
pub fn minimal_frame_extension(seq: &VectorSequence, tol: &Tolerances) -> Result<Extension> {
    let sv = singular_values(analysis_matrix(seq).matrix());
    let rank = rank_of_values(&sv, tol);
    if rank == 0 {
        return Err(FrameError::DegenerateScale);
    }
    let deficit = seq.dim() - rank;
    let scale = Complex64::new(sv[0], 0.0);
    let spectrum = spectrum_of(seq, tol);
    let added = spectrum.eigenvectors[seq.dim() - deficit..]
        .iter()
        .map(|w| w * scale)
        .collect();
    Ok(Extension::new(added, deficit))
}

/// Defect basis and slot count for a Parseval completion.
pub fn completion_plan(
    seq: &VectorSequence,
    slots: Option<usize>,
    tol: &Tolerances,
) -> Result<CompletionPlan> {
    let bound = upper_bound(seq);
    if bound > 1.0 + tol.bound_slack {
        return Err(FrameError::UpperBoundExceedsOne { bound });
    }
    let (defects, basis) = clamped_defects(&spectrum_of(seq, tol), 1.0, tol);
    let k = defects.len();
    let slots = slots.unwrap_or(k);
    if slots < k {
        return Err(FrameError::BelowMinimalCount { k, slots });
    }
    Ok(CompletionPlan {
        k,
        defect_basis: SubspaceBasis::from_orthonormal(seq.dim(), basis),
        defects,
        slots,
    })
}

/// Extends a sequence with `B <= 1` to a Parseval frame.
///
/// Without `slots` this adds exactly `k = rank(I - U*U)` vectors
/// `(I - U*U)^{1/2} w_j`. With `slots = l > k` the same vectors fill the
/// first `k` slots and `l - k` zero vectors follow.
pub fn parseval_completion(
    seq: &VectorSequence,
    slots: Option<usize>,
    tol: &Tolerances,
) -> Result<Extension> {
    let plan = completion_plan(seq, slots, tol)?;
    let mut added: Vec<CVector> = plan
        .defect_basis
        .basis()
        .iter()
        .zip(&plan.defects)
        .map(|(w, &delta)| w * Complex64::new(delta.sqrt(), 0.0))
        .collect();
    added.resize(plan.slots, CVector::zeros(seq.dim()));
    Ok(Extension::new(added, plan.k))
}

/// Extends a sequence to a `B`-tight frame, `B` the optimal upper bound.
pub fn tight_completion(seq: &VectorSequence, tol: &Tolerances) -> Result<Extension> {
    if rank_of_values(&singular_values(analysis_matrix(seq).matrix()), tol) == 0 {
        return Err(FrameError::DegenerateScale);
    }
    let spectrum = spectrum_of(seq, tol);
    let bound = spectrum.eigenvalues[0];
    let (defects, basis) = clamped_defects(&spectrum, bound, tol);
    let added: Vec<CVector> = basis
        .iter()
        .zip(&defects)
        .map(|(w, &delta)| w * Complex64::new(delta.sqrt(), 0.0))
        .collect();
    let k = added.len();
    Ok(Extension::new(added, k))
}

/// Finite-rank perturbation `g_n = (S^{-1/2} - I) f_n` turning a frame
/// into a Parseval frame, with every `g_n` in `Im(I - S)`.
pub fn parseval_perturbation(seq: &VectorSequence, tol: &Tolerances) -> Result<PerturbationResult> {
    let spectrum = require_frame(seq, tol)?;
    let d = seq.dim();
    let correction = spectrum.map(|mu| 1.0 / mu.sqrt()) - CMatrix::identity(d, d);
    let perturbations = seq.iter().map(|f| &correction * f).collect();
    let (range, _) = split_identity_defect(&spectrum, tol);
    Ok(PerturbationResult {
        perturbations,
        subspace: SubspaceBasis::from_orthonormal(d, range),
    })
}

/// Orthonormal basis of the numerical kernel of `I - U*U`: the subspace on
/// which `x = sum <x, f_n> f_n` holds.
pub fn outer_reconstruction_subspace(seq: &VectorSequence, tol: &Tolerances) -> SubspaceBasis {
    let (_, kernel) = split_identity_defect(&spectrum_of(seq, tol), tol);
    SubspaceBasis::from_orthonormal(seq.dim(), kernel)
}

/// `||U*U - I||_F` against `verify_tol * sqrt(d)`.
pub fn verify_parseval(seq: &VectorSequence, tol: &Tolerances) -> ParsevalCheck {
    let residual = parseval_residual(seq);
    ParsevalCheck {
        is_parseval: residual <= tol.verify_tol * (seq.dim() as f64).sqrt(),
        residual,
    }
}

/// Checks a candidate extension against the minimal count `k`: it must add
/// at least `k` vectors, and if it completes to a Parseval frame its added
/// vectors must span at least `k` dimensions.
pub fn minimality_certificate(
    seq: &VectorSequence,
    candidate: &Extension,
    tol: &Tolerances,
) -> bool {
    let k = defect_rank(seq, tol);
    if candidate.len() < k {
        return false;
    }
    let Ok(extended) = candidate.apply(seq) else {
        return false;
    };
    if !verify_parseval(&extended, tol).is_parseval {
        return true;
    }
    let added = VectorSequence::new(seq.dim(), candidate.added.clone())
        .expect("extension vectors share the ambient dimension");
    numerical_rank(analysis_matrix(&added).matrix(), tol) >= k
}

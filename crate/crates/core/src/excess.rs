//! Excess of frames: Riesz-basis extraction, the canonical-Parseval excess
//! formula, the energy identity for Parseval completions and partial sums
//! of the bound-defect series `sum (B - ||f_n||^2)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::extension::parseval_completion;
use crate::model::{analysis_matrix, inner, CVector, Tolerances, VectorSequence};
use crate::spectral::{
    numerical_rank, optimal_bounds, parseval_canonical, rank_of_values, singular_values,
};

#[derive(Debug, Clone, PartialEq)]
pub struct RieszExtraction {
    /// Indices removed from the sequence, ascending.
    pub removed_indices: Vec<usize>,
    /// The retained basis, in original order.
    pub remaining: VectorSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    /// Number of vectors added by the minimal Parseval completion.
    pub k: usize,
    /// `sum ||x_j||^2` over the added vectors.
    pub added_energy: f64,
    /// `sum (1 - ||f_n||^2)`.
    pub defect_sum: f64,
    pub excess: usize,
    /// `|added_energy - (defect_sum - excess)|`.
    pub identity_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesVerdict {
    Bounded,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectSeriesReport {
    /// Optimal upper bound of the full sequence.
    #[serde(rename = "B")]
    pub bound: f64,
    pub schedule: Vec<usize>,
    /// `sum_{n <= m} (B - ||f_n||^2)` for each prefix length `m`.
    pub partial_sums: Vec<f64>,
    pub verdict: SeriesVerdict,
}

fn frame_rank_or_err(seq: &VectorSequence, tol: &Tolerances) -> Result<usize> {
    let rank = numerical_rank(analysis_matrix(seq).matrix(), tol);
    if rank < seq.dim() {
        return Err(FrameError::FrameRequired {
            deficit: seq.dim() - rank,
        });
    }
    Ok(rank)
}

/// Scans the vectors in index order and keeps each one that raises the
/// numerical rank of the kept family. Everything else is removed, so the
/// number of removed indices equals the excess `n - dim`.
pub fn riesz_extraction(seq: &VectorSequence, tol: &Tolerances) -> Result<RieszExtraction> {
    frame_rank_or_err(seq, tol)?;
    let sv = singular_values(analysis_matrix(seq).matrix());
    let tau = tol.rank_threshold(sv[0]);

    let mut kept = greedy_by_residual(seq, tau);
    if kept.len() != seq.dim() {
        kept = greedy_by_rank(seq, tol);
    }
    let removed_indices: Vec<usize> = (0..seq.len()).filter(|i| !kept.contains(i)).collect();
    Ok(RieszExtraction {
        remaining: seq.without(&removed_indices),
        removed_indices,
    })
}

// Column-pivoted Gram-Schmidt in index order, with one reorthogonalization
// pass.
fn greedy_by_residual(seq: &VectorSequence, tau: f64) -> Vec<usize> {
    let mut basis: Vec<CVector> = Vec::with_capacity(seq.dim());
    let mut kept = Vec::with_capacity(seq.dim());
    for (i, f) in seq.iter().enumerate() {
        if basis.len() == seq.dim() {
            break;
        }
        let mut r = f.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(&r, q);
                r -= q * c;
            }
        }
        let norm = r.norm();
        if norm > tau {
            basis.push(r / Complex64::new(norm, 0.0));
            kept.push(i);
        }
    }
    kept
}

fn greedy_by_rank(seq: &VectorSequence, tol: &Tolerances) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut rank = 0;
    for i in 0..seq.len() {
        if rank == seq.dim() {
            break;
        }
        let mut trial: Vec<CVector> = kept.iter().map(|&j| seq.vectors()[j].clone()).collect();
        trial.push(seq.vectors()[i].clone());
        let trial = VectorSequence::new(seq.dim(), trial).expect("subfamily keeps dimension");
        let r = rank_of_values(&singular_values(analysis_matrix(&trial).matrix()), tol);
        if r > rank {
            rank = r;
            kept.push(i);
        }
    }
    kept
}

/// `sum (1 - ||S^{-1/2} f_n||^2)`, which equals the excess of a frame.
pub fn excess_via_canonical(seq: &VectorSequence, tol: &Tolerances) -> Result<f64> {
    let canonical = parseval_canonical(seq, tol)?;
    Ok(canonical.squared_norms().iter().map(|m| 1.0 - m).sum())
}

/// Completes a frame with `B <= 1` to a Parseval frame and compares the
/// added energy with `sum (1 - ||f_n||^2) - excess`.
pub fn energy_identity(seq: &VectorSequence, tol: &Tolerances) -> Result<EnergyReport> {
    let rank = frame_rank_or_err(seq, tol)?;
    let completion = parseval_completion(seq, None, tol)?;
    let added_energy = completion.energy();
    let defect_sum: f64 = seq.squared_norms().iter().map(|m| 1.0 - m).sum();
    let excess = seq.len() - rank;
    Ok(EnergyReport {
        k: completion.len(),
        added_energy,
        defect_sum,
        excess,
        identity_residual: (added_energy - (defect_sum - excess as f64)).abs(),
    })
}

/// Partial sums of `B - ||f_n||^2` over increasing prefix lengths.
///
/// The verdict is `growing` when the last two partial sums differ by more
/// than `verify_tol` times the gap between their prefix lengths. A single
/// prefix is compared against the empty prefix.
pub fn defect_series(
    seq: &VectorSequence,
    schedule: &[usize],
    tol: &Tolerances,
) -> Result<DefectSeriesReport> {
    if schedule.is_empty() {
        return Err(FrameError::InvalidSchedule("schedule is empty".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FrameError::InvalidSchedule(
            "prefix lengths must be strictly increasing".into(),
        ));
    }
    if let Some(&last) = schedule.last() {
        if last > seq.len() {
            return Err(FrameError::InvalidSchedule(format!(
                "prefix length {last} exceeds sequence length {}",
                seq.len()
            )));
        }
    }
    let bound = optimal_bounds(seq).upper;
    let norms = seq.squared_norms();
    let mut partial_sums = Vec::with_capacity(schedule.len());
    let mut acc = 0.0;
    let mut consumed = 0;
    for &m in schedule {
        acc += norms[consumed..m].iter().map(|n| bound - n).sum::<f64>();
        consumed = m;
        partial_sums.push(acc);
    }
    let (prev_m, prev_sum) = if schedule.len() >= 2 {
        (
            schedule[schedule.len() - 2],
            partial_sums[partial_sums.len() - 2],
        )
    } else {
        (0, 0.0)
    };
    let gap = (schedule[schedule.len() - 1] - prev_m) as f64;
    let verdict = if (acc - prev_sum).abs() > tol.verify_tol * gap {
        SeriesVerdict::Growing
    } else {
        SeriesVerdict::Bounded
    };
    Ok(DefectSeriesReport {
        bound,
        schedule: schedule.to_vec(),
        partial_sums,
        verdict,
    })
}

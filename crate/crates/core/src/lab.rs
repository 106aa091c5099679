//! Truncation laboratory: finite sections of infinite model sequences and
//! trend diagnostics across growing truncation sizes.
//!
//! Verdicts are heuristics over finite profiles. They never certify
//! compactness or closedness of range in the infinite model, and every
//! report carries the raw per-size numbers behind its verdict.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::extension::defect_rank;
use crate::model::{analysis_matrix, CMatrix, CVector, Tolerances, VectorSequence};
use crate::spectral::{optimal_bounds, rank_of_values, singular_values};

/// Default truncation sizes.
pub const DEFAULT_SCHEDULE: [usize; 5] = [16, 32, 64, 128, 256];

/// Number of leading and trailing singular values kept in report profiles.
const PROFILE_LEN: usize = 4;

/// Infinite model sequences, truncated to `N` vectors in `C^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `f_n = e_n`.
    Onb,
    /// `f_1 = e_1`, `f_n = e_{n-1} + e_n`.
    ShiftPlusIdentity,
    /// `f_n = sqrt(n / (n + 1)) e_n`.
    DiagSqrtRatio,
    /// `e_1, e_1, e_2, e_3, ...`
    RepeatedFirst,
    /// `f_1 = e_1 / 2`, `f_n = e_n` otherwise.
    OnbDampedFirst,
}

impl Generator {
    pub const ALL: [Generator; 5] = [
        Generator::Onb,
        Generator::ShiftPlusIdentity,
        Generator::DiagSqrtRatio,
        Generator::RepeatedFirst,
        Generator::OnbDampedFirst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Onb => "onb",
            Generator::ShiftPlusIdentity => "shift_plus_identity",
            Generator::DiagSqrtRatio => "diag_sqrt_ratio",
            Generator::RepeatedFirst => "repeated_first",
            Generator::OnbDampedFirst => "onb_damped_first",
        }
    }

    // Nonzero coordinates (0-based) of element `n` (1-based), with
    // coordinates at or beyond `size` dropped.
    fn entries(self, n: usize) -> Vec<(usize, f64)> {
        match self {
            Generator::Onb => vec![(n - 1, 1.0)],
            Generator::ShiftPlusIdentity if n == 1 => vec![(0, 1.0)],
            Generator::ShiftPlusIdentity => vec![(n - 2, 1.0), (n - 1, 1.0)],
            Generator::DiagSqrtRatio => vec![(n - 1, (n as f64 / (n as f64 + 1.0)).sqrt())],
            Generator::RepeatedFirst if n == 1 => vec![(0, 1.0)],
            Generator::RepeatedFirst => vec![(n - 2, 1.0)],
            Generator::OnbDampedFirst if n == 1 => vec![(0, 0.5)],
            Generator::OnbDampedFirst => vec![(n - 1, 1.0)],
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| FrameError::UnknownGenerator(s.to_string()))
    }
}

/// The first `size` elements of the model sequence, compressed to
/// `span{e_1, ..., e_size}`.
pub fn generate(gen: Generator, size: usize) -> Result<VectorSequence> {
    if size == 0 {
        return Err(FrameError::InvalidSchedule(
            "truncation size must be positive".into(),
        ));
    }
    let vectors = (1..=size)
        .map(|n| {
            let mut v = CVector::zeros(size);
            for (i, x) in gen.entries(n) {
                if i < size {
                    v[i] = Complex64::new(x, 0.0);
                }
            }
            v
        })
        .collect();
    VectorSequence::new(size, vectors)
}

/// `I - V*U`, the operator `x -> x - sum <x, f_n> g_n`.
pub fn left_defect(f: &VectorSequence, g: &VectorSequence) -> CMatrix {
    let u = analysis_matrix(f);
    let v = analysis_matrix(g);
    let d = f.dim();
    CMatrix::identity(d, d) - v.matrix().adjoint() * u.matrix()
}

/// `I - VU*` on coefficient space, entries `delta_ij - <f_j, g_i>`.
pub fn right_defect(f: &VectorSequence, g: &VectorSequence) -> CMatrix {
    let u = analysis_matrix(f);
    let v = analysis_matrix(g);
    let n = f.len();
    CMatrix::identity(n, n) - v.matrix() * u.matrix().adjoint()
}

fn check_schedule(schedule: &[usize], min_len: usize) -> Result<()> {
    if schedule.len() < min_len {
        return Err(FrameError::InvalidSchedule(format!(
            "at least {min_len} truncation sizes required"
        )));
    }
    if schedule.first() == Some(&0) {
        return Err(FrameError::InvalidSchedule(
            "truncation size must be positive".into(),
        ));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FrameError::InvalidSchedule(
            "truncation sizes must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Leading and trailing singular values of a defect matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularProfile {
    pub top: Vec<f64>,
    pub tail: Vec<f64>,
    pub median: f64,
}

impl SingularProfile {
    fn from_values(sorted_desc: &[f64]) -> Self {
        let n = sorted_desc.len();
        let top = sorted_desc.iter().take(PROFILE_LEN).copied().collect();
        let tail = sorted_desc[n.saturating_sub(PROFILE_LEN)..].to_vec();
        Self {
            top,
            tail,
            median: median(sorted_desc),
        }
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    match n {
        0 => 0.0,
        _ if n % 2 == 1 => sorted[n / 2],
        _ => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityPoint {
    #[serde(rename = "N")]
    pub size: usize,
    pub left_defect_rank: usize,
    pub right_defect_rank: usize,
    pub left_profile: SingularProfile,
    pub right_profile: SingularProfile,
    #[serde(skip)]
    pub left_singular_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectClass {
    FiniteRankStable,
    CompactDecaying,
    NonDecaying,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub left: Generator,
    pub right: Generator,
    pub schedule: Vec<usize>,
    #[serde(rename = "per_N")]
    pub per_size: Vec<DualityPoint>,
    /// Classification of the left defect `I - V*U` across the schedule.
    pub classification: DefectClass,
}

impl DualityReport {
    pub fn left_defect_ranks(&self) -> Vec<usize> {
        self.per_size.iter().map(|p| p.left_defect_rank).collect()
    }

    pub fn right_defect_ranks(&self) -> Vec<usize> {
        self.per_size.iter().map(|p| p.right_defect_rank).collect()
    }
}

/// Classifies a left-defect trend.
///
/// * finite-rank-stable: equal ranks at the last two sizes and the smallest
///   singular value at the last size below the rank threshold;
/// * compact-decaying: the rank grows, each fixed-index singular value is
///   non-increasing in `N` (up to `verify_tol`), and the median singular
///   value at the largest size is below half of the median at the smallest;
/// * non-decaying otherwise.
pub fn classify_defects(points: &[DualityPoint], tol: &Tolerances) -> DefectClass {
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return DefectClass::NonDecaying;
    };
    let prev = &points[points.len().saturating_sub(2)];
    let tail = last.left_singular_values.last().copied().unwrap_or(0.0);
    let tau = tol.rank_threshold(last.left_singular_values.first().copied().unwrap_or(0.0));
    if points.len() >= 2 && prev.left_defect_rank == last.left_defect_rank && tail < tau {
        return DefectClass::FiniteRankStable;
    }
    let grows = last.left_defect_rank > first.left_defect_rank;
    let non_increasing = points.windows(2).all(|w| {
        w[0].left_singular_values
            .iter()
            .zip(&w[1].left_singular_values)
            .all(|(a, b)| *b <= *a + tol.verify_tol)
    });
    let decays = median(&last.left_singular_values) < 0.5 * median(&first.left_singular_values);
    if grows && non_increasing && decays {
        DefectClass::CompactDecaying
    } else {
        DefectClass::NonDecaying
    }
}

/// Profiles `I - V_N* U_N` and `I - V_N U_N*` for truncations of the pair
/// `(f, g)` with analysis operators `U`, `V`.
pub fn essential_duality_diagnostic(
    f_gen: Generator,
    g_gen: Generator,
    schedule: &[usize],
    tol: &Tolerances,
) -> Result<DualityReport> {
    check_schedule(schedule, 2)?;
    let per_size = schedule
        .par_iter()
        .map(|&size| {
            let f = generate(f_gen, size)?;
            let g = generate(g_gen, size)?;
            let left = singular_values(&left_defect(&f, &g));
            let right = singular_values(&right_defect(&f, &g));
            Ok(DualityPoint {
                size,
                left_defect_rank: rank_of_values(&left, tol),
                right_defect_rank: rank_of_values(&right, tol),
                left_profile: SingularProfile::from_values(&left),
                right_profile: SingularProfile::from_values(&right),
                left_singular_values: left,
            })
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let classification = classify_defects(&per_size, tol);
    Ok(DualityReport {
        left: f_gen,
        right: g_gen,
        schedule: schedule.to_vec(),
        per_size,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtendabilityPoint {
    #[serde(rename = "N")]
    pub size: usize,
    pub sigma_min: f64,
    pub deficit: usize,
    pub defect_rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtendabilityVerdict {
    ExtendableTrend,
    NonExtendableTrend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendabilityReport {
    pub generator: Generator,
    pub schedule: Vec<usize>,
    #[serde(rename = "per_N")]
    pub per_size: Vec<ExtendabilityPoint>,
    pub verdict: ExtendabilityVerdict,
}

/// Tracks `sigma_min(U_N)`, the deficit and `rank(I - U_N* U_N)`.
///
/// The verdict is non-extendable-trend when `sigma_min` falls by at least a
/// factor of two from the first to the last size while the deficit stays
/// zero throughout, i.e. the range looks injective but not closed.
pub fn extendability_diagnostic(
    gen: Generator,
    schedule: &[usize],
    tol: &Tolerances,
) -> Result<ExtendabilityReport> {
    check_schedule(schedule, 1)?;
    let per_size = schedule
        .par_iter()
        .map(|&size| {
            let seq = generate(gen, size)?;
            let sv = singular_values(analysis_matrix(&seq).matrix());
            let rank = rank_of_values(&sv, tol);
            Ok(ExtendabilityPoint {
                size,
                sigma_min: sv.last().copied().unwrap_or(0.0),
                deficit: size - rank,
                defect_rank: defect_rank(&seq, tol),
            })
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let first = per_size[0].sigma_min;
    let last = per_size[per_size.len() - 1].sigma_min;
    let injective = per_size.iter().all(|p| p.deficit == 0);
    let verdict = if injective && last <= 0.5 * first {
        ExtendabilityVerdict::NonExtendableTrend
    } else {
        ExtendabilityVerdict::ExtendableTrend
    };
    Ok(ExtendabilityReport {
        generator: gen,
        schedule: schedule.to_vec(),
        per_size,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompletionTrendPoint {
    #[serde(rename = "N")]
    pub size: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionTrend {
    pub generator: Generator,
    pub schedule: Vec<usize>,
    #[serde(rename = "per_N")]
    pub per_size: Vec<CompletionTrendPoint>,
    /// The last two `k_N` agree.
    pub stabilizing: bool,
}

/// Minimal Parseval completion sizes `k_N = rank(I - U_N* U_N)`.
pub fn parseval_completion_trend(
    gen: Generator,
    schedule: &[usize],
    tol: &Tolerances,
) -> Result<CompletionTrend> {
    check_schedule(schedule, 1)?;
    let per_size = schedule
        .par_iter()
        .map(|&size| {
            let seq = generate(gen, size)?;
            let bound = optimal_bounds(&seq).upper;
            if bound > 1.0 + tol.bound_slack {
                return Err(FrameError::TruncationBoundExceedsOne { size, bound });
            }
            Ok(CompletionTrendPoint {
                size,
                k: defect_rank(&seq, tol),
            })
        })
        .collect::<Vec<Result<_>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let stabilizing = per_size.len() >= 2 && {
        let n = per_size.len();
        per_size[n - 1].k == per_size[n - 2].k
    };
    Ok(CompletionTrend {
        generator: gen,
        schedule: schedule.to_vec(),
        per_size,
        stabilizing,
    })
}

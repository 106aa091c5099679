//! Spectral computations on the frame operator `S = U*U`: optimal bounds,
//! numerical ranks, deficit and excess, Hermitian square roots,
//! pseudo-inverses and the canonical dual and Parseval frames.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::model::{analysis_matrix, CMatrix, CVector, FrameBounds, Tolerances, VectorSequence};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
///
/// Each eigenvector has its first coordinate of modulus above the phase
/// threshold rotated onto the positive real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_i g(lambda_i) v_i v_i*`.
    pub fn map<F: Fn(f64) -> f64>(&self, g: F) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let weight = g(lambda);
            if weight != 0.0 {
                out += (v * v.adjoint()) * Complex64::new(weight, 0.0);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|lambda| lambda)
    }
}

/// Sum of outer products `sum_n f_n f_n*`, i.e. `U*U`.
pub fn frame_operator(seq: &VectorSequence) -> CMatrix {
    let synthesis = analysis_matrix(seq).synthesis();
    hermitian_part(&(&synthesis * synthesis.adjoint()))
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Hermitian dilation `[[0, M], [M*, 0]]`, whose eigenvalues are the
/// singular values of `M`, their negatives, and `|rows - cols|` zeros.
fn hermitian_dilation(m: &CMatrix) -> CMatrix {
    let (rows, cols) = m.shape();
    let mut h = CMatrix::zeros(rows + cols, rows + cols);
    h.view_mut((0, rows), (rows, cols)).copy_from(m);
    h.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    h
}

// Eigenpairs of the dilation, eigenvalues descending.
fn dilation_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_dilation(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<CVector>>(),
    );
    (values, vectors)
}

/// Singular values in descending order. Empty for a matrix with a zero
/// dimension.
///
/// Computed from the Hermitian dilation rather than a bidiagonal SVD, which
/// keeps absolute accuracy near `eps * sigma_max` without squaring.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let eigenvalues = hermitian_dilation(m).symmetric_eigenvalues();
    let mut values: Vec<f64> = eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values.truncate(rows.min(cols));
    values.iter_mut().for_each(|s| *s = s.max(0.0));
    values
}

/// Count of singular values above `rank_rtol * sigma_max + rank_atol`.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerances) -> usize {
    rank_of_values(&singular_values(m), tol)
}

pub(crate) fn rank_of_values(sorted_desc: &[f64], tol: &Tolerances) -> usize {
    let Some(&sigma_max) = sorted_desc.first() else {
        return 0;
    };
    let tau = tol.rank_threshold(sigma_max);
    sorted_desc.iter().filter(|&&s| s > tau).count()
}

/// Eigen-decomposition of the Hermitian part of a square matrix.
pub fn hermitian_spectrum(m: &CMatrix, tol: &Tolerances) -> Result<HermitianSpectrum> {
    if m.nrows() != m.ncols() {
        return Err(FrameError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let d = m.nrows();
    if d == 0 {
        return Ok(HermitianSpectrum {
            eigenvalues: Vec::new(),
            eigenvectors: Vec::new(),
        });
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let phase_tau = tol.rank_threshold(1.0);
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let mut v: CVector = eig.eigenvectors.column(i).into_owned();
            let norm = v.norm();
            if norm > 0.0 {
                v /= Complex64::new(norm, 0.0);
            }
            normalize_phase(&mut v, phase_tau);
            v
        })
        .collect();
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn normalize_phase(v: &mut CVector, tau: f64) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > tau) {
        let rotation = z.conj() / z.norm();
        *v *= rotation;
    }
}

/// Optimal frame bounds from the singular values of the analysis matrix:
/// `B = sigma_max^2`, `A = sigma_min^2` over the whole ambient space
/// (zero when there are fewer vectors than dimensions).
pub fn optimal_bounds(seq: &VectorSequence) -> FrameBounds {
    let sv = singular_values(analysis_matrix(seq).matrix());
    let upper = sv.first().map_or(0.0, |s| s * s);
    let lower = if sv.len() < seq.dim() {
        0.0
    } else {
        sv.last().map_or(0.0, |s| s * s)
    };
    FrameBounds { lower, upper }
}

/// Summary of the spectral quantities of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceDiagnostics {
    pub dim: usize,
    pub len: usize,
    pub bounds: FrameBounds,
    pub rank: usize,
    pub deficit: usize,
    pub excess: usize,
    pub is_frame: bool,
    pub is_parseval: bool,
    pub parseval_residual: f64,
    /// Set for non-frames: `len - rank` is then only a lower bound on the
    /// number of removable vectors in an infinite model.
    pub excess_is_lower_bound: bool,
    /// A retained singular value lies within `10 tau` of the threshold.
    pub rank_near_threshold: bool,
}

pub fn diagnostics(seq: &VectorSequence, tol: &Tolerances) -> SequenceDiagnostics {
    let sv = singular_values(analysis_matrix(seq).matrix());
    let rank = rank_of_values(&sv, tol);
    let d = seq.dim();
    let n = seq.len();
    let is_frame = rank == d;
    let upper = sv.first().map_or(0.0, |s| s * s);
    let lower = if is_frame { sv[d - 1] * sv[d - 1] } else { 0.0 };
    let rank_near_threshold = sv.first().is_some_and(|&smax| {
        let tau = tol.rank_threshold(smax);
        sv.iter().any(|&s| s > tau && s <= 10.0 * tau)
    });
    let parseval_residual = parseval_residual(seq);
    SequenceDiagnostics {
        dim: d,
        len: n,
        bounds: FrameBounds { lower, upper },
        rank,
        deficit: d - rank,
        excess: n - rank,
        is_frame,
        is_parseval: parseval_residual <= tol.verify_tol * (d as f64).sqrt(),
        parseval_residual,
        excess_is_lower_bound: !is_frame,
        rank_near_threshold,
    }
}

/// `||U*U - I||_F`.
pub fn parseval_residual(seq: &VectorSequence) -> f64 {
    let d = seq.dim();
    (frame_operator(seq) - CMatrix::identity(d, d)).norm()
}

/// Numerical rank of the analysis matrix.
pub fn sequence_rank(seq: &VectorSequence, tol: &Tolerances) -> usize {
    numerical_rank(analysis_matrix(seq).matrix(), tol)
}

/// Unique positive semidefinite square root. Eigenvalues in
/// `[-verify_tol, 0)` are clipped to zero.
pub fn hermitian_sqrt(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let spectrum = hermitian_spectrum(m, tol)?;
    if let Some(&min) = spectrum.eigenvalues.last() {
        if min < -tol.verify_tol {
            return Err(FrameError::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
    }
    Ok(spectrum.map(|lambda| lambda.max(0.0).sqrt()))
}

pub(crate) fn require_frame(seq: &VectorSequence, tol: &Tolerances) -> Result<HermitianSpectrum> {
    let rank = sequence_rank(seq, tol);
    if rank < seq.dim() {
        return Err(FrameError::FrameRequired {
            deficit: seq.dim() - rank,
        });
    }
    let spectrum = hermitian_spectrum(&frame_operator(seq), tol)?;
    let tau = tol.rank_threshold(spectrum.eigenvalues[0]);
    let below = spectrum.eigenvalues.iter().filter(|&&l| l <= tau).count();
    if below > 0 {
        return Err(FrameError::FrameRequired { deficit: below });
    }
    Ok(spectrum)
}

fn apply_to_all(seq: &VectorSequence, op: &CMatrix) -> VectorSequence {
    let vectors = seq.iter().map(|f| op * f).collect();
    VectorSequence::new(seq.dim(), vectors).expect("linear image keeps dimension")
}

/// `S^{-1}` of a frame.
pub fn inverse_frame_operator(seq: &VectorSequence, tol: &Tolerances) -> Result<CMatrix> {
    Ok(require_frame(seq, tol)?.map(|lambda| 1.0 / lambda))
}

/// `S^{-1/2}` of a frame.
pub fn inverse_sqrt_frame_operator(seq: &VectorSequence, tol: &Tolerances) -> Result<CMatrix> {
    Ok(require_frame(seq, tol)?.map(|lambda| 1.0 / lambda.sqrt()))
}

/// Canonical dual `S^{-1} f_n`.
pub fn canonical_dual(seq: &VectorSequence, tol: &Tolerances) -> Result<VectorSequence> {
    Ok(apply_to_all(seq, &inverse_frame_operator(seq, tol)?))
}

/// Canonical Parseval frame `S^{-1/2} f_n`.
pub fn parseval_canonical(seq: &VectorSequence, tol: &Tolerances) -> Result<VectorSequence> {
    Ok(apply_to_all(seq, &inverse_sqrt_frame_operator(seq, tol)?))
}

/// Moore-Penrose pseudo-inverse with singular values at or below the rank
/// threshold treated as zero.
pub fn pseudo_inverse(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(cols, rows);
    }
    // An eigenvector of the dilation for sigma > 0 is (u, v) / sqrt(2) with
    // M v = sigma u, so each contributes 2 b a* / sigma.
    let (values, vectors) = dilation_eigen(m);
    let tau = tol.rank_threshold(values[0].max(0.0));
    let mut pinv = CMatrix::zeros(cols, rows);
    for (j, &sigma) in values.iter().enumerate() {
        if sigma <= tau {
            break;
        }
        let w = vectors.column(j);
        let a = w.rows(0, rows);
        let b = w.rows(rows, cols);
        pinv += (b * a.adjoint()) * Complex64::new(2.0 / sigma, 0.0);
    }
    pinv
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(dim: usize, vs: &[Vec<f64>]) -> VectorSequence {
        VectorSequence::from_real(dim, vs).unwrap()
    }

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    fn close(a: &CMatrix, b: &CMatrix, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    fn onb(d: usize) -> VectorSequence {
        let vs: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        real(d, &vs)
    }

    fn repeated() -> VectorSequence {
        real(2, &[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
    }

    // Sum of outer products written out entry by entry.
    fn gram_accumulation(seq: &VectorSequence) -> CMatrix {
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

    #[test]
    fn frame_operator_examples() {
        let seq = real(2, &[vec![1.0, 0.0], vec![0.0, FRAC_1_SQRT_2]]);
        let s = frame_operator(&seq);
        assert!(close(&s, &gram_accumulation(&seq), 1e-15));
        assert!(close(&s, &diag(&[1.0, 0.5]), 1e-15));

        assert!(close(
            &frame_operator(&repeated()),
            &diag(&[2.0, 1.0]),
            1e-15
        ));

        let empty = VectorSequence::empty(3).unwrap();
        assert_eq!(frame_operator(&empty), CMatrix::zeros(3, 3));
    }

    #[test]
    fn optimal_bounds_examples() {
        let b = optimal_bounds(&real(2, &[vec![1.0, 0.0], vec![0.0, FRAC_1_SQRT_2]]));
        assert!((b.lower - 0.5).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);

        let b = optimal_bounds(&onb(4));
        assert!((b.lower - 1.0).abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);

        let b = optimal_bounds(&repeated());
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 2.0).abs() < 1e-14);

        let b = optimal_bounds(&VectorSequence::empty(2).unwrap());
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn numerical_rank_examples() {
        assert_eq!(numerical_rank(&CMatrix::identity(3, 3), &tol()), 3);
        assert_eq!(numerical_rank(&diag(&[1.0, 1e-15, 0.0]), &tol()), 1);
        assert_eq!(
            numerical_rank(&diag(&[0.5, 1.0 / 3.0, 0.25, 0.2]), &tol()),
            4
        );
        assert_eq!(numerical_rank(&CMatrix::zeros(0, 4), &tol()), 0);
        assert_eq!(numerical_rank(&CMatrix::zeros(3, 3), &tol()), 0);
    }

    #[test]
    fn diagnostics_examples() {
        let diag = diagnostics(&repeated(), &tol());
        assert_eq!((diag.rank, diag.deficit, diag.excess), (2, 0, 1));
        assert!(diag.is_frame && !diag.is_parseval);
        assert!(!diag.excess_is_lower_bound);

        let diag = diagnostics(&real(2, &[vec![0.5, 0.0]]), &tol());
        assert_eq!((diag.rank, diag.deficit, diag.excess), (1, 1, 0));
        assert!(!diag.is_frame);
        assert_eq!(diag.bounds.lower, 0.0);
        assert!(diag.excess_is_lower_bound);

        let diag = diagnostics(&onb(3), &tol());
        assert_eq!((diag.deficit, diag.excess), (0, 0));
        assert!(diag.is_parseval);
        assert_eq!(diag.parseval_residual, 0.0);

        let diag = diagnostics(&VectorSequence::empty(3).unwrap(), &tol());
        assert_eq!((diag.rank, diag.deficit, diag.excess), (0, 3, 0));
        assert_eq!((diag.bounds.lower, diag.bounds.upper), (0.0, 0.0));
    }

    #[test]
    fn near_threshold_flag() {
        let seq = real(2, &[vec![1.0, 0.0], vec![0.0, 5e-10]]);
        let diag = diagnostics(&seq, &tol());
        assert_eq!(diag.rank, 2);
        assert!(diag.rank_near_threshold);
        assert!(!diagnostics(&onb(2), &tol()).rank_near_threshold);
    }

    #[test]
    fn hermitian_sqrt_examples() {
        let r = hermitian_sqrt(&diag(&[0.0, 0.5]), &tol()).unwrap();
        assert!(close(&r, &diag(&[0.0, FRAC_1_SQRT_2]), 1e-15));

        let r = hermitian_sqrt(&CMatrix::identity(3, 3), &tol()).unwrap();
        assert!(close(&r, &CMatrix::identity(3, 3), 1e-15));

        let err = hermitian_sqrt(&diag(&[-1.0, 1.0]), &tol()).unwrap_err();
        assert!(matches!(err, FrameError::NotPositiveSemidefinite { .. }));

        let r = hermitian_sqrt(&diag(&[-1e-12, 4.0]), &tol()).unwrap();
        assert!(close(&r, &diag(&[0.0, 2.0]), 1e-14));

        assert!(matches!(
            hermitian_sqrt(&CMatrix::zeros(2, 3), &tol()),
            Err(FrameError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn hermitian_sqrt_of_complex_matrix() {
        let b = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.5),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.2, -1.0),
                Complex64::new(0.7, 0.1),
            ],
        );
        let m = &b * b.adjoint();
        let r = hermitian_sqrt(&m, &tol()).unwrap();
        assert!(close(&(&r * &r), &m, 1e-13));
        assert!(close(&r, &r.adjoint(), 1e-14));
    }

    #[test]
    fn spectrum_is_sorted_and_phase_normalized() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        let spec = hermitian_spectrum(&m, &tol()).unwrap();
        assert!((spec.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
        for v in &spec.eigenvectors {
            assert!(v[0].im.abs() < 1e-15 && v[0].re > 0.0);
        }
        assert!(close(&spec.reconstruct(), &m, 1e-14));
    }

    #[test]
    fn canonical_dual_examples() {
        let seq = real(2, &[vec![1.0, 0.0], vec![0.0, FRAC_1_SQRT_2]]);
        let dual = canonical_dual(&seq, &tol()).unwrap();
        let want = real(2, &[vec![1.0, 0.0], vec![0.0, SQRT_2]]);
        for (a, b) in dual.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-14);
        }

        let parseval = real(
            2,
            &[
                vec![1.0, 0.0],
                vec![0.0, FRAC_1_SQRT_2],
                vec![0.0, FRAC_1_SQRT_2],
            ],
        );
        let dual = canonical_dual(&parseval, &tol()).unwrap();
        for (a, b) in dual.iter().zip(parseval.iter()) {
            assert!((a - b).norm() < 1e-14);
        }

        let err = canonical_dual(&real(2, &[vec![0.5, 0.0]]), &tol()).unwrap_err();
        assert_eq!(err, FrameError::FrameRequired { deficit: 1 });
    }

    #[test]
    fn parseval_canonical_examples() {
        let out = parseval_canonical(&repeated(), &tol()).unwrap();
        let want = real(
            2,
            &[
                vec![FRAC_1_SQRT_2, 0.0],
                vec![FRAC_1_SQRT_2, 0.0],
                vec![0.0, 1.0],
            ],
        );
        for (a, b) in out.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-14);
        }

        let out = parseval_canonical(&onb(3), &tol()).unwrap();
        assert_eq!(out.len(), 3);
        assert!(parseval_residual(&out) < 1e-14);

        let out = parseval_canonical(
            &real(2, &[vec![1.0, 0.0], vec![0.0, FRAC_1_SQRT_2]]),
            &tol(),
        )
        .unwrap();
        let want = onb(2);
        for (a, b) in out.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-14);
        }

        assert!(matches!(
            parseval_canonical(&VectorSequence::empty(2).unwrap(), &tol()),
            Err(FrameError::FrameRequired { deficit: 2 })
        ));
    }

    #[test]
    fn pseudo_inverse_examples() {
        let id = CMatrix::identity(3, 3);
        assert!(close(&pseudo_inverse(&id, &tol()), &id, 1e-15));

        let row =
            CMatrix::from_row_slice(1, 2, &[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]);
        let pinv = pseudo_inverse(&row, &tol());
        assert_eq!(pinv.shape(), (2, 1));
        assert!((pinv[(0, 0)] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(pinv[(1, 0)].norm() < 1e-15);

        let zero = CMatrix::zeros(2, 3);
        assert_eq!(pseudo_inverse(&zero, &tol()), CMatrix::zeros(3, 2));
        assert_eq!(
            pseudo_inverse(&CMatrix::zeros(0, 2), &tol()).shape(),
            (2, 0)
        );
    }

    #[test]
    fn pseudo_inverse_complements_kernel_projection() {
        // U has kernel span{e_3}; U^+ U must be I - P_ker.
        let seq = VectorSequence::from_complex(
            3,
            &[
                vec![
                    Complex64::new(1.0, 1.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
                vec![
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.0, -2.0),
                    Complex64::new(0.0, 0.0),
                ],
            ],
        )
        .unwrap();
        let u = analysis_matrix(&seq);
        let p = pseudo_inverse(u.matrix(), &tol()) * u.matrix();
        assert!(close(&p, &diag(&[1.0, 1.0, 0.0]), 1e-13));
    }
}

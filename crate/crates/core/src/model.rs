//! Data model: finite vector sequences in a complex inner-product space of
//! dimension `d`, together with the numerical tolerances shared by every
//! computation in the crate.
//!
//! The inner product is linear in the first argument,
//! `<x, f> = sum_j x_j * conj(f_j)`, so that the analysis operator of a
//! sequence `(f_i)` maps `x` to the coefficients `(<x, f_i>)_i`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// `<x, f>`, linear in `x`.
pub fn inner(x: &CVector, f: &CVector) -> Complex64 {
    f.dotc(x)
}

/// Numerical thresholds consumed by rank decisions and verification checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular value threshold for rank decisions.
    pub rank_rtol: f64,
    /// Absolute singular value threshold for rank decisions.
    pub rank_atol: f64,
    /// Residual threshold for operator equality checks.
    pub verify_tol: f64,
    /// Slack allowed on `B <= 1` preconditions.
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            rank_atol: 1e-12,
            verify_tol: 1e-8,
            bound_slack: 1e-10,
        }
    }
}

impl Tolerances {
    pub const MAX: f64 = 1e-2;

    pub fn new(rank_rtol: f64, rank_atol: f64, verify_tol: f64, bound_slack: f64) -> Result<Self> {
        let tol = Self {
            rank_rtol,
            rank_atol,
            verify_tol,
            bound_slack,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_rtol", self.rank_rtol),
            ("rank_atol", self.rank_atol),
            ("verify_tol", self.verify_tol),
            ("bound_slack", self.bound_slack),
        ] {
            if !(value > 0.0 && value <= Self::MAX) {
                return Err(FrameError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    /// Rank threshold `rank_rtol * scale + rank_atol` for a matrix whose
    /// largest singular value is `scale`.
    pub fn rank_threshold(&self, scale: f64) -> f64 {
        self.rank_rtol * scale + self.rank_atol
    }
}

/// An ordered finite list of vectors in `C^dim`.
///
/// Every finite sequence is Bessel, so no further precondition applies.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSequence {
    dim: usize,
    vectors: Vec<CVector>,
}

impl VectorSequence {
    pub fn new(dim: usize, vectors: Vec<CVector>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::ZeroDimension);
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(FrameError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(FrameError::NonFinite { index });
            }
        }
        Ok(Self { dim, vectors })
    }

    /// Builds a sequence from coordinate slices.
    pub fn from_complex(dim: usize, vectors: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(
            dim,
            vectors
                .iter()
                .map(|v| CVector::from_column_slice(v))
                .collect(),
        )
    }

    /// Embeds real vectors with zero imaginary parts.
    pub fn from_real(dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            dim,
            vectors
                .iter()
                .map(|v| CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(x, 0.0))))
                .collect(),
        )
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// Rows of a synthesis-shaped matrix are not used; column `i` of
    /// `synthesis` becomes vector `i`.
    pub(crate) fn from_columns(synthesis: &CMatrix) -> Self {
        Self {
            dim: synthesis.nrows(),
            vectors: synthesis.column_iter().map(|c| c.into_owned()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn get(&self, index: usize) -> Option<&CVector> {
        self.vectors.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CVector> {
        self.vectors.iter()
    }

    pub fn into_vectors(self) -> Vec<CVector> {
        self.vectors
    }

    /// Squared norms `||f_i||^2`.
    pub fn squared_norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| v.norm_squared()).collect()
    }

    /// Every vector multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(|v| v * Complex64::new(factor, 0.0))
                .collect(),
        }
    }

    /// The sequence `added ++ self`.
    pub fn prepend(&self, added: &[CVector]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(added.len() + self.len());
        vectors.extend(added.iter().cloned());
        vectors.extend(self.vectors.iter().cloned());
        Self::new(self.dim, vectors)
    }

    /// The subsequence with the given positions removed.
    pub fn without(&self, removed: &[usize]) -> Self {
        Self {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .enumerate()
                .filter(|(i, _)| !removed.contains(i))
                .map(|(_, v)| v.clone())
                .collect(),
        }
    }

    /// Drops the first `count` vectors.
    pub fn skip(&self, count: usize) -> Self {
        Self {
            dim: self.dim,
            vectors: self.vectors.iter().skip(count).cloned().collect(),
        }
    }
}

/// Matrix of the analysis operator `U`: row `i` is the conjugate of `f_i`,
/// so `(Ux)_i = <x, f_i>`. Its adjoint is the synthesis operator.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisMatrix(CMatrix);

impl AnalysisMatrix {
    pub fn new(seq: &VectorSequence) -> Self {
        let n = seq.len();
        let d = seq.dim();
        Self(CMatrix::from_fn(n, d, |i, j| seq.vectors[i][j].conj()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Number of sequence elements (rows).
    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.0.ncols()
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        &self.0 * x
    }

    /// `U*`, whose `i`-th column is `f_i`.
    pub fn synthesis(&self) -> CMatrix {
        self.0.adjoint()
    }

    /// Recovers the sequence as `U* e_i`.
    pub fn to_sequence(&self) -> VectorSequence {
        VectorSequence::from_columns(&self.synthesis())
    }
}

/// Analysis matrix of a sequence.
pub fn analysis_matrix(seq: &VectorSequence) -> AnalysisMatrix {
    AnalysisMatrix::new(seq)
}

/// Optimal frame bounds `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Orthonormal basis of a subspace of `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    dim: usize,
    basis: Vec<CVector>,
}

impl SubspaceBasis {
    /// Wraps vectors that the caller guarantees to be orthonormal.
    pub(crate) fn from_orthonormal(dim: usize, basis: Vec<CVector>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == dim));
        Self { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the subspace.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn codimension(&self) -> usize {
        self.dim - self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    /// `max |G - I|` over the Gram matrix of the basis.
    pub fn gram_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(u, v) - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, x: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for w in &self.basis {
            out += w * inner(x, w);
        }
        out
    }

    /// Distance from `x` to the subspace.
    pub fn distance(&self, x: &CVector) -> f64 {
        (x - self.project(x)).norm()
    }

    /// Projection matrix `sum_j w_j w_j*`.
    pub fn projector(&self) -> CMatrix {
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for w in &self.basis {
            p += w * w.adjoint();
        }
        p
    }
}

/// Vectors prepended to a sequence.
///
/// The extended sequence is always `added ++ original`: the `j`-th added
/// vector occupies slot `j` and the original element `i` moves to slot
/// `k + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extension {
    pub added: Vec<CVector>,
    /// Minimal number of vectors the construction requires.
    pub k_minimal: usize,
}

impl Extension {
    pub const PLACEMENT: &'static str = "prepended";

    pub fn new(added: Vec<CVector>, k_minimal: usize) -> Self {
        Self { added, k_minimal }
    }

    pub fn len(&self) -> usize {
        self.added.len()
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty()
    }

    pub fn placement(&self) -> &'static str {
        Self::PLACEMENT
    }

    /// `sum ||x_j||^2`.
    pub fn energy(&self) -> f64 {
        self.added.iter().map(|v| v.norm_squared()).sum()
    }

    /// The extended sequence.
    pub fn apply(&self, seq: &VectorSequence) -> Result<VectorSequence> {
        seq.prepend(&self.added)
    }

    /// The added vectors as a sequence in the ambient dimension.
    pub fn as_sequence(&self, dim: usize) -> Result<VectorSequence> {
        VectorSequence::new(dim, self.added.clone())
    }
}

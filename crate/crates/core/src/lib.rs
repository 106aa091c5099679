//! Finite-dimensional frame theory.
//!
//! Sequences of vectors in `C^d`, their analysis and frame operators, and
//! the constructive extensions of Bessel sequences: minimal extension to a
//! frame, minimal Parseval and tight completions, Parseval perturbations,
//! excess computations and the energy identity for Parseval completions.
//! The [`lab`] module studies infinite model sequences through growing
//! finite truncations.

pub mod error;
pub mod excess;
pub mod extension;
pub mod io;
pub mod lab;
pub mod model;
pub mod report;
pub mod spectral;

pub use error::{FrameError, Result};
pub use excess::{
    defect_series, energy_identity, excess_via_canonical, riesz_extraction, DefectSeriesReport,
    EnergyReport, RieszExtraction, SeriesVerdict,
};
pub use extension::{
    completion_plan, defect_rank, minimal_frame_extension, minimality_certificate,
    outer_reconstruction_subspace, parseval_completion, parseval_perturbation, tight_completion,
    verify_parseval, CompletionPlan, ParsevalCheck, PerturbationResult,
};
pub use lab::{
    essential_duality_diagnostic, extendability_diagnostic, generate, parseval_completion_trend,
    CompletionTrend, DefectClass, DualityReport, ExtendabilityReport, ExtendabilityVerdict,
    Generator,
};
pub use model::{
    analysis_matrix, inner, AnalysisMatrix, CMatrix, CVector, Extension, FrameBounds,
    SubspaceBasis, Tolerances, VectorSequence,
};
pub use spectral::{
    canonical_dual, diagnostics, frame_operator, hermitian_spectrum, hermitian_sqrt,
    numerical_rank, optimal_bounds, parseval_canonical, pseudo_inverse, singular_values,
    HermitianSpectrum, SequenceDiagnostics,
};

pub use num_complex::Complex64;

//! Run reports emitted by the command-line front end.

use serde::Serialize;

use crate::error::FrameError;
use crate::excess::RieszExtraction;
use crate::extension::{ParsevalCheck, PerturbationResult};
use crate::io::{vector_pairs, SequenceFile, SubspaceFile};
use crate::model::{Extension, Tolerances};

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "i32")]
pub enum ExitStatus {
    Ok = 0,
    PreconditionViolated = 2,
    MalformedInput = 3,
}

impl From<ExitStatus> for i32 {
    fn from(s: ExitStatus) -> i32 {
        s as i32
    }
}

impl From<&FrameError> for ExitStatus {
    fn from(e: &FrameError) -> Self {
        if e.is_input_error() {
            ExitStatus::MalformedInput
        } else {
            ExitStatus::PreconditionViolated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport<P: Serialize> {
    pub command: String,
    pub inputs: Vec<String>,
    pub tolerances: Tolerances,
    pub exit_code: ExitStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<P>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl<P: Serialize> RunReport<P> {
    pub fn ok(command: &str, inputs: Vec<String>, tolerances: Tolerances, payload: P) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            tolerances,
            exit_code: ExitStatus::Ok,
            payload: Some(payload),
            error: None,
        }
    }

    pub fn failed(
        command: &str,
        inputs: Vec<String>,
        tolerances: Tolerances,
        status: ExitStatus,
        error: String,
    ) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            tolerances,
            exit_code: status,
            payload: None,
            error: Some(error),
        }
    }
}

/// Summary of a completion or extension run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionSummary {
    pub mode: String,
    pub k: usize,
    pub added: usize,
    pub added_energy: f64,
    pub verification: ParsevalCheckOrTight,
    pub extension: SequenceFile,
}

/// Residual of the extended sequence against its target frame operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalCheckOrTight {
    /// `c` in the target `c I`; `null` for plain frame extensions.
    pub target_scale: Option<f64>,
    pub residual: f64,
    pub passed: bool,
}

impl From<ParsevalCheck> for ParsevalCheckOrTight {
    fn from(c: ParsevalCheck) -> Self {
        Self {
            target_scale: Some(1.0),
            residual: c.residual,
            passed: c.is_parseval,
        }
    }
}

impl ExtensionSummary {
    pub fn new(
        mode: &str,
        ext: &Extension,
        dim: usize,
        verification: ParsevalCheckOrTight,
    ) -> Self {
        Self {
            mode: mode.to_string(),
            k: ext.k_minimal,
            added: ext.len(),
            added_energy: ext.energy(),
            verification,
            extension: SequenceFile::from_extension(ext, dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationSummary {
    pub perturbations: Vec<Vec<[f64; 2]>>,
    pub subspace: SubspaceFile,
    pub perturbed_residual: f64,
    pub max_distance_to_subspace: f64,
}

impl PerturbationSummary {
    pub fn new(result: &PerturbationResult, perturbed_residual: f64) -> Self {
        let max_distance_to_subspace = result
            .perturbations
            .iter()
            .map(|g| result.subspace.distance(g))
            .fold(0.0, f64::max);
        Self {
            perturbations: result.perturbations.iter().map(vector_pairs).collect(),
            subspace: SubspaceFile::from(&result.subspace),
            perturbed_residual,
            max_distance_to_subspace,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcessSummary {
    pub excess: usize,
    pub excess_via_canonical: f64,
    pub removed_indices: Vec<usize>,
    pub remaining: usize,
}

impl ExcessSummary {
    pub fn new(excess: usize, via_canonical: f64, extraction: &RieszExtraction) -> Self {
        Self {
            excess,
            excess_via_canonical: via_canonical,
            removed_indices: extraction.removed_indices.clone(),
            remaining: extraction.remaining.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::to_json;

    #[test]
    fn exit_status_mapping() {
        assert_eq!(
            ExitStatus::from(&FrameError::Parse("x".into())),
            ExitStatus::MalformedInput
        );
        assert_eq!(
            ExitStatus::from(&FrameError::UnknownGenerator("x".into())),
            ExitStatus::MalformedInput
        );
        assert_eq!(
            ExitStatus::from(&FrameError::UpperBoundExceedsOne { bound: 2.0 }),
            ExitStatus::PreconditionViolated
        );
        assert_eq!(
            ExitStatus::from(&FrameError::FrameRequired { deficit: 1 }),
            ExitStatus::PreconditionViolated
        );
    }

    #[test]
    fn failed_report_omits_payload() {
        let report: RunReport<()> = RunReport::failed(
            "analyze",
            vec!["in.json".into()],
            Tolerances::default(),
            ExitStatus::MalformedInput,
            "bad".into(),
        );
        let text = to_json(&report);
        assert!(text.contains("\"exit_code\": 3"));
        assert!(!text.contains("payload"));
        assert!(text.contains("\"error\": \"bad\""));
    }
}

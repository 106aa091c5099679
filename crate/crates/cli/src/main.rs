use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use framekit::io::{read_sequence, to_json, SequenceFile};
use framekit::lab::DEFAULT_SCHEDULE;
use framekit::report::{
    ExcessSummary, ExitStatus, ExtensionSummary, ParsevalCheckOrTight, PerturbationSummary,
    RunReport,
};
use framekit::{
    canonical_dual, defect_series, diagnostics, energy_identity, essential_duality_diagnostic,
    excess_via_canonical, extendability_diagnostic, frame_operator, minimal_frame_extension,
    optimal_bounds, parseval_completion, parseval_completion_trend, parseval_perturbation,
    riesz_extraction, tight_completion, verify_parseval, CMatrix, CompletionTrend, Complex64,
    DefectSeriesReport, DualityReport, EnergyReport, ExtendabilityReport, Extension, FrameError,
    Generator, SequenceDiagnostics, Tolerances, VectorSequence,
};

#[derive(Parser)]
#[command(
    name = "framekit",
    version,
    about = "Frame extensions, Parseval completions and truncation diagnostics"
)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Relative singular value threshold for rank decisions.
    #[arg(long, global = true, default_value = "1e-10")]
    tol_rel: f64,
    /// Absolute singular value threshold for rank decisions.
    #[arg(long, global = true, default_value = "1e-12")]
    tol_abs: f64,
    /// Residual threshold for operator equality checks.
    #[arg(long, global = true, default_value = "1e-8")]
    verify_tol: f64,
    /// Slack on `B <= 1` preconditions.
    #[arg(long, global = true, default_value = "1e-10")]
    bound_slack: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds, rank, deficit, excess and the Parseval check.
    Analyze { path: PathBuf },
    /// Complete a sequence to a Parseval frame, a tight frame or a frame.
    Complete {
        mode: CompleteMode,
        path: PathBuf,
        /// Number of vectors to add in parseval mode (at least the minimum).
        #[arg(long)]
        slots: Option<usize>,
        /// Write the extension file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a Bessel sequence to a frame with the same upper bound.
    Extend {
        kind: ExtendKind,
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical dual frame.
    Dual {
        kind: DualKind,
        path: PathBuf,
        /// Write the dual sequence here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Excess, its canonical-Parseval formula and a Riesz basis extraction.
    Excess { path: PathBuf },
    /// Finite-rank perturbation to a Parseval frame.
    Perturb { path: PathBuf },
    /// Energy of the minimal Parseval completion against the defect sum.
    EnergyIdentity { path: PathBuf },
    /// Partial sums of `B - ||f_n||^2` over prefix lengths.
    DefectSeries {
        path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        prefixes: Vec<usize>,
    },
    /// Truncation diagnostics for the model sequences.
    #[command(subcommand)]
    Lab(LabCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum CompleteMode {
    Parseval,
    Tight,
    Frame,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtendKind {
    Frame,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualKind {
    Canonical,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Ranks and singular profiles of `I - V*U` and `I - VU*`.
    Duality {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Smallest singular value and deficit trends.
    Extendability {
        #[arg(long)]
        gen: String,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Minimal Parseval completion sizes per truncation.
    CompletionTrend {
        #[arg(long)]
        gen: String,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
}

#[derive(Serialize)]
#[serde(untagged)]
enum Payload {
    Diagnostics(SequenceDiagnostics),
    Extension(ExtensionSummary),
    Dual(SequenceFile),
    Excess(ExcessSummary),
    Perturbation(PerturbationSummary),
    Energy(EnergyReport),
    DefectSeries(DefectSeriesReport),
    Duality(DualityReport),
    Extendability(ExtendabilityReport),
    CompletionTrend(CompletionTrend),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() {
                ExitStatus::MalformedInput
            } else {
                ExitStatus::Ok
            };
            let _ = e.print();
            return ExitCode::from(i32::from(status) as u8);
        }
    };
    let tol = Tolerances {
        rank_rtol: cli.tol.tol_rel,
        rank_atol: cli.tol.tol_abs,
        verify_tol: cli.tol.verify_tol,
        bound_slack: cli.tol.bound_slack,
    };
    let (name, inputs) = describe(&cli.command);
    let outcome = tol.validate().and_then(|()| run(&cli.command, &tol));
    let report = match outcome {
        Ok(payload) => RunReport::ok(name, inputs, tol, payload),
        Err(e) => {
            eprintln!("framekit {name}: {e}");
            RunReport::failed(name, inputs, tol, ExitStatus::from(&e), e.to_string())
        }
    };
    print!("{}", to_json(&report));
    ExitCode::from(i32::from(report.exit_code) as u8)
}

fn describe(command: &Command) -> (&'static str, Vec<String>) {
    let path = |p: &Path| vec![p.display().to_string()];
    let dims_spec = |dims: &Option<Vec<usize>>| {
        let dims = dims.as_deref().unwrap_or(&DEFAULT_SCHEDULE);
        format!(
            "dims={}",
            dims.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    };
    match command {
        Command::Analyze { path: p } => ("analyze", path(p)),
        Command::Complete { mode, path: p, .. } => (
            match mode {
                CompleteMode::Parseval => "complete parseval",
                CompleteMode::Tight => "complete tight",
                CompleteMode::Frame => "complete frame",
            },
            path(p),
        ),
        Command::Extend { path: p, .. } => ("extend frame", path(p)),
        Command::Dual { path: p, .. } => ("dual canonical", path(p)),
        Command::Excess { path: p } => ("excess", path(p)),
        Command::Perturb { path: p } => ("perturb", path(p)),
        Command::EnergyIdentity { path: p } => ("energy-identity", path(p)),
        Command::DefectSeries { path: p, .. } => ("defect-series", path(p)),
        Command::Lab(LabCommand::Duality { left, right, dims }) => (
            "lab duality",
            vec![
                format!("left={left}"),
                format!("right={right}"),
                dims_spec(dims),
            ],
        ),
        Command::Lab(LabCommand::Extendability { gen, dims }) => (
            "lab extendability",
            vec![format!("gen={gen}"), dims_spec(dims)],
        ),
        Command::Lab(LabCommand::CompletionTrend { gen, dims }) => (
            "lab completion-trend",
            vec![format!("gen={gen}"), dims_spec(dims)],
        ),
    }
}

fn run(command: &Command, tol: &Tolerances) -> Result<Payload, FrameError> {
    match command {
        Command::Analyze { path } => Ok(Payload::Diagnostics(diagnostics(
            &read_sequence(path)?,
            tol,
        ))),
        Command::Complete {
            mode,
            path,
            slots,
            out,
        } => {
            let seq = read_sequence(path)?;
            let summary = match mode {
                CompleteMode::Parseval => {
                    let ext = parseval_completion(&seq, *slots, tol)?;
                    let check = verify_parseval(&ext.apply(&seq)?, tol);
                    ExtensionSummary::new("parseval", &ext, seq.dim(), check.into())
                }
                CompleteMode::Tight | CompleteMode::Frame if slots.is_some() => {
                    return Err(FrameError::Parse(
                        "--slots applies to parseval mode only".into(),
                    ))
                }
                CompleteMode::Tight => tight_summary(&seq, tol)?,
                CompleteMode::Frame => frame_summary(&seq, tol)?,
            };
            if let Some(out) = out {
                write_file(out, &summary.extension)?;
            }
            Ok(Payload::Extension(summary))
        }
        Command::Extend {
            kind: ExtendKind::Frame,
            path,
            out,
        } => {
            let summary = frame_summary(&read_sequence(path)?, tol)?;
            if let Some(out) = out {
                write_file(out, &summary.extension)?;
            }
            Ok(Payload::Extension(summary))
        }
        Command::Dual {
            kind: DualKind::Canonical,
            path,
            out,
        } => {
            let dual = SequenceFile::from_sequence(&canonical_dual(&read_sequence(path)?, tol)?);
            if let Some(out) = out {
                write_file(out, &dual)?;
            }
            Ok(Payload::Dual(dual))
        }
        Command::Excess { path } => {
            let seq = read_sequence(path)?;
            let extraction = riesz_extraction(&seq, tol)?;
            let via_canonical = excess_via_canonical(&seq, tol)?;
            let excess = diagnostics(&seq, tol).excess;
            Ok(Payload::Excess(ExcessSummary::new(
                excess,
                via_canonical,
                &extraction,
            )))
        }
        Command::Perturb { path } => {
            let seq = read_sequence(path)?;
            let result = parseval_perturbation(&seq, tol)?;
            let perturbed = VectorSequence::new(
                seq.dim(),
                seq.iter()
                    .zip(&result.perturbations)
                    .map(|(f, g)| f + g)
                    .collect(),
            )?;
            let residual = verify_parseval(&perturbed, tol).residual;
            Ok(Payload::Perturbation(PerturbationSummary::new(
                &result, residual,
            )))
        }
        Command::EnergyIdentity { path } => Ok(Payload::Energy(energy_identity(
            &read_sequence(path)?,
            tol,
        )?)),
        Command::DefectSeries { path, prefixes } => Ok(Payload::DefectSeries(defect_series(
            &read_sequence(path)?,
            prefixes,
            tol,
        )?)),
        Command::Lab(lab) => run_lab(lab, tol),
    }
}

fn run_lab(command: &LabCommand, tol: &Tolerances) -> Result<Payload, FrameError> {
    let schedule =
        |dims: &Option<Vec<usize>>| dims.clone().unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec());
    match command {
        LabCommand::Duality { left, right, dims } => Ok(Payload::Duality(
            essential_duality_diagnostic(left.parse()?, right.parse()?, &schedule(dims), tol)?,
        )),
        LabCommand::Extendability { gen, dims } => Ok(Payload::Extendability(
            extendability_diagnostic(gen.parse::<Generator>()?, &schedule(dims), tol)?,
        )),
        LabCommand::CompletionTrend { gen, dims } => Ok(Payload::CompletionTrend(
            parseval_completion_trend(gen.parse::<Generator>()?, &schedule(dims), tol)?,
        )),
    }
}

fn tight_summary(seq: &VectorSequence, tol: &Tolerances) -> Result<ExtensionSummary, FrameError> {
    let ext = tight_completion(seq, tol)?;
    let bound = optimal_bounds(seq).upper;
    let d = seq.dim();
    let target = CMatrix::identity(d, d) * Complex64::new(bound, 0.0);
    let residual = (frame_operator(&ext.apply(seq)?) - target).norm();
    let passed = residual <= tol.verify_tol * (d as f64).sqrt() * bound.max(1.0);
    let check = ParsevalCheckOrTight {
        target_scale: Some(bound),
        residual,
        passed,
    };
    Ok(ExtensionSummary::new("tight", &ext, d, check))
}

fn frame_summary(seq: &VectorSequence, tol: &Tolerances) -> Result<ExtensionSummary, FrameError> {
    let ext: Extension = minimal_frame_extension(seq, tol)?;
    let bound = optimal_bounds(seq).upper;
    let extended = diagnostics(&ext.apply(seq)?, tol);
    let residual = (extended.bounds.upper - bound).abs();
    let check = ParsevalCheckOrTight {
        target_scale: None,
        residual,
        passed: extended.is_frame && residual <= tol.verify_tol * bound.max(1.0),
    };
    Ok(ExtensionSummary::new("frame", &ext, seq.dim(), check))
}

fn write_file(path: &Path, file: &SequenceFile) -> Result<(), FrameError> {
    std::fs::write(path, to_json(file))
        .map_err(|e| FrameError::Parse(format!("cannot write {}: {e}", path.display())))
}

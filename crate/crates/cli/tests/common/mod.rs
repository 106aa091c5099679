#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_framekit"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn framekit")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

pub fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

/// Writes a real sequence file; each row is one vector.
pub fn write_real(dir: &Path, name: &str, dim: usize, rows: &[Vec<f64>]) -> PathBuf {
    let vectors: Vec<Vec<[f64; 2]>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| [x, 0.0]).collect())
        .collect();
    let body = serde_json::json!({ "dim": dim, "vectors": vectors });
    write_text(dir, name, &body.to_string())
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub struct Fixtures {
    pub dir: tempfile::TempDir,
    pub onb: PathBuf,
    pub repeated: PathBuf,
    pub half: PathBuf,
    pub malformed: PathBuf,
}

pub fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let onb = write_real(dir.path(), "onb.json", 2, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    let repeated = write_real(
        dir.path(),
        "repeated.json",
        2,
        &[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
    );
    let half = write_real(
        dir.path(),
        "half.json",
        2,
        &[vec![1.0, 0.0], vec![0.0, FRAC_1_SQRT_2]],
    );
    let malformed = write_text(
        dir.path(),
        "malformed.json",
        "{\"dim\": 2, \"vectors\": [[[1, 0]",
    );
    Fixtures {
        dir,
        onb,
        repeated,
        half,
        malformed,
    }
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

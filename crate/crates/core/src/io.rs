//! Sequence file formats and deterministic JSON output.
//!
//! JSON sequences look like `{"dim": d, "vectors": [[[re, im], ...], ...]}`;
//! extension files add `"placement": "prepended"` and `"k_minimal": k`.
//! CSV sequences hold one vector per line as `2d` columns interleaving real
//! and imaginary parts. Both readers reject NaN and infinities.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{FrameError, Result};
use crate::model::{CVector, Extension, SubspaceBasis, VectorSequence};

/// On-disk form of a sequence or extension.
#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub dim: usize,
    pub vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_minimal: Option<usize>,
}

pub fn vector_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn pairs_to_vector(pairs: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(
        pairs.len(),
        pairs.iter().map(|p| Complex64::new(p[0], p[1])),
    )
}

impl SequenceFile {
    pub fn from_sequence(seq: &VectorSequence) -> Self {
        Self {
            dim: seq.dim(),
            vectors: seq.iter().map(vector_pairs).collect(),
            placement: None,
            k_minimal: None,
        }
    }

    pub fn from_extension(ext: &Extension, dim: usize) -> Self {
        Self {
            dim,
            vectors: ext.added.iter().map(vector_pairs).collect(),
            placement: Some(ext.placement().to_string()),
            k_minimal: Some(ext.k_minimal),
        }
    }

    pub fn to_sequence(&self) -> Result<VectorSequence> {
        VectorSequence::new(
            self.dim,
            self.vectors.iter().map(|v| pairs_to_vector(v)).collect(),
        )
    }

    /// Reads the file as an extension. A missing `k_minimal` defaults to the
    /// number of vectors.
    pub fn to_extension(&self) -> Result<Extension> {
        if let Some(p) = &self.placement {
            if p != Extension::PLACEMENT {
                return Err(FrameError::Parse(format!("unsupported placement `{p}`")));
            }
        }
        let seq = self.to_sequence()?;
        let k = self.k_minimal.unwrap_or(seq.len());
        Ok(Extension::new(seq.into_vectors(), k))
    }
}

/// Orthonormal basis as written in reports.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SubspaceFile {
    pub dim: usize,
    pub subspace_dim: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
}

impl From<&SubspaceBasis> for SubspaceFile {
    fn from(b: &SubspaceBasis) -> Self {
        Self {
            dim: b.dim(),
            subspace_dim: b.len(),
            basis: b.basis().iter().map(vector_pairs).collect(),
        }
    }
}

pub fn parse_sequence_json(text: &str) -> Result<SequenceFile> {
    // serde_json's message already ends with "at line L column C".
    let file: SequenceFile =
        serde_json::from_str(text).map_err(|e| FrameError::Parse(e.to_string()))?;
    // Validates dimensions and finiteness.
    file.to_sequence()?;
    Ok(file)
}

/// Parses CSV rows of `2d` interleaved real/imaginary columns. The
/// dimension comes from `dim` or, failing that, from the first row.
pub fn parse_sequence_csv(text: &str, dim: Option<usize>) -> Result<VectorSequence> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut vectors = Vec::new();
    let mut dim = dim;
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FrameError::Parse(e.to_string()))?;
        let line = record.position().map_or(index as u64 + 1, |p| p.line());
        if record.len() % 2 != 0 {
            return Err(FrameError::Parse(format!(
                "line {line}: odd number of columns ({})",
                record.len()
            )));
        }
        let expected = *dim.get_or_insert(record.len() / 2);
        if record.len() != 2 * expected {
            return Err(FrameError::DimensionMismatch {
                index,
                expected,
                found: record.len() / 2,
            });
        }
        let mut values = Vec::with_capacity(record.len());
        for (field, raw) in record.iter().enumerate() {
            let x: f64 = raw.parse().map_err(|_| {
                FrameError::Parse(format!(
                    "line {line}, field {}: invalid number `{raw}`",
                    field + 1
                ))
            })?;
            if !x.is_finite() {
                return Err(FrameError::Parse(format!(
                    "line {line}, field {}: non-finite value",
                    field + 1
                )));
            }
            values.push(x);
        }
        vectors.push(CVector::from_iterator(
            expected,
            values.chunks(2).map(|c| Complex64::new(c[0], c[1])),
        ));
    }
    let dim = dim.ok_or_else(|| FrameError::Parse("empty CSV input has no dimension".into()))?;
    VectorSequence::new(dim, vectors)
}

pub fn sequence_to_csv(seq: &VectorSequence) -> String {
    let mut out = String::new();
    for v in seq.iter() {
        let fields: Vec<String> = v
            .iter()
            .flat_map(|z| [format_float(z.re), format_float(z.im)])
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Reads a sequence, choosing CSV for a `.csv` extension and JSON otherwise.
pub fn read_sequence(path: &Path) -> Result<VectorSequence> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FrameError::Parse(format!("{}: {e}", path.display())))?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        parse_sequence_csv(&text, None)
    } else {
        parse_sequence_json(&text)?.to_sequence()
    }
}

/// Floats with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON with floats printed to 17 significant digits and
/// non-finite floats written as `null`.
pub struct FixedPrecisionFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Default for FixedPrecisionFormatter<'_> {
    fn default() -> Self {
        Self {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Formatter for FixedPrecisionFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, FixedPrecisionFormatter::default());
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

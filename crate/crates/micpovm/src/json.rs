//! JSON artifact helpers: pretty printing with floats at 17 significant
//! digits so every artifact is byte-stable across runs and round-trips
//! through f64 without loss.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::hermitian::HermitianOperator;

/// Pretty formatter that writes every float as `d.dddddddddddddddde[+-]n`
/// (17 significant digits).  Non-finite values become null, matching what
/// stock serde_json would emit.
#[derive(Default)]
pub struct SciFloatFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SciFloatFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            // Canonical zero: -0.0 and 0.0 are the same operator entry, so
            // they must not produce different artifact bytes.
            let value = if value == 0.0 { 0.0 } else { value };
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
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

/// Serializes with stable key order (struct declaration order) and
/// 17-significant-digit floats, newline-terminated.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFloatFormatter::default());
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization does not fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Input schema for construction commands fed by a file: a set of Hermitian
/// operators plus optional per-operator weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorSetFile {
    pub dim: usize,
    pub operators: Vec<HermitianOperator>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

impl OperatorSetFile {
    /// Shape check after deserialization; serde already validated each
    /// operator individually.
    pub fn validate(&self) -> Result<(), String> {
        if self.operators.is_empty() {
            return Err("operator set is empty".into());
        }
        for (i, op) in self.operators.iter().enumerate() {
            if op.dim() != self.dim {
                return Err(format!(
                    "operator {} has dim {}, file declares {}",
                    i,
                    op.dim(),
                    self.dim
                ));
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.operators.len() {
                return Err(format!(
                    "{} weights for {} operators",
                    w.len(),
                    self.operators.len()
                ));
            }
        }
        Ok(())
    }
}

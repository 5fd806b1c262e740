//! The JSON system file.
//!
//! ```text
//! {
//!   "version": "1",
//!   "field": "real" | "complex",
//!   "dim": d,
//!   "count": n,
//!   "vectors": [[...d entries...], ...n vectors...],
//!   "dilation": { "mode", "original_dim", "scale", "constants": [A, B] }   (optional)
//! }
//! ```
//!
//! A real entry is a number, a complex entry a two-element `[re, im]` array.
//! Files are written in a canonical layout: fixed key order, one vector per
//! line, every number with 17 significant digits, so that
//! write → read → write is byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use naimark_core::{Complex64, Dilation, DilationMode, VectorSystem};
use serde_json::{Map, Value};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn field_err(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.into(),
    }
}

/// Metadata stored alongside an ambient system.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationBlock {
    pub mode: DilationMode,
    pub original_dim: usize,
    pub scale: f64,
    pub constants: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub system: VectorSystem,
    pub dilation: Option<DilationBlock>,
}

impl SystemFile {
    pub fn plain(system: VectorSystem) -> Self {
        Self {
            system,
            dilation: None,
        }
    }

    pub fn from_dilation(dil: &Dilation) -> Self {
        Self {
            system: dil.system().clone(),
            dilation: Some(DilationBlock {
                mode: dil.mode(),
                original_dim: dil.original_dim(),
                scale: dil.scale(),
                constants: dil.constants(),
            }),
        }
    }

    /// The stored dilation, if the file carries a dilation block.
    pub fn to_dilation(&self) -> Result<Option<Dilation>, FormatError> {
        let Some(block) = &self.dilation else {
            return Ok(None);
        };
        Dilation::new(
            block.mode,
            block.original_dim,
            self.system.clone(),
            block.scale,
            block.constants,
        )
        .map(Some)
        .map_err(|e| field_err("dilation", e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_canonical_string())
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let root: Value = serde_json::from_str(text).map_err(|e| syntax_error(text, &e))?;
        let obj = root
            .as_object()
            .ok_or_else(|| field_err("$", "expected a JSON object"))?;

        match obj.get("version") {
            Some(Value::String(v)) if v == FORMAT_VERSION => {}
            Some(other) => {
                return Err(field_err("version", format!("unsupported version {other}")))
            }
            None => return Err(field_err("version", "missing")),
        }
        let complex = match obj.get("field").and_then(Value::as_str) {
            Some("real") => false,
            Some("complex") => true,
            Some(other) => {
                return Err(field_err(
                    "field",
                    format!("expected \"real\" or \"complex\", got {other:?}"),
                ))
            }
            None => return Err(field_err("field", "missing or not a string")),
        };
        let dim = positive_int(obj, "dim")?;
        let count = positive_int(obj, "count")?;

        let vectors = obj
            .get("vectors")
            .and_then(Value::as_array)
            .ok_or_else(|| field_err("vectors", "missing or not an array"))?;
        if vectors.len() != count {
            return Err(field_err(
                "vectors",
                format!("expected {count} vectors (count), found {}", vectors.len()),
            ));
        }
        let mut columns = Vec::with_capacity(count);
        for (j, v) in vectors.iter().enumerate() {
            let entries = v
                .as_array()
                .ok_or_else(|| field_err(format!("vectors[{j}]"), "expected an array"))?;
            if entries.len() != dim {
                return Err(field_err(
                    format!("vectors[{j}]"),
                    format!("expected {dim} entries (dim), found {}", entries.len()),
                ));
            }
            let col = entries
                .iter()
                .enumerate()
                .map(|(i, x)| parse_entry(x, complex, &format!("vectors[{j}][{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            columns.push(col);
        }
        let system = VectorSystem::from_vectors(dim, &columns)
            .map_err(|e| field_err("vectors", e.to_string()))?;

        let dilation = match obj.get("dilation") {
            None | Some(Value::Null) => None,
            Some(Value::Object(block)) => Some(parse_block(block)?),
            Some(_) => return Err(field_err("dilation", "expected an object")),
        };
        Ok(Self { system, dilation })
    }

    pub fn to_canonical_string(&self) -> String {
        let sys = &self.system;
        let complex = sys.mat().as_slice().iter().any(|z| z.im != 0.0);
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"version\": \"{FORMAT_VERSION}\",");
        let _ = writeln!(
            out,
            "  \"field\": \"{}\",",
            if complex { "complex" } else { "real" }
        );
        let _ = writeln!(out, "  \"dim\": {},", sys.dim());
        let _ = writeln!(out, "  \"count\": {},", sys.count());
        out.push_str("  \"vectors\": [\n");
        for j in 0..sys.count() {
            let entries: Vec<String> = sys
                .vector(j)
                .iter()
                .map(|z| {
                    if complex {
                        format!("[{}, {}]", num(z.re), num(z.im))
                    } else {
                        num(z.re)
                    }
                })
                .collect();
            let sep = if j + 1 < sys.count() { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", entries.join(", "));
        }
        match &self.dilation {
            None => out.push_str("  ]\n"),
            Some(b) => {
                out.push_str("  ],\n");
                out.push_str("  \"dilation\": {\n");
                let _ = writeln!(out, "    \"mode\": \"{}\",", b.mode);
                let _ = writeln!(out, "    \"original_dim\": {},", b.original_dim);
                let _ = writeln!(out, "    \"scale\": {},", num(b.scale));
                let _ = writeln!(
                    out,
                    "    \"constants\": [{}, {}]",
                    num(b.constants.0),
                    num(b.constants.1)
                );
                out.push_str("  }\n");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn positive_int(obj: &Map<String, Value>, key: &str) -> Result<usize, FormatError> {
    match obj.get(key).and_then(Value::as_u64) {
        Some(v) if v >= 1 => usize::try_from(v).map_err(|_| field_err(key, "too large")),
        Some(_) => Err(field_err(key, "must be >= 1")),
        None => Err(field_err(key, "missing or not a non-negative integer")),
    }
}

fn finite_number(x: &Value, path: &str) -> Result<f64, FormatError> {
    match x.as_f64() {
        Some(v) if v.is_finite() => Ok(v),
        Some(v) => Err(field_err(path, format!("{v} is not finite"))),
        None => Err(field_err(path, "expected a number")),
    }
}

fn parse_entry(x: &Value, complex: bool, path: &str) -> Result<Complex64, FormatError> {
    if !complex {
        return Ok(Complex64::new(finite_number(x, path)?, 0.0));
    }
    match x.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(
            finite_number(re, &format!("{path}[0]"))?,
            finite_number(im, &format!("{path}[1]"))?,
        )),
        _ => Err(field_err(path, "expected a two-element [re, im] array")),
    }
}

fn parse_block(block: &Map<String, Value>) -> Result<DilationBlock, FormatError> {
    let mode = block
        .get("mode")
        .and_then(Value::as_str)
        .ok_or_else(|| field_err("dilation.mode", "missing or not a string"))?
        .parse::<DilationMode>()
        .map_err(|e| field_err("dilation.mode", e.to_string()))?;
    let original_dim = positive_int(block, "original_dim").map_err(|e| match e {
        FormatError::Field { message, .. } => field_err("dilation.original_dim", message),
        other => other,
    })?;
    let scale = finite_number(block.get("scale").unwrap_or(&Value::Null), "dilation.scale")?;
    let constants = match block
        .get("constants")
        .and_then(Value::as_array)
        .map(Vec::as_slice)
    {
        Some([a, b]) => (
            finite_number(a, "dilation.constants[0]")?,
            finite_number(b, "dilation.constants[1]")?,
        ),
        _ => {
            return Err(field_err(
                "dilation.constants",
                "expected a two-element [A, B] array",
            ))
        }
    };
    Ok(DilationBlock {
        mode,
        original_dim,
        scale,
        constants,
    })
}

/// Describes a JSON syntax error. For truncated input, names the last key
/// that was opened before the end of the text.
fn syntax_error(text: &str, err: &serde_json::Error) -> FormatError {
    if err.is_eof() {
        let field = last_key(text).unwrap_or_else(|| "$".to_string());
        return field_err(field, format!("truncated input ({err})"));
    }
    FormatError::Syntax(err.to_string())
}

fn last_key(text: &str) -> Option<String> {
    let bytes = text.as_bytes();
    let mut best = None;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'"' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end] != b'"' {
                end += 1;
            }
            let mut k = end + 1;
            while k < bytes.len() && bytes[k].is_ascii_whitespace() {
                k += 1;
            }
            if k < bytes.len() && bytes[k] == b':' {
                best = Some(text[start..end.min(bytes.len())].to_string());
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }
    best
}

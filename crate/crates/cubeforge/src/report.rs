//! Canonical serialization and the reproducible experiment record.
//!
//! Reports are compared byte-for-byte across runs and thread counts, so the
//! JSON form must be a pure function of the value: object keys sorted,
//! floats always in `{:.14e}` scientific form (15 significant digits — a
//! parse-back agrees to a relative 1e-12, the documented tolerance), and
//! integers bare. Counts that can exceed u64 (multiset sizes are 2^d)
//! travel as decimal strings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::sumset::SweepRow;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("value is not representable as JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Render any serializable value to canonical JSON text (no trailing
/// newline).
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, ReportError> {
    let value = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &value);
    Ok(out)
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else {
                // serde_json rejects non-finite floats before this point.
                let _ = write!(out, "{:.14e}", n.as_f64().expect("finite float"));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        // serde_json's default map preserves nothing: it is a BTreeMap, so
        // iteration is already key-sorted.
        Value::Object(fields) => {
            out.push('{');
            for (i, (key, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("strings always serialize"));
                out.push(':');
                write_value(out, item);
            }
            out.push('}');
        }
    }
}

/// Write a value as canonical JSON plus a trailing newline.
pub fn persist_report<T: Serialize>(path: &Path, value: &T) -> Result<(), ReportError> {
    let mut text = to_canonical_json(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sweep rows as CSV, one row per (c₁, c₂) pair, fixed header.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("c_elements,d_size,n,bound_ln,satisfied\n");
    for row in rows {
        let elements = row
            .c_elements
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("|");
        let _ = writeln!(
            out,
            "{elements},{},{},{:.14e},{}",
            row.d_size, row.n, row.bound_ln, row.satisfied
        );
    }
    out
}

/// One persisted experiment: enough to re-run the command and check the
/// output payload byte-for-byte. Timing is recorded but excluded from the
/// content hash, so reproductions hash identically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub command_line: Vec<String>,
    pub tool_version: String,
    /// Oracle in the CLI's spec syntax, empty when the command takes none.
    pub oracle_spec: String,
    /// Post-default parameter snapshot.
    pub config: Value,
    /// The report payloads the command printed.
    pub outputs: Value,
    pub elapsed_ms: u64,
    pub content_hash: String,
}

impl ExperimentRecord {
    pub fn new(
        command_line: Vec<String>,
        oracle_spec: String,
        config: Value,
        outputs: Value,
        elapsed_ms: u64,
    ) -> Self {
        let mut record = ExperimentRecord {
            command_line,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            oracle_spec,
            config,
            outputs,
            elapsed_ms,
            content_hash: String::new(),
        };
        record.content_hash = record.compute_hash();
        record
    }

    /// SHA-256 over the canonical JSON of every field except timing and the
    /// hash itself.
    pub fn compute_hash(&self) -> String {
        let mut hashed: BTreeMap<&str, Value> = BTreeMap::new();
        hashed.insert("command_line", serde_json::json!(self.command_line));
        hashed.insert("tool_version", Value::String(self.tool_version.clone()));
        hashed.insert("oracle_spec", Value::String(self.oracle_spec.clone()));
        hashed.insert("config", self.config.clone());
        hashed.insert("outputs", self.outputs.clone());
        let text = to_canonical_json(&hashed).expect("record fields are plain JSON");
        let digest = Sha256::digest(text.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }

    pub fn hash_matches(&self) -> bool {
        self.content_hash == self.compute_hash()
    }
}

//! Machine-readable output. Every file carries the metadata needed to
//! regenerate it: tool version, RNG algorithm, seed and the effective
//! configuration.
//!
//! CSV files start with `# key: value` metadata lines, then one header row;
//! fields are comma separated, decimals use a dot, and every record ends in
//! a newline. JSON files are one object `{"metadata": ..., "data": ...}`.

use crate::rng::RNG_ALGORITHM;
use serde::Serialize;
use serde_json::Value;
use std::io::{self, Write};

pub const TOOL_NAME: &str = "warlab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub rng_algorithm: String,
    pub command: String,
    pub seed: Option<u64>,
    /// Effective configuration after flags, config file and defaults.
    pub config: Value,
}

impl RunMetadata {
    pub fn new(command: impl Into<String>, seed: Option<u64>, config: &impl Serialize) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            rng_algorithm: RNG_ALGORITHM.into(),
            command: command.into(),
            seed,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A table ready for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv_metadata<W: Write>(meta: &RunMetadata, out: &mut W) -> io::Result<()> {
    writeln!(out, "# tool: {} {}", meta.tool, meta.version)?;
    writeln!(out, "# rng: {}", meta.rng_algorithm)?;
    writeln!(out, "# command: {}", meta.command)?;
    if let Some(seed) = meta.seed {
        writeln!(out, "# seed: {seed}")?;
    }
    writeln!(out, "# config: {}", meta.config)?;
    Ok(())
}

/// Writes the metadata block followed by each table. Tables after the first
/// are preceded by a `# section: <name>` line.
pub fn write_csv<W: Write>(meta: &RunMetadata, tables: &[(&str, &Table)], mut out: W) -> io::Result<()> {
    write_csv_metadata(meta, &mut out)?;
    for (i, (name, table)) in tables.iter().enumerate() {
        if i > 0 || tables.len() > 1 {
            writeln!(out, "# section: {name}")?;
        }
        let header: Vec<String> = table.header.iter().map(|h| csv_field(h)).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in &table.rows {
            let row: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            writeln!(out, "{}", row.join(","))?;
        }
    }
    Ok(())
}

pub fn write_json<W: Write>(meta: &RunMetadata, data: &impl Serialize, mut out: W) -> io::Result<()> {
    let doc = serde_json::json!({ "metadata": meta, "data": data });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

/// Shortest round-trip decimal form; `NaN` for undefined values.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v}")
    }
}

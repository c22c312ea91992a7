use crate::FormatArg;
use anyhow::{Context, Result};
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use warlab::output::{write_csv, write_json, RunMetadata, Table};

/// Writes `data` as JSON or `tables` as CSV to `out`, or to stdout.
pub fn write_output(
    out: Option<&Path>,
    format: FormatArg,
    meta: &RunMetadata,
    data: &impl Serialize,
    tables: &[(&str, &Table)],
) -> Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        FormatArg::Json => write_json(meta, data, &mut sink),
        FormatArg::Csv => write_csv(meta, tables, &mut sink),
    }
    .context("writing output")?;
    sink.flush().context("writing output")?;
    Ok(())
}

/// Fixed-width text table for the terminal.
pub fn print_table(header: &[&str], rows: &[Vec<String>]) {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&width)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        println!("{}", parts.join("  ").trim_end());
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

pub fn pass_label(pass: Option<bool>) -> String {
    match pass {
        Some(true) => "PASS".into(),
        Some(false) => "FAIL".into(),
        None => "info".into(),
    }
}

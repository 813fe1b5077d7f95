//! Deterministic file output: fixed-precision CSV and stable-order JSON.
//! No timestamps, hostnames, or other run-dependent metadata are written,
//! so identical inputs produce byte-identical files.

use crate::CliError;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

/// All floats in CSV output use this format: round-trip exact for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline. Struct fields serialize in
/// declaration order and maps used in reports are ordered, so the byte
/// stream is stable.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}

/// CSV from a header and rows of preformatted cells.
pub fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for cell in row {
            if !first {
                out.push(',');
            }
            out.push_str(&cell);
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Time-series CSV: header `time,z...`, one row per frame.
pub fn trace_csv(times: &[f64], zs: &[f64], frames: &[Vec<f64>]) -> String {
    let mut out = String::with_capacity(frames.len() * (zs.len() + 1) * 24);
    out.push_str("time");
    for &z in zs {
        let _ = write!(out, ",{}", fmt_f64(z));
    }
    out.push('\n');
    for (t, frame) in times.iter().zip(frames) {
        out.push_str(&fmt_f64(*t));
        for &v in frame {
            let _ = write!(out, ",{}", fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

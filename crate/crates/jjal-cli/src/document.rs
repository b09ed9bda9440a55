//! Result documents and provenance bookkeeping.
//!
//! Every run ends with one JSON result document next to the data tables.
//! The document records the tool version, the exact command line, the
//! seed, a sha256 of every input file, the list of files written, and a
//! command-specific payload. Reruns with identical inputs and seed must
//! produce byte-identical documents, so nothing time- or host-dependent
//! goes in here.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct ToolStamp {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct InputStamp {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct ResultDocument {
    pub tool: ToolStamp,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<InputStamp>,
    pub outputs: Vec<String>,
    pub payload: serde_json::Value,
}

impl ResultDocument {
    pub fn new(command: String, seed: u64) -> Self {
        ResultDocument {
            tool: ToolStamp {
                name: "jjal",
                version: env!("CARGO_PKG_VERSION"),
            },
            command,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            payload: serde_json::Value::Null,
        }
    }

    /// Hashes one input file into the provenance list.
    pub fn stamp_input(&mut self, path: &Path) -> Result<(), CliError> {
        let hex = jjal_core::io::sha256_hex(path)?;
        self.inputs.push(InputStamp {
            path: path.display().to_string(),
            sha256: hex,
        });
        Ok(())
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(
            path.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        );
    }

    /// Writes the document as `<stem>_result.json` under `out`.
    pub fn write(&self, out: &Path, stem: &str) -> Result<PathBuf, CliError> {
        let path = out.join(format!("{stem}_result.json"));
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        let mut file = fs::File::create(&path).map_err(|e| write_err(&path, e))?;
        file.write_all(text.as_bytes())
            .map_err(|e| write_err(&path, e))?;
        Ok(path)
    }
}

fn write_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(jjal_core::IoError::Write {
        path: path.display().to_string(),
        source: e,
    })
}

/// Writes a data table as a JSON document with `header` and `rows` keys.
///
/// Used when the run asks for `--format json`; the CSV writers in the
/// core crate own the default path. Floats pass through serde_json so a
/// rerun serializes identically.
pub fn write_json_table(
    path: &Path,
    header: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Table<'a> {
        header: &'a [&'a str],
        rows: &'a [Vec<f64>],
    }
    let mut text = serde_json::to_string_pretty(&Table { header, rows })
        .expect("table serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| write_err(path, e))
}

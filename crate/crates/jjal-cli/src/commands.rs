//! Command handlers.
//!
//! Each handler reads its inputs, stamps them into the result document,
//! writes its data tables through [`RunContext::emit`] and finishes with
//! a payload plus one `<command>_result.json`. Handlers print a short
//! human summary to stdout; everything a script should consume lives in
//! the files.

pub mod calibrate;
pub mod design_cmds;
pub mod fit_cmds;
pub mod synth_cmds;

use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::args::Format;
use crate::document::{write_json_table, ResultDocument};
use crate::error::CliError;

/// Shared state of one CLI run: output directory, seed, table format and
/// the provenance document being accumulated.
pub struct RunContext {
    pub out: PathBuf,
    pub seed: u64,
    pub format: Format,
    pub doc: ResultDocument,
}

impl RunContext {
    /// Writes one data table in the selected format and records it in the
    /// result document. `csv` writes the typed schema; the JSON twin is
    /// built on demand from `rows` under the same comma-separated header.
    pub fn emit<W, R>(
        &mut self,
        stem: &str,
        header: &'static str,
        rows: R,
        csv: W,
    ) -> Result<(), CliError>
    where
        W: FnOnce(&Path) -> Result<(), jjal_core::IoError>,
        R: FnOnce() -> Vec<Vec<f64>>,
    {
        let path = match self.format {
            Format::Csv => {
                let path = self.out.join(format!("{stem}.csv"));
                csv(&path)?;
                path
            }
            Format::Json => {
                let path = self.out.join(format!("{stem}.json"));
                let names: Vec<&str> = header.split(',').collect();
                write_json_table(&path, &names, &rows())?;
                path
            }
        };
        self.doc.record_output(&path);
        Ok(())
    }

    /// Sets the payload and writes `<stem>_result.json`.
    pub fn finish(&mut self, stem: &str, payload: Value) -> Result<(), CliError> {
        self.doc.payload = payload;
        let path = self.doc.write(&self.out, stem)?;
        println!("wrote {}", path.display());
        Ok(())
    }

    /// Loads and validates the design file, hashing it into the document.
    /// Every design-driven command requires `--design`.
    pub fn load_design(
        &mut self,
        design: Option<&Path>,
    ) -> Result<jjal_core::ArrayDesign, CliError> {
        let path = design.ok_or_else(|| {
            CliError::BadFlag("this command needs --design <file>".to_string())
        })?;
        self.doc.stamp_input(path)?;
        Ok(jjal_core::ArrayDesign::load(path)?)
    }

    /// Hashes a data input file into the document before it is parsed.
    pub fn stamp(&mut self, path: &Path) -> Result<(), CliError> {
        self.doc.stamp_input(path)
    }
}

/// JSON number that degrades to null instead of panicking on NaN, for
/// standard errors of degenerate fits.
pub(crate) fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

/// Fit diagnostics shared by every fit-family payload.
pub(crate) fn fit_stats(fit: &jjal_core::FitResult) -> Value {
    serde_json::json!({
        "parameter_names": fit.parameter_names,
        "parameters": fit.parameters.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "standard_errors": fit.standard_errors.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        "residual_rms": num(fit.residual_rms),
        "iterations": fit.iterations,
        "converged": fit.converged,
        "warnings": fit.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

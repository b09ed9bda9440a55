//! Error categories and exit codes.
//!
//! Every failure leaving the CLI belongs to one of five documented
//! categories, each with a fixed exit code, so scripts can branch on the
//! class of failure without parsing prose. Argument parsing errors are
//! clap's and exit with its conventional code 2, which this table
//! reserves as `usage`.

use jjal_core::cqed::CqedError;
use jjal_core::design::DesignError;
use jjal_core::kerr::KerrError;
use jjal_core::ladder::LadderError;
use jjal_core::modes::ModeError;
use jjal_core::{FitError, IoError, ScatteringError};
use thiserror::Error;

/// Failure class, stable across releases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Bad command line (reported by the argument parser).
    Usage,
    /// Design file missing, unparseable, or physically invalid.
    Config,
    /// Data file missing, malformed, or failing its schema.
    Input,
    /// A solver, fit, or calibration could not produce a result.
    Numeric,
    /// An output file could not be written.
    Output,
}

impl Category {
    pub fn code(self) -> i32 {
        match self {
            Category::Usage => 2,
            Category::Config => 3,
            Category::Input => 4,
            Category::Numeric => 5,
            Category::Output => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Usage => "usage",
            Category::Config => "config",
            Category::Input => "input",
            Category::Numeric => "numeric",
            Category::Output => "output",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Design(#[from] DesignError),
    #[error("{0}")]
    Ladder(#[from] LadderError),
    #[error("{0}")]
    Modes(#[from] ModeError),
    #[error("{0}")]
    Kerr(#[from] KerrError),
    #[error("{0}")]
    Scattering(#[from] ScatteringError),
    #[error("{0}")]
    Fit(#[from] FitError),
    #[error("{0}")]
    Cqed(#[from] CqedError),
    #[error("{0}")]
    Io(#[from] IoError),
    #[error("{0}")]
    BadFlag(String),
}

impl CliError {
    pub fn category(&self) -> Category {
        match self {
            CliError::Design(_) => Category::Config,
            CliError::Ladder(_)
            | CliError::Modes(_)
            | CliError::Kerr(_)
            | CliError::Scattering(_)
            | CliError::Fit(_)
            | CliError::Cqed(_) => Category::Numeric,
            CliError::Io(e) => match e {
                IoError::Write { .. } => Category::Output,
                _ => Category::Input,
            },
            CliError::BadFlag(_) => Category::Usage,
        }
    }
}

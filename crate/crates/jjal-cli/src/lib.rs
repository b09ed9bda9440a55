//! Batch front end for the amplifier design and analysis library.
//!
//! One subcommand per run: design calculations (`dispersion`, `kerr`,
//! `s11`), fits over measured records (`fit-fluxmap`, `fit-dimer`,
//! `fit-gain`, `noise-vis`), calibration reports (`calibrate <verb>`) and
//! seeded synthetic generators (`synth <generator>`). Every run writes
//! its data tables plus one JSON result document carrying the tool
//! version, the command line, the seed, a sha256 per input file and the
//! command payload. Reruns with identical inputs and seed are
//! byte-identical. The `JJAL_THREADS` environment variable caps the
//! worker threads of flux sweeps.
//!
//! Failures map to documented categories with fixed exit codes (see
//! [`error::Category`]); the binary prints a single
//! `error[<category>]: <message>` line and never a backtrace.

pub mod args;
pub mod commands;
pub mod document;
pub mod error;

use args::{Cli, Command};
use commands::RunContext;
use document::ResultDocument;
use error::CliError;

/// Runs one parsed command line. `command_echo` is the raw argument list
/// recorded verbatim in the result document.
pub fn run(cli: Cli, command_echo: String) -> Result<(), CliError> {
    std::fs::create_dir_all(&cli.out).map_err(|source| {
        CliError::Io(jjal_core::IoError::Write {
            path: cli.out.display().to_string(),
            source,
        })
    })?;
    let mut ctx = RunContext {
        out: cli.out.clone(),
        seed: cli.seed,
        format: cli.format,
        doc: ResultDocument::new(command_echo, cli.seed),
    };
    match &cli.command {
        Command::Dispersion(a) => {
            commands::design_cmds::dispersion(&mut ctx, a, cli.design.as_deref())
        }
        Command::Kerr(a) => commands::design_cmds::kerr(&mut ctx, a, cli.design.as_deref()),
        Command::S11(a) => commands::design_cmds::s11(&mut ctx, a, cli.design.as_deref()),
        Command::FitFluxmap(a) => commands::fit_cmds::fit_fluxmap(&mut ctx, a),
        Command::FitDimer(a) => commands::fit_cmds::fit_dimer(&mut ctx, a),
        Command::FitGain(a) => commands::fit_cmds::fit_gain(&mut ctx, a),
        Command::NoiseVis(a) => commands::fit_cmds::noise_vis(&mut ctx, a),
        Command::Calibrate { verb } => commands::calibrate::dispatch(&mut ctx, verb),
        Command::Synth { generator } => commands::synth_cmds::dispatch(&mut ctx, generator),
    }
}

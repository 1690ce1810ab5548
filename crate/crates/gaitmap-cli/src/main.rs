//! `gaitmap`: command-line front end for the gait mapping pipeline.
//!
//! Subcommands cover the full workflow: `synth` generates recordings,
//! `identify` trains the map/band/references from a recording, `simulate`
//! replays a recording through the pipeline, `analyze` scores the output,
//! and `plot` renders SVG figures.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, malformed
//! config), 2 for data or model errors (unreadable files, singular
//! systems). Diagnostics go to stderr; all machine-readable output goes
//! to files.

mod artifacts;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gaitmap", version, about = "gait feature mapping pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic gait recording with a cycle-metadata sidecar
    Synth(commands::synth::SynthArgs),
    /// Train map, band, and reference set from a recording
    Identify(commands::identify::IdentifyArgs),
    /// Run the one-cycle-lag pipeline over a recording
    Simulate(commands::simulate::SimulateArgs),
    /// Compute phase and amplitude error reports for a simulation
    Analyze(commands::analyze::AnalyzeArgs),
    /// Render SVG figures for a simulation
    Plot(commands::plot::PlotArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match &cli.command {
        Command::Synth(args) => commands::synth::run(args),
        Command::Identify(args) => commands::identify::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Analyze(args) => commands::analyze::run(args),
        Command::Plot(args) => commands::plot::run(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

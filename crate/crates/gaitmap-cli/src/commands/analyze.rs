//! `analyze`: compute the phase/amplitude error report of a simulation
//! directory and write it as `report.csv`.
//!
//! Rows follow a `metric,joint,mean,std` layout. The coordination metric
//! appears twice — once measured on the original recording and once on the
//! emitted trajectories — so the two columns of the usual comparison table
//! become two labelled rows.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use gaitmap_core::error_report;

use crate::artifacts::{atomic_write, read_cycles, read_output, REPORT_FILE};
use crate::error::CliResult;

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Simulation output directory to analyze
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: &AnalyzeArgs) -> CliResult {
    let output = read_output(&args.out_dir)?;
    let cycles = read_cycles(&args.out_dir)?;
    let report = error_report(&output, &cycles)?;

    let mut text = String::from("metric,joint,mean,std\n");
    let rows = [
        ("phase_error_fraction", "lower", report.phase),
        ("amplitude_error_deg", "hip", report.amplitude_hip),
        ("amplitude_error_deg", "knee", report.amplitude_knee),
        (
            "phase_difference_fraction",
            "original",
            report.phase_difference_baseline,
        ),
        (
            "phase_difference_fraction",
            "experiment",
            report.phase_difference,
        ),
    ];
    for (metric, joint, stats) in rows {
        let _ = writeln!(text, "{metric},{joint},{},{}", stats.mean, stats.std);
    }
    let path = args.out_dir.join(REPORT_FILE);
    atomic_write(&path, &text)?;
    eprintln!(
        "report over {} emission/cycle pairs written to {}",
        report.pairs,
        path.display()
    );
    Ok(())
}

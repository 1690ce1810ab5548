//! `simulate`: run the one-cycle-lag pipeline over a recording with
//! trained models and persist the emitted trajectories plus everything
//! `analyze` and `plot` need.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use gaitmap_core::features::despike_recording;
use gaitmap_core::features::io::load_band;
use gaitmap_core::gait::io::load_recording;
use gaitmap_core::mapping::io::load_map;
use gaitmap_core::restoration::io::load_refs;
use gaitmap_core::{run_pipeline, segment_cycles};

use crate::artifacts::{
    atomic_write, curves_to_string, cycles_to_string, emissions_to_string, trajectory_to_string,
    CURVES_FILE, CYCLES_FILE, EMISSIONS_FILE, TRAJECTORY_FILE,
};
use crate::config::RunConfig;
use crate::error::{io_data, CliResult};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Input recording
    #[arg(long)]
    pub rec: PathBuf,
    /// Fitted affine map file
    #[arg(long)]
    pub map: PathBuf,
    /// Change-rate band file
    #[arg(long)]
    pub band: PathBuf,
    /// Reference set file
    #[arg(long)]
    pub refs: PathBuf,
    /// Directory for emitted artifacts (created if missing)
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Nominal playback period, seconds (overrides the config key)
    #[arg(long)]
    pub nominal_period: Option<f64>,
    /// Phase-grid resolution (overrides the config key)
    #[arg(long)]
    pub n_grid: Option<usize>,
    /// Optional `key = value` config file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: &SimulateArgs) -> CliResult {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        config.apply_file(path)?;
    }
    if let Some(v) = args.nominal_period {
        config.nominal_period_s = v;
    }
    if let Some(v) = args.n_grid {
        config.n_grid = v;
    }
    config.validate()?;

    let recording = load_recording(&args.rec)?;
    let map = load_map(&args.map)?;
    let band = load_band(&args.band)?;
    let refs = load_refs(&args.refs)?;

    let sim = config.simulation();
    let output = run_pipeline(&recording, &band, &map, &refs, &sim)?;
    // the same segmentation the pipeline used internally, persisted so
    // analyze and plot can pair emissions with their input cycles
    let (clean, _) = despike_recording(&recording, &band)?;
    let cycles = segment_cycles(&clean, &sim.segment)?;

    fs::create_dir_all(&args.out_dir).map_err(|e| io_data(&args.out_dir, e))?;
    atomic_write(
        &args.out_dir.join(TRAJECTORY_FILE),
        &trajectory_to_string(&output),
    )?;
    atomic_write(
        &args.out_dir.join(EMISSIONS_FILE),
        &emissions_to_string(&output),
    )?;
    atomic_write(&args.out_dir.join(CYCLES_FILE), &cycles_to_string(&cycles))?;
    atomic_write(&args.out_dir.join(CURVES_FILE), &curves_to_string(&cycles))?;

    eprintln!(
        "emitted {} trajectories over {} cycles ({} skipped, {} samples repaired) into {}",
        output.emissions.len(),
        cycles.len(),
        output.skipped.len(),
        output.repaired_samples,
        args.out_dir.display()
    );
    Ok(())
}

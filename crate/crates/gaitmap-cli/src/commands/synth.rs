//! `synth`: generate a seeded synthetic recording plus ground-truth
//! sidecar, the self-recording stand-in for development and testing.

use std::path::PathBuf;

use clap::Args;
use gaitmap_core::gait::io::{cycle_meta_to_string, recording_to_string, sidecar_path};
use gaitmap_core::{synthesize_recording, SynthParams};

use crate::artifacts::atomic_write;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output recording path; the sidecar lands next to it as
    /// `<name>.meta.csv`
    #[arg(long)]
    pub out: PathBuf,
    /// Master seed for all generator randomness
    #[arg(long, conflicts_with = "experiment")]
    pub seed: Option<u64>,
    /// Use the n-th seed (1-based) of the configured experiment list
    #[arg(long)]
    pub experiment: Option<usize>,
    /// Number of gait cycles
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Std of additive Gaussian measurement noise, degrees
    #[arg(long)]
    pub noise_std: Option<f64>,
    /// Expected impulsive spikes per cycle
    #[arg(long)]
    pub spike_rate: Option<f64>,
    /// Nominal cycle period, seconds
    #[arg(long)]
    pub period: Option<f64>,
    /// Sample rate, Hz
    #[arg(long)]
    pub sample_rate: Option<f64>,
    /// Relative std of per-cycle period variation
    #[arg(long)]
    pub period_jitter: Option<f64>,
    /// Relative std of per-harmonic amplitude variation
    #[arg(long)]
    pub amplitude_jitter: Option<f64>,
    /// Optional `key = value` config file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: &SynthArgs) -> CliResult {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        config.apply_file(path)?;
    }
    config.validate()?;

    let seed = match (args.seed, args.experiment) {
        (Some(seed), _) => seed,
        (None, Some(n)) => *config
            .experiment_seeds
            .get(
                n.checked_sub(1)
                    .ok_or_else(|| CliError::Usage("--experiment numbering starts at 1".into()))?,
            )
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "--experiment {n} exceeds the {} configured experiment seeds",
                    config.experiment_seeds.len()
                ))
            })?,
        (None, None) => config.seed,
    };

    let mut params = SynthParams {
        seed,
        ..SynthParams::default()
    };
    if let Some(v) = args.cycles {
        params.n_cycles = v;
    }
    if let Some(v) = args.noise_std {
        params.noise_std = v;
    }
    if let Some(v) = args.spike_rate {
        params.spike_rate = v;
    }
    if let Some(v) = args.period {
        params.base_period = v;
    }
    if let Some(v) = args.sample_rate {
        params.sample_rate = v;
    }
    if let Some(v) = args.period_jitter {
        params.period_jitter = v;
    }
    if let Some(v) = args.amplitude_jitter {
        params.amplitude_jitter = v;
    }

    let (recording, meta) = synthesize_recording(&params)?;
    atomic_write(&args.out, &recording_to_string(&recording))?;
    let sidecar = sidecar_path(&args.out);
    atomic_write(&sidecar, &cycle_meta_to_string(&meta))?;
    eprintln!(
        "wrote {} samples over {} cycles to {} (sidecar {})",
        recording.len(),
        meta.len(),
        args.out.display(),
        sidecar.display()
    );
    Ok(())
}

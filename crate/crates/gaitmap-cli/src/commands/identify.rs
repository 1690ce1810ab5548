//! `identify`: the self-recording training scheme, end to end — segment,
//! learn the disturbance band, despike, extract feature pairs, fit the
//! affine map by least squares, cluster, and fit reference curves.

use std::path::PathBuf;

use clap::Args;
use gaitmap_core::features::{despike_recording, estimate_change_rate, io::band_to_string};
use gaitmap_core::gait::io::load_recording;
use gaitmap_core::mapping::io::map_to_string;
use gaitmap_core::restoration::io::refs_to_string;
use gaitmap_core::restoration::MergeStrategy;
use gaitmap_core::{
    build_lower_feature, build_upper_feature, cluster_features, fit_band, fit_phase_windows,
    identify, residual_stats, segment_cycles, select_representative, ChangeRateBand, GaitCycle,
    GaitRecording, LowerFeature, ReferenceSet, ResidualStats, UpperFeature,
};

use crate::artifacts::atomic_write;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct IdentifyArgs {
    /// Input recording
    #[arg(long)]
    pub rec: PathBuf,
    /// Where to write the fitted affine map
    #[arg(long)]
    pub out_map: PathBuf,
    /// Where to write the change-rate band
    #[arg(long)]
    pub out_band: PathBuf,
    /// Where to write the reference set
    #[arg(long)]
    pub out_refs: PathBuf,
    /// Fraction of featured cycles held out of the fit, reported
    /// separately (overrides the config key)
    #[arg(long)]
    pub holdout: Option<f64>,
    /// Cluster count (overrides the config key)
    #[arg(long)]
    pub k: Option<usize>,
    /// Clustering seed (overrides the config key)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fourier order of reference curves (overrides the config key)
    #[arg(long)]
    pub fit_order: Option<usize>,
    /// Phase-grid resolution (overrides the config key)
    #[arg(long)]
    pub n_grid: Option<usize>,
    /// Lower band percentile (overrides the config key)
    #[arg(long)]
    pub q_low: Option<f64>,
    /// Upper band percentile (overrides the config key)
    #[arg(long)]
    pub q_high: Option<f64>,
    /// Cluster point merge strategy: `paired` or `pooled`
    #[arg(long)]
    pub merge_strategy: Option<String>,
    /// Optional `key = value` config file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl IdentifyArgs {
    fn resolve_config(&self) -> CliResult<RunConfig> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        if let Some(v) = self.holdout {
            config.holdout = v;
        }
        if let Some(v) = self.k {
            config.k = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.fit_order {
            config.fit_order = v;
        }
        if let Some(v) = self.n_grid {
            config.n_grid = v;
        }
        if let Some(v) = self.q_low {
            config.q_low = v;
        }
        if let Some(v) = self.q_high {
            config.q_high = v;
        }
        if let Some(name) = &self.merge_strategy {
            config.merge_strategy = MergeStrategy::from_name(name).ok_or_else(|| {
                CliError::Usage(format!(
                    "invalid --merge-strategy `{name}` (expected `paired` or `pooled`)"
                ))
            })?;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Everything the training pass produces before model fitting.
pub struct Trained {
    pub band: ChangeRateBand,
    pub cycles: Vec<GaitCycle>,
    pub xs: Vec<UpperFeature>,
    pub ys: Vec<LowerFeature>,
    /// Cycles whose feature extraction failed and were left out.
    pub dropped: usize,
}

/// Shared training pass: learn the band on raw cycles, despike, re-segment,
/// tighten phase windows, and extract per-cycle feature pairs.
pub fn train(recording: &GaitRecording, config: &RunConfig) -> CliResult<Trained> {
    let segment = config.segment();
    let raw_cycles = segment_cycles(recording, &segment)?;
    let mut pooled = gaitmap_core::JointMap::from_fn(|_| Vec::new());
    for cycle in &raw_cycles {
        let rate_hz = cycle.n_grid() as f64 / cycle.period;
        for joint in gaitmap_core::JointId::ALL {
            pooled[joint].extend(estimate_change_rate(cycle.curve(joint), rate_hz)?);
        }
    }
    let band = fit_band(&pooled, config.q_low, config.q_high)?;
    let (clean, _) = despike_recording(recording, &band)?;
    let cycles = segment_cycles(&clean, &segment)?;
    let band = fit_phase_windows(&cycles, &band)?;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = 0;
    for cycle in &cycles {
        match (
            build_upper_feature(cycle, &band),
            build_lower_feature(cycle, &band),
        ) {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            _ => dropped += 1,
        }
    }
    Ok(Trained {
        band,
        cycles,
        xs,
        ys,
        dropped,
    })
}

/// Prints the per-component residual table to standard error.
fn print_residuals(train: &ResidualStats, holdout: Option<&ResidualStats>) {
    const COMPONENTS: [&str; 4] = ["hip trough", "hip peak", "knee peak", "knee trough"];
    eprintln!("mapping residuals (deg):");
    match holdout {
        Some(h) => {
            eprintln!(
                "  {:<12} {:>10} {:>10} {:>10} {:>10}   ({} train / {} holdout pairs)",
                "component",
                "train mean",
                "train std",
                "hold mean",
                "hold std",
                train.count,
                h.count
            );
            for (i, name) in COMPONENTS.iter().enumerate() {
                eprintln!(
                    "  {:<12} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
                    name, train.mean[i], train.std[i], h.mean[i], h.std[i]
                );
            }
        }
        None => {
            eprintln!(
                "  {:<12} {:>10} {:>10}   ({} pairs)",
                "component", "mean", "std", train.count
            );
            for (i, name) in COMPONENTS.iter().enumerate() {
                eprintln!(
                    "  {:<12} {:>10.4} {:>10.4}",
                    name, train.mean[i], train.std[i]
                );
            }
        }
    }
}

pub fn run(args: &IdentifyArgs) -> CliResult {
    let config = args.resolve_config()?;
    let recording = load_recording(&args.rec)?;
    let trained = train(&recording, &config)?;
    if trained.dropped > 0 {
        eprintln!(
            "note: {} of {} cycles had no usable extrema and were dropped",
            trained.dropped,
            trained.cycles.len()
        );
    }

    // temporal holdout: the most recent fraction validates the fit
    let held = (trained.xs.len() as f64 * config.holdout).round() as usize;
    let kept = trained.xs.len() - held;
    let (map, fit_stats) = identify(&trained.xs[..kept], &trained.ys[..kept])?;
    let holdout_stats = if held >= 2 {
        Some(residual_stats(
            &map,
            &trained.xs[kept..],
            &trained.ys[kept..],
        )?)
    } else {
        None
    };
    print_residuals(&fit_stats, holdout_stats.as_ref());

    let model = cluster_features(
        &trained.xs,
        &trained.ys,
        config.k,
        config.seed,
        config.merge_strategy,
    )?;
    let raw = select_representative(&model, &trained.ys, &trained.cycles)?;
    let refs = ReferenceSet::from_raw(&raw, config.fit_order)?;

    atomic_write(&args.out_map, &map_to_string(&map))?;
    atomic_write(&args.out_band, &band_to_string(&trained.band))?;
    atomic_write(&args.out_refs, &refs_to_string(&refs))?;
    eprintln!(
        "wrote map to {}, band to {}, references to {}",
        args.out_map.display(),
        args.out_band.display(),
        args.out_refs.display()
    );
    Ok(())
}

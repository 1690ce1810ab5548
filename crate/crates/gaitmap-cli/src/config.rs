//! Run configuration shared by all subcommands.
//!
//! Settings resolve in three layers: built-in defaults, then an optional
//! `key = value` config file, then explicit command-line flags. Unknown
//! keys are rejected so typos cannot silently fall back to defaults.

use std::fs;
use std::path::Path;

use gaitmap_core::restoration::MergeStrategy;
use gaitmap_core::{SegmentConfig, SimulationConfig};

use crate::error::{io_data, CliError, CliResult};

/// All tunable settings of the pipeline commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Phase-grid resolution for resampled cycles.
    pub n_grid: usize,
    /// Segmentation smoothing window, as a fraction of the period.
    pub smooth_frac: f64,
    /// Shortest plausible cycle period, seconds.
    pub min_period_s: f64,
    /// Longest plausible cycle period, seconds.
    pub max_period_s: f64,
    /// Lower percentile of the change-rate band.
    pub q_low: f64,
    /// Upper percentile of the change-rate band.
    pub q_high: f64,
    /// Cluster count for reference selection.
    pub k: usize,
    /// Seed for clustering and other per-run randomness.
    pub seed: u64,
    /// Fourier order of fitted reference curves.
    pub fit_order: usize,
    /// Nominal playback period of emitted trajectories, seconds.
    pub nominal_period_s: f64,
    /// How feature pairs are merged into cluster points.
    pub merge_strategy: MergeStrategy,
    /// Fraction of featured cycles held out of identification.
    pub holdout: f64,
    /// Seed list for scripted experiment recordings.
    pub experiment_seeds: Vec<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_grid: 100,
            smooth_frac: 0.05,
            min_period_s: 0.3,
            max_period_s: 3.0,
            q_low: 2.0,
            q_high: 98.0,
            k: 9,
            seed: 42,
            fit_order: 6,
            nominal_period_s: 1.1,
            merge_strategy: MergeStrategy::PairedConcat,
            holdout: 0.0,
            experiment_seeds: vec![1001, 2002, 3003],
        }
    }
}

impl RunConfig {
    /// Applies a `key = value` config file on top of the current values.
    pub fn apply_file(&mut self, path: &Path) -> CliResult {
        let text = fs::read_to_string(path).map_err(|e| io_data(path, e))?;
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected `key = value`, got `{line}`",
                    path.display(),
                    number + 1
                )));
            };
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Usage(format!("{}:{}: {e}", path.display(), number + 1)))?;
        }
        Ok(())
    }

    /// Sets one setting from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
            value
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid value `{value}` for key `{key}`")))
        }
        match key {
            "n_grid" => self.n_grid = parse(key, value)?,
            "smooth_frac" => self.smooth_frac = parse(key, value)?,
            "min_period_s" => self.min_period_s = parse(key, value)?,
            "max_period_s" => self.max_period_s = parse(key, value)?,
            "q_low" => self.q_low = parse(key, value)?,
            "q_high" => self.q_high = parse(key, value)?,
            "k" => self.k = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "fit_order" => self.fit_order = parse(key, value)?,
            "nominal_period_s" => self.nominal_period_s = parse(key, value)?,
            "merge_strategy" => {
                self.merge_strategy = MergeStrategy::from_name(value).ok_or_else(|| {
                    CliError::Usage(format!(
                        "invalid value `{value}` for key `merge_strategy` \
                         (expected `paired` or `pooled`)"
                    ))
                })?;
            }
            "holdout" => self.holdout = parse(key, value)?,
            "experiment_seeds" => {
                let seeds: Result<Vec<u64>, _> =
                    value.split(',').map(|s| s.trim().parse()).collect();
                self.experiment_seeds = seeds.map_err(|_| {
                    CliError::Usage(format!(
                        "invalid value `{value}` for key `experiment_seeds` \
                         (expected comma-separated integers)"
                    ))
                })?;
            }
            _ => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    /// Checks every documented range; called after all layers applied.
    pub fn validate(&self) -> CliResult {
        fn usage(msg: String) -> CliResult {
            Err(CliError::Usage(msg))
        }
        if self.n_grid < 10 {
            return usage(format!("n_grid must be at least 10, got {}", self.n_grid));
        }
        if !(self.fit_order >= 1 && self.fit_order <= 20) {
            return usage(format!(
                "fit_order must lie in [1, 20], got {}",
                self.fit_order
            ));
        }
        if 2 * self.fit_order + 1 > self.n_grid {
            return usage(format!(
                "fit_order {} needs at least {} grid points, n_grid is {}",
                self.fit_order,
                2 * self.fit_order + 1,
                self.n_grid
            ));
        }
        if self.k < 2 {
            return usage(format!("k must be at least 2, got {}", self.k));
        }
        if !(self.q_low >= 0.0 && self.q_low < self.q_high && self.q_high <= 100.0) {
            return usage(format!(
                "percentiles must satisfy 0 <= q_low < q_high <= 100, got [{}, {}]",
                self.q_low, self.q_high
            ));
        }
        if !(self.smooth_frac > 0.0 && self.smooth_frac < 0.5) {
            return usage(format!(
                "smooth_frac must lie in (0, 0.5), got {}",
                self.smooth_frac
            ));
        }
        if !(self.min_period_s > 0.0 && self.min_period_s < self.max_period_s) {
            return usage(format!(
                "period bounds must satisfy 0 < min < max, got [{}, {}]",
                self.min_period_s, self.max_period_s
            ));
        }
        if !(self.nominal_period_s.is_finite() && self.nominal_period_s > 0.0) {
            return usage(format!(
                "nominal_period_s must be positive, got {}",
                self.nominal_period_s
            ));
        }
        if !(self.holdout >= 0.0 && self.holdout <= 0.9) {
            return usage(format!(
                "holdout must lie in [0, 0.9], got {}",
                self.holdout
            ));
        }
        if self.experiment_seeds.is_empty() {
            return usage("experiment_seeds must not be empty".into());
        }
        Ok(())
    }

    /// Segmentation settings in core form.
    pub fn segment(&self) -> SegmentConfig {
        SegmentConfig {
            n_grid: self.n_grid,
            smooth_frac: self.smooth_frac,
            min_period_s: self.min_period_s,
            max_period_s: self.max_period_s,
        }
    }

    /// Simulation settings in core form.
    pub fn simulation(&self) -> SimulationConfig {
        SimulationConfig {
            segment: self.segment(),
            nominal_period_s: self.nominal_period_s,
        }
    }
}

//! One-cycle-lag execution of the mapping pipeline.
//!
//! The training scheme runs online: the upper-limb feature vector of gait
//! cycle `j` is only complete once the cycle ends, so the lower-limb
//! trajectory derived from it plays during cycle `j+1` — the lower limbs
//! lag the upper limbs by exactly one gait cycle. [`run_pipeline`] replays
//! that loop over a recorded session:
//!
//! 1. repair band-violating spikes on the raw traces, then segment,
//! 2. per cycle `j`: extract the upper feature, map it (`y' = Tx + b`),
//!    solve the restoration weights, and sample the blended reference
//!    curves over the duration of cycle `j+1`,
//! 3. cycles whose features cannot be extracted are skipped (the device
//!    would hold the previous trajectory; no new curve is emitted).
//!
//! The playback clock is deliberately naive: the output curve always
//! advances at the configured *nominal* period, while the wearer's actual
//! cycle `j+1` may be shorter or longer. The mismatch leaves a residual
//! phase deviation in the emitted trajectory — the dominant error source
//! quantified by [`analysis`].

pub mod analysis;

pub use analysis::{
    amplitude_error, circular_lag, error_report, phase_difference, phase_error, ErrorReport, Stats,
};

use crate::error::{Error, Result};
use crate::features::{build_upper_feature, despike_recording, ChangeRateBand};
use crate::gait::{segment_cycles, GaitRecording, SegmentConfig};
use crate::mapping::{apply_map, LinearMap};
use crate::restoration::{restore_at, solve_weights, ReferenceSet};

/// Default playback period when none is configured (seconds).
pub const DEFAULT_NOMINAL_PERIOD_S: f64 = 1.1;

/// Settings for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// Segmentation settings shared with training.
    pub segment: SegmentConfig,
    /// Fixed playback period of the output device (seconds).
    pub nominal_period_s: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            segment: SegmentConfig::default(),
            nominal_period_s: DEFAULT_NOMINAL_PERIOD_S,
        }
    }
}

impl SimulationConfig {
    /// Rejects non-positive or non-finite playback periods.
    pub fn validate(&self) -> Result<()> {
        self.segment.validate()?;
        if !self.nominal_period_s.is_finite() || self.nominal_period_s <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "nominal period must be positive and finite, got {}",
                self.nominal_period_s
            )));
        }
        Ok(())
    }
}

/// One emitted lower-limb trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    /// Index of the input cycle whose features produced this output.
    pub input_cycle: usize,
    /// Cycle during which the output plays; always `input_cycle + 1`.
    pub emit_cycle: usize,
    /// Session time at which playback starts (end of the input cycle).
    pub emit_time_s: f64,
    /// Wall-clock duration the curves are stretched over (seconds):
    /// the emit cycle's measured period, or the nominal period when the
    /// recording ends before the emit cycle does.
    pub period_s: f64,
    /// Mapped lower feature vector `y' = Tx + b`.
    pub mapped: [f64; 4],
    /// Restoration blend weights solved from `y'`.
    pub weights: [f64; 4],
    /// Whether the reference matrix was flagged as ill-conditioned.
    pub ill_conditioned: bool,
    /// Restored hip curve on the phase grid.
    pub hip: Vec<f64>,
    /// Restored knee curve on the phase grid.
    pub knee: Vec<f64>,
}

/// Everything one pipeline run produces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineOutput {
    /// One entry per successfully featured input cycle, in cycle order.
    pub emissions: Vec<Emission>,
    /// Input cycles skipped because feature extraction found no valid
    /// extremum (the previous trajectory is held on the device).
    pub skipped: Vec<usize>,
    /// Phase-grid resolution shared by all emitted curves.
    pub n_grid: usize,
    /// Raw samples repaired by the spike filter before segmentation.
    pub repaired_samples: usize,
}

/// Runs the full per-cycle pipeline over a recording.
///
/// Output curve `k` of the emission for input cycle `j` samples the
/// restored trajectory at phase `((k/N) * D_j) / T0 mod 1`, where `D_j`
/// is the emit cycle's duration and `T0` the nominal playback period:
/// the device plays at its own fixed rate while the grid spans the
/// wearer's actual cycle. Extraction failures of the
/// [`Error::FeatureIncomplete`] kind skip the cycle; structural errors
/// (unsegmentable recording, singular references) abort the run.
pub fn run_pipeline(
    recording: &GaitRecording,
    band: &ChangeRateBand,
    map: &LinearMap,
    refs: &ReferenceSet,
    config: &SimulationConfig,
) -> Result<PipelineOutput> {
    config.validate()?;
    let (clean, repaired_samples) = despike_recording(recording, band)?;
    let cycles = segment_cycles(&clean, &config.segment)?;
    let n = config.segment.n_grid;
    let mut emissions = Vec::with_capacity(cycles.len());
    let mut skipped = Vec::new();
    for (j, cycle) in cycles.iter().enumerate() {
        let x = match build_upper_feature(cycle, band) {
            Ok(x) => x,
            Err(Error::FeatureIncomplete(_)) => {
                skipped.push(cycle.index);
                continue;
            }
            Err(e) => return Err(e),
        };
        let mapped = apply_map(map, &x);
        let weights = solve_weights(&mapped, refs)?;
        let period_s = cycles
            .get(j + 1)
            .map(|next| next.period)
            .unwrap_or(config.nominal_period_s);
        let mut hip = Vec::with_capacity(n);
        let mut knee = Vec::with_capacity(n);
        for k in 0..n {
            let phase = (k as f64 / n as f64 * period_s / config.nominal_period_s).fract();
            let (h, kn) = restore_at(&weights, refs, phase);
            hip.push(h);
            knee.push(kn);
        }
        emissions.push(Emission {
            input_cycle: cycle.index,
            emit_cycle: cycle.index + 1,
            emit_time_s: cycle.end_sample as f64 / clean.sample_rate(),
            period_s,
            mapped,
            weights: weights.a,
            ill_conditioned: weights.ill_conditioned,
            hip,
            knee,
        });
    }
    Ok(PipelineOutput {
        emissions,
        skipped,
        n_grid: n,
        repaired_samples,
    })
}

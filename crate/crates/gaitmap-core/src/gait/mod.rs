//! Gait recordings, cycle segmentation, and phase-grid resampling.
//!
//! A [`GaitRecording`] holds four equally long joint-angle traces sampled at
//! a common rate. [`segment_cycles`] slices it into per-cycle curves, each
//! resampled onto a fixed `N`-point phase grid so that downstream stages can
//! treat every cycle as a function of normalized phase in `[0, 1)`.
//!
//! Cycle boundaries are ascending zero crossings of the smoothed,
//! mean-removed hip trace. The smoothing window is 5% of the estimated
//! period by default; the period itself is bootstrapped from the dominant
//! positive lag of the biased autocorrelation.

pub mod io;
pub mod synth;

use crate::error::{Error, Result};
use crate::joints::{JointId, JointMap};
use crate::stats;

/// A single joint's angle trace in degrees at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTrace {
    pub joint: JointId,
    pub samples: Vec<f64>,
    pub sample_rate: f64,
}

impl JointTrace {
    /// Creates a trace after validating rate and sample finiteness.
    pub fn new(joint: JointId, samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidParams(format!(
                "sample_rate must be positive and finite, got {sample_rate}"
            )));
        }
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(pos) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { line: pos });
        }
        Ok(JointTrace {
            joint,
            samples,
            sample_rate,
        })
    }

    /// Trace duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

/// Four synchronized joint traces sharing one sample rate and length.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitRecording {
    samples: JointMap<Vec<f64>>,
    sample_rate: f64,
}

impl GaitRecording {
    /// Assembles a recording from one trace per joint (any order).
    ///
    /// Fails with [`Error::InconsistentLength`] when lengths differ, and
    /// with [`Error::InvalidParams`] on duplicate joints or rate mismatch.
    pub fn new(traces: [JointTrace; 4]) -> Result<Self> {
        let mut slots: [Option<JointTrace>; 4] = [None, None, None, None];
        for trace in traces {
            let idx = trace.joint.index();
            if slots[idx].is_some() {
                return Err(Error::InvalidParams(format!(
                    "duplicate trace for joint `{}`",
                    trace.joint
                )));
            }
            slots[idx] = Some(trace);
        }
        let traces = slots.map(|s| s.expect("all four joints present"));
        let rate = traces[0].sample_rate;
        let len = traces[0].samples.len();
        for t in &traces {
            if t.sample_rate != rate {
                return Err(Error::InvalidParams(
                    "traces disagree on sample rate".into(),
                ));
            }
            if t.samples.len() != len {
                return Err(Error::InconsistentLength);
            }
        }
        let [s, e, h, k] = traces;
        Ok(GaitRecording {
            samples: JointMap::new([s.samples, e.samples, h.samples, k.samples]),
            sample_rate: rate,
        })
    }

    /// Assembles a recording directly from per-joint sample vectors.
    pub fn from_samples(samples: JointMap<Vec<f64>>, sample_rate: f64) -> Result<Self> {
        let [s, e, h, k] = samples.into_inner();
        Self::new([
            JointTrace::new(JointId::Shoulder, s, sample_rate)?,
            JointTrace::new(JointId::Elbow, e, sample_rate)?,
            JointTrace::new(JointId::Hip, h, sample_rate)?,
            JointTrace::new(JointId::Knee, k, sample_rate)?,
        ])
    }

    /// Samples of a single joint.
    pub fn samples(&self, joint: JointId) -> &[f64] {
        &self.samples[joint]
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    /// Number of samples per trace.
    pub fn len(&self) -> usize {
        self.samples[JointId::Shoulder].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Recording duration in seconds.
    pub fn duration(&self) -> f64 {
        self.len() as f64 / self.sample_rate
    }
}

/// One segmented gait cycle with all four joints on a common phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitCycle {
    /// Position of this cycle within the recording (0-based).
    pub index: usize,
    /// First sample of the cycle in the source recording (inclusive).
    pub start_sample: usize,
    /// One past the last sample of the cycle (exclusive).
    pub end_sample: usize,
    /// Cycle duration in seconds.
    pub period: f64,
    /// Per-joint curves, each `n_grid` samples over phase `[0, 1)`.
    pub curves: JointMap<Vec<f64>>,
}

impl GaitCycle {
    /// Number of phase-grid points per curve.
    pub fn n_grid(&self) -> usize {
        self.curves[JointId::Hip].len()
    }

    /// Curve of a single joint.
    pub fn curve(&self, joint: JointId) -> &[f64] {
        &self.curves[joint]
    }
}

/// Tuning knobs for [`segment_cycles`].
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentConfig {
    /// Phase-grid resolution `N` for resampled cycles.
    pub n_grid: usize,
    /// Smoothing window as a fraction of the estimated period.
    pub smooth_frac: f64,
    /// Shortest plausible cycle period in seconds.
    pub min_period_s: f64,
    /// Longest plausible cycle period in seconds.
    pub max_period_s: f64,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        SegmentConfig {
            n_grid: 100,
            smooth_frac: 0.05,
            min_period_s: 0.3,
            max_period_s: 3.0,
        }
    }
}

impl SegmentConfig {
    /// Validates ranges; called by every consumer of the config.
    pub fn validate(&self) -> Result<()> {
        if self.n_grid < 2 {
            return Err(Error::InvalidParams("n_grid must be at least 2".into()));
        }
        if !(self.smooth_frac > 0.0 && self.smooth_frac < 0.5) {
            return Err(Error::InvalidParams(
                "smooth_frac must lie in (0, 0.5)".into(),
            ));
        }
        if !(self.min_period_s > 0.0 && self.min_period_s < self.max_period_s) {
            return Err(Error::InvalidParams(
                "period bounds must satisfy 0 < min < max".into(),
            ));
        }
        Ok(())
    }
}

/// Estimates the dominant cycle period of `trace` in samples.
///
/// Uses the biased autocorrelation of the mean-removed trace and returns the
/// lag with the largest positive correlation within the configured period
/// bounds. Fails with [`Error::FlatSignal`] when the trace has essentially
/// no oscillation and [`Error::NoCyclesFound`] when the recording is too
/// short to contain one period.
pub fn estimate_period_samples(
    trace: &[f64],
    sample_rate: f64,
    config: &SegmentConfig,
) -> Result<usize> {
    config.validate()?;
    let n = trace.len();
    let (min_v, max_v) = trace
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if n == 0 || max_v - min_v < 1e-9 {
        return Err(Error::FlatSignal);
    }

    let m = stats::mean(trace);
    let z: Vec<f64> = trace.iter().map(|v| v - m).collect();

    let min_lag = ((config.min_period_s * sample_rate).round() as usize).max(2);
    let max_lag = ((config.max_period_s * sample_rate).round() as usize).min(n / 2);
    if min_lag >= max_lag {
        return Err(Error::NoCyclesFound);
    }

    let mut best_lag = 0;
    let mut best_corr = f64::NEG_INFINITY;
    for lag in min_lag..=max_lag {
        let corr: f64 = (0..n - lag).map(|i| z[i] * z[i + lag]).sum();
        if corr > best_corr {
            best_corr = corr;
            best_lag = lag;
        }
    }
    if best_corr <= 0.0 {
        return Err(Error::NoCyclesFound);
    }
    Ok(best_lag)
}

/// Splits a recording into gait cycles aligned on hip zero crossings.
///
/// The hip trace is median-3 filtered (kills isolated one-sample spikes that
/// would otherwise survive averaging and shift boundaries), smoothed with a
/// centered moving average whose window is `smooth_frac` of the estimated
/// period, and mean-removed. Every ascending zero crossing marks a cycle
/// boundary; crossings closer than half a period to the previous one are
/// dropped as noise re-crossings. Partial leading and trailing cycles are
/// discarded. Each accepted cycle is resampled onto the `n_grid` phase grid
/// from the *raw* samples of all four joints.
pub fn segment_cycles(recording: &GaitRecording, config: &SegmentConfig) -> Result<Vec<GaitCycle>> {
    config.validate()?;
    let hip = recording.samples(JointId::Hip);
    let filtered = stats::median3(hip);
    let period = estimate_period_samples(&filtered, recording.sample_rate(), config)?;

    let window = ((period as f64 * config.smooth_frac).round() as usize).max(1);
    let smoothed = stats::moving_average(&filtered, window);
    let m = stats::mean(&smoothed);
    let z: Vec<f64> = smoothed.iter().map(|v| v - m).collect();

    let mut boundaries: Vec<usize> = Vec::new();
    for i in 0..z.len().saturating_sub(1) {
        if z[i] < 0.0 && z[i + 1] >= 0.0 {
            let crossing = i + 1;
            if boundaries
                .last()
                .is_none_or(|&last| crossing - last >= period / 2)
            {
                boundaries.push(crossing);
            }
        }
    }
    if boundaries.len() < 2 {
        return Err(Error::NoCyclesFound);
    }

    let mut cycles = Vec::with_capacity(boundaries.len() - 1);
    for (index, pair) in boundaries.windows(2).enumerate() {
        let (start, end) = (pair[0], pair[1]);
        let curves = JointMap::from_fn(|j| &recording.samples(j)[start..end])
            .map(|_, slice| resample_cycle(slice, config.n_grid))
            .into_inner();
        let [s, e, h, k] = curves;
        cycles.push(GaitCycle {
            index,
            start_sample: start,
            end_sample: end,
            period: (end - start) as f64 / recording.sample_rate(),
            curves: JointMap::new([s?, e?, h?, k?]),
        });
    }
    Ok(cycles)
}

/// Resamples one cycle's samples onto an `n`-point phase grid.
///
/// Grid point `i` sits at phase `i / n`; sample `j` of the input sits at
/// phase `j / len`. Values between samples are linearly interpolated, and
/// phases beyond the last sample extrapolate the final segment (the next
/// cycle's first sample is not available). The input must contain at least
/// two samples and the output keeps curve values within interpolation
/// accuracy, so min/max never move by more than the local sample spacing.
pub fn resample_cycle(samples: &[f64], n: usize) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(Error::SliceTooShort);
    }
    if n < 2 {
        return Err(Error::InvalidParams("n_grid must be at least 2".into()));
    }
    let len = samples.len() as f64;
    let last = samples.len() - 1;
    Ok((0..n)
        .map(|i| {
            let u = i as f64 * len / n as f64;
            let base = (u.floor() as usize).min(last);
            if base < last {
                let frac = u - base as f64;
                samples[base] + frac * (samples[base + 1] - samples[base])
            } else {
                // extrapolate the final segment for phases past the last sample
                let frac = u - last as f64;
                samples[last] + frac * (samples[last] - samples[last - 1])
            }
        })
        .collect())
}

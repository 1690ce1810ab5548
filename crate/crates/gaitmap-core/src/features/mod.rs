//! Per-cycle trough/peak features with disturbance-robust extraction.
//!
//! Every cycle reduces to two feature vectors:
//!
//! * upper `x = (shoulder trough, shoulder peak, elbow trough, elbow peak)`
//! * lower `y = (hip trough, hip peak, knee peak, knee trough)`
//!
//! all in degrees. Extraction must not latch onto disturbances (sensor
//! spikes, bumps), so candidates are filtered by a per-joint change-rate
//! band plus phase windows:
//!
//! * **Spike repair.** Impulsive spikes produce characteristic
//!   first-difference signatures (consecutive out-of-band differences with
//!   opposite signs). Affected samples are replaced by local Lagrange
//!   interpolation through clean neighbours before any candidate search.
//!   [`repair_spikes`] works on raw traces (run it via
//!   [`despike_recording`] before segmentation — resampling smears an
//!   impulse across grid points, which is much harder to undo); the same
//!   routine runs again on each phase-grid curve inside [`extract_extrema`].
//! * **Flank rejection.** A surviving extremum candidate is discarded when
//!   the maximum |rate| within two samples on either flank exceeds
//!   `upper_rate` (disturbance), or when both flanks stay below
//!   `lower_rate` (stagnation plateau, not a real turning point).
//! * **Phase windows.** Candidates outside the joint's trained trough/peak
//!   phase window are ignored. Windows default to the full cycle.
//!
//! The earliest surviving trough and earliest surviving peak (in phase
//! order) become the feature components.

pub mod io;

use crate::error::{Error, Result};
use crate::gait::{GaitCycle, GaitRecording};
use crate::joints::{JointId, JointMap};
use crate::stats;

/// Default lower percentile for [`fit_band`].
pub const DEFAULT_Q_LOW: f64 = 2.0;
/// Default upper percentile for [`fit_band`].
pub const DEFAULT_Q_HIGH: f64 = 98.0;
/// Half-width floor for fitted phase windows, in cycle fraction.
pub const WINDOW_HALF_WIDTH_FLOOR: f64 = 0.02;
/// Sigma multiple for fitted phase windows.
pub const WINDOW_SIGMA_MULTIPLE: f64 = 3.0;
/// Maximum spike-repair sweeps per curve; each sweep peels one layer of a
/// multi-sample disturbance.
const REPAIR_MAX_PASSES: usize = 5;

/// Inclusive phase interval within `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWindow {
    pub lo: f64,
    pub hi: f64,
}

impl PhaseWindow {
    /// Window covering the whole cycle.
    pub fn full() -> Self {
        PhaseWindow { lo: 0.0, hi: 1.0 }
    }

    pub fn contains(&self, phase: f64) -> bool {
        phase >= self.lo && phase <= self.hi
    }
}

/// Change-rate band and phase windows for one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointBand {
    /// Rates below this (on both flanks) mark a stagnant candidate, deg/s.
    pub lower_rate: f64,
    /// Rates above this (on either flank) mark a disturbance, deg/s.
    pub upper_rate: f64,
    pub trough_window: PhaseWindow,
    pub peak_window: PhaseWindow,
}

impl JointBand {
    /// Band that accepts everything; useful before training.
    pub fn permissive() -> Self {
        JointBand {
            lower_rate: 0.0,
            upper_rate: f64::INFINITY,
            trough_window: PhaseWindow::full(),
            peak_window: PhaseWindow::full(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lower_rate >= 0.0 && self.lower_rate < self.upper_rate) {
            return Err(Error::InvalidParams(format!(
                "band must satisfy 0 <= lower < upper, got [{}, {}]",
                self.lower_rate, self.upper_rate
            )));
        }
        Ok(())
    }
}

/// Per-joint bands; the trained disturbance model of a recording corpus.
pub type ChangeRateBand = JointMap<JointBand>;

/// Band accepting everything for all joints.
pub fn permissive_band() -> ChangeRateBand {
    JointMap::from_fn(|_| JointBand::permissive())
}

/// Upper-limb feature vector of one cycle, degrees:
/// `(shoulder trough, shoulder peak, elbow trough, elbow peak)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperFeature {
    pub values: [f64; 4],
    pub cycle_index: usize,
}

/// Lower-limb feature vector of one cycle, degrees:
/// `(hip trough, hip peak, knee peak, knee trough)` — note the knee order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerFeature {
    pub values: [f64; 4],
    pub cycle_index: usize,
}

/// Joint-angle change rate in deg/s by finite differences: centered in the
/// interior, one-sided at the ends. Output has the input's length.
pub fn estimate_change_rate(curve: &[f64], sample_rate: f64) -> Result<Vec<f64>> {
    let n = curve.len();
    if n < 2 {
        return Err(Error::TooShort);
    }
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::InvalidParams("sample_rate must be positive".into()));
    }
    let mut rates = Vec::with_capacity(n);
    rates.push((curve[1] - curve[0]) * sample_rate);
    for i in 1..n - 1 {
        rates.push((curve[i + 1] - curve[i - 1]) * sample_rate / 2.0);
    }
    rates.push((curve[n - 1] - curve[n - 2]) * sample_rate);
    Ok(rates)
}

/// Fits per-joint change-rate bands from pooled |rate| percentiles.
///
/// `pooled` holds, per joint, every change-rate sample of the training
/// corpus. The band is `[q_low, q_high]` percentiles of the absolute rates;
/// phase windows stay full (tighten them with [`fit_phase_windows`]).
pub fn fit_band(pooled: &JointMap<Vec<f64>>, q_low: f64, q_high: f64) -> Result<ChangeRateBand> {
    if !(0.0 <= q_low && q_low < q_high && q_high <= 100.0) {
        return Err(Error::InvalidParams(format!(
            "percentiles must satisfy 0 <= low < high <= 100, got ({q_low}, {q_high})"
        )));
    }
    let mut bands = Vec::with_capacity(4);
    for j in JointId::ALL {
        let abs: Vec<f64> = pooled[j].iter().map(|r| r.abs()).collect();
        let lower = stats::percentile(&abs, q_low).ok_or(Error::EmptyInput)?;
        let upper = stats::percentile(&abs, q_high).ok_or(Error::EmptyInput)?;
        if upper <= lower {
            return Err(Error::DegenerateDistribution);
        }
        bands.push(JointBand {
            lower_rate: lower,
            upper_rate: upper,
            trough_window: PhaseWindow::full(),
            peak_window: PhaseWindow::full(),
        });
    }
    let [s, e, h, k] = <[JointBand; 4]>::try_from(bands).expect("four joints");
    Ok(JointMap::new([s, e, h, k]))
}

/// Repairs impulsive spikes in one trace; returns the cleaned trace and the
/// number of repaired samples.
///
/// A spike shows up in the first differences as out-of-band steps of
/// opposite sign in immediate succession (or separated by one in-band step
/// when two adjacent samples are displaced together). Matched samples are
/// replaced by Lagrange interpolation through up to four clean neighbours.
/// Sweeps repeat until no signature remains, so partially overlapping
/// disturbances peel away layer by layer. A plain step (single out-of-band
/// difference) is *not* repaired — flank rejection handles it.
pub fn repair_spikes(samples: &[f64], sample_rate: f64, upper_rate: f64) -> (Vec<f64>, usize) {
    let n = samples.len();
    if n < 3 || !upper_rate.is_finite() {
        return (samples.to_vec(), 0);
    }
    let mut out = samples.to_vec();
    let mut total = 0usize;
    for _ in 0..REPAIR_MAX_PASSES {
        let d: Vec<f64> = out
            .windows(2)
            .map(|w| (w[1] - w[0]) * sample_rate)
            .collect();
        let hot = |i: usize| d[i].abs() > upper_rate;
        let mut marked = vec![false; n];
        let mut i = 0;
        while i + 1 < d.len() {
            if hot(i) && hot(i + 1) && d[i] * d[i + 1] < 0.0 {
                marked[i + 1] = true;
                i += 2;
            } else if i + 2 < d.len()
                && hot(i)
                && !hot(i + 1)
                && hot(i + 2)
                && d[i] * d[i + 2] < 0.0
            {
                marked[i + 1] = true;
                marked[i + 2] = true;
                i += 3;
            } else {
                i += 1;
            }
        }
        let count = marked.iter().filter(|&&m| m).count();
        if count == 0 {
            break;
        }
        total += count;
        let reference = out.clone();
        for idx in 0..n {
            if marked[idx] {
                out[idx] = patch(&reference, &marked, idx);
            }
        }
    }
    (out, total)
}

/// Lagrange interpolation through the nearest clean samples around `i`
/// (up to two on each side).
fn patch(samples: &[f64], marked: &[bool], i: usize) -> f64 {
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(4);
    let mut j = i;
    let mut taken = 0;
    while j > 0 && taken < 2 {
        j -= 1;
        if !marked[j] {
            nodes.push((j as f64, samples[j]));
            taken += 1;
        }
    }
    let mut j = i;
    let mut taken = 0;
    while j + 1 < samples.len() && taken < 2 {
        j += 1;
        if !marked[j] {
            nodes.push((j as f64, samples[j]));
            taken += 1;
        }
    }
    match nodes.len() {
        0 => samples[i],
        1 => nodes[0].1,
        _ => {
            let x = i as f64;
            let mut acc = 0.0;
            for (a, &(xa, ya)) in nodes.iter().enumerate() {
                let mut weight = 1.0;
                for (b, &(xb, _)) in nodes.iter().enumerate() {
                    if a != b {
                        weight *= (x - xb) / (xa - xb);
                    }
                }
                acc += weight * ya;
            }
            acc
        }
    }
}

/// Repairs spikes on all four raw traces of a recording.
///
/// Run this with a fitted band before (re-)segmenting: on raw traces a
/// spike is a single full-magnitude sample with an unambiguous signature,
/// whereas after phase-grid resampling it smears into partial-weight
/// contamination of neighbouring grid points.
pub fn despike_recording(
    recording: &GaitRecording,
    band: &ChangeRateBand,
) -> Result<(GaitRecording, usize)> {
    let mut repaired = 0usize;
    let samples = JointMap::from_fn(|j| {
        let (cleaned, count) = repair_spikes(
            recording.samples(j),
            recording.sample_rate(),
            band[j].upper_rate,
        );
        repaired += count;
        cleaned
    });
    Ok((
        GaitRecording::from_samples(samples, recording.sample_rate())?,
        repaired,
    ))
}

/// One surviving extremum candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Grid index within the curve.
    pub index: usize,
    /// Phase in `[0, 1)` (index / curve length).
    pub phase: f64,
    /// Angle in degrees (after spike repair).
    pub value: f64,
}

/// All surviving extrema of one curve, in phase order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtremaScan {
    pub troughs: Vec<Extremum>,
    pub peaks: Vec<Extremum>,
    /// Samples replaced by spike repair before the candidate search.
    pub repaired: usize,
}

/// Scans a curve for band-surviving local extrema.
///
/// See the module docs for the three filters (spike repair, flank
/// rejection, phase windows). Local extrema are strict against the left
/// neighbour and non-strict against the right, so a plateau counts once at
/// its first sample and exact ties resolve to the lower index.
pub fn scan_extrema(curve: &[f64], band: &JointBand, sample_rate: f64) -> Result<ExtremaScan> {
    band.validate()?;
    let n = curve.len();
    if n < 5 {
        return Err(Error::TooShort);
    }
    let (cleaned, repaired) = repair_spikes(curve, sample_rate, band.upper_rate);
    let rates = estimate_change_rate(&cleaned, sample_rate)?;

    let mut scan = ExtremaScan {
        repaired,
        ..ExtremaScan::default()
    };
    for i in 1..n - 1 {
        let is_peak = cleaned[i] > cleaned[i - 1] && cleaned[i] >= cleaned[i + 1];
        let is_trough = cleaned[i] < cleaned[i - 1] && cleaned[i] <= cleaned[i + 1];
        if !is_peak && !is_trough {
            continue;
        }
        let left = rates[i.saturating_sub(2)..i]
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        let right = rates[i + 1..(i + 3).min(n)]
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        if left.max(right) > band.upper_rate {
            continue; // disturbance flank
        }
        if left < band.lower_rate && right < band.lower_rate {
            continue; // stagnation plateau
        }
        let phase = i as f64 / n as f64;
        let window = if is_peak {
            &band.peak_window
        } else {
            &band.trough_window
        };
        if !window.contains(phase) {
            continue;
        }
        let e = Extremum {
            index: i,
            phase,
            value: cleaned[i],
        };
        if is_peak {
            scan.peaks.push(e);
        } else {
            scan.troughs.push(e);
        }
    }
    Ok(scan)
}

/// Extracts `(trough value, peak value)` of one curve: the earliest
/// surviving trough and peak in phase order.
pub fn extract_extrema(curve: &[f64], band: &JointBand, sample_rate: f64) -> Result<(f64, f64)> {
    let scan = scan_extrema(curve, band, sample_rate)?;
    let trough = scan
        .troughs
        .first()
        .ok_or_else(|| Error::FeatureIncomplete("no surviving trough".into()))?;
    let peak = scan
        .peaks
        .first()
        .ok_or_else(|| Error::FeatureIncomplete("no surviving peak".into()))?;
    Ok((trough.value, peak.value))
}

fn joint_extrema(cycle: &GaitCycle, band: &ChangeRateBand, joint: JointId) -> Result<(f64, f64)> {
    let sample_rate = cycle.n_grid() as f64 / cycle.period;
    extract_extrema(cycle.curve(joint), &band[joint], sample_rate).map_err(|e| match e {
        Error::FeatureIncomplete(msg) => {
            Error::FeatureIncomplete(format!("cycle {} {joint}: {msg}", cycle.index))
        }
        other => other,
    })
}

/// Builds the upper-limb feature vector of one cycle.
pub fn build_upper_feature(cycle: &GaitCycle, band: &ChangeRateBand) -> Result<UpperFeature> {
    let (st, sp) = joint_extrema(cycle, band, JointId::Shoulder)?;
    let (et, ep) = joint_extrema(cycle, band, JointId::Elbow)?;
    for (joint, t, p) in [(JointId::Shoulder, st, sp), (JointId::Elbow, et, ep)] {
        if t > p {
            return Err(Error::FeatureIncomplete(format!(
                "cycle {} {joint}: trough {t:.3} above peak {p:.3}",
                cycle.index
            )));
        }
    }
    Ok(UpperFeature {
        values: [st, sp, et, ep],
        cycle_index: cycle.index,
    })
}

/// Builds the lower-limb feature vector of one cycle (knee peak before
/// knee trough, per the feature layout).
pub fn build_lower_feature(cycle: &GaitCycle, band: &ChangeRateBand) -> Result<LowerFeature> {
    let (ht, hp) = joint_extrema(cycle, band, JointId::Hip)?;
    let (kt, kp) = joint_extrema(cycle, band, JointId::Knee)?;
    for (joint, t, p) in [(JointId::Hip, ht, hp), (JointId::Knee, kt, kp)] {
        if t > p {
            return Err(Error::FeatureIncomplete(format!(
                "cycle {} {joint}: trough {t:.3} above peak {p:.3}",
                cycle.index
            )));
        }
    }
    Ok(LowerFeature {
        values: [ht, hp, kp, kt],
        cycle_index: cycle.index,
    })
}

/// Tightens phase windows from training cycles: per joint, the window is
/// the mean extremum phase ± max(3σ, 0.02), clamped to `[0, 1]`.
///
/// Rates in the returned band are copied from the input band unchanged.
/// Cycles whose extrema cannot be extracted are skipped; at least one
/// usable cycle per joint is required.
pub fn fit_phase_windows(cycles: &[GaitCycle], band: &ChangeRateBand) -> Result<ChangeRateBand> {
    if cycles.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = band.clone();
    for j in JointId::ALL {
        let mut trough_phases = Vec::new();
        let mut peak_phases = Vec::new();
        for cycle in cycles {
            let sample_rate = cycle.n_grid() as f64 / cycle.period;
            let Ok(scan) = scan_extrema(cycle.curve(j), &band[j], sample_rate) else {
                continue;
            };
            if let (Some(t), Some(p)) = (scan.troughs.first(), scan.peaks.first()) {
                trough_phases.push(t.phase);
                peak_phases.push(p.phase);
            }
        }
        if trough_phases.is_empty() {
            return Err(Error::FeatureIncomplete(format!(
                "no training extrema for joint `{j}`"
            )));
        }
        out[j].trough_window = window_around(&trough_phases);
        out[j].peak_window = window_around(&peak_phases);
    }
    Ok(out)
}

fn window_around(phases: &[f64]) -> PhaseWindow {
    let (mean, std) = stats::mean_std(phases);
    let half = (WINDOW_SIGMA_MULTIPLE * std).max(WINDOW_HALF_WIDTH_FLOOR);
    PhaseWindow {
        lo: (mean - half).max(0.0),
        hi: (mean + half).min(1.0),
    }
}

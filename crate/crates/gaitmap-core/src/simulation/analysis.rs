//! Phase and amplitude error analyses over pipeline output.
//!
//! Restoration error splits into two parts, measured per cycle against
//! the original recording:
//!
//! - **phase error** — circular cross-correlation lag between the emitted
//!   curve and the lower-limb curve of its *input* cycle (the emission
//!   replays the preceding cycle's content, so that cycle is the natural
//!   reference), expressed as a signed fraction of a period in
//!   (−0.5, 0.5]; positive means the output lags the original,
//! - **amplitude error** — pointwise differences per joint after undoing
//!   the measured integer-step lag, pooled over all compared cycles.
//!
//! Coordination is judged separately: the **phase difference** between
//! the emitted hip curve and the shoulder curve of the cycle it plays in,
//! next to the same statistic on the original recording (hip vs shoulder
//! per cycle) as the natural-walking baseline.
//!
//! The per-cycle lag is measured on the hip curve and the same shift is
//! applied to both joints when compensating: the emission is a single
//! time-warped trajectory, so its joints share one playback offset.

use crate::error::{Error, Result};
use crate::gait::GaitCycle;
use crate::joints::JointId;
use crate::simulation::PipelineOutput;
use crate::stats::mean_std;

/// Mean and population standard deviation of one pooled quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
}

impl Stats {
    fn from_values(values: &[f64]) -> Stats {
        let (mean, std) = mean_std(values);
        Stats { mean, std }
    }
}

/// Collected error analyses of one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// Phase error of the emitted trajectory (fraction of a period).
    pub phase: Stats,
    /// Hip amplitude error after lag compensation (degrees).
    pub amplitude_hip: Stats,
    /// Knee amplitude error after lag compensation (degrees).
    pub amplitude_knee: Stats,
    /// Upper-lower phase difference of the emitted trajectory (fraction).
    pub phase_difference: Stats,
    /// The same statistic on the original recording (fraction).
    pub phase_difference_baseline: Stats,
    /// Number of (emission, original cycle) pairs behind the statistics.
    pub pairs: usize,
}

/// Integer-step circular lag of `signal` relative to `reference`.
///
/// Maximizes `c(L) = sum_k signal[(k+L) mod n] * reference[k]` over
/// mean-removed copies, for `L` in (−n/2, n/2]. Ties keep the smallest
/// |L|, preferring the positive sign, so a flat correlation reports lag
/// zero rather than an arbitrary offset.
fn circular_lag_steps(signal: &[f64], reference: &[f64]) -> Result<isize> {
    if signal.len() != reference.len() {
        return Err(Error::InconsistentLength);
    }
    let n = signal.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let centre = |xs: &[f64]| -> Vec<f64> {
        let m = xs.iter().sum::<f64>() / n as f64;
        xs.iter().map(|x| x - m).collect()
    };
    let sig = centre(signal);
    let rf = centre(reference);
    let score = |lag: isize| -> f64 {
        (0..n)
            .map(|k| {
                let shifted = (k as isize + lag).rem_euclid(n as isize) as usize;
                sig[shifted] * rf[k]
            })
            .sum()
    };
    let mut best_lag = 0isize;
    let mut best = score(0);
    for m in 1..=(n / 2) {
        let lag = m as isize;
        let c = score(lag);
        if c > best {
            best = c;
            best_lag = lag;
        }
        if 2 * m < n {
            let c = score(-lag);
            if c > best {
                best = c;
                best_lag = -lag;
            }
        }
    }
    Ok(best_lag)
}

/// Circular lag of `signal` relative to `reference` as a signed fraction
/// of the period, in (−0.5, 0.5]. Positive means `signal` lags.
pub fn circular_lag(signal: &[f64], reference: &[f64]) -> Result<f64> {
    let steps = circular_lag_steps(signal, reference)?;
    Ok(steps as f64 / signal.len() as f64)
}

/// Pairs every emission with the original cycle it was derived from.
fn paired<'a>(
    output: &'a PipelineOutput,
    cycles: &'a [GaitCycle],
) -> Vec<(&'a crate::simulation::Emission, &'a GaitCycle)> {
    output
        .emissions
        .iter()
        .filter_map(|e| {
            cycles
                .iter()
                .find(|c| c.index == e.input_cycle)
                .map(|c| (e, c))
        })
        .collect()
}

fn require_pairs<T>(pairs: &[T]) -> Result<()> {
    if pairs.len() < 2 {
        return Err(Error::TooFewCycles {
            needed: 2,
            got: pairs.len(),
        });
    }
    Ok(())
}

/// Per-cycle phase error of the emitted trajectory (hip curve vs the
/// input cycle's original hip curve), aggregated over all compared pairs.
pub fn phase_error(output: &PipelineOutput, cycles: &[GaitCycle]) -> Result<Stats> {
    let pairs = paired(output, cycles);
    require_pairs(&pairs)?;
    let lags = pairs
        .iter()
        .map(|(e, c)| circular_lag(&e.hip, c.curve(JointId::Hip)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Stats::from_values(&lags))
}

/// Per-joint amplitude error after undoing each cycle's measured lag.
///
/// Returns `(hip, knee)` statistics pooled over every compared sample.
pub fn amplitude_error(output: &PipelineOutput, cycles: &[GaitCycle]) -> Result<(Stats, Stats)> {
    let pairs = paired(output, cycles);
    require_pairs(&pairs)?;
    let mut hip_diffs = Vec::new();
    let mut knee_diffs = Vec::new();
    for (e, c) in &pairs {
        let lag = circular_lag_steps(&e.hip, c.curve(JointId::Hip))?;
        let n = e.hip.len() as isize;
        for k in 0..e.hip.len() {
            let shifted = (k as isize + lag).rem_euclid(n) as usize;
            hip_diffs.push(e.hip[shifted] - c.curve(JointId::Hip)[k]);
            knee_diffs.push(e.knee[shifted] - c.curve(JointId::Knee)[k]);
        }
    }
    Ok((
        Stats::from_values(&hip_diffs),
        Stats::from_values(&knee_diffs),
    ))
}

/// Upper-lower coordination: lag of the emitted hip curve behind the
/// shoulder curve of the cycle it plays in, next to the same statistic
/// taken on the original recording (per-cycle hip vs shoulder).
///
/// Returns `(pipeline, baseline)`.
pub fn phase_difference(output: &PipelineOutput, cycles: &[GaitCycle]) -> Result<(Stats, Stats)> {
    let live: Vec<f64> = output
        .emissions
        .iter()
        .filter_map(|e| {
            cycles
                .iter()
                .find(|c| c.index == e.emit_cycle)
                .map(|c| circular_lag(&e.hip, c.curve(JointId::Shoulder)))
        })
        .collect::<Result<_>>()?;
    require_pairs(&live)?;
    let baseline: Vec<f64> = cycles
        .iter()
        .map(|c| circular_lag(c.curve(JointId::Hip), c.curve(JointId::Shoulder)))
        .collect::<Result<_>>()?;
    require_pairs(&baseline)?;
    Ok((Stats::from_values(&live), Stats::from_values(&baseline)))
}

/// Assembles the full error report for one pipeline run.
pub fn error_report(output: &PipelineOutput, cycles: &[GaitCycle]) -> Result<ErrorReport> {
    let phase = phase_error(output, cycles)?;
    let (amplitude_hip, amplitude_knee) = amplitude_error(output, cycles)?;
    let (diff, baseline) = phase_difference(output, cycles)?;
    Ok(ErrorReport {
        phase,
        amplitude_hip,
        amplitude_knee,
        phase_difference: diff,
        phase_difference_baseline: baseline,
        pairs: paired(output, cycles).len(),
    })
}

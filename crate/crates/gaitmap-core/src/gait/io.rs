//! Recording and sidecar-metadata CSV formats.
//!
//! Recording layout (LF line endings, shortest-round-trip floats):
//!
//! ```text
//! # sample_rate_hz=100
//! time_s,shoulder_deg,elbow_deg,hip_deg,knee_deg
//! 0,4.99,-24.9,18.01,-54.97
//! ...
//! ```
//!
//! The sidecar (`<stem>.meta.csv`) carries ground truth for synthetic
//! recordings: one row per cycle with sample boundaries and true extrema in
//! feature order (trough before peak for shoulder/elbow/hip, peak before
//! trough for the knee).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gait::synth::CycleMeta;
use crate::gait::GaitRecording;
use crate::joints::{JointId, JointMap};

const RATE_PREFIX: &str = "# sample_rate_hz=";
const RECORDING_COLUMNS: [&str; 5] = ["time_s", "shoulder_deg", "elbow_deg", "hip_deg", "knee_deg"];
const META_HEADER: &str = "cycle_index,start_sample,end_sample,\
shoulder_trough_deg,shoulder_peak_deg,elbow_trough_deg,elbow_peak_deg,\
hip_trough_deg,hip_peak_deg,knee_peak_deg,knee_trough_deg";

/// Serializes a recording to the CSV format above.
pub fn recording_to_string(recording: &GaitRecording) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{RATE_PREFIX}{}", recording.sample_rate());
    out.push_str("time_s,shoulder_deg,elbow_deg,hip_deg,knee_deg\n");
    let rate = recording.sample_rate();
    for i in 0..recording.len() {
        let t = i as f64 / rate;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            t,
            recording.samples(JointId::Shoulder)[i],
            recording.samples(JointId::Elbow)[i],
            recording.samples(JointId::Hip)[i],
            recording.samples(JointId::Knee)[i],
        );
    }
    out
}

/// Writes a recording CSV to `path`.
pub fn write_recording(recording: &GaitRecording, path: &Path) -> Result<()> {
    fs::write(path, recording_to_string(recording))?;
    Ok(())
}

/// Parses a recording CSV produced by [`write_recording`] (column order in
/// the data header may vary; all five columns must be present).
pub fn load_recording(path: &Path) -> Result<GaitRecording> {
    let text = fs::read_to_string(path)?;
    parse_recording(&text)
}

fn parse_recording(text: &str) -> Result<GaitRecording> {
    let mut lines = text.lines();
    let rate_line = lines
        .next()
        .ok_or_else(|| Error::BadHeader("empty file".into()))?;
    let rate: f64 = rate_line
        .strip_prefix(RATE_PREFIX)
        .ok_or_else(|| Error::BadHeader(format!("expected `{RATE_PREFIX}<hz>`")))?
        .trim()
        .parse()
        .map_err(|_| Error::BadHeader("unparseable sample rate".into()))?;
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::BadHeader(format!("sample rate {rate} out of range")));
    }

    let header = lines
        .next()
        .ok_or_else(|| Error::BadHeader("missing column header".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let mut positions = [0usize; 5];
    for (slot, wanted) in RECORDING_COLUMNS.iter().enumerate() {
        positions[slot] = names
            .iter()
            .position(|n| n == wanted)
            .ok_or_else(|| Error::MissingColumn((*wanted).to_string()))?;
    }

    let mut columns: JointMap<Vec<f64>> = JointMap::from_fn(|_| Vec::new());
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(Error::NonFiniteValue { line: lineno + 3 });
        }
        for (slot, joint) in JointId::ALL.iter().enumerate() {
            let raw = fields[positions[slot + 1]];
            let value: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::NonFiniteValue { line: lineno + 3 })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { line: lineno + 3 });
            }
            columns[*joint].push(value);
        }
    }
    if columns[JointId::Hip].is_empty() {
        return Err(Error::EmptyInput);
    }
    GaitRecording::from_samples(columns, rate)
}

/// Sidecar path for a recording path: `walk.csv` -> `walk.meta.csv`.
pub fn sidecar_path(recording_path: &Path) -> PathBuf {
    recording_path.with_extension("meta.csv")
}

/// Serializes ground-truth cycle metadata.
pub fn cycle_meta_to_string(meta: &[CycleMeta]) -> String {
    let mut out = String::new();
    out.push_str(META_HEADER);
    out.push('\n');
    for m in meta {
        let (st, sp) = m.extrema[JointId::Shoulder];
        let (et, ep) = m.extrema[JointId::Elbow];
        let (ht, hp) = m.extrema[JointId::Hip];
        let (kt, kp) = m.extrema[JointId::Knee];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            m.cycle_index, m.start_sample, m.end_sample, st, sp, et, ep, ht, hp, kp, kt
        );
    }
    out
}

/// Writes sidecar metadata next to a recording.
pub fn write_cycle_meta(meta: &[CycleMeta], path: &Path) -> Result<()> {
    fs::write(path, cycle_meta_to_string(meta))?;
    Ok(())
}

/// Parses sidecar metadata written by [`write_cycle_meta`].
pub fn load_cycle_meta(path: &Path) -> Result<Vec<CycleMeta>> {
    let text = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse {
        path: display.clone(),
        msg: "empty file".into(),
    })?;
    if header != META_HEADER {
        return Err(Error::Parse {
            path: display,
            msg: "unexpected sidecar header".into(),
        });
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Parse {
                path: display,
                msg: format!("line {}: expected 11 fields", lineno + 2),
            });
        }
        let num = |i: usize| -> Result<f64> {
            fields[i].trim().parse().map_err(|_| Error::Parse {
                path: display.clone(),
                msg: format!("line {}: bad number `{}`", lineno + 2, fields[i]),
            })
        };
        let idx = |i: usize| -> Result<usize> {
            fields[i].trim().parse().map_err(|_| Error::Parse {
                path: display.clone(),
                msg: format!("line {}: bad index `{}`", lineno + 2, fields[i]),
            })
        };
        let extrema = JointMap::new([
            (num(3)?, num(4)?),
            (num(5)?, num(6)?),
            (num(7)?, num(8)?),
            (num(10)?, num(9)?), // knee columns are peak-then-trough
        ]);
        out.push(CycleMeta {
            cycle_index: idx(0)?,
            start_sample: idx(1)?,
            end_sample: idx(2)?,
            extrema,
        });
    }
    Ok(out)
}

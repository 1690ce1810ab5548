//! Change-rate band file format.
//!
//! One header line, then one row per joint:
//!
//! ```text
//! joint,lower_rate,upper_rate,trough_phase_lo,trough_phase_hi,peak_phase_lo,peak_phase_hi
//! shoulder,1.32,141.8,0.69,0.77,0.19,0.27
//! ...
//! ```
//!
//! Rates are deg/s, phases cycle fractions. Floats use shortest-round-trip
//! formatting; a written file loads back bit-identically.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{ChangeRateBand, JointBand, PhaseWindow};
use crate::joints::{JointId, JointMap};

const HEADER: &str =
    "joint,lower_rate,upper_rate,trough_phase_lo,trough_phase_hi,peak_phase_lo,peak_phase_hi";

/// Serializes a band to its file format.
pub fn band_to_string(band: &ChangeRateBand) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for j in JointId::ALL {
        let b = &band[j];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            j.name(),
            b.lower_rate,
            b.upper_rate,
            b.trough_window.lo,
            b.trough_window.hi,
            b.peak_window.lo,
            b.peak_window.hi
        );
    }
    out
}

/// Writes a band file.
pub fn write_band(band: &ChangeRateBand, path: &Path) -> Result<()> {
    fs::write(path, band_to_string(band))?;
    Ok(())
}

/// Loads a band file produced by [`write_band`]; rows may appear in any
/// order but all four joints must be present exactly once.
pub fn load_band(path: &Path) -> Result<ChangeRateBand> {
    let text = fs::read_to_string(path)?;
    parse_band(&text, &path.display().to_string())
}

fn parse_band(text: &str, origin: &str) -> Result<ChangeRateBand> {
    let err = |msg: String| Error::Parse {
        path: origin.to_string(),
        msg,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == HEADER => {}
        _ => return Err(err("unexpected or missing band header".into())),
    }
    let mut slots: [Option<JointBand>; 4] = [None; 4];
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(err(format!("line {}: expected 7 fields", lineno + 2)));
        }
        let joint = JointId::from_name(fields[0].trim()).ok_or_else(|| {
            err(format!(
                "line {}: unknown joint `{}`",
                lineno + 2,
                fields[0]
            ))
        })?;
        let mut nums = [0.0f64; 6];
        for (k, raw) in fields[1..].iter().enumerate() {
            nums[k] = raw
                .trim()
                .parse()
                .map_err(|_| err(format!("line {}: bad number `{raw}`", lineno + 2)))?;
        }
        if slots[joint.index()].is_some() {
            return Err(err(format!("duplicate row for joint `{joint}`")));
        }
        slots[joint.index()] = Some(JointBand {
            lower_rate: nums[0],
            upper_rate: nums[1],
            trough_window: PhaseWindow {
                lo: nums[2],
                hi: nums[3],
            },
            peak_window: PhaseWindow {
                lo: nums[4],
                hi: nums[5],
            },
        });
    }
    for j in JointId::ALL {
        if slots[j.index()].is_none() {
            return Err(Error::MissingColumn(j.name().to_string()));
        }
    }
    Ok(JointMap::from_fn(|j| slots[j.index()].unwrap()))
}

//! Plain-text persistence for [`ReferenceSet`].
//!
//! The file holds four blocks, one per reference, each three lines:
//!
//! ```text
//! ybar <v1> <v2> <v3> <v4>
//! fourier_hip <a0> <a1> <b1> ... <b_order>
//! fourier_knee <a0> <a1> <b1> ... <b_order>
//! ```
//!
//! Values are space separated, written with 17 significant digits so a
//! load/store round trip is bit exact. Blank lines between blocks are
//! ignored on load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::restoration::{FourierSeries, ReferenceSet};

/// Serializes a reference set into the block format.
pub fn refs_to_string(refs: &ReferenceSet) -> String {
    let mut out = String::new();
    for k in 0..4 {
        let _ = write!(out, "ybar");
        for v in &refs.vectors()[k] {
            let _ = write!(out, " {v:.17e}");
        }
        out.push('\n');
        for (label, series) in [
            ("fourier_hip", refs.hip_series(k)),
            ("fourier_knee", refs.knee_series(k)),
        ] {
            let _ = write!(out, "{label}");
            for c in series.coeffs() {
                let _ = write!(out, " {c:.17e}");
            }
            out.push('\n');
        }
        if k < 3 {
            out.push('\n');
        }
    }
    out
}

/// Writes a reference set to `path`.
pub fn write_refs(refs: &ReferenceSet, path: &Path) -> Result<()> {
    fs::write(path, refs_to_string(refs))?;
    Ok(())
}

/// Loads a reference set from `path`.
pub fn load_refs(path: &Path) -> Result<ReferenceSet> {
    let text = fs::read_to_string(path)?;
    parse_refs(&text).map_err(|e| match e {
        Error::Parse { msg, .. } => Error::Parse {
            path: path.display().to_string(),
            msg,
        },
        other => other,
    })
}

fn parse_values(line: &str, label: &str) -> Result<Vec<f64>> {
    let mut parts = line.split_whitespace();
    let found = parts.next().unwrap_or("");
    if found != label {
        return Err(Error::Parse {
            path: Default::default(),
            msg: format!("expected `{label}` line, found `{found}`"),
        });
    }
    parts
        .map(|tok| {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                path: Default::default(),
                msg: format!("bad number `{tok}` on `{label}` line"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: Default::default(),
                    msg: format!("non-finite value on `{label}` line"),
                });
            }
            Ok(v)
        })
        .collect()
}

/// Parses the block format produced by [`refs_to_string`].
pub fn parse_refs(text: &str) -> Result<ReferenceSet> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut vectors = [[0.0f64; 4]; 4];
    let mut hip: Vec<FourierSeries> = Vec::with_capacity(4);
    let mut knee: Vec<FourierSeries> = Vec::with_capacity(4);
    for (k, vector) in vectors.iter_mut().enumerate() {
        let missing = |what: &str| Error::Parse {
            path: Default::default(),
            msg: format!("reference {k}: missing {what} line"),
        };
        let ybar = parse_values(lines.next().ok_or_else(|| missing("ybar"))?, "ybar")?;
        if ybar.len() != 4 {
            return Err(Error::Parse {
                path: Default::default(),
                msg: format!("reference {k}: ybar needs 4 values, found {}", ybar.len()),
            });
        }
        vector.copy_from_slice(&ybar);
        let h = parse_values(
            lines.next().ok_or_else(|| missing("fourier_hip"))?,
            "fourier_hip",
        )?;
        let kn = parse_values(
            lines.next().ok_or_else(|| missing("fourier_knee"))?,
            "fourier_knee",
        )?;
        hip.push(FourierSeries::from_coeffs(h)?);
        knee.push(FourierSeries::from_coeffs(kn)?);
    }
    if lines.next().is_some() {
        return Err(Error::Parse {
            path: Default::default(),
            msg: "trailing content after four reference blocks".into(),
        });
    }
    let into4 = |mut v: Vec<FourierSeries>| -> [FourierSeries; 4] {
        let d = v.pop().unwrap();
        let c = v.pop().unwrap();
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        [a, b, c, d]
    };
    ReferenceSet::new(vectors, into4(hip), into4(knee))
}

//! Map file format: a `T` block of four rows, then a `b` block of one row,
//! space-separated shortest-round-trip floats.
//!
//! ```text
//! T
//! 0.0946 -0.1917 1.6623 -0.0483
//! ...
//! b
//! 3.0487 40.2068 -3.3855 -89.9575
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mapping::LinearMap;

/// Serializes a map to its file format.
pub fn map_to_string(map: &LinearMap) -> String {
    let mut out = String::from("T\n");
    for row in &map.t {
        let _ = writeln!(out, "{} {} {} {}", row[0], row[1], row[2], row[3]);
    }
    out.push_str("b\n");
    let _ = writeln!(out, "{} {} {} {}", map.b[0], map.b[1], map.b[2], map.b[3]);
    out
}

/// Writes a map file.
pub fn write_map(map: &LinearMap, path: &Path) -> Result<()> {
    fs::write(path, map_to_string(map))?;
    Ok(())
}

/// Loads a map file produced by [`write_map`].
pub fn load_map(path: &Path) -> Result<LinearMap> {
    let text = fs::read_to_string(path)?;
    parse_map(&text, &path.display().to_string())
}

fn parse_map(text: &str, origin: &str) -> Result<LinearMap> {
    let err = |msg: String| Error::Parse {
        path: origin.to_string(),
        msg,
    };
    let mut lines = text.lines().filter(|l| !l.is_empty());
    if lines.next() != Some("T") {
        return Err(err("expected `T` block marker".into()));
    }
    let mut t = [[0.0f64; 4]; 4];
    for (r, row) in t.iter_mut().enumerate() {
        let line = lines
            .next()
            .ok_or_else(|| err("truncated T block".into()))?;
        *row = parse_row(line).ok_or_else(|| err(format!("bad T row {}: `{line}`", r + 1)))?;
    }
    if lines.next() != Some("b") {
        return Err(err("expected `b` block marker".into()));
    }
    let line = lines
        .next()
        .ok_or_else(|| err("truncated b block".into()))?;
    let b = parse_row(line).ok_or_else(|| err(format!("bad b row: `{line}`")))?;
    if lines.next().is_some() {
        return Err(err("trailing content after b block".into()));
    }
    Ok(LinearMap { t, b })
}

fn parse_row(line: &str) -> Option<[f64; 4]> {
    let mut out = [0.0f64; 4];
    let mut fields = line.split_whitespace();
    for slot in out.iter_mut() {
        let v: f64 = fields.next()?.parse().ok()?;
        if !v.is_finite() {
            return None;
        }
        *slot = v;
    }
    if fields.next().is_some() {
        return None;
    }
    Some(out)
}

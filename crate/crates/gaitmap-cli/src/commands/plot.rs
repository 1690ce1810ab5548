//! `plot`: render SVG figures from a simulation directory.
//!
//! Three files: `restoration_hip.svg` and `restoration_knee.svg` overlay
//! every emitted trajectory on the original per-cycle curves, and
//! `coordination.svg` tracks the upper-lower phase difference per cycle,
//! original recording vs emitted output. The SVG is assembled directly;
//! output depends only on the input data, so reruns are byte-identical.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use gaitmap_core::{circular_lag, GaitCycle, JointId, PipelineOutput};

use crate::artifacts::{atomic_write, read_cycles, read_output};
use crate::error::CliResult;

pub const RESTORATION_HIP_FILE: &str = "restoration_hip.svg";
pub const RESTORATION_KNEE_FILE: &str = "restoration_knee.svg";
pub const COORDINATION_FILE: &str = "coordination.svg";

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Simulation output directory to render
    #[arg(long)]
    pub out_dir: PathBuf,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 52.0;

const ORIGINAL_COLOR: &str = "#9aa0a6";
const EMITTED_COLOR: &str = "#1f6feb";

/// Maps data coordinates onto the fixed pixel canvas.
struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT
            + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn polyline(&self, points: impl Iterator<Item = (f64, f64)>, style: &str) -> String {
        let mut path = String::from("<polyline points=\"");
        for (x, y) in points {
            let _ = write!(path, "{:.2},{:.2} ", self.x(x), self.y(y));
        }
        path.pop();
        let _ = write!(path, "\" fill=\"none\" {style}/>");
        path
    }
}

/// Document skeleton: canvas, axes, ticks, and labels around a frame.
fn document(frame: &Frame, title: &str, x_label: &str, y_label: &str, body: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>",
        WIDTH / 2.0
    );

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );

    // five ticks per axis with value labels
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = frame.x_min + t * (frame.x_max - frame.x_min);
        let yv = frame.y_min + t * (frame.y_max - frame.y_min);
        let xp = frame.x(xv);
        let yp = frame.y(yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{xp:.2}\" y1=\"{y0}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\
             <text x=\"{xp:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xv:.2}</text>",
            y0 + 5.0,
            y0 + 18.0
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yp:.2}\" x2=\"{x0}\" y2=\"{yp:.2}\" stroke=\"black\"/>\
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yv:.1}</text>",
            x0 - 5.0,
            x0 - 8.0,
            yp + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{x_label}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.2})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    svg.push_str(body);
    svg.push_str("</svg>\n");
    svg
}

fn legend(entries: &[(&str, &str)]) -> String {
    let mut out = String::new();
    let x = WIDTH - MARGIN_RIGHT - 190.0;
    for (i, (color, label)) in entries.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            out,
            "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" \
             stroke-width=\"2\"/><text x=\"{}\" y=\"{:.2}\">{label}</text>",
            x + 24.0,
            x + 30.0,
            y + 4.0
        );
    }
    out
}

/// Value range padded by 5 percent on both sides.
fn padded(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let pad = 0.05 * (hi - lo).max(1e-9);
    (lo - pad, hi + pad)
}

/// Emitted trajectories overlaid on the original cycles of one joint.
fn restoration_figure(output: &PipelineOutput, cycles: &[GaitCycle], joint: JointId) -> String {
    fn emitted(e: &gaitmap_core::simulation::Emission, joint: JointId) -> &[f64] {
        match joint {
            JointId::Hip => &e.hip,
            _ => &e.knee,
        }
    }
    let (y_min, y_max) = padded(
        cycles
            .iter()
            .flat_map(|c| c.curve(joint).iter().copied())
            .chain(
                output
                    .emissions
                    .iter()
                    .flat_map(|e| emitted(e, joint).iter().copied()),
            ),
    );
    let frame = Frame {
        x_min: 0.0,
        x_max: 1.0,
        y_min,
        y_max,
    };
    let mut body = String::new();
    for cycle in cycles {
        let curve = cycle.curve(joint);
        let n = curve.len() as f64;
        let points = curve.iter().enumerate().map(|(k, &v)| (k as f64 / n, v));
        let style = format!("stroke=\"{ORIGINAL_COLOR}\" stroke-width=\"1\"");
        let _ = writeln!(body, "{}", frame.polyline(points, &style));
    }
    for emission in &output.emissions {
        let curve = emitted(emission, joint);
        let n = curve.len() as f64;
        let points = curve.iter().enumerate().map(|(k, &v)| (k as f64 / n, v));
        let style =
            format!("stroke=\"{EMITTED_COLOR}\" stroke-width=\"1.2\" stroke-opacity=\"0.75\"");
        let _ = writeln!(body, "{}", frame.polyline(points, &style));
    }
    body.push_str(&legend(&[
        (ORIGINAL_COLOR, "original cycles"),
        (EMITTED_COLOR, "emitted trajectories"),
    ]));
    document(
        &frame,
        &format!("{joint} restoration: emitted vs original"),
        "cycle phase",
        "angle (deg)",
        &body,
    )
}

/// Per-cycle upper-lower phase difference, original vs emitted.
fn coordination_figure(output: &PipelineOutput, cycles: &[GaitCycle]) -> CliResult<String> {
    let mut original = Vec::new();
    for cycle in cycles {
        let lag = circular_lag(cycle.curve(JointId::Hip), cycle.curve(JointId::Shoulder))?;
        original.push((cycle.index as f64, lag));
    }
    let mut emitted = Vec::new();
    for emission in &output.emissions {
        if let Some(cycle) = cycles.iter().find(|c| c.index == emission.emit_cycle) {
            let lag = circular_lag(&emission.hip, cycle.curve(JointId::Shoulder))?;
            emitted.push((cycle.index as f64, lag));
        }
    }

    let (y_min, y_max) = padded(
        original
            .iter()
            .chain(&emitted)
            .map(|&(_, lag)| lag)
            .chain([0.0]),
    );
    let x_max = cycles.iter().map(|c| c.index).max().unwrap_or(0) as f64;
    let frame = Frame {
        x_min: 0.0,
        x_max: x_max.max(1.0),
        y_min,
        y_max,
    };
    let mut body = String::new();
    let original_style = format!("stroke=\"{ORIGINAL_COLOR}\" stroke-width=\"1.5\"");
    let _ = writeln!(
        body,
        "{}",
        frame.polyline(original.iter().copied(), &original_style)
    );
    for &(x, y) in &original {
        let _ = writeln!(
            body,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{ORIGINAL_COLOR}\"/>",
            frame.x(x),
            frame.y(y)
        );
    }
    let emitted_style = format!("stroke=\"{EMITTED_COLOR}\" stroke-width=\"1.5\"");
    let _ = writeln!(
        body,
        "{}",
        frame.polyline(emitted.iter().copied(), &emitted_style)
    );
    for &(x, y) in &emitted {
        let _ = writeln!(
            body,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"6\" height=\"6\" fill=\"{EMITTED_COLOR}\"/>",
            frame.x(x) - 3.0,
            frame.y(y) - 3.0
        );
    }
    body.push_str(&legend(&[
        (ORIGINAL_COLOR, "original recording"),
        (EMITTED_COLOR, "emitted output"),
    ]));
    Ok(document(
        &frame,
        "upper-lower phase difference by cycle",
        "cycle index",
        "phase difference (cycle fraction)",
        &body,
    ))
}

pub fn run(args: &PlotArgs) -> CliResult {
    let output = read_output(&args.out_dir)?;
    let cycles = read_cycles(&args.out_dir)?;

    let hip = restoration_figure(&output, &cycles, JointId::Hip);
    atomic_write(&args.out_dir.join(RESTORATION_HIP_FILE), &hip)?;
    let knee = restoration_figure(&output, &cycles, JointId::Knee);
    atomic_write(&args.out_dir.join(RESTORATION_KNEE_FILE), &knee)?;
    let coordination = coordination_figure(&output, &cycles)?;
    atomic_write(&args.out_dir.join(COORDINATION_FILE), &coordination)?;

    eprintln!(
        "wrote {RESTORATION_HIP_FILE}, {RESTORATION_KNEE_FILE}, {COORDINATION_FILE} to {}",
        args.out_dir.display()
    );
    Ok(())
}

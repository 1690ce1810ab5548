//! Simulation artifacts: the files `simulate` writes into its output
//! directory and `analyze`/`plot` read back.
//!
//! * `trajectory.csv` — emitted curves, one row per grid point:
//!   `emit_cycle,phase,hip_deg,knee_deg`.
//! * `emissions.csv` — per-emission scalars (timing, mapped vector,
//!   blend weights).
//! * `cycles.csv` — per-cycle scalars of the segmented input recording.
//! * `curves.csv` — original per-cycle grid curves of all four joints.
//!
//! Floats are written in Rust's shortest round-trip form, so reruns are
//! byte-identical and readers recover exact values. All files end with a
//! newline and use LF endings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gaitmap_core::simulation::Emission;
use gaitmap_core::{GaitCycle, JointId, JointMap, PipelineOutput};

use crate::error::{io_data, CliError, CliResult};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const EMISSIONS_FILE: &str = "emissions.csv";
pub const CYCLES_FILE: &str = "cycles.csv";
pub const CURVES_FILE: &str = "curves.csv";
pub const REPORT_FILE: &str = "report.csv";

const TRAJECTORY_HEADER: &str = "emit_cycle,phase,hip_deg,knee_deg";
const EMISSIONS_HEADER: &str = "input_cycle,emit_cycle,emit_time_s,period_s,ill_conditioned,\
                                mapped_1,mapped_2,mapped_3,mapped_4,\
                                weight_1,weight_2,weight_3,weight_4";
const CYCLES_HEADER: &str = "cycle_index,start_sample,end_sample,period_s";
const CURVES_HEADER: &str = "cycle_index,joint,grid_index,angle_deg";

/// Writes `contents` via a temporary file in the same directory plus a
/// rename, so readers never observe a partially written file.
pub fn atomic_write(path: &Path, contents: &str) -> CliResult {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("`{}` has no file name", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents).map_err(|e| io_data(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_data(path, e))?;
    Ok(())
}

/// Serializes the emitted trajectories.
pub fn trajectory_to_string(output: &PipelineOutput) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    let n = output.n_grid;
    for e in &output.emissions {
        for k in 0..n {
            let phase = k as f64 / n as f64;
            let _ = writeln!(out, "{},{phase},{},{}", e.emit_cycle, e.hip[k], e.knee[k]);
        }
    }
    out
}

/// Serializes per-emission scalars.
pub fn emissions_to_string(output: &PipelineOutput) -> String {
    let mut out = String::from(EMISSIONS_HEADER);
    out.push('\n');
    for e in &output.emissions {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            e.input_cycle,
            e.emit_cycle,
            e.emit_time_s,
            e.period_s,
            u8::from(e.ill_conditioned)
        );
        for v in e.mapped.iter().chain(&e.weights) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Serializes per-cycle scalars of the segmented recording.
pub fn cycles_to_string(cycles: &[GaitCycle]) -> String {
    let mut out = String::from(CYCLES_HEADER);
    out.push('\n');
    for c in cycles {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.index, c.start_sample, c.end_sample, c.period
        );
    }
    out
}

/// Serializes the original grid curves of all cycles and joints.
pub fn curves_to_string(cycles: &[GaitCycle]) -> String {
    let mut out = String::from(CURVES_HEADER);
    out.push('\n');
    for c in cycles {
        for joint in JointId::ALL {
            for (k, v) in c.curve(joint).iter().enumerate() {
                let _ = writeln!(out, "{},{},{k},{v}", c.index, joint.name());
            }
        }
    }
    out
}

/// One parsed CSV data line, split on commas, with its 1-based number.
struct Row<'a> {
    path: &'a Path,
    line: usize,
    fields: Vec<&'a str>,
}

impl Row<'_> {
    fn fail(&self, msg: &str) -> CliError {
        CliError::Data(format!("{}:{}: {msg}", self.path.display(), self.line))
    }

    fn width(&self, expected: usize) -> CliResult {
        if self.fields.len() != expected {
            return Err(self.fail(&format!(
                "expected {expected} fields, got {}",
                self.fields.len()
            )));
        }
        Ok(())
    }

    fn usize(&self, index: usize) -> CliResult<usize> {
        self.fields[index]
            .parse()
            .map_err(|_| self.fail(&format!("bad integer `{}`", self.fields[index])))
    }

    fn f64(&self, index: usize) -> CliResult<f64> {
        self.fields[index]
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.fail(&format!("bad number `{}`", self.fields[index])))
    }
}

/// Reads a CSV file, checks its header, and returns the data rows.
fn read_rows<'a>(path: &'a Path, text: &'a str, header: &str) -> CliResult<Vec<Row<'a>>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == header => {}
        Some((_, first)) => {
            return Err(CliError::Data(format!(
                "{}: expected header `{header}`, got `{first}`",
                path.display()
            )));
        }
        None => return Err(CliError::Data(format!("{}: empty file", path.display()))),
    }
    Ok(lines
        .map(|(i, line)| Row {
            path,
            line: i + 1,
            fields: line.split(',').collect(),
        })
        .collect())
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| io_data(path, e))
}

/// Reads the pipeline output back from an output directory.
///
/// Spike-repair and skip counts are not persisted; the reconstructed
/// output carries the emissions and grid resolution, which is everything
/// the error analyses consume.
pub fn read_output(dir: &Path) -> CliResult<PipelineOutput> {
    let emissions_path = dir.join(EMISSIONS_FILE);
    let emissions_text = read_file(&emissions_path)?;
    let mut emissions = Vec::new();
    for row in read_rows(&emissions_path, &emissions_text, EMISSIONS_HEADER)? {
        row.width(13)?;
        let mut mapped = [0.0; 4];
        let mut weights = [0.0; 4];
        for i in 0..4 {
            mapped[i] = row.f64(5 + i)?;
            weights[i] = row.f64(9 + i)?;
        }
        let ill = match row.fields[4] {
            "0" => false,
            "1" => true,
            other => return Err(row.fail(&format!("bad flag `{other}`"))),
        };
        emissions.push(Emission {
            input_cycle: row.usize(0)?,
            emit_cycle: row.usize(1)?,
            emit_time_s: row.f64(2)?,
            period_s: row.f64(3)?,
            mapped,
            weights,
            ill_conditioned: ill,
            hip: Vec::new(),
            knee: Vec::new(),
        });
    }

    let trajectory_path = dir.join(TRAJECTORY_FILE);
    let trajectory_text = read_file(&trajectory_path)?;
    let rows = read_rows(&trajectory_path, &trajectory_text, TRAJECTORY_HEADER)?;
    let mut blocks: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
    for row in rows {
        row.width(4)?;
        let emit_cycle = row.usize(0)?;
        let (hip, knee) = (row.f64(2)?, row.f64(3)?);
        match blocks.last_mut() {
            Some((cycle, hips, knees)) if *cycle == emit_cycle => {
                hips.push(hip);
                knees.push(knee);
            }
            _ => blocks.push((emit_cycle, vec![hip], vec![knee])),
        }
    }
    if blocks.len() != emissions.len() {
        return Err(CliError::Data(format!(
            "{}: {} trajectory blocks for {} emissions",
            trajectory_path.display(),
            blocks.len(),
            emissions.len()
        )));
    }
    let n_grid = blocks.first().map_or(0, |(_, hips, _)| hips.len());
    for (emission, (cycle, hips, knees)) in emissions.iter_mut().zip(blocks) {
        if cycle != emission.emit_cycle {
            return Err(CliError::Data(format!(
                "{}: trajectory block {cycle} does not match emission cycle {}",
                trajectory_path.display(),
                emission.emit_cycle
            )));
        }
        if hips.len() != n_grid {
            return Err(CliError::Data(format!(
                "{}: emission {cycle} has {} grid points, expected {n_grid}",
                trajectory_path.display(),
                hips.len()
            )));
        }
        emission.hip = hips;
        emission.knee = knees;
    }

    Ok(PipelineOutput {
        emissions,
        skipped: Vec::new(),
        n_grid,
        repaired_samples: 0,
    })
}

/// Reads the segmented input cycles back from an output directory.
pub fn read_cycles(dir: &Path) -> CliResult<Vec<GaitCycle>> {
    let cycles_path = dir.join(CYCLES_FILE);
    let cycles_text = read_file(&cycles_path)?;
    let mut cycles = Vec::new();
    for row in read_rows(&cycles_path, &cycles_text, CYCLES_HEADER)? {
        row.width(4)?;
        cycles.push(GaitCycle {
            index: row.usize(0)?,
            start_sample: row.usize(1)?,
            end_sample: row.usize(2)?,
            period: row.f64(3)?,
            curves: JointMap::from_fn(|_| Vec::new()),
        });
    }

    let curves_path = dir.join(CURVES_FILE);
    let curves_text = read_file(&curves_path)?;
    for row in read_rows(&curves_path, &curves_text, CURVES_HEADER)? {
        row.width(4)?;
        let index = row.usize(0)?;
        let joint = JointId::from_name(row.fields[1])
            .ok_or_else(|| row.fail(&format!("unknown joint `{}`", row.fields[1])))?;
        let grid_index = row.usize(2)?;
        let value = row.f64(3)?;
        let cycle = cycles
            .iter_mut()
            .find(|c| c.index == index)
            .ok_or_else(|| row.fail(&format!("curve for unknown cycle {index}")))?;
        if cycle.curves[joint].len() != grid_index {
            return Err(row.fail(&format!(
                "grid index {grid_index} out of order for cycle {index} {joint}"
            )));
        }
        cycle.curves[joint].push(value);
    }

    let n_grid = cycles.first().map_or(0, |c| c.n_grid());
    for cycle in &cycles {
        for joint in JointId::ALL {
            if cycle.curves[joint].len() != n_grid {
                return Err(CliError::Data(format!(
                    "{}: cycle {} {joint} has {} grid points, expected {n_grid}",
                    curves_path.display(),
                    cycle.index,
                    cycle.curves[joint].len()
                )));
            }
        }
    }
    Ok(cycles)
}

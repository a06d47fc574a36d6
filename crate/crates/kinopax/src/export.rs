//! Trajectory CSV export.
//!
//! One data row per integration substep: cumulative time, the state reached at
//! the end of the substep, and the control held during it. A trailing comment
//! line carries the total duration and segment count.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kinopax_core::integrate::TrajectorySegment;
use kinopax_core::result::PlanResult;

use crate::error::{CliError, Result};

pub fn trajectory_csv(segments: &[TrajectorySegment], state_dim: usize, control_dim: usize) -> String {
    let mut out = String::from("t");
    for i in 0..state_dim {
        let _ = write!(out, ",x{i}");
    }
    for i in 0..control_dim {
        let _ = write!(out, ",u{i}");
    }
    out.push('\n');
    let mut t0 = 0.0;
    for seg in segments {
        let n = seg.sampled_states.len();
        for (k, x) in seg.sampled_states.iter().enumerate() {
            let t = t0 + seg.dt * (k + 1) as f64 / n as f64;
            let _ = write!(out, "{t:?}");
            for v in x.iter() {
                let _ = write!(out, ",{v:?}");
            }
            for v in seg.control.iter() {
                let _ = write!(out, ",{v:?}");
            }
            out.push('\n');
        }
        t0 += seg.dt;
    }
    let _ = writeln!(out, "# summary duration_s={t0:?},segments={}", segments.len());
    out
}

/// Writes a solved result's trajectory.
pub fn export_trajectory(result: &PlanResult, state_dim: usize, control_dim: usize, path: &Path) -> Result<()> {
    if !result.is_solved() {
        return Err(CliError::Usage(format!("cannot export a {} result", result.status.as_str())));
    }
    fs::write(path, trajectory_csv(&result.trajectory, state_dim, control_dim)).map_err(|e| CliError::io(path, e))
}

/// A parsed export: rows of `[t, state.., control..]` plus the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedTrajectory {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub duration_s: f64,
    pub segments: usize,
}

pub fn parse_trajectory_csv(text: &str) -> Result<ExportedTrajectory> {
    let bad = |m: &str| CliError::Parse(format!("trajectory csv: {m}"));
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().ok_or_else(|| bad("empty"))?.split(',').map(str::to_owned).collect();
    let mut rows = Vec::new();
    let mut summary = None;
    for line in lines {
        if let Some(rest) = line.strip_prefix("# summary ") {
            let mut duration = None;
            let mut segments = None;
            for kv in rest.split(',') {
                match kv.split_once('=') {
                    Some(("duration_s", v)) => duration = v.parse::<f64>().ok(),
                    Some(("segments", v)) => segments = v.parse::<usize>().ok(),
                    _ => return Err(bad("malformed summary")),
                }
            }
            summary = Some((duration.ok_or_else(|| bad("duration"))?, segments.ok_or_else(|| bad("segments"))?));
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let row = row.map_err(|e| bad(&e.to_string()))?;
        if row.len() != header.len() {
            return Err(bad("row width differs from header"));
        }
        rows.push(row);
    }
    let (duration_s, segments) = summary.ok_or_else(|| bad("missing summary"))?;
    Ok(ExportedTrajectory { header, rows, duration_s, segments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kinopax_core::dynamics::DoubleIntegrator6D;
    use kinopax_core::integrate::propagate_ode;
    use kinopax_core::{ControlVec, StateVec};

    #[test]
    fn empty_trajectory_has_header_and_summary_only() {
        let csv = trajectory_csv(&[], 6, 3);
        let parsed = parse_trajectory_csv(&csv).unwrap();
        assert!(parsed.rows.is_empty());
        assert_eq!(parsed.segments, 0);
        assert_eq!(parsed.header.len(), 10);
    }

    #[test]
    fn three_segments_of_four_substeps_give_twelve_rows() {
        let m = DoubleIntegrator6D::default();
        let u = ControlVec::from_slice(&[0.5, 0.0, -0.5]);
        let mut x = StateVec::zeros(6);
        let mut segs = Vec::new();
        for _ in 0..3 {
            let s = propagate_ode(&m, &x, &u, 0.05, 4).unwrap();
            x = s.end_state;
            segs.push(s);
        }
        let parsed = parse_trajectory_csv(&trajectory_csv(&segs, 6, 3)).unwrap();
        assert_eq!(parsed.rows.len(), 12);
        assert_eq!(parsed.segments, 3);
        assert!((parsed.duration_s - 0.15).abs() < 1e-12);
        let last = parsed.rows.last().unwrap();
        assert!((last[0] - 0.15).abs() < 1e-12);
        assert_eq!(&last[1..7], x.as_slice());
    }
}

//! CSV output (header row, UTF-8, `.` decimal separator) and the grid CSV
//! reader used for plotting.

use std::io::Write;

use super::converge::TrajectoryRow;
use super::grid::GridCellRecord;
use super::real::RealSummary;
use crate::error::{Error, Result};

pub const GRID_HEADER: &str =
    "alpha,beta,success_count,trials,success_rate,mean_iterations,mean_wall_time,threshold,error";
pub const TRAJECTORY_HEADER: &str = "run_id,iteration,frobenius_distance";
pub const REAL_HEADER: &str = "name,n,k,run,objective,iterations,mismatches,wall_time,best";

fn clean(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn write_grid_row<W: Write>(w: &mut W, r: &GridCellRecord) -> Result<()> {
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{}",
        r.alpha,
        r.beta,
        r.success_count,
        r.trials,
        r.success_rate(),
        r.mean_iterations,
        r.mean_wall_time,
        r.threshold,
        r.error.as_deref().map(clean).unwrap_or_default()
    )?;
    Ok(())
}

pub fn write_grid_csv<W: Write>(w: &mut W, records: &[GridCellRecord]) -> Result<()> {
    writeln!(w, "{GRID_HEADER}")?;
    records.iter().try_for_each(|r| write_grid_row(w, r))
}

pub fn write_trajectory_csv<W: Write>(w: &mut W, rows: &[TrajectoryRow]) -> Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.run_id, r.iteration, r.distance)?;
    }
    Ok(())
}

pub fn write_real_csv<W: Write>(w: &mut W, s: &RealSummary) -> Result<()> {
    writeln!(w, "{REAL_HEADER}")?;
    for (i, r) in s.runs.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            clean(&s.name),
            s.n,
            s.k,
            i,
            r.objective,
            r.iterations,
            r.mismatches.map(|m| m.to_string()).unwrap_or_default(),
            r.wall_time,
            u8::from(i == s.best)
        )?;
    }
    Ok(())
}

/// Reads a grid CSV written by [`write_grid_csv`]. Cell indices are
/// reconstructed from the order of distinct alpha and beta values.
pub fn parse_grid_csv(text: &str) -> Result<Vec<GridCellRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, h)) if h.trim() == GRID_HEADER => {}
        _ => return Err(Error::parse(1, "missing grid CSV header")),
    }
    let mut records = Vec::new();
    for (line, content) in lines {
        if content.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.splitn(9, ',').collect();
        if fields.len() != 9 {
            return Err(Error::parse(
                line,
                format!("expected 9 fields, found {}", fields.len()),
            ));
        }
        let float = |i: usize| -> Result<f64> {
            fields[i]
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(line, format!("bad number '{}'", fields[i])))
        };
        let int = |i: usize| -> Result<usize> {
            fields[i]
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(line, format!("bad count '{}'", fields[i])))
        };
        let (success_count, trials) = (int(2)?, int(3)?);
        if success_count > trials || trials == 0 {
            return Err(Error::parse(
                line,
                "success count must lie in 0..=trials, trials > 0",
            ));
        }
        let error = fields[8].trim();
        records.push(GridCellRecord {
            alpha_index: 0,
            beta_index: 0,
            alpha: float(0)?,
            beta: float(1)?,
            success_count,
            trials,
            mean_iterations: float(5)?,
            mean_wall_time: float(6)?,
            threshold: float(7)?,
            error: (!error.is_empty()).then(|| error.to_string()),
        });
    }
    let index_of = |values: Vec<f64>| {
        let mut sorted = values;
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        sorted
    };
    let alphas = index_of(records.iter().map(|r| r.alpha).collect());
    let betas = index_of(records.iter().map(|r| r.beta).collect());
    for r in &mut records {
        r.alpha_index = alphas.partition_point(|&a| a.total_cmp(&r.alpha).is_lt());
        r.beta_index = betas.partition_point(|&b| b.total_cmp(&r.beta).is_lt());
    }
    Ok(records)
}

/// Reads a trajectory CSV written by [`write_trajectory_csv`].
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<TrajectoryRow>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, h)) if h.trim() == TRAJECTORY_HEADER => {}
        _ => return Err(Error::parse(1, "missing trajectory CSV header")),
    }
    let mut rows = Vec::new();
    for (line, content) in lines {
        if content.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        let [run_id, iteration, distance] = fields[..] else {
            return Err(Error::parse(
                line,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        };
        let bad = |f: &str| Error::parse(line, format!("bad value '{f}'"));
        let distance: f64 = distance.parse().map_err(|_| bad(distance))?;
        if !distance.is_finite() || distance < 0.0 {
            return Err(bad(&distance.to_string()));
        }
        rows.push(TrajectoryRow {
            run_id: run_id.parse().map_err(|_| bad(run_id))?,
            iteration: iteration.parse().map_err(|_| bad(iteration))?,
            distance,
        });
    }
    Ok(rows)
}

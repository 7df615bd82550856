//! SVG renderings of grid and trajectory CSVs. Presentation only.

use std::fmt::Write as _;

use super::converge::TrajectoryRow;
use super::grid::GridCellRecord;

const CELL: f64 = 12.0;
const MARGIN: f64 = 50.0;

/// Success-rate heatmap (darker = lower rate) with the recovery threshold
/// `sqrt(alpha) - sqrt(beta) = sqrt(K)` drawn in red.
pub fn phase_svg(records: &[GridCellRecord], k: usize) -> String {
    let cols = records
        .iter()
        .map(|r| r.alpha_index)
        .max()
        .map_or(0, |m| m + 1);
    let rows = records
        .iter()
        .map(|r| r.beta_index)
        .max()
        .map_or(0, |m| m + 1);
    let width = MARGIN * 2.0 + cols as f64 * CELL;
    let height = MARGIN * 2.0 + rows as f64 * CELL;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">"#
    );
    for r in records {
        let shade = (255.0 * r.success_rate()).round() as u8;
        let x = MARGIN + r.alpha_index as f64 * CELL;
        let y = MARGIN + (rows - 1 - r.beta_index) as f64 * CELL;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="rgb({shade},{shade},{shade})"/>"#
        );
    }

    let (amin, amax) = bounds(records.iter().map(|r| r.alpha));
    let (bmin, bmax) = bounds(records.iter().map(|r| r.beta));
    if cols > 1 && rows > 1 && amax > amin && bmax > bmin {
        let to_x =
            |a: f64| MARGIN + (a - amin) / (amax - amin) * (cols - 1) as f64 * CELL + CELL / 2.0;
        let to_y =
            |b: f64| MARGIN + (bmax - b) / (bmax - bmin) * (rows - 1) as f64 * CELL + CELL / 2.0;
        let sk = (k as f64).sqrt();
        let points: Vec<String> = (0..=200)
            .map(|i| amin + (amax - amin) * i as f64 / 200.0)
            .filter(|&a| a.sqrt() >= sk)
            .map(|a| (a, (a.sqrt() - sk).powi(2)))
            .filter(|&(_, b)| b <= bmax)
            .map(|(a, b)| format!("{:.2},{:.2}", to_x(a), to_y(b)))
            .collect();
        if points.len() > 1 {
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="red" stroke-width="2"/>"#,
                points.join(" ")
            );
        }
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">alpha</text>"#,
        width / 2.0,
        height - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">beta</text>"#,
        height / 2.0,
        height / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// One polyline per run: distance to truth against iteration.
pub fn trajectory_svg(rows: &[TrajectoryRow]) -> String {
    let (w, h) = (640.0, 400.0);
    let max_iter = rows.iter().map(|r| r.iteration).max().unwrap_or(1).max(1) as f64;
    let max_dist = rows.iter().map(|r| r.distance).fold(0.0, f64::max).max(1.0);
    let runs = rows.iter().map(|r| r.run_id).max().map_or(0, |m| m + 1);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * MARGIN,
        h - 2.0 * MARGIN
    );
    for run in 0..runs {
        let points: Vec<String> = rows
            .iter()
            .filter(|r| r.run_id == run)
            .map(|r| {
                let x = MARGIN + r.iteration as f64 / max_iter * (w - 2.0 * MARGIN);
                let y = h - MARGIN - r.distance / max_dist * (h - 2.0 * MARGIN);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let hue = 360.0 * run as f64 / runs.max(1) as f64;
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="hsl({hue:.0},70%,45%)" stroke-width="1.5"/>"#,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heatmap_has_one_rect_per_cell() {
        let recs: Vec<GridCellRecord> = (0..3)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .map(|(a, b)| GridCellRecord {
                alpha_index: a,
                beta_index: b,
                alpha: 10.0 * a as f64,
                beta: 5.0 * b as f64,
                success_count: a,
                trials: 2,
                mean_iterations: 0.0,
                mean_wall_time: 0.0,
                threshold: 0.0,
                error: None,
            })
            .collect();
        let svg = phase_svg(&recs, 3);
        assert_eq!(svg.matches("<rect").count(), 6);
        assert!(svg.contains("polyline"));
    }

    #[test]
    fn trajectory_plot() {
        let rows = vec![
            TrajectoryRow {
                run_id: 0,
                iteration: 0,
                distance: 10.0,
            },
            TrajectoryRow {
                run_id: 0,
                iteration: 1,
                distance: 0.0,
            },
        ];
        assert_eq!(trajectory_svg(&rows).matches("<polyline").count(), 1);
    }
}

//! CSV and SVG artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::scan::{CellSummary, TrialRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "n,c,p,seed,outcome,coverage,X,wall_ms";

/// One row per record in the given order.
pub fn records_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let c = r.c.map(|c| c.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            c,
            r.p,
            r.seed,
            r.outcome.label(),
            r.coverage,
            r.copies,
            r.wall_ms
        )
        .expect("writing to a String");
    }
    out
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line chart of success rate against `c` (log scale when every `c` is positive), one line
/// per `n`. Cells without a `c` or without decided trials are skipped.
pub fn success_svg(cells: &[CellSummary]) -> String {
    let (width, height, margin) = (640.0, 400.0, 50.0);
    let mut lines: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for cell in cells {
        if let (Some(c), Some(rate)) = (cell.c, cell.rate.rate) {
            lines.entry(cell.n).or_default().push((c, rate));
        }
    }
    let xs: Vec<f64> = lines.values().flatten().map(|&(c, _)| c).collect();
    let log = !xs.is_empty() && xs.iter().all(|&c| c > 0.0);
    let key = |c: f64| if log { c.log10() } else { c };
    let lo = xs.iter().copied().map(key).fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().map(key).fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = |c: f64| margin + (key(c) - if lo.is_finite() { lo } else { 0.0 }) / span * (width - 2.0 * margin);
    let py = |r: f64| height - margin - r * (height - 2.0 * margin);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
        m = margin,
        t = margin,
        b = height - margin,
        r = width - margin
    );
    for tick in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{tick}</text>"#,
            margin - 6.0,
            py(tick) + 4.0
        );
    }
    let axis_label = if log { "c (log scale)" } else { "c" };
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{axis_label}</text>"#,
        width / 2.0,
        height - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" font-size="12" transform="rotate(-90 14 {:.2})" text-anchor="middle">success rate</text>"#,
        height / 2.0,
        height / 2.0
    );
    for (i, (n, points)) in lines.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points.iter().map(|&(c, r)| format!("{:.2},{:.2}", px(c), py(r))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" stroke="{colour}" stroke-width="2" fill="none"/>"#,
            path.join(" ")
        );
        for &(c, r) in points {
            let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#, px(c), py(r));
        }
        let ly = margin + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="12" fill="{colour}">n = {n}</text>"#,
            width - margin - 60.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes `<prefix>.csv` and `<prefix>.svg`.
pub fn emit_outputs(records: &[TrialRecord], cells: &[CellSummary], prefix: &Path) -> Result<(PathBuf, PathBuf)> {
    let csv = prefix.with_extension("csv");
    let svg = prefix.with_extension("svg");
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    };
    write(&csv, records_csv(records))?;
    write(&svg, success_svg(cells))?;
    Ok((csv, svg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::scan::Outcome;
    use crate::experiments::stats::Proportion;

    fn record(seed: u64) -> TrialRecord {
        TrialRecord {
            n: 9,
            c: Some(0.5),
            p: 0.25,
            seed,
            outcome: Outcome::Factor,
            coverage: 1.0,
            copies: 12,
            wall_ms: 0,
        }
    }

    #[test]
    fn csv_rows() {
        assert_eq!(records_csv(&[]), format!("{CSV_HEADER}\n"));
        let text = records_csv(&[record(0), record(1)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "9,0.5,0.25,0,factor,1,12,0");
    }

    #[test]
    fn files_are_stable() {
        let dir = tempfile::tempdir().unwrap();
        let cells = vec![CellSummary {
            n: 9,
            c: Some(0.5),
            p: 0.25,
            rate: Proportion::wilson(1, 2),
            unknown: 0,
        }];
        let prefix = dir.path().join("scan");
        let (csv, svg) = emit_outputs(&[record(0)], &cells, &prefix).unwrap();
        let first = (std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap());
        emit_outputs(&[record(0)], &cells, &prefix).unwrap();
        assert_eq!(first, (std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap()));
        assert!(emit_outputs(&[], &cells, &dir.path().join("missing/dir/x")).is_err());
    }
}

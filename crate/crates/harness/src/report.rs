//! CSV and Markdown output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};
use crate::rank::{RankingTable, AWARDS};
use crate::score::{Cell, ScoreMatrix};

pub const SCORES_CSV: &str = "scores.csv";
pub const AVERAGES_CSV: &str = "averages.csv";
pub const REPORT_MD: &str = "report.md";

const AWARD_LABELS: [&str; AWARDS] = ["(1)", "(2)", "(3)"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportFiles {
    pub scores: PathBuf,
    pub averages: PathBuf,
    pub report: PathBuf,
}

/// Writes `scores.csv`, `averages.csv` and `report.md` into `out`.
pub fn emit_report(ranking: &RankingTable, scores: &ScoreMatrix, out: impl AsRef<Path>) -> Result<ReportFiles> {
    if scores.metrics().is_empty() || ranking.metrics.is_empty() {
        return Err(HarnessError::EmptySelection);
    }
    let out = out.as_ref();
    fs::create_dir_all(out).map_err(|e| HarnessError::io(out, e))?;
    let files = ReportFiles {
        scores: out.join(SCORES_CSV),
        averages: out.join(AVERAGES_CSV),
        report: out.join(REPORT_MD),
    };
    write_file(&files.scores, scores_csv(scores)?)?;
    write_file(&files.averages, averages_csv(ranking)?)?;
    write_file(&files.report, render_markdown(ranking).into_bytes())?;
    Ok(files)
}

fn write_file(path: &Path, bytes: Vec<u8>) -> Result<()> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

/// Shortest representation that parses back to the same `f64`.
fn exact(v: f64) -> String {
    format!("{v}")
}

/// Long-form scores: `algorithm,pair,metric,value,missing_reason`.
pub fn scores_csv(scores: &ScoreMatrix) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["algorithm", "pair", "metric", "value", "missing_reason"])?;
    for (a, alg) in scores.algorithms().iter().enumerate() {
        for (p, pair) in scores.pairs().iter().enumerate() {
            for (m, info) in scores.metrics().iter().enumerate() {
                let (value, reason) = match scores.cell(a, p, m) {
                    Cell::Value(v) => (exact(*v), String::new()),
                    Cell::Missing(r) => (String::new(), r.to_string()),
                };
                w.write_record([alg.as_str(), pair, &info.name, &value, &reason])?;
            }
        }
    }
    w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))
}

/// Metric-by-algorithm averages with a missing-cell count per algorithm.
pub fn averages_csv(ranking: &RankingTable) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["metric".to_string(), "orientation".to_string()];
    for alg in &ranking.algorithms {
        header.push(alg.clone());
        header.push(format!("{alg}_missing"));
    }
    w.write_record(&header)?;
    for m in &ranking.metrics {
        let mut row = vec![m.metric.name.clone(), m.metric.orientation.label().to_string()];
        for (avg, missing) in m.averages.iter().zip(&m.missing) {
            row.push(avg.map(exact).unwrap_or_default());
            row.push(missing.to_string());
        }
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))
}

fn table_row(cells: &[String]) -> String {
    format!("| {} |\n", cells.join(" | "))
}

/// The Markdown report: averages with award marks, ranks, award counts and
/// (when recorded) fusion time.
pub fn render_markdown(ranking: &RankingTable) -> String {
    let mut s = String::new();
    let algs = &ranking.algorithms;
    let _ = writeln!(s, "# Fusion benchmark report\n");
    let _ = writeln!(
        s,
        "{} algorithms, {} image pairs, {} metrics. Values are averages over pairs; \
         (1), (2) and (3) mark the best, second and third value of each metric.\n",
        algs.len(),
        ranking.pair_count,
        ranking.metrics.len()
    );

    let _ = writeln!(s, "## Averages\n");
    let mut head = vec!["Metric".to_string(), "Better".to_string()];
    head.extend(algs.iter().cloned());
    s.push_str(&table_row(&head));
    let mut sep = vec!["---".to_string(), "---".to_string()];
    sep.extend(algs.iter().map(|_| "---:".to_string()));
    s.push_str(&table_row(&sep));
    for m in &ranking.metrics {
        let mut row = vec![m.metric.name.clone(), m.metric.orientation.label().to_string()];
        for a in 0..algs.len() {
            let mut cell = match m.averages[a] {
                Some(v) => format!("{v:.4}"),
                None => "n/a".to_string(),
            };
            if let Some(award) = m.awards[a] {
                cell.push(' ');
                cell.push_str(AWARD_LABELS[award]);
            }
            if m.missing[a] > 0 {
                let _ = write!(cell, " [{} missing]", m.missing[a]);
            }
            row.push(cell);
        }
        s.push_str(&table_row(&row));
    }

    let _ = writeln!(s, "\n## Ranks\n");
    let mut head = vec!["Metric".to_string()];
    head.extend(algs.iter().cloned());
    s.push_str(&table_row(&head));
    let mut sep = vec!["---".to_string()];
    sep.extend(algs.iter().map(|_| "---:".to_string()));
    s.push_str(&table_row(&sep));
    for m in &ranking.metrics {
        let mut row = vec![m.metric.name.clone()];
        row.extend(m.ranks.iter().map(|r| r.map(|r| r.to_string()).unwrap_or_else(|| "n/a".into())));
        s.push_str(&table_row(&row));
    }

    let _ = writeln!(s, "\n## Counts\n");
    s.push_str(&table_row(&["Algorithm".into(), "Best".into(), "Second".into(), "Third".into()]));
    s.push_str(&table_row(&["---".into(), "---:".into(), "---:".into(), "---:".into()]));
    for (alg, c) in algs.iter().zip(&ranking.counts) {
        s.push_str(&table_row(&[alg.clone(), c[0].to_string(), c[1].to_string(), c[2].to_string()]));
    }

    if ranking.timing.iter().any(Option::is_some) {
        let _ = writeln!(s, "\n## Fusion time\n");
        s.push_str(&table_row(&["Algorithm".into(), "Seconds per pair".into()]));
        s.push_str(&table_row(&["---".into(), "---:".into()]));
        for (alg, t) in algs.iter().zip(&ranking.timing) {
            if let Some(t) = t {
                s.push_str(&table_row(&[alg.clone(), format!("{t:.4}")]));
            }
        }
    }
    s
}

/// Compact fixed-width table for terminals; `*` marks each metric's best.
pub fn summary_table(ranking: &RankingTable) -> String {
    let width = ranking.algorithms.iter().map(|a| a.len()).max().unwrap_or(0).max(11);
    let mut s = format!("{:<8}", "metric");
    for alg in &ranking.algorithms {
        let _ = write!(s, " {alg:>width$}");
    }
    s.push('\n');
    for m in &ranking.metrics {
        let _ = write!(s, "{:<8}", m.metric.name);
        for (avg, award) in m.averages.iter().zip(&m.awards) {
            let mark = if *award == Some(0) { "*" } else { " " };
            let text = avg.map(|v| format!("{v:.4}{mark}")).unwrap_or_else(|| "n/a ".into());
            let _ = write!(s, " {text:>width$}");
        }
        s.push('\n');
    }
    let _ = write!(s, "{:<8}", "best");
    for c in &ranking.counts {
        let _ = write!(s, " {:>width$}", format!("{} ", c[0]));
    }
    s.push('\n');
    s
}

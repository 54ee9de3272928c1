use std::fs;

use mefb_core::Orientation;
use mefb_harness::report::{REPORT_MD, SCORES_CSV};
use mefb_harness::{emit_report, rank, render_markdown, summary_table, Cell, HarnessError, MetricInfo, MissingReason, ScoreMatrix};

fn info(name: &str, orientation: Orientation) -> MetricInfo {
    MetricInfo {
        name: name.into(),
        orientation,
    }
}

/// Three algorithms, two pairs, metrics EN (higher) and CE (lower), one
/// missing cell and a tie on CE.
fn fixture() -> ScoreMatrix {
    use Cell::{Missing, Value};
    let cells = vec![
        // alpha
        Value(7.0), Value(0.5),
        Value(7.5), Value(0.75),
        // beta
        Value(6.0), Value(0.625),
        Missing(MissingReason::NoFusedImage), Value(0.625),
        // gamma
        Value(7.25), Value(0.375),
        Value(7.25), Value(1.0),
    ];
    ScoreMatrix::new(
        vec!["alpha".into(), "beta".into(), "gamma".into()],
        vec!["p0".into(), "p1".into()],
        vec![info("EN", Orientation::HigherBetter), info("CE", Orientation::LowerBetter)],
        cells,
    )
    .unwrap()
    .with_timing(vec![None, None, None, None, Some(0.25), Some(0.75)])
    .unwrap()
}

#[test]
fn report_matches_golden_file() {
    let scores = fixture();
    let table = rank(&scores).unwrap();
    let golden = include_str!("golden/report.md");
    assert_eq!(render_markdown(&table), golden);

    let out = tempfile::tempdir().unwrap();
    let files = emit_report(&table, &scores, out.path().join("nested")).unwrap();
    assert_eq!(fs::read_to_string(&files.report).unwrap(), golden);
    assert_eq!(files.report.file_name().unwrap(), REPORT_MD);
    let csv = fs::read_to_string(&files.scores).unwrap();
    assert_eq!(files.scores.file_name().unwrap(), SCORES_CSV);
    assert!(csv.starts_with("algorithm,pair,metric,value,missing_reason\nalpha,p0,EN,7,\n"));
    assert!(csv.contains("beta,p1,EN,,no_fused_image\n"));
    let avg = fs::read_to_string(&files.averages).unwrap();
    assert_eq!(
        avg,
        "metric,orientation,alpha,alpha_missing,beta,beta_missing,gamma,gamma_missing\n\
         EN,higher,7.25,0,6,1,7.25,0\n\
         CE,lower,0.625,0,0.625,0,0.6875,0\n"
    );
}

#[test]
fn summary_marks_best_values() {
    let table = rank(&fixture()).unwrap();
    let s = summary_table(&table);
    let en = s.lines().find(|l| l.starts_with("EN")).unwrap();
    assert!(en.contains("7.2500*"));
    assert_eq!(en.matches('*').count(), 1);
    assert!(s.lines().last().unwrap().starts_with("best"));
}

#[test]
fn empty_metric_selection_fails_before_writing() {
    let scores = fixture();
    let mut table = rank(&scores).unwrap();
    table.metrics.clear();
    let out = tempfile::tempdir().unwrap();
    let target = out.path().join("report");
    assert!(matches!(
        emit_report(&table, &scores, &target),
        Err(HarnessError::EmptySelection)
    ));
    assert!(!target.exists());
}

#[test]
fn unwritable_destination_is_an_io_error() {
    let scores = fixture();
    let table = rank(&scores).unwrap();
    let out = tempfile::tempdir().unwrap();
    let file = out.path().join("occupied");
    fs::write(&file, "x").unwrap();
    assert!(matches!(emit_report(&table, &scores, &file), Err(HarnessError::Io { .. })));
}

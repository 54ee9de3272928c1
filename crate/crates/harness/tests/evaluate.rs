mod common;

use std::collections::HashMap;
use std::fs;
use std::sync::Arc;

use mefb_core::metrics::info::q_ncie;
use mefb_core::{ColorImage, Gray, MetricParams};
use mefb_harness::report::{averages_csv, scores_csv};
use mefb_harness::{
    emit_report, evaluate, load_dataset, load_fused, rank, Algorithm, BaselineFusion, Cell, HarnessError, MetricSet,
    MissingReason,
};

fn metrics(spec: &str) -> MetricSet {
    MetricSet::parse(spec, MetricParams::default()).unwrap()
}

#[test]
fn copy_of_a_matches_direct_metric_calls() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 2, 24);
    let ds = load_dataset(dir.path()).unwrap();
    let fused = load_fused(dir.path(), &ds).unwrap();
    let algs = Algorithm::from_fused(&fused);
    let scores = evaluate(&ds, &algs, &metrics("CE,NMI,QNCIE"), 2).unwrap();
    assert_eq!(scores.algorithms(), ["copy_a", "mean"]);

    for (p, entry) in ds.entries.iter().enumerate() {
        let a: Gray = ColorImage::open(&entry.under_path).unwrap().to_grayscale();
        let b: Gray = ColorImage::open(&entry.over_path).unwrap().to_grayscale();
        let direct = q_ncie(&a, &b, &a).unwrap().value;
        assert_eq!(scores.cell(0, p, 2).value(), Some(direct));
        // CE(a, b, f = a) = CE(b || a) / 2 because the a term vanishes
        let ce = scores.cell(0, p, 0).value().unwrap();
        let ce_ba = mefb_core::metrics::info::ce(&b, &b, &a).unwrap().value;
        assert!((ce - ce_ba / 2.0).abs() < 1e-12, "{ce} vs {ce_ba}");
    }
}

#[test]
fn all_selects_twenty_columns() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 1, 64);
    let ds = load_dataset(dir.path()).unwrap();
    let algs = Algorithm::from_fused(&load_fused(dir.path(), &ds).unwrap());
    let scores = evaluate(&ds, &algs, &metrics("all"), 0).unwrap();
    assert_eq!(scores.metrics().len(), 20);
    for a in 0..2 {
        for m in 0..20 {
            let cell = scores.cell(a, 0, m);
            assert!(cell.value().is_some(), "{} {:?}", scores.metrics()[m].name, cell);
        }
    }
}

#[test]
fn small_planes_become_missing_cells_with_reasons() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 2, 24);
    fs::remove_file(dir.path().join("fused/mean/p1.png")).unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    let algs = Algorithm::from_fused(&load_fused(dir.path(), &ds).unwrap());
    let scores = evaluate(&ds, &algs, &metrics("EN,VIF"), 1).unwrap();
    assert_eq!(scores.cell(0, 0, 1), &Cell::Missing(MissingReason::PlaneTooSmall));
    assert_eq!(scores.cell(1, 1, 0), &Cell::Missing(MissingReason::NoFusedImage));

    let table = rank(&scores).unwrap();
    let en = &table.metrics[0];
    assert_eq!(en.missing, vec![0, 1]);
    assert_eq!(en.averages[1], scores.cell(1, 0, 0).value());
    let vif = &table.metrics[1];
    assert_eq!(vif.averages, vec![None, None]);
    assert_eq!(vif.awards, vec![None, None]);

    let csv = String::from_utf8(scores_csv(&scores).unwrap()).unwrap();
    assert!(csv.contains("mean,p1,EN,,no_fused_image\n"));
    assert!(csv.contains("copy_a,p0,VIF,,plane_too_small\n"));
}

#[test]
fn builtin_fusion_is_timed() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 2, 32);
    let ds = load_dataset(dir.path()).unwrap();
    let algs = vec![Algorithm::Builtin(Arc::new(BaselineFusion::default()))];
    let scores = evaluate(&ds, &algs, &metrics("EN"), 2).unwrap();
    assert!(scores.has_timing());
    assert!(scores.timing(0, 1).unwrap() > 0.0);
    let table = rank(&scores).unwrap();
    assert!(table.timing[0].unwrap() > 0.0);
}

#[test]
fn empty_selections_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 1, 16);
    let ds = load_dataset(dir.path()).unwrap();
    let algs = Algorithm::from_fused(&load_fused(dir.path(), &ds).unwrap());
    assert!(matches!(
        evaluate(&ds, &algs, &MetricSet::new(), 1),
        Err(HarnessError::EmptySelection)
    ));
    assert!(matches!(
        evaluate(&ds, &[], &metrics("EN"), 1),
        Err(HarnessError::NoAlgorithms)
    ));
}

#[test]
fn shuffled_dataset_order_gives_same_sorted_matrix() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 4, 24);
    let ds = load_dataset(dir.path()).unwrap();
    let algs = Algorithm::from_fused(&load_fused(dir.path(), &ds).unwrap());
    let m = metrics("EN,PSNR,QY,QABF");
    let base = evaluate(&ds, &algs, &m, 3).unwrap();

    let mut shuffled = ds.clone();
    shuffled.entries.reverse();
    shuffled.entries.swap(0, 2);
    let mut rev_algs = algs.clone();
    rev_algs.reverse();
    let other = evaluate(&shuffled, &rev_algs, &m, 1).unwrap();
    assert_ne!(base, other);
    assert_eq!(base.sorted(), other.sorted());
}

#[test]
fn averages_equal_mean_of_score_rows() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 3, 24);
    fs::remove_file(dir.path().join("fused/copy_a/p2.png")).unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    let algs = Algorithm::from_fused(&load_fused(dir.path(), &ds).unwrap());
    let scores = evaluate(&ds, &algs, &metrics("EN,SD,CE,QW"), 2).unwrap();
    let table = rank(&scores).unwrap();
    let out = tempfile::tempdir().unwrap();
    let files = emit_report(&table, &scores, out.path()).unwrap();

    let mut sums: HashMap<(String, String), (f64, usize)> = HashMap::new();
    let mut rd = csv::Reader::from_path(&files.scores).unwrap();
    for row in rd.records() {
        let row = row.unwrap();
        if row[3].is_empty() {
            continue;
        }
        let e = sums.entry((row[2].to_string(), row[0].to_string())).or_default();
        e.0 += row[3].parse::<f64>().unwrap();
        e.1 += 1;
    }
    let mut rd = csv::Reader::from_path(&files.averages).unwrap();
    let header = rd.headers().unwrap().clone();
    let mut checked = 0;
    for row in rd.records() {
        let row = row.unwrap();
        for (i, alg) in ["copy_a", "mean"].iter().enumerate() {
            let col = 2 + 2 * i;
            assert_eq!(&header[col], *alg);
            let (s, n) = sums[&(row[0].to_string(), alg.to_string())];
            let avg: f64 = row[col].parse().unwrap();
            assert!((avg - s / n as f64).abs() <= 1e-9 * avg.abs().max(1.0));
            assert_eq!(row[col + 1].parse::<usize>().unwrap(), 3 - n);
            checked += 1;
        }
    }
    assert_eq!(checked, 8);
}

#[test]
fn scores_csv_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    common::fixture(dir.path(), 4, 32);
    let ds = load_dataset(dir.path()).unwrap();
    let mut algs = Algorithm::from_fused(&load_fused(dir.path(), &ds).unwrap());
    algs.push(Algorithm::Builtin(Arc::new(BaselineFusion::default())));
    let m = metrics("all");
    let one = scores_csv(&evaluate(&ds, &algs, &m, 1).unwrap()).unwrap();
    let eight = scores_csv(&evaluate(&ds, &algs, &m, 8).unwrap()).unwrap();
    assert_eq!(one, eight);
    let s1 = rank(&evaluate(&ds, &algs, &m, 1).unwrap()).unwrap();
    assert_eq!(averages_csv(&s1).unwrap(), averages_csv(&s1).unwrap());
}

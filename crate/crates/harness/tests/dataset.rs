mod common;

use std::fs;

use common::{write_fused, write_pair};
use mefb_core::synthetic::exposure_pair;
use mefb_harness::dataset::Exposure;
use mefb_harness::{load_dataset, load_fused, HarnessError, LoadIssue};

#[test]
fn empty_root_has_no_entries() {
    let dir = tempfile::tempdir().unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    assert!(ds.is_empty());
    assert!(ds.warnings.is_empty());
}

#[test]
fn missing_root_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_dataset(dir.path().join("nope")).unwrap_err();
    assert!(matches!(err, HarnessError::MissingRoot(_)));
}

#[test]
fn three_pairs_and_one_missing_counterpart() {
    let dir = tempfile::tempdir().unwrap();
    for (i, id) in ["c", "a", "b"].iter().enumerate() {
        write_pair(dir.path(), id, 16, i as u64);
    }
    write_pair(dir.path(), "d", 16, 9);
    fs::remove_file(dir.path().join("input/d/B.png")).unwrap();

    let ds = load_dataset(dir.path()).unwrap();
    let ids: Vec<_> = ds.entries.iter().map(|e| e.pair_id.as_str()).collect();
    assert_eq!(ids, ["a", "b", "c"]);
    assert_eq!(ds.warnings.len(), 1);
    assert_eq!(ds.warnings[0].subject, "d");
    assert_eq!(
        ds.warnings[0].issue,
        LoadIssue::MissingCounterpart {
            missing: Exposure::Over
        }
    );
    assert_eq!((ds.entries[0].width, ds.entries[0].height), (16, 16));
}

#[test]
fn mismatched_sources_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    write_pair(dir.path(), "ok", 16, 1);
    write_pair(dir.path(), "bad", 16, 2);
    let (small, _) = exposure_pair(12, 16, 3);
    small.save_png(dir.path().join("input/bad/B.png")).unwrap();

    let ds = load_dataset(dir.path()).unwrap();
    assert_eq!(ds.len(), 1);
    assert!(matches!(
        ds.warnings[0].issue,
        LoadIssue::DimensionMismatch {
            expected: (16, 16),
            found: (12, 16)
        }
    ));
}

#[test]
fn undecodable_source_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    write_pair(dir.path(), "bad", 16, 2);
    fs::write(dir.path().join("input/bad/A.png"), b"not a png").unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    assert!(ds.is_empty());
    assert!(matches!(ds.warnings[0].issue, LoadIssue::DecodeError(_)));
}

#[test]
fn manifest_overrides_discovery() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw");
    fs::create_dir_all(&raw).unwrap();
    let (a, b) = exposure_pair(20, 10, 4);
    a.save_png(raw.join("house_0.png")).unwrap();
    b.save_png(raw.join("house_1.png")).unwrap();
    fs::write(
        dir.path().join("dataset.toml"),
        "[[pair]]\nid = \"house\"\nunder = \"raw/house_0.png\"\nover = \"raw/house_1.png\"\n\n\
         [[pair]]\nid = \"gone\"\nunder = \"raw/x.png\"\nover = \"raw/house_1.png\"\n",
    )
    .unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    assert_eq!(ds.len(), 1);
    assert_eq!(ds.entries[0].pair_id, "house");
    assert_eq!((ds.entries[0].width, ds.entries[0].height), (20, 10));
    assert_eq!(
        ds.warnings[0].issue,
        LoadIssue::MissingCounterpart {
            missing: Exposure::Under
        }
    );
}

#[test]
fn malformed_manifest_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("dataset.toml"), "[[pair]]\nid = 3\n").unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(HarnessError::Manifest { .. })));
}

#[test]
fn two_algorithms_by_two_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let (a0, _) = write_pair(dir.path(), "p0", 16, 1);
    let (a1, _) = write_pair(dir.path(), "p1", 16, 2);
    for alg in ["x", "y"] {
        write_fused(dir.path(), alg, "p0", &a0);
        write_fused(dir.path(), alg, "p1", &a1);
    }
    let ds = load_dataset(dir.path()).unwrap();
    let fused = load_fused(dir.path(), &ds).unwrap();
    let entries = fused.entries();
    assert_eq!(entries.len(), 4);
    assert!(fused.warnings.is_empty());
    assert_eq!(entries[0].algorithm_id, "x");
    assert_eq!(entries[3].pair_id, "p1");
}

#[test]
fn fused_wrong_size_and_unknown_pair() {
    let dir = tempfile::tempdir().unwrap();
    let (a0, _) = write_pair(dir.path(), "p0", 16, 1);
    write_pair(dir.path(), "p1", 16, 2);
    write_fused(dir.path(), "x", "p0", &a0);
    write_fused(dir.path(), "x", "p1", &exposure_pair(8, 8, 0).0);
    write_fused(dir.path(), "x", "zz", &a0);
    let ds = load_dataset(dir.path()).unwrap();
    let fused = load_fused(dir.path(), &ds).unwrap();
    assert_eq!(fused.entries().len(), 1);
    let issues: Vec<_> = fused.warnings.iter().map(|w| (w.subject.as_str(), &w.issue)).collect();
    assert!(issues
        .iter()
        .any(|(s, i)| *s == "x/p1" && matches!(i, LoadIssue::DimensionMismatch { .. })));
    assert!(issues.iter().any(|(s, i)| *s == "x/zz" && **i == LoadIssue::UnmatchedPair));
}

#[test]
fn empty_algorithm_directory() {
    let dir = tempfile::tempdir().unwrap();
    write_pair(dir.path(), "p0", 16, 1);
    fs::create_dir_all(dir.path().join("fused/empty")).unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    let fused = load_fused(dir.path(), &ds).unwrap();
    assert!(fused.entries().is_empty());
    assert_eq!(fused.warnings[0].issue, LoadIssue::EmptyAlgorithm);
}

#[test]
fn fused_root_without_subdirectory() {
    let dir = tempfile::tempdir().unwrap();
    let (a0, _) = write_pair(dir.path(), "p0", 16, 1);
    let other = tempfile::tempdir().unwrap();
    fs::create_dir_all(other.path().join("alg")).unwrap();
    a0.save_png(other.path().join("alg/p0.png")).unwrap();
    let ds = load_dataset(dir.path()).unwrap();
    let fused = load_fused(other.path(), &ds).unwrap();
    assert_eq!(fused.algorithms[0].id, "alg");
}

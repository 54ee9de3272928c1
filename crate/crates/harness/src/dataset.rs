//! Discovery of source pairs and fused images on disk.
//!
//! Layout:
//!
//! ```text
//! <root>/input/<pair>/A.<ext>     under-exposed source
//! <root>/input/<pair>/B.<ext>     over-exposed source
//! <fused>/<algorithm>/<pair>.<ext>
//! ```
//!
//! A `dataset.toml` at the root replaces directory discovery:
//!
//! ```toml
//! [[pair]]
//! id = "belgium"
//! under = "raw/belgium_0.jpg"
//! over = "raw/belgium_1.jpg"
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use mefb_core::ColorImage;
use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const MANIFEST: &str = "dataset.toml";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exposure {
    Under,
    Over,
}

impl fmt::Display for Exposure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exposure::Under => "A (under-exposed)",
            Exposure::Over => "B (over-exposed)",
        })
    }
}

/// Why an input was skipped.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadIssue {
    MissingCounterpart { missing: Exposure },
    DecodeError(String),
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    UnmatchedPair,
    EmptyAlgorithm,
    Ambiguous(Vec<PathBuf>),
}

impl fmt::Display for LoadIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadIssue::MissingCounterpart { missing } => write!(f, "missing {missing}"),
            LoadIssue::DecodeError(e) => write!(f, "decode error: {e}"),
            LoadIssue::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            LoadIssue::UnmatchedPair => f.write_str("no such pair in the dataset"),
            LoadIssue::EmptyAlgorithm => f.write_str("algorithm directory holds no images"),
            LoadIssue::Ambiguous(paths) => write!(f, "{} candidate files, using the first", paths.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadWarning {
    /// Pair id, or `algorithm/pair` for fused images.
    pub subject: String,
    pub issue: LoadIssue,
}

impl fmt::Display for LoadWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.issue)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetEntry {
    pub pair_id: String,
    pub under_path: PathBuf,
    pub over_path: PathBuf,
    pub width: usize,
    pub height: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Dataset {
    pub entries: Vec<DatasetEntry>,
    pub warnings: Vec<LoadWarning>,
}

impl Dataset {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, pair_id: &str) -> Option<&DatasetEntry> {
        self.entries.iter().find(|e| e.pair_id == pair_id)
    }
}

#[derive(Deserialize)]
struct Manifest {
    #[serde(default)]
    pair: Vec<ManifestPair>,
}

#[derive(Deserialize)]
struct ManifestPair {
    id: String,
    under: PathBuf,
    over: PathBuf,
}

fn sorted_dir(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))? {
        out.push(entry.map_err(|e| HarnessError::io(dir, e))?.path());
    }
    out.sort();
    Ok(out)
}

fn stem(p: &Path) -> Option<&str> {
    p.file_stem().and_then(|s| s.to_str())
}

/// Files in `dir` whose stem equals `name`.
fn candidates(files: &[PathBuf], name: &str) -> Vec<PathBuf> {
    files
        .iter()
        .filter(|p| p.is_file() && stem(p) == Some(name))
        .cloned()
        .collect()
}

fn pick(subject: &str, mut found: Vec<PathBuf>, warnings: &mut Vec<LoadWarning>) -> Option<PathBuf> {
    if found.len() > 1 {
        warnings.push(LoadWarning {
            subject: subject.to_string(),
            issue: LoadIssue::Ambiguous(found.clone()),
        });
    }
    if found.is_empty() {
        None
    } else {
        Some(found.swap_remove(0))
    }
}

fn validate(pair_id: String, under: PathBuf, over: PathBuf, warnings: &mut Vec<LoadWarning>) -> Option<DatasetEntry> {
    let warn = |issue| LoadWarning {
        subject: pair_id.clone(),
        issue,
    };
    let dims_a = ColorImage::probe_dimensions(&under);
    let dims_b = ColorImage::probe_dimensions(&over);
    match (dims_a, dims_b) {
        (Ok(a), Ok(b)) if a == b => Some(DatasetEntry {
            pair_id,
            under_path: under,
            over_path: over,
            width: a.0,
            height: a.1,
        }),
        (Ok(a), Ok(b)) => {
            warnings.push(warn(LoadIssue::DimensionMismatch { expected: a, found: b }));
            None
        }
        (Err(e), _) | (_, Err(e)) => {
            warnings.push(warn(LoadIssue::DecodeError(e.to_string())));
            None
        }
    }
}

/// Discovers source pairs under `root`, sorted by pair id. Broken pairs are
/// skipped and listed in [`Dataset::warnings`].
pub fn load_dataset(root: impl AsRef<Path>) -> Result<Dataset> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(HarnessError::MissingRoot(root.to_path_buf()));
    }
    let manifest = root.join(MANIFEST);
    let mut warnings = Vec::new();
    let mut entries = Vec::new();
    if manifest.is_file() {
        let text = fs::read_to_string(&manifest).map_err(|e| HarnessError::io(&manifest, e))?;
        let parsed: Manifest = toml::from_str(&text).map_err(|e| HarnessError::Manifest {
            path: manifest.clone(),
            message: e.to_string(),
        })?;
        let mut seen = std::collections::BTreeSet::new();
        for p in parsed.pair {
            if !seen.insert(p.id.clone()) {
                return Err(HarnessError::Manifest {
                    path: manifest,
                    message: format!("duplicate pair id {}", p.id),
                });
            }
            let (under, over) = (root.join(&p.under), root.join(&p.over));
            let missing = match (under.is_file(), over.is_file()) {
                (true, true) => None,
                (false, _) => Some(Exposure::Under),
                (_, false) => Some(Exposure::Over),
            };
            if let Some(missing) = missing {
                warnings.push(LoadWarning {
                    subject: p.id,
                    issue: LoadIssue::MissingCounterpart { missing },
                });
                continue;
            }
            entries.extend(validate(p.id, under, over, &mut warnings));
        }
    } else {
        let input = root.join("input");
        if input.is_dir() {
            for dir in sorted_dir(&input)?.into_iter().filter(|p| p.is_dir()) {
                let Some(pair_id) = dir.file_name().and_then(|s| s.to_str()).map(str::to_string) else {
                    continue;
                };
                let files = sorted_dir(&dir)?;
                let a = pick(&pair_id, candidates(&files, "A"), &mut warnings);
                let b = pick(&pair_id, candidates(&files, "B"), &mut warnings);
                match (a, b) {
                    (Some(a), Some(b)) => entries.extend(validate(pair_id, a, b, &mut warnings)),
                    (None, None) => {}
                    (a, _) => warnings.push(LoadWarning {
                        subject: pair_id,
                        issue: LoadIssue::MissingCounterpart {
                            missing: if a.is_none() { Exposure::Under } else { Exposure::Over },
                        },
                    }),
                }
            }
        }
    }
    entries.sort_by(|x, y| x.pair_id.cmp(&y.pair_id));
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Dataset { entries, warnings })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusedEntry {
    pub algorithm_id: String,
    pub pair_id: String,
    pub fused_path: PathBuf,
}

/// Fused images of one algorithm, keyed by pair id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusedAlgorithm {
    pub id: String,
    pub images: BTreeMap<String, PathBuf>,
}

#[derive(Clone, Debug, Default)]
pub struct FusedSet {
    pub algorithms: Vec<FusedAlgorithm>,
    pub warnings: Vec<LoadWarning>,
}

impl FusedSet {
    /// Flat list of every accepted fused image.
    pub fn entries(&self) -> Vec<FusedEntry> {
        self.algorithms
            .iter()
            .flat_map(|a| {
                a.images.iter().map(|(pair, path)| FusedEntry {
                    algorithm_id: a.id.clone(),
                    pair_id: pair.clone(),
                    fused_path: path.clone(),
                })
            })
            .collect()
    }
}

/// Discovers `<algorithm>/<pair>.*` under `root/fused` (or under `root`
/// itself when it has no `fused` subdirectory). Images whose pair is unknown
/// or whose size differs from the sources are skipped with a warning.
pub fn load_fused(root: impl AsRef<Path>, dataset: &Dataset) -> Result<FusedSet> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(HarnessError::MissingRoot(root.to_path_buf()));
    }
    let base = if root.join("fused").is_dir() { root.join("fused") } else { root.to_path_buf() };
    let mut warnings = Vec::new();
    let mut algorithms = Vec::new();
    for dir in sorted_dir(&base)?.into_iter().filter(|p| p.is_dir()) {
        let Some(id) = dir.file_name().and_then(|s| s.to_str()).map(str::to_string) else {
            continue;
        };
        let files: Vec<PathBuf> = sorted_dir(&dir)?.into_iter().filter(|p| p.is_file()).collect();
        let mut images = BTreeMap::new();
        let mut by_stem: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
        for f in files {
            if let Some(s) = stem(&f) {
                by_stem.entry(s.to_string()).or_default().push(f.clone());
            }
        }
        for (pair, paths) in by_stem {
            let subject = format!("{id}/{pair}");
            let Some(entry) = dataset.get(&pair) else {
                warnings.push(LoadWarning {
                    subject,
                    issue: LoadIssue::UnmatchedPair,
                });
                continue;
            };
            let Some(path) = pick(&subject, paths, &mut warnings) else {
                continue;
            };
            match ColorImage::probe_dimensions(&path) {
                Ok(d) if d == (entry.width, entry.height) => {
                    images.insert(pair, path);
                }
                Ok(d) => warnings.push(LoadWarning {
                    subject,
                    issue: LoadIssue::DimensionMismatch {
                        expected: (entry.width, entry.height),
                        found: d,
                    },
                }),
                Err(e) => warnings.push(LoadWarning {
                    subject,
                    issue: LoadIssue::DecodeError(e.to_string()),
                }),
            }
        }
        if images.is_empty() {
            warnings.push(LoadWarning {
                subject: id,
                issue: LoadIssue::EmptyAlgorithm,
            });
        } else {
            algorithms.push(FusedAlgorithm { id, images });
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(FusedSet { algorithms, warnings })
}

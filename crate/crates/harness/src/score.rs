//! Batch evaluation into a score matrix.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use mefb_core::{ColorImage, Gray, Orientation};
use rayon::prelude::*;

use crate::algorithm::FusionAlgorithm;
use crate::dataset::{Dataset, FusedAlgorithm, FusedSet};
use crate::error::{HarnessError, Result};
use crate::metric::MetricSet;

/// Why a cell has no value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MissingReason {
    NoFusedImage,
    DecodeError(String),
    DimensionMismatch,
    PlaneTooSmall,
    Degenerate(String),
    FusionFailed(String),
    Error(String),
}

impl MissingReason {
    /// Stable machine-readable code used in CSV output.
    pub fn code(&self) -> &'static str {
        match self {
            MissingReason::NoFusedImage => "no_fused_image",
            MissingReason::DecodeError(_) => "decode_error",
            MissingReason::DimensionMismatch => "dimension_mismatch",
            MissingReason::PlaneTooSmall => "plane_too_small",
            MissingReason::Degenerate(_) => "degenerate",
            MissingReason::FusionFailed(_) => "fusion_failed",
            MissingReason::Error(_) => "error",
        }
    }

    fn from_core(e: &mefb_core::Error) -> Self {
        use mefb_core::Error as E;
        match e {
            E::PlaneTooSmall { .. } => MissingReason::PlaneTooSmall,
            E::DimensionMismatch { .. } => MissingReason::DimensionMismatch,
            E::DegenerateEntropy => MissingReason::Degenerate(e.to_string()),
            E::Degenerate(_) => MissingReason::Degenerate(e.to_string()),
            E::Decode(m) => MissingReason::DecodeError(m.clone()),
            other => MissingReason::Error(other.to_string()),
        }
    }
}

impl fmt::Display for MissingReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MissingReason::DecodeError(m)
            | MissingReason::Degenerate(m)
            | MissingReason::FusionFailed(m)
            | MissingReason::Error(m) => write!(f, "{}: {m}", self.code()),
            _ => f.write_str(self.code()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Value(f64),
    Missing(MissingReason),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Missing(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricInfo {
    pub name: String,
    pub orientation: Orientation,
}

/// Scores indexed by (algorithm, pair, metric), plus optional fusion timing
/// per (algorithm, pair).
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    algorithms: Vec<String>,
    pairs: Vec<String>,
    metrics: Vec<MetricInfo>,
    cells: Vec<Cell>,
    timing: Vec<Option<f64>>,
}

impl ScoreMatrix {
    /// `cells` is row-major over (algorithm, pair, metric).
    pub fn new(
        algorithms: Vec<String>,
        pairs: Vec<String>,
        metrics: Vec<MetricInfo>,
        cells: Vec<Cell>,
    ) -> Result<Self> {
        let n = algorithms.len() * pairs.len();
        if cells.len() != n * metrics.len() {
            return Err(HarnessError::InvalidMatrix(format!(
                "{} cells for {}x{}x{}",
                cells.len(),
                algorithms.len(),
                pairs.len(),
                metrics.len()
            )));
        }
        Ok(Self {
            algorithms,
            pairs,
            metrics,
            cells,
            timing: vec![None; n],
        })
    }

    pub fn with_timing(mut self, timing: Vec<Option<f64>>) -> Result<Self> {
        if timing.len() != self.timing.len() {
            return Err(HarnessError::InvalidMatrix("timing length".into()));
        }
        self.timing = timing;
        Ok(self)
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn pairs(&self) -> &[String] {
        &self.pairs
    }

    pub fn metrics(&self) -> &[MetricInfo] {
        &self.metrics
    }

    fn index(&self, alg: usize, pair: usize, metric: usize) -> usize {
        (alg * self.pairs.len() + pair) * self.metrics.len() + metric
    }

    pub fn cell(&self, alg: usize, pair: usize, metric: usize) -> &Cell {
        &self.cells[self.index(alg, pair, metric)]
    }

    pub fn timing(&self, alg: usize, pair: usize) -> Option<f64> {
        self.timing[alg * self.pairs.len() + pair]
    }

    pub fn has_timing(&self) -> bool {
        self.timing.iter().any(Option::is_some)
    }

    /// Copy with algorithms and pairs in lexicographic order.
    pub fn sorted(&self) -> Self {
        let mut ai: Vec<usize> = (0..self.algorithms.len()).collect();
        ai.sort_by(|&x, &y| self.algorithms[x].cmp(&self.algorithms[y]));
        let mut pi: Vec<usize> = (0..self.pairs.len()).collect();
        pi.sort_by(|&x, &y| self.pairs[x].cmp(&self.pairs[y]));
        let mut cells = Vec::with_capacity(self.cells.len());
        let mut timing = Vec::with_capacity(self.timing.len());
        for &a in &ai {
            for &p in &pi {
                timing.push(self.timing(a, p));
                for m in 0..self.metrics.len() {
                    cells.push(self.cell(a, p, m).clone());
                }
            }
        }
        Self {
            algorithms: ai.iter().map(|&i| self.algorithms[i].clone()).collect(),
            pairs: pi.iter().map(|&i| self.pairs[i].clone()).collect(),
            metrics: self.metrics.clone(),
            cells,
            timing,
        }
    }
}

/// Where an algorithm's fused images come from.
#[derive(Clone)]
pub enum Algorithm {
    /// Pre-computed images on disk.
    Files(FusedAlgorithm),
    /// Fused in-process; fusion time is recorded.
    Builtin(Arc<dyn FusionAlgorithm>),
}

impl Algorithm {
    pub fn id(&self) -> &str {
        match self {
            Algorithm::Files(f) => &f.id,
            Algorithm::Builtin(b) => b.id(),
        }
    }

    /// One entry per algorithm found on disk.
    pub fn from_fused(set: &FusedSet) -> Vec<Algorithm> {
        set.algorithms.iter().cloned().map(Algorithm::Files).collect()
    }
}

struct Sources {
    under: ColorImage,
    over: ColorImage,
    a: Gray,
    b: Gray,
}

fn load_sources(under: &PathBuf, over: &PathBuf) -> std::result::Result<Sources, MissingReason> {
    let under = ColorImage::open(under).map_err(|e| MissingReason::from_core(&e))?;
    let over = ColorImage::open(over).map_err(|e| MissingReason::from_core(&e))?;
    if !under.same_shape(&over) {
        return Err(MissingReason::DimensionMismatch);
    }
    let (a, b) = (under.to_grayscale(), over.to_grayscale());
    Ok(Sources { under, over, a, b })
}

fn fused_plane(alg: &Algorithm, pair: &str, src: &Sources) -> (std::result::Result<Gray, MissingReason>, Option<f64>) {
    match alg {
        Algorithm::Files(f) => {
            let Some(path) = f.images.get(pair) else {
                return (Err(MissingReason::NoFusedImage), None);
            };
            let img = match ColorImage::open(path) {
                Ok(i) => i,
                Err(e) => return (Err(MissingReason::from_core(&e)), None),
            };
            if !img.same_shape(&src.under) {
                return (Err(MissingReason::DimensionMismatch), None);
            }
            (Ok(img.to_grayscale()), None)
        }
        Algorithm::Builtin(b) => {
            let start = Instant::now();
            match b.fuse(&src.under, &src.over) {
                Ok(img) => {
                    let secs = start.elapsed().as_secs_f64();
                    (Ok(img.to_grayscale()), Some(secs))
                }
                Err(e) => (Err(MissingReason::FusionFailed(e.to_string())), None),
            }
        }
    }
}

/// Scores every (algorithm, pair, metric) cell using `workers` threads
/// (0 means one per logical CPU). Results do not depend on `workers`.
pub fn evaluate(dataset: &Dataset, algorithms: &[Algorithm], metrics: &MetricSet, workers: usize) -> Result<ScoreMatrix> {
    if metrics.is_empty() {
        return Err(HarnessError::EmptySelection);
    }
    if algorithms.is_empty() {
        return Err(HarnessError::NoAlgorithms);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    let metric_list: Vec<_> = metrics.iter().cloned().collect();
    let nm = metric_list.len();

    // per pair: per algorithm: (cells, timing)
    let per_pair: Vec<Vec<(Vec<Cell>, Option<f64>)>> = pool.install(|| {
        dataset
            .entries
            .par_iter()
            .map(|entry| match load_sources(&entry.under_path, &entry.over_path) {
                Err(reason) => algorithms
                    .iter()
                    .map(|_| (vec![Cell::Missing(reason.clone()); nm], None))
                    .collect(),
                Ok(src) => algorithms
                    .par_iter()
                    .map(|alg| {
                        let (fused, secs) = fused_plane(alg, &entry.pair_id, &src);
                        let cells = match fused {
                            Err(reason) => vec![Cell::Missing(reason); nm],
                            Ok(f) => metric_list
                                .par_iter()
                                .map(|m| match m.compute(&src.a, &src.b, &f) {
                                    Ok(v) if v.is_finite() => Cell::Value(v),
                                    Ok(v) => Cell::Missing(MissingReason::Error(format!("non-finite value {v}"))),
                                    Err(e) => Cell::Missing(MissingReason::from_core(&e)),
                                })
                                .collect(),
                        };
                        (cells, secs)
                    })
                    .collect(),
            })
            .collect()
    });

    let np = dataset.entries.len();
    let mut cells = Vec::with_capacity(algorithms.len() * np * nm);
    let mut timing = Vec::with_capacity(algorithms.len() * np);
    for ai in 0..algorithms.len() {
        for pair in &per_pair {
            let (c, t) = &pair[ai];
            cells.extend(c.iter().cloned());
            timing.push(*t);
        }
    }
    ScoreMatrix::new(
        algorithms.iter().map(|a| a.id().to_string()).collect(),
        dataset.entries.iter().map(|e| e.pair_id.clone()).collect(),
        metric_list
            .iter()
            .map(|m| MetricInfo {
                name: m.name().to_string(),
                orientation: m.orientation(),
            })
            .collect(),
        cells,
    )?
    .with_timing(timing)
}

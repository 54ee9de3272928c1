//! Benchmark harness: load source pairs and fused images, score them with a
//! metric selection, rank algorithms and write reports.

pub mod algorithm;
pub mod dataset;
pub mod error;
pub mod metric;
pub mod rank;
pub mod report;
pub mod score;

pub use algorithm::{time_algorithm, BaselineFusion, FusionAlgorithm, TimingReport};
pub use dataset::{load_dataset, load_fused, Dataset, DatasetEntry, FusedEntry, FusedSet, LoadIssue, LoadWarning};
pub use error::{HarnessError, Result};
pub use metric::{BuiltinMetric, Metric, MetricSet, UnknownMetric};
pub use rank::{rank, MetricRanking, RankingTable};
pub use report::{emit_report, render_markdown, summary_table, ReportFiles};
pub use score::{evaluate, Algorithm, Cell, MetricInfo, MissingReason, ScoreMatrix};

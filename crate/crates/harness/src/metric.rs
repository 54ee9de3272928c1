//! The metric plug-in interface and metric selections.

use std::fmt;
use std::sync::Arc;

use mefb_core::{Gray, MetricId, MetricParams, Orientation};

/// A fusion-quality metric the harness can evaluate.
///
/// Implementors must be pure: the same triple always yields the same result.
pub trait Metric: Send + Sync {
    fn name(&self) -> &str;
    fn orientation(&self) -> Orientation;
    fn compute(&self, a: &Gray, b: &Gray, f: &Gray) -> mefb_core::Result<f64>;
}

/// One of the library's built-in metrics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuiltinMetric {
    pub id: MetricId,
    pub params: MetricParams,
}

impl Metric for BuiltinMetric {
    fn name(&self) -> &str {
        self.id.name()
    }

    fn orientation(&self) -> Orientation {
        self.id.orientation()
    }

    fn compute(&self, a: &Gray, b: &Gray, f: &Gray) -> mefb_core::Result<f64> {
        self.id.compute(a, b, f, &self.params).map(|v| v.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownMetric {
    pub name: String,
}

impl fmt::Display for UnknownMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown metric {:?}; valid names: {}",
            self.name,
            MetricId::all_names().join(", ")
        )
    }
}

impl std::error::Error for UnknownMetric {}

/// An ordered, duplicate-free list of metrics.
#[derive(Clone, Default)]
pub struct MetricSet {
    metrics: Vec<Arc<dyn Metric>>,
}

impl MetricSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The twenty benchmark metrics in report order.
    pub fn all(params: MetricParams) -> Self {
        let mut s = Self::new();
        for id in MetricId::ALL {
            s.push(Arc::new(BuiltinMetric { id, params }));
        }
        s
    }

    /// Parses `all` or a comma-separated list of metric names.
    pub fn parse(spec: &str, params: MetricParams) -> Result<Self, UnknownMetric> {
        if spec.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::all(params));
        }
        let mut s = Self::new();
        for name in spec.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let id: MetricId = name.parse().map_err(|_| UnknownMetric { name: name.to_string() })?;
            s.push(Arc::new(BuiltinMetric { id, params }));
        }
        Ok(s)
    }

    /// Appends a metric unless one with the same name is already present.
    pub fn push(&mut self, metric: Arc<dyn Metric>) -> bool {
        if self.metrics.iter().any(|m| m.name() == metric.name()) {
            return false;
        }
        self.metrics.push(metric);
        true
    }

    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Metric>> {
        self.metrics.iter()
    }

    pub fn names(&self) -> Vec<String> {
        self.metrics.iter().map(|m| m.name().to_string()).collect()
    }
}

impl fmt::Debug for MetricSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

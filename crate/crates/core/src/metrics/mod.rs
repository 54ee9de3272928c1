//! The twenty fusion-quality metrics, grouped by family.

pub mod feature;
pub mod info;
mod linalg;
pub mod perceptual;
pub mod phase;
pub mod structural;

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::image::GrayPlane;
use crate::scalar::Real;

pub use info::TsallisOrder;

/// Whether larger or smaller values indicate better fusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    HigherBetter,
    LowerBetter,
}

impl Orientation {
    /// `true` when `a` is strictly better than `b`.
    pub fn better<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            Orientation::HigherBetter => a > b,
            Orientation::LowerBetter => a < b,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Orientation::HigherBetter => "higher",
            Orientation::LowerBetter => "lower",
        }
    }
}

/// Identifier of a built-in metric. Names follow the usual abbreviations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricId {
    Ce,
    En,
    Fmi,
    Mi,
    Nmi,
    Psnr,
    QNcie,
    Te,
    Ag,
    Ei,
    Qabf,
    Qp,
    Sd,
    Sf,
    Qc,
    Qw,
    Qy,
    MefSsim,
    Ssim,
    Qcb,
    Qcv,
    Vif,
}

impl MetricId {
    /// The twenty metrics of the benchmark, in report order.
    pub const ALL: [MetricId; 20] = [
        MetricId::Ce,
        MetricId::En,
        MetricId::Fmi,
        MetricId::Nmi,
        MetricId::Psnr,
        MetricId::QNcie,
        MetricId::Te,
        MetricId::Ag,
        MetricId::Ei,
        MetricId::Qabf,
        MetricId::Qp,
        MetricId::Sd,
        MetricId::Sf,
        MetricId::Qc,
        MetricId::Qw,
        MetricId::Qy,
        MetricId::MefSsim,
        MetricId::Qcb,
        MetricId::Qcv,
        MetricId::Vif,
    ];

    /// Metrics available as library functions but not part of the twenty
    /// benchmark columns.
    pub const EXTRA: [MetricId; 2] = [MetricId::Mi, MetricId::Ssim];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Ce => "CE",
            MetricId::En => "EN",
            MetricId::Fmi => "FMI",
            MetricId::Mi => "MI",
            MetricId::Nmi => "NMI",
            MetricId::Psnr => "PSNR",
            MetricId::QNcie => "QNCIE",
            MetricId::Te => "TE",
            MetricId::Ag => "AG",
            MetricId::Ei => "EI",
            MetricId::Qabf => "QABF",
            MetricId::Qp => "QP",
            MetricId::Sd => "SD",
            MetricId::Sf => "SF",
            MetricId::Qc => "QC",
            MetricId::Qw => "QW",
            MetricId::Qy => "QY",
            MetricId::MefSsim => "MEFSSIM",
            MetricId::Ssim => "SSIM",
            MetricId::Qcb => "QCB",
            MetricId::Qcv => "QCV",
            MetricId::Vif => "VIF",
        }
    }

    pub fn orientation(self) -> Orientation {
        match self {
            MetricId::Ce | MetricId::Qcv => Orientation::LowerBetter,
            _ => Orientation::HigherBetter,
        }
    }

    /// Metrics that only look at the fused image.
    pub fn is_single_image(self) -> bool {
        matches!(
            self,
            MetricId::En | MetricId::Ag | MetricId::Ei | MetricId::Sd | MetricId::Sf
        )
    }

    pub fn all_names() -> Vec<&'static str> {
        Self::ALL.iter().chain(Self::EXTRA.iter()).map(|m| m.name()).collect()
    }

    /// Computes this metric on a fusion triple.
    pub fn compute<T: Real>(
        self,
        a: &GrayPlane<T>,
        b: &GrayPlane<T>,
        f: &GrayPlane<T>,
        params: &MetricParams,
    ) -> Result<MetricValue<T>> {
        match self {
            MetricId::Ce => info::ce(a, b, f),
            MetricId::En => info::en(f),
            MetricId::Fmi => info::fmi(a, b, f),
            MetricId::Mi => info::mi(a, b, f),
            MetricId::Nmi => info::nmi(a, b, f),
            MetricId::Psnr => info::psnr(a, b, f),
            MetricId::QNcie => info::q_ncie(a, b, f),
            MetricId::Te => info::te(a, b, f, params.tsallis),
            MetricId::Ag => feature::ag(f),
            MetricId::Ei => feature::ei(f),
            MetricId::Qabf => feature::qabf(a, b, f),
            MetricId::Qp => phase::qp(a, b, f),
            MetricId::Sd => feature::sd(f),
            MetricId::Sf => feature::sf(f),
            MetricId::Qc => structural::qc(a, b, f),
            MetricId::Qw => structural::qw(a, b, f),
            MetricId::Qy => structural::qy(a, b, f),
            MetricId::MefSsim => structural::mef_ssim(a, b, f),
            MetricId::Ssim => structural::ssim_fusion(a, b, f),
            MetricId::Qcb => perceptual::qcb(a, b, f),
            MetricId::Qcv => perceptual::qcv(a, b, f),
            MetricId::Vif => perceptual::vif_fusion(a, b, f),
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownMetric(pub String);

impl fmt::Display for UnknownMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown metric '{}'; valid names: {}",
            self.0,
            MetricId::all_names().join(", ")
        )
    }
}

impl std::error::Error for UnknownMetric {}

impl FromStr for MetricId {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '_' | '-' | '/'))
            .collect::<String>()
            .to_ascii_uppercase();
        Self::ALL
            .iter()
            .chain(Self::EXTRA.iter())
            .copied()
            .find(|m| m.name() == norm)
            .ok_or_else(|| UnknownMetric(s.to_string()))
    }
}

/// A computed metric score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue<T> {
    pub metric: MetricId,
    pub value: T,
    pub orientation: Orientation,
}

impl<T: Real> MetricValue<T> {
    pub fn new(metric: MetricId, value: T) -> Self {
        Self {
            metric,
            value,
            orientation: metric.orientation(),
        }
    }
}

/// Tunable parameters shared across a metric run.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct MetricParams {
    pub tsallis: TsallisOrder,
}

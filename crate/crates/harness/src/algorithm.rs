//! Fusion algorithms the harness can run in-process, and timing.

use std::time::Instant;

use mefb_core::fusion::{fuse_baseline, DEFAULT_LEVELS};
use mefb_core::ColorImage;

use crate::error::{HarnessError, Result};

pub trait FusionAlgorithm: Send + Sync {
    fn id(&self) -> &str;
    fn fuse(&self, under: &ColorImage, over: &ColorImage) -> mefb_core::Result<ColorImage>;
}

/// The built-in pyramid exposure fusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineFusion {
    pub levels: usize,
}

impl Default for BaselineFusion {
    fn default() -> Self {
        Self { levels: DEFAULT_LEVELS }
    }
}

impl FusionAlgorithm for BaselineFusion {
    fn id(&self) -> &str {
        "baseline"
    }

    fn fuse(&self, under: &ColorImage, over: &ColorImage) -> mefb_core::Result<ColorImage> {
        fuse_baseline(under, over, self.levels)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimingReport {
    /// Wall-clock seconds per pair, in dataset order.
    pub seconds: Vec<f64>,
}

impl TimingReport {
    pub fn mean(&self) -> f64 {
        self.seconds.iter().sum::<f64>() / self.seconds.len() as f64
    }

    pub fn median(&self) -> f64 {
        let mut s = self.seconds.clone();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        if n % 2 == 1 {
            s[n / 2]
        } else {
            0.5 * (s[n / 2 - 1] + s[n / 2])
        }
    }
}

/// Times `algo` on every pair after one untimed warm-up run on the first pair.
pub fn time_algorithm(algo: &dyn FusionAlgorithm, pairs: &[(ColorImage, ColorImage)]) -> Result<TimingReport> {
    let Some((a0, b0)) = pairs.first() else {
        return Err(HarnessError::EmptyDataset);
    };
    algo.fuse(a0, b0)?;
    let mut seconds = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let start = Instant::now();
        let out = algo.fuse(a, b)?;
        seconds.push(start.elapsed().as_secs_f64());
        std::hint::black_box(out);
    }
    Ok(TimingReport { seconds })
}

//! Sliding-window local statistics.

use crate::error::Result;
use crate::image::plane::{ensure_same_shape, GrayPlane, Plane};
use crate::scalar::Real;

/// Square window placement; windows that would cross the border are skipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    pub size: usize,
    pub stride: usize,
}

impl WindowSpec {
    /// 8x8, stride 1.
    pub const DEFAULT: WindowSpec = WindowSpec { size: 8, stride: 1 };

    /// Number of window positions along an axis of length `len`.
    pub fn positions(&self, len: usize) -> usize {
        if len < self.size {
            0
        } else {
            (len - self.size) / self.stride + 1
        }
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        width >= self.size && height >= self.size
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Mean of `p` over every window position. Output is `positions(w) x positions(h)`.
///
/// Panics if the window does not fit.
pub fn box_mean<T: Real>(p: &Plane<T>, spec: WindowSpec) -> Plane<T> {
    let (w, h) = (p.width(), p.height());
    assert!(spec.fits(w, h), "window larger than plane");
    let (nx, ny) = (spec.positions(w), spec.positions(h));
    let n = spec.size;
    let area = T::from_usize_lossy(n * n);
    let mut out = Plane::zeros(nx, ny);
    let mut col = vec![T::zero(); w];
    for oy in 0..ny {
        let y0 = oy * spec.stride;
        for (x, c) in col.iter_mut().enumerate() {
            let mut acc = T::zero();
            for y in y0..y0 + n {
                acc += p.get(x, y);
            }
            *c = acc;
        }
        for ox in 0..nx {
            let x0 = ox * spec.stride;
            let s: T = col[x0..x0 + n].iter().copied().sum();
            out.set(ox, oy, s / area);
        }
    }
    out
}

/// Population moments of a pair of planes over each window position.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowStats<T> {
    pub mean_x: Plane<T>,
    pub mean_f: Plane<T>,
    pub var_x: Plane<T>,
    pub var_f: Plane<T>,
    pub cov: Plane<T>,
}

impl<T: Real> WindowStats<T> {
    pub fn count(&self) -> usize {
        self.mean_x.len()
    }
}

/// Local variance over windows; negatives from rounding are clamped to zero.
pub(crate) fn local_variance<T: Real>(p: &Plane<T>, mean: &Plane<T>, spec: WindowSpec) -> Plane<T> {
    let sq = box_mean(&p.map(|v| v * v), spec);
    sq.zip_map(mean, |s, m| (s - m * m).max(T::zero()))
}

pub(crate) fn local_covariance<T: Real>(
    x: &Plane<T>,
    f: &Plane<T>,
    mean_x: &Plane<T>,
    mean_f: &Plane<T>,
    spec: WindowSpec,
) -> Plane<T> {
    let prod = box_mean(&x.zip_map(f, |a, b| a * b), spec);
    let mut out = prod;
    for ((c, &mx), &mf) in out.data_mut().iter_mut().zip(mean_x.data()).zip(mean_f.data()) {
        *c -= mx * mf;
    }
    out
}

pub fn window_stats<T: Real>(
    x: &GrayPlane<T>,
    f: &GrayPlane<T>,
    spec: WindowSpec,
) -> Result<WindowStats<T>> {
    x.ensure_same_shape(f)?;
    x.ensure_min_size(spec.size, spec.size)?;
    Ok(window_stats_planes(x.as_plane(), f.as_plane(), spec))
}

pub(crate) fn window_stats_planes<T: Real>(x: &Plane<T>, f: &Plane<T>, spec: WindowSpec) -> WindowStats<T> {
    debug_assert!(ensure_same_shape(x, f).is_ok());
    let mean_x = box_mean(x, spec);
    let mean_f = box_mean(f, spec);
    let var_x = local_variance(x, &mean_x, spec);
    let var_f = local_variance(f, &mean_f, spec);
    let cov = local_covariance(x, f, &mean_x, &mean_f, spec);
    WindowStats {
        mean_x,
        mean_f,
        var_x,
        var_f,
        cov,
    }
}

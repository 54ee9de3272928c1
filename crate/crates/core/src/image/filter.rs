//! Spatial filtering: 3x3 convolution, Sobel gradients and separable Gaussians.

use crate::image::plane::{GrayPlane, Plane};
use crate::scalar::Real;

/// 3x3 kernel, `k[row][col]`.
pub type Kernel3<T> = [[T; 3]; 3];

pub fn sobel_x_kernel<T: Real>() -> Kernel3<T> {
    let (o, one, two) = (T::zero(), T::one(), T::lit(2.0));
    [[-one, o, one], [-two, o, two], [-one, o, one]]
}

pub fn sobel_y_kernel<T: Real>() -> Kernel3<T> {
    let (o, one, two) = (T::zero(), T::one(), T::lit(2.0));
    [[-one, -two, -one], [o, o, o], [one, two, one]]
}

/// True 2D convolution (kernel flipped) with replicate borders.
pub fn convolve3x3<T: Real>(p: &Plane<T>, kernel: &Kernel3<T>) -> Plane<T> {
    let (w, h) = (p.width(), p.height());
    let mut out = Plane::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (r, row) in kernel.iter().enumerate() {
                for (c, &k) in row.iter().enumerate() {
                    if k == T::zero() {
                        continue;
                    }
                    let sx = x as isize + 1 - c as isize;
                    let sy = y as isize + 1 - r as isize;
                    acc += k * p.get_clamped(sx, sy);
                }
            }
            out.set(x, y, acc);
        }
    }
    out
}

/// Horizontal and vertical derivative responses of a plane.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientField<T> {
    pub gx: Plane<T>,
    pub gy: Plane<T>,
}

impl<T: Real> GradientField<T> {
    /// Per-pixel `sqrt(gx^2 + gy^2)`.
    pub fn magnitude(&self) -> Plane<T> {
        self.gx.zip_map(&self.gy, |a, b| a.hypot(b))
    }
}

pub fn sobel<T: Real>(p: &GrayPlane<T>) -> GradientField<T> {
    sobel_plane(p.as_plane())
}

pub fn sobel_plane<T: Real>(p: &Plane<T>) -> GradientField<T> {
    GradientField {
        gx: convolve3x3(p, &sobel_x_kernel()),
        gy: convolve3x3(p, &sobel_y_kernel()),
    }
}

/// Normalized 1D Gaussian of the given length (odd or even), centred.
pub fn gaussian_kernel_1d<T: Real>(len: usize, sigma: f64) -> Vec<T> {
    assert!(len > 0 && sigma > 0.0);
    let c = (len as f64 - 1.0) / 2.0;
    let raw: Vec<f64> = (0..len)
        .map(|i| {
            let d = i as f64 - c;
            (-(d * d) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| T::lit(v / s)).collect()
}

/// Separable correlation with a symmetric 1D kernel, replicate borders, same size.
pub fn separable_same<T: Real>(p: &Plane<T>, k: &[T]) -> Plane<T> {
    let (w, h) = (p.width(), p.height());
    let r = (k.len() / 2) as isize;
    let mut tmp = Plane::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (i, &kv) in k.iter().enumerate() {
                acc += kv * p.get_clamped(x as isize + i as isize - r, y as isize);
            }
            tmp.set(x, y, acc);
        }
    }
    let mut out = Plane::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (i, &kv) in k.iter().enumerate() {
                acc += kv * tmp.get_clamped(x as isize, y as isize + i as isize - r);
            }
            out.set(x, y, acc);
        }
    }
    out
}

/// Separable correlation keeping only positions where the kernel fits entirely.
///
/// Returns `None` when the plane is smaller than the kernel.
pub fn separable_valid<T: Real>(p: &Plane<T>, k: &[T]) -> Option<Plane<T>> {
    let n = k.len();
    if p.width() < n || p.height() < n {
        return None;
    }
    let ow = p.width() - n + 1;
    let oh = p.height() - n + 1;
    let tmp = Plane::from_fn(ow, p.height(), |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, &kv)| kv * p.get(x + i, y))
            .sum()
    });
    Some(Plane::from_fn(ow, oh, |x, y| {
        k.iter()
            .enumerate()
            .map(|(i, &kv)| kv * tmp.get(x, y + i))
            .sum()
    }))
}

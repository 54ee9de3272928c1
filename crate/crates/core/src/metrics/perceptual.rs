//! Human-perception metrics: Chen–Blum Q_CB, Chen–Varshney Q_CV and the
//! multiscale fusion VIF.

use crate::error::{Error, Result};
use crate::image::fft::Fft2;
use crate::image::filter::{gaussian_kernel_1d, separable_same, separable_valid, sobel_plane};
use crate::image::plane::{ensure_triple, GrayPlane, Plane};
use crate::metrics::{MetricId, MetricValue};
use crate::scalar::Real;

pub const QCB_MIN_SIZE: usize = 32;
pub const QCV_MIN_SIZE: usize = 32;
pub const VIF_MIN_SIZE: usize = 64;

/// Radial frequency of DFT bin `(kx, ky)` in the units of both CSFs.
#[inline]
pub fn csf_radius(kx: isize, ky: isize) -> f64 {
    ((kx * kx + ky * ky) as f64).sqrt() / 4.0
}

/// Difference-of-Gaussians CSF used by Q_CB.
pub fn dog_csf(r: f64) -> f64 {
    (-(r / 15.3870).powi(2)).exp() - 0.7622 * (-(r / 1.3456).powi(2)).exp()
}

/// Mannos–Sakrison CSF used by Q_CV.
pub fn mannos_sakrison_csf(r: f64) -> f64 {
    2.6 * (0.0192 + 0.114 * r) * (-(0.114 * r).powf(1.1)).exp()
}

fn csf_filter<T: Real>(p: &Plane<T>, fft: &Fft2<T>, csf: fn(f64) -> f64) -> Plane<T> {
    let spec = fft.forward_real(p);
    fft.filter_real(&spec, |kx, ky| T::lit(csf(csf_radius(kx, ky))))
}

/// Chen–Blum contrast and masking constants.
pub mod chen_blum {
    pub const SIGMA_NUM: f64 = 2.0;
    pub const SIGMA_DEN: f64 = 4.0;
    pub const K: f64 = 1.0;
    pub const H: f64 = 1.0;
    pub const P: i32 = 3;
    pub const Q: i32 = 2;
    pub const Z: f64 = 1e-4;
}

fn gaussian_for_sigma<T: Real>(sigma: f64) -> Vec<T> {
    gaussian_kernel_1d(2 * (3.0 * sigma).ceil() as usize + 1, sigma)
}

/// Masked local band-limited contrast of a CSF-filtered plane.
pub fn masked_contrast<T: Real>(filtered: &Plane<T>) -> Plane<T> {
    use chen_blum::*;
    let num = separable_same(filtered, &gaussian_for_sigma::<T>(SIGMA_NUM));
    let den = separable_same(filtered, &gaussian_for_sigma::<T>(SIGMA_DEN));
    num.zip_map(&den, |n, d| {
        let c = if d.abs() > T::lit(1e-10) { (n / d - T::one()).abs() } else { T::zero() };
        T::lit(K) * c.powi(P) / (T::lit(H) * c.powi(Q) + T::lit(Z))
    })
}

#[inline]
fn preservation<T: Real>(x: T, f: T) -> T {
    let (lo, hi) = if x < f { (x, f) } else { (f, x) };
    if hi > T::zero() {
        lo / hi
    } else {
        T::one()
    }
}

pub fn qcb<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    f.ensure_min_size(QCB_MIN_SIZE, QCB_MIN_SIZE)?;
    let fft = Fft2::new(f.width(), f.height());
    let [ca, cb, cf] = [a, b, f].map(|p| masked_contrast(&csf_filter(p.as_plane(), &fft, dog_csf)));
    let mut total = T::zero();
    for i in 0..cf.len() {
        let (xa, xb, xf) = (ca.data()[i], cb.data()[i], cf.data()[i]);
        let (sa, sb) = (xa * xa, xb * xb);
        let lambda = if sa + sb > T::zero() { sa / (sa + sb) } else { T::lit(0.5) };
        total += lambda * preservation(xa, xf) + (T::one() - lambda) * preservation(xb, xf);
    }
    Ok(MetricValue::new(MetricId::Qcb, total / T::from_usize_lossy(cf.len())))
}

pub const QCV_BLOCK: usize = 16;

/// Block index of every position along an axis of length `n`, and the block
/// count. Full `QCV_BLOCK` blocks run inward from both ends; a remainder
/// shorter than two blocks forms one centred block, so the partition is
/// mirror-symmetric.
fn axis_blocks(n: usize) -> (Vec<usize>, usize) {
    let m = n / (2 * QCV_BLOCK);
    let side = m * QCV_BLOCK;
    let centre = usize::from(n > 2 * side);
    let idx = (0..n)
        .map(|x| {
            if x < side {
                x / QCV_BLOCK
            } else if x >= n - side {
                m + centre + (x - (n - side)) / QCV_BLOCK
            } else {
                m
            }
        })
        .collect();
    (idx, 2 * m + centre)
}

/// Per-block sums and pixel counts over the symmetric block partition.
fn block_sums<T: Real>(p: &Plane<T>) -> (Vec<T>, Vec<usize>) {
    let (bx, nx) = axis_blocks(p.width());
    let (by, ny) = axis_blocks(p.height());
    let mut sums = vec![T::zero(); nx * ny];
    let mut counts = vec![0usize; nx * ny];
    for y in 0..p.height() {
        for x in 0..p.width() {
            let k = by[y] * nx + bx[x];
            sums[k] += p.get(x, y);
            counts[k] += 1;
        }
    }
    (sums, counts)
}

pub fn qcv<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    f.ensure_min_size(QCV_MIN_SIZE, QCV_MIN_SIZE)?;
    let fft = Fft2::new(f.width(), f.height());
    let block_error = |x: &GrayPlane<T>| {
        let diff = x.as_plane().zip_map(f.as_plane(), |u, v| u - v);
        let filtered = csf_filter(&diff, &fft, mannos_sakrison_csf);
        let (sums, counts) = block_sums(&filtered.map(|v| v * v));
        sums.iter()
            .zip(&counts)
            .map(|(&s, &c)| s / T::from_usize_lossy(c))
            .collect::<Vec<T>>()
    };
    let saliency = |x: &GrayPlane<T>| block_sums(&sobel_plane(x.as_plane()).magnitude()).0;
    let (da, db) = (block_error(a), block_error(b));
    let (la, lb) = (saliency(a), saliency(b));
    let mut num = T::zero();
    let mut den = T::zero();
    for i in 0..da.len() {
        num += la[i] * da[i] + lb[i] * db[i];
        den += la[i] + lb[i];
    }
    if den <= T::zero() {
        return Err(Error::Degenerate("Q_CV saliency vanishes on both sources"));
    }
    Ok(MetricValue::new(MetricId::Qcv, num / den))
}

pub const VIF_SCALES: usize = 4;
pub const VIF_NOISE_VARIANCE: f64 = 2.0;
pub const VIF_SCALE_WEIGHTS: [f64; VIF_SCALES] = [1.0, 0.0, 0.15, 1.0];
const VIF_TINY: f64 = 1e-10;

/// Gaussian window side at scale `s` (0-based): `2^(4 - s) + 1`.
pub fn vif_window_len(s: usize) -> usize {
    (1usize << (4 - s)) + 1
}

/// Halves a plane along both axes, mirror-symmetrically: odd lengths keep
/// samples `0, 2, ..., n-1`; even lengths average adjacent pairs.
pub fn decimate<T: Real>(p: &Plane<T>) -> Plane<T> {
    let half = T::lit(0.5);
    let axis = |n: usize| -> (usize, bool) {
        if n % 2 == 1 {
            (n / 2 + 1, false)
        } else {
            (n / 2, true)
        }
    };
    let (ow, avg_x) = axis(p.width());
    let (oh, avg_y) = axis(p.height());
    let rows = Plane::from_fn(ow, p.height(), |x, y| {
        if avg_x {
            (p.get(2 * x, y) + p.get(2 * x + 1, y)) * half
        } else {
            p.get(2 * x, y)
        }
    });
    Plane::from_fn(ow, oh, |x, y| {
        if avg_y {
            (rows.get(x, 2 * y) + rows.get(x, 2 * y + 1)) * half
        } else {
            rows.get(x, 2 * y)
        }
    })
}

/// Pixel-wise information terms `(with distortion, without distortion)` of a
/// reference/distorted pair of local moments.
pub fn vif_terms<T: Real>(var_r: T, var_d: T, cov: T) -> (T, T) {
    let tiny = T::lit(VIF_TINY);
    let sn = T::lit(VIF_NOISE_VARIANCE);
    let var_r = var_r.max(T::zero());
    let var_d = var_d.max(T::zero());
    let mut g = cov / (var_r + tiny);
    let mut sv = var_d - g * cov;
    let mut vr = var_r;
    if var_r < tiny {
        g = T::zero();
        sv = var_d;
        vr = T::zero();
    }
    if var_d < tiny {
        g = T::zero();
        sv = T::zero();
    }
    if g < T::zero() {
        sv = var_d;
        g = T::zero();
    }
    if sv <= tiny {
        sv = tiny;
    }
    let two = T::lit(2.0);
    let num = (T::one() + g * g * vr / (sv + sn)).log(two);
    let den = (T::one() + vr / sn).log(two);
    (num, den)
}

/// Per-scale `(numerator, denominator)` sums of the multiscale VIF.
pub fn vif_scale_sums<T: Real>(reference: &Plane<T>, distorted: &Plane<T>) -> Vec<(T, T)> {
    let mut r = reference.clone();
    let mut d = distorted.clone();
    let mut out = Vec::with_capacity(VIF_SCALES);
    for s in 0..VIF_SCALES {
        let n = vif_window_len(s);
        let win = gaussian_kernel_1d::<T>(n, n as f64 / 5.0);
        if s > 0 {
            r = decimate(&separable_valid(&r, &win).expect("VIF size checked"));
            d = decimate(&separable_valid(&d, &win).expect("VIF size checked"));
        }
        let valid = |p: &Plane<T>| separable_valid(p, &win).expect("VIF size checked");
        let mu_r = valid(&r);
        let mu_d = valid(&d);
        let rr = valid(&r.zip_map(&r, |x, y| x * y));
        let dd = valid(&d.zip_map(&d, |x, y| x * y));
        let rd = valid(&r.zip_map(&d, |x, y| x * y));
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 0..mu_r.len() {
            let (mr, md) = (mu_r.data()[i], mu_d.data()[i]);
            let (nu, de) = vif_terms(rr.data()[i] - mr * mr, dd.data()[i] - md * md, rd.data()[i] - mr * md);
            num += nu;
            den += de;
        }
        out.push((num, den));
    }
    out
}

/// Weighted multiscale fidelity of `distorted` with respect to `reference`.
pub fn vif_fidelity<T: Real>(reference: &Plane<T>, distorted: &Plane<T>) -> T {
    let total: f64 = VIF_SCALE_WEIGHTS.iter().sum();
    vif_scale_sums(reference, distorted)
        .into_iter()
        .zip(VIF_SCALE_WEIGHTS)
        .map(|((num, den), w)| {
            let ratio = if den > T::zero() {
                num / den
            } else if num > T::zero() {
                T::zero()
            } else {
                T::one()
            };
            T::lit(w / total) * ratio
        })
        .sum()
}

pub fn vif_fusion<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    f.ensure_min_size(VIF_MIN_SIZE, VIF_MIN_SIZE)?;
    let fa = vif_fidelity(a.as_plane(), f.as_plane());
    let fb = vif_fidelity(b.as_plane(), f.as_plane());
    Ok(MetricValue::new(MetricId::Vif, (fa + fb) / T::lit(2.0)))
}

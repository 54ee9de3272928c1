//! Information-theory metrics: CE, EN, MI, FMI, NMI, PSNR, Q_NCIE and TE.

use crate::error::{Error, Result};
use crate::image::filter::sobel_plane;
use crate::image::histogram::{
    entropy_of, histogram, joint_counts_levels, joint_histogram, joint_histogram_of_planes,
    JointHistogram, BINS,
};
use crate::image::plane::{ensure_triple, GrayPlane, Plane};
use crate::metrics::linalg::symmetric_eigenvalues_3x3;
use crate::metrics::{MetricId, MetricValue};
use crate::scalar::Real;

/// Floor substituted for empty fused-histogram bins in cross entropy.
pub const CE_EPSILON: f64 = 1e-12;
/// PSNR reported when the mean squared error is exactly zero (dB).
pub const PSNR_CAP: f64 = 100.0;
pub const PSNR_PEAK: f64 = 255.0;

/// Order of the Tsallis entropy used by TE. Must be positive and not 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TsallisOrder(f64);

impl TsallisOrder {
    pub const DEFAULT: TsallisOrder = TsallisOrder(1.85);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha != 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidParameter(format!(
                "Tsallis order must be > 0 and != 1, got {alpha}"
            )))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

impl Default for TsallisOrder {
    fn default() -> Self {
        Self::DEFAULT
    }
}

fn cross_entropy_term<T: Real>(hx: &[T], hf: &[T]) -> T {
    let eps = T::lit(CE_EPSILON);
    hx.iter()
        .zip(hf)
        .filter(|(&px, _)| px > T::zero())
        .map(|(&px, &pf)| {
            let q = if pf > T::zero() { pf } else { eps };
            px * (px / q).log2()
        })
        .sum()
}

pub fn ce<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let hf = histogram(f);
    let ca = cross_entropy_term(histogram(a).bins(), hf.bins());
    let cb = cross_entropy_term(histogram(b).bins(), hf.bins());
    Ok(MetricValue::new(MetricId::Ce, (ca + cb) / T::lit(2.0)))
}

pub fn en<T: Real>(f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    Ok(MetricValue::new(MetricId::En, histogram(f).entropy()))
}

pub fn mi<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let v = joint_histogram(a, f)?.mutual_information() + joint_histogram(b, f)?.mutual_information();
    Ok(MetricValue::new(MetricId::Mi, v))
}

/// Sobel gradient magnitude min-max rescaled to `[0, 255]`; flat maps become all zero.
pub fn feature_map<T: Real>(p: &GrayPlane<T>) -> Plane<T> {
    let mag = sobel_plane(p.as_plane()).magnitude();
    let (lo, hi) = mag.min_max();
    let range = hi - lo;
    if range <= T::zero() {
        return Plane::zeros(p.width(), p.height());
    }
    let scale = T::lit(255.0) / range;
    mag.map(|v| ((v - lo) * scale).min(T::lit(255.0)))
}

pub fn fmi<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    f.ensure_min_size(3, 3)?;
    let (fa, fb, ff) = (feature_map(a), feature_map(b), feature_map(f));
    let v = joint_histogram_of_planes(&fa, &ff).mutual_information()
        + joint_histogram_of_planes(&fb, &ff).mutual_information();
    Ok(MetricValue::new(MetricId::Fmi, v))
}

pub fn nmi<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let (ha, hb, hf) = (histogram(a).entropy(), histogram(b).entropy(), histogram(f).entropy());
    let (da, db) = (ha + hf, hb + hf);
    if da <= T::zero() || db <= T::zero() {
        return Err(Error::DegenerateEntropy);
    }
    let mia = joint_histogram(a, f)?.mutual_information();
    let mib = joint_histogram(b, f)?.mutual_information();
    Ok(MetricValue::new(MetricId::Nmi, T::lit(2.0) * (mia / da + mib / db)))
}

fn mse<T: Real>(x: &GrayPlane<T>, f: &GrayPlane<T>) -> T {
    let s: T = x
        .data()
        .iter()
        .zip(f.data())
        .map(|(&u, &v)| (u - v) * (u - v))
        .sum();
    s / T::from_usize_lossy(x.len())
}

pub fn psnr<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let m = (mse(a, f) + mse(b, f)) / T::lit(2.0);
    let v = if m == T::zero() {
        T::lit(PSNR_CAP)
    } else {
        T::lit(10.0) * (T::lit(PSNR_PEAK * PSNR_PEAK) / m).log10()
    };
    Ok(MetricValue::new(MetricId::Psnr, v))
}

/// Equal-frequency bin of every sample: samples are ranked by value (ties by
/// position) and rank `r` of `n` lands in bin `floor(r * 256 / n)`.
pub(crate) fn rank_levels<T: Real>(p: &Plane<T>) -> Vec<usize> {
    let data = p.data();
    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        data[i]
            .partial_cmp(&data[j])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut levels = vec![0usize; n];
    for (rank, &idx) in order.iter().enumerate() {
        levels[idx] = rank * BINS / n;
    }
    levels
}

/// Nonlinear correlation coefficient over equal-frequency bins.
///
/// `(H(X) + H(Y) - H(X,Y)) / sqrt(H(X) H(Y))`. With base-256 entropies and a
/// pixel count divisible by 256 both marginals are exactly uniform, the
/// denominator is 1 and this is the plain `H(X) + H(Y) - H(X,Y)` form; the
/// normalization keeps `NCC(X, X) = 1` for every other pixel count.
pub(crate) fn ncc_from_levels<T: Real>(x: &[usize], y: &[usize]) -> T {
    let joint: JointHistogram<T> = JointHistogram::from_counts(&joint_counts_levels(x, y));
    let log_base = T::lit(BINS as f64).log2();
    let hx = entropy_of(&joint.marginal_x()) / log_base;
    let hy = entropy_of(&joint.marginal_f()) / log_base;
    let hxy = joint.entropy() / log_base;
    let norm = (hx * hy).sqrt();
    if norm <= T::zero() {
        // single-pixel planes: one bin each, fully determined
        return T::one();
    }
    ((hx + hy - hxy) / norm).max(T::zero()).min(T::one())
}

/// `1 + sum (l/3) log_256 (l/3)` over the eigenvalues of a correlation matrix.
pub(crate) fn ncie_from_matrix<T: Real>(r: &[[T; 3]; 3]) -> T {
    let three = T::lit(3.0);
    let log_base = T::lit(BINS as f64).ln();
    let s: T = symmetric_eigenvalues_3x3(r)
        .iter()
        .map(|&l| l / three)
        .filter(|&p| p > T::zero())
        .map(|p| p * p.ln() / log_base)
        .sum();
    T::one() + s
}

pub fn q_ncie<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let la = rank_levels(a.as_plane());
    let lb = rank_levels(b.as_plane());
    let lf = rank_levels(f.as_plane());
    let ab: T = ncc_from_levels(&la, &lb);
    let af: T = ncc_from_levels(&la, &lf);
    let bf: T = ncc_from_levels(&lb, &lf);
    let one = T::one();
    let r = [[one, ab, af], [ab, one, bf], [af, bf, one]];
    Ok(MetricValue::new(MetricId::QNcie, ncie_from_matrix(&r)))
}

/// Tsallis mutual information of order `alpha` from a joint distribution.
pub(crate) fn tsallis_information<T: Real>(joint: &JointHistogram<T>, alpha: T) -> T {
    let px = joint.marginal_x();
    let pf = joint.marginal_f();
    let am1 = alpha - T::one();
    let mut s = T::zero();
    for (x, row) in joint.bins().chunks_exact(BINS).enumerate() {
        for (f, &p) in row.iter().enumerate() {
            if p > T::zero() {
                s += p.powf(alpha) / (px[x] * pf[f]).powf(am1);
            }
        }
    }
    (s - T::one()) / am1
}

pub fn te<T: Real>(
    a: &GrayPlane<T>,
    b: &GrayPlane<T>,
    f: &GrayPlane<T>,
    order: TsallisOrder,
) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let alpha = T::lit(order.alpha());
    let v = tsallis_information(&joint_histogram(a, f)?, alpha)
        + tsallis_information(&joint_histogram(b, f)?, alpha);
    Ok(MetricValue::new(MetricId::Te, v))
}

//! Structural-similarity metrics: SSIM (fusion form), Q_Y, Q_C, Q_W and MEF-SSIM.
//!
//! All of them work on 8x8 uniform windows at stride 1 ([`WindowSpec::DEFAULT`]).

use crate::error::{Error, Result};
use crate::image::plane::{ensure_triple, GrayPlane, Plane};
use crate::image::window::{box_mean, local_covariance, local_variance, WindowSpec};
use crate::metrics::{MetricId, MetricValue};
use crate::scalar::Real;

/// Stabilizing constants of the three SSIM factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimConstants<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

impl<T: Real> SsimConstants<T> {
    pub fn new(c1: T, c2: T, c3: T) -> Result<Self> {
        if c1 > T::zero() && c2 > T::zero() && c3 > T::zero() {
            Ok(Self { c1, c2, c3 })
        } else {
            Err(Error::InvalidParameter("SSIM constants must be positive".into()))
        }
    }

    /// `C1 = (0.01 * 255)^2`, `C2 = (0.03 * 255)^2`, `C3 = C2 / 2`.
    pub fn eight_bit() -> Self {
        let c1 = T::lit((0.01f64 * 255.0).powi(2));
        let c2 = T::lit((0.03f64 * 255.0).powi(2));
        Self {
            c1,
            c2,
            c3: c2 / T::lit(2.0),
        }
    }
}

impl<T: Real> Default for SsimConstants<T> {
    fn default() -> Self {
        Self::eight_bit()
    }
}

/// Per-window mixing weight in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SaliencyWeight<T>(T);

impl<T: Real> SaliencyWeight<T> {
    /// `s_a / (s_a + s_b)`, or one half when both saliencies vanish.
    pub fn from_saliency(s_a: T, s_b: T) -> Self {
        let (s_a, s_b) = (s_a.max(T::zero()), s_b.max(T::zero()));
        let total = s_a + s_b;
        if total > T::zero() {
            Self((s_a / total).min(T::one()))
        } else {
            Self(T::lit(0.5))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    /// `lambda * x + (1 - lambda) * y`.
    #[inline]
    pub fn blend(self, x: T, y: T) -> T {
        self.0 * x + (T::one() - self.0) * y
    }
}

/// Window means and (co)variances of a single pair of planes.
struct PairMoments<T> {
    mean_x: Plane<T>,
    mean_f: Plane<T>,
    var_x: Plane<T>,
    var_f: Plane<T>,
    cov: Plane<T>,
}

fn pair_moments<T: Real>(x: &Plane<T>, f: &Plane<T>, spec: WindowSpec) -> PairMoments<T> {
    let mean_x = box_mean(x, spec);
    let mean_f = box_mean(f, spec);
    PairMoments {
        var_x: local_variance(x, &mean_x, spec),
        var_f: local_variance(f, &mean_f, spec),
        cov: local_covariance(x, f, &mean_x, &mean_f, spec),
        mean_x,
        mean_f,
    }
}

/// Window moments of a fusion triple.
struct TripleMoments<T> {
    mean: [Plane<T>; 3],
    var: [Plane<T>; 3],
    cov_ab: Plane<T>,
    cov_af: Plane<T>,
    cov_bf: Plane<T>,
}

impl<T: Real> TripleMoments<T> {
    fn new(a: &Plane<T>, b: &Plane<T>, f: &Plane<T>, spec: WindowSpec) -> Self {
        let mean = [box_mean(a, spec), box_mean(b, spec), box_mean(f, spec)];
        let var = [
            local_variance(a, &mean[0], spec),
            local_variance(b, &mean[1], spec),
            local_variance(f, &mean[2], spec),
        ];
        let cov_ab = local_covariance(a, b, &mean[0], &mean[1], spec);
        let cov_af = local_covariance(a, f, &mean[0], &mean[2], spec);
        let cov_bf = local_covariance(b, f, &mean[1], &mean[2], spec);
        Self {
            mean,
            var,
            cov_ab,
            cov_af,
            cov_bf,
        }
    }

    fn len(&self) -> usize {
        self.cov_ab.len()
    }

    /// SSIM map between planes `i` and `j` (0 = a, 1 = b, 2 = f).
    fn ssim(&self, i: usize, j: usize, c: &SsimConstants<T>) -> Vec<T> {
        let cov = match (i, j) {
            (0, 1) => &self.cov_ab,
            (0, 2) => &self.cov_af,
            (1, 2) => &self.cov_bf,
            _ => unreachable!("pair ({i}, {j})"),
        };
        (0..self.len())
            .map(|k| {
                ssim_window(
                    self.mean[i].data()[k],
                    self.mean[j].data()[k],
                    self.var[i].data()[k],
                    self.var[j].data()[k],
                    cov.data()[k],
                    c,
                )
            })
            .collect()
    }
}

/// Luminance, contrast and structure factors of one window.
#[inline]
pub fn ssim_factors<T: Real>(mx: T, mf: T, vx: T, vf: T, cov: T, c: &SsimConstants<T>) -> (T, T, T) {
    let two = T::lit(2.0);
    let (sx, sf) = (vx.sqrt(), vf.sqrt());
    let lum = (two * mx * mf + c.c1) / (mx * mx + mf * mf + c.c1);
    let con = (two * sx * sf + c.c2) / (vx + vf + c.c2);
    let st = (cov + c.c3) / (sx * sf + c.c3);
    (lum, con, st)
}

/// Three-factor SSIM of one window from its population moments.
#[inline]
pub fn ssim_window<T: Real>(mx: T, mf: T, vx: T, vf: T, cov: T, c: &SsimConstants<T>) -> T {
    let (lum, con, st) = ssim_factors(mx, mf, vx, vf, cov, c);
    lum * con * st
}

/// SSIM map over window positions together with its mean.
#[derive(Clone, Debug, PartialEq)]
pub struct SsimResult<T> {
    pub map: Plane<T>,
    pub mean: T,
}

fn ensure_window<T: Real>(p: &GrayPlane<T>, spec: WindowSpec) -> Result<()> {
    p.ensure_min_size(spec.size, spec.size)
}

pub fn ssim_pair<T: Real>(x: &GrayPlane<T>, f: &GrayPlane<T>, c: &SsimConstants<T>) -> Result<SsimResult<T>> {
    x.ensure_same_shape(f)?;
    let spec = WindowSpec::DEFAULT;
    ensure_window(x, spec)?;
    let m = pair_moments(x.as_plane(), f.as_plane(), spec);
    let mut map = m.cov.clone();
    for (k, v) in map.data_mut().iter_mut().enumerate() {
        *v = ssim_window(
            m.mean_x.data()[k],
            m.mean_f.data()[k],
            m.var_x.data()[k],
            m.var_f.data()[k],
            m.cov.data()[k],
            c,
        );
    }
    let mean = map.mean();
    Ok(SsimResult { map, mean })
}

/// `SSIM(a, f) + SSIM(b, f)`.
pub fn ssim_fusion<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    let c = SsimConstants::eight_bit();
    let v = ssim_pair(a, f, &c)?.mean + ssim_pair(b, f, &c)?.mean;
    Ok(MetricValue::new(MetricId::Ssim, v))
}

fn mean_of<T: Real>(v: &[T]) -> T {
    v.iter().copied().sum::<T>() / T::from_usize_lossy(v.len())
}

fn prepare<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<TripleMoments<T>> {
    ensure_triple(a, b, f)?;
    let spec = WindowSpec::DEFAULT;
    ensure_window(f, spec)?;
    Ok(TripleMoments::new(a.as_plane(), b.as_plane(), f.as_plane(), spec))
}

/// Similarity threshold between the sources above which windows are blended.
pub const QY_THRESHOLD: f64 = 0.75;

pub fn qy<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    let m = prepare(a, b, f)?;
    let c = SsimConstants::eight_bit();
    let (s_ab, s_af, s_bf) = (m.ssim(0, 1, &c), m.ssim(0, 2, &c), m.ssim(1, 2, &c));
    let threshold = T::lit(QY_THRESHOLD);
    let per_window: Vec<T> = (0..m.len())
        .map(|k| {
            if s_ab[k] >= threshold {
                SaliencyWeight::from_saliency(m.var[0].data()[k], m.var[1].data()[k]).blend(s_af[k], s_bf[k])
            } else {
                s_af[k].max(s_bf[k])
            }
        })
        .collect();
    Ok(MetricValue::new(MetricId::Qy, mean_of(&per_window)))
}

pub fn qc<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    let m = prepare(a, b, f)?;
    let c = SsimConstants::eight_bit();
    let (s_af, s_bf) = (m.ssim(0, 2, &c), m.ssim(1, 2, &c));
    let per_window: Vec<T> = (0..m.len())
        .map(|k| {
            let w = SaliencyWeight::from_saliency(m.cov_af.data()[k], m.cov_bf.data()[k]);
            w.blend(s_af[k], s_bf[k])
        })
        .collect();
    Ok(MetricValue::new(MetricId::Qc, mean_of(&per_window)))
}

/// Universal quality index of one window.
#[inline]
pub fn uiqi_window<T: Real>(mx: T, mf: T, vx: T, vf: T, cov: T) -> T {
    let lum_den = mx * mx + mf * mf;
    let var_den = vx + vf;
    if var_den <= T::zero() {
        if lum_den <= T::zero() {
            return T::one();
        }
        return T::lit(2.0) * mx * mf / lum_den;
    }
    if lum_den <= T::zero() {
        return T::zero();
    }
    T::lit(4.0) * cov * mx * mf / (var_den * lum_den)
}

pub fn qw<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    let m = prepare(a, b, f)?;
    let mut num = T::zero();
    let mut total_saliency = T::zero();
    for k in 0..m.len() {
        let (sa, sb) = (m.var[0].data()[k], m.var[1].data()[k]);
        let cw = sa.max(sb);
        if cw <= T::zero() {
            continue;
        }
        let q_af = uiqi_window(m.mean[0].data()[k], m.mean[2].data()[k], sa, m.var[2].data()[k], m.cov_af.data()[k]);
        let q_bf = uiqi_window(m.mean[1].data()[k], m.mean[2].data()[k], sb, m.var[2].data()[k], m.cov_bf.data()[k]);
        num += cw * SaliencyWeight::from_saliency(sa, sb).blend(q_af, q_bf);
        total_saliency += cw;
    }
    if total_saliency <= T::zero() {
        return Err(Error::Degenerate("both sources are flat in every window"));
    }
    Ok(MetricValue::new(MetricId::Qw, num / total_saliency))
}

/// Exponent applied to patch signal strength when averaging structures.
pub const MEF_STRUCTURE_EXPONENT: i32 = 4;

/// MEF-SSIM of one window from the moments of the two exposures and the fused patch.
///
/// The desired patch takes the larger signal strength of the two exposures and
/// the strength-weighted mean of their unit structures; only its structure and
/// contrast are compared with the fused patch.
#[allow(clippy::too_many_arguments)]
pub(crate) fn mef_window<T: Real>(va: T, vb: T, vf: T, cab: T, caf: T, cbf: T, n: T, c2: T) -> T {
    let two = T::lit(2.0);
    let (ca, cb) = ((n * va).sqrt(), (n * vb).sqrt());
    let desired = ca.max(cb);
    let (wa, wb) = (ca.powi(MEF_STRUCTURE_EXPONENT), cb.powi(MEF_STRUCTURE_EXPONENT));
    let wsum = wa + wb;
    let (mut sigma_d2, mut sigma_df) = (T::zero(), T::zero());
    if wsum > T::zero() {
        let alpha_a = if ca > T::zero() { wa / (ca * wsum) } else { T::zero() };
        let alpha_b = if cb > T::zero() { wb / (cb * wsum) } else { T::zero() };
        let norm2 = n * (alpha_a * alpha_a * va + alpha_b * alpha_b * vb + two * alpha_a * alpha_b * cab);
        if norm2 > T::zero() {
            let norm = norm2.sqrt();
            let dot = n * (alpha_a * caf + alpha_b * cbf);
            sigma_d2 = desired * desired / n;
            sigma_df = desired * dot / (norm * n);
        }
    }
    (two * sigma_df + c2) / (sigma_d2 + vf + c2)
}

pub fn mef_ssim<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    let m = prepare(a, b, f)?;
    let spec = WindowSpec::DEFAULT;
    let n = T::from_usize_lossy(spec.size * spec.size);
    let c2 = SsimConstants::<T>::eight_bit().c2;
    let per_window: Vec<T> = (0..m.len())
        .map(|k| {
            mef_window(
                m.var[0].data()[k],
                m.var[1].data()[k],
                m.var[2].data()[k],
                m.cov_ab.data()[k],
                m.cov_af.data()[k],
                m.cov_bf.data()[k],
                n,
                c2,
            )
        })
        .collect();
    Ok(MetricValue::new(MetricId::MefSsim, mean_of(&per_window)))
}

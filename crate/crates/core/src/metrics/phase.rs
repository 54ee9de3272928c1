//! Phase-congruency fusion metric Q_P.
//!
//! Phase congruency follows Kovesi's log-Gabor formulation: a bank of
//! `NSCALE` radial scales by `NORIENT` angular sectors, noise compensation from
//! the median response at the finest scale, and a sigmoid frequency-spread
//! weight. The metric correlates the phase-congruency map and its maximum and
//! minimum moment maps between each source (and their pointwise maximum) and
//! the fused image.

use rustfft::num_complex::Complex;

use crate::error::Result;
use crate::image::fft::{signed_frequency, Fft2};
use crate::image::plane::{ensure_triple, GrayPlane, Plane};
use crate::metrics::{MetricId, MetricValue};
use crate::scalar::Real;

pub const QP_MIN_SIZE: usize = 32;

pub const NSCALE: usize = 4;
pub const NORIENT: usize = 6;
pub const MIN_WAVELENGTH: f64 = 3.0;
pub const MULT: f64 = 2.1;
pub const SIGMA_ON_F: f64 = 0.55;
pub const NOISE_K: f64 = 2.0;
pub const CUT_OFF: f64 = 0.5;
pub const GAIN: f64 = 10.0;
pub const PC_EPSILON: f64 = 1e-4;

/// Transfer functions of the log-Gabor bank, one row-major table per
/// (orientation, scale), over DFT bins of a `width x height` plane.
#[derive(Clone, Debug)]
pub struct LogGaborBank<T> {
    width: usize,
    height: usize,
    filters: Vec<Vec<T>>,
}

impl<T: Real> LogGaborBank<T> {
    pub fn new(width: usize, height: usize) -> Self {
        let n = width * height;
        let mut radius = vec![0.0f64; n];
        let mut theta = vec![0.0f64; n];
        for y in 0..height {
            let fy = signed_frequency(y, height) as f64 / height as f64;
            for x in 0..width {
                let fx = signed_frequency(x, width) as f64 / width as f64;
                radius[y * width + x] = (fx * fx + fy * fy).sqrt();
                theta[y * width + x] = (-fy).atan2(fx);
            }
        }
        let lowpass: Vec<f64> = radius
            .iter()
            .map(|r| 1.0 / (1.0 + (r / 0.45).powi(30)))
            .collect();
        let ln_sigma = SIGMA_ON_F.ln();
        let radial: Vec<Vec<f64>> = (0..NSCALE)
            .map(|s| {
                let fo = 1.0 / (MIN_WAVELENGTH * MULT.powi(s as i32));
                radius
                    .iter()
                    .zip(&lowpass)
                    .map(|(&r, &lp)| {
                        if r == 0.0 {
                            0.0
                        } else {
                            (-(r / fo).ln().powi(2) / (2.0 * ln_sigma * ln_sigma)).exp() * lp
                        }
                    })
                    .collect()
            })
            .collect();
        let mut filters = Vec::with_capacity(NORIENT * NSCALE);
        for o in 0..NORIENT {
            let angle = o as f64 * std::f64::consts::PI / NORIENT as f64;
            let (sa, ca) = angle.sin_cos();
            let spread: Vec<f64> = theta
                .iter()
                .map(|&t| {
                    let (st, ct) = t.sin_cos();
                    let ds = st * ca - ct * sa;
                    let dc = ct * ca + st * sa;
                    let dtheta = (ds.atan2(dc).abs() * NORIENT as f64 / 2.0).min(std::f64::consts::PI);
                    (dtheta.cos() + 1.0) / 2.0
                })
                .collect();
            for rad in &radial {
                filters.push(rad.iter().zip(&spread).map(|(&r, &s)| T::lit(r * s)).collect());
            }
        }
        Self { width, height, filters }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Transfer table of orientation `o`, scale `s`.
    pub fn filter(&self, o: usize, s: usize) -> &[T] {
        &self.filters[o * NSCALE + s]
    }
}

/// Phase congruency and its principal moments.
#[derive(Clone, Debug)]
pub struct PhaseCongruency<T> {
    pub pc: Plane<T>,
    pub max_moment: Plane<T>,
    pub min_moment: Plane<T>,
}

/// Combines complex filter responses `responses[o][s]` into phase-congruency
/// maps. Shared by every spectral backend.
pub fn phase_congruency_from_responses<T: Real>(
    width: usize,
    height: usize,
    responses: &[Vec<Vec<Complex<T>>>],
) -> PhaseCongruency<T> {
    let n = width * height;
    let eps = T::lit(PC_EPSILON);
    let mut cov_x = vec![T::zero(); n];
    let mut cov_y = vec![T::zero(); n];
    let mut cov_xy = vec![T::zero(); n];
    let mut energy_all = vec![T::zero(); n];
    let mut an_all = vec![T::zero(); n];

    let mult = MULT;
    let total_tau_factor = (1.0 - (1.0 / mult).powi(NSCALE as i32)) / (1.0 - 1.0 / mult);

    for (o, scales) in responses.iter().enumerate() {
        let angle = T::lit(o as f64 * std::f64::consts::PI / NORIENT as f64);
        let (sa, ca) = (angle.sin(), angle.cos());
        let mut sum_an = vec![T::zero(); n];
        let mut sum_e = vec![T::zero(); n];
        let mut sum_o = vec![T::zero(); n];
        let mut max_an = vec![T::zero(); n];
        let mut tau = T::zero();
        for (s, eo) in scales.iter().enumerate() {
            for i in 0..n {
                let an = eo[i].norm();
                sum_an[i] += an;
                sum_e[i] += eo[i].re;
                sum_o[i] += eo[i].im;
                if s == 0 || an > max_an[i] {
                    max_an[i] = an;
                }
            }
            if s == 0 {
                tau = median(&sum_an) / T::lit(4.0f64.ln().sqrt());
            }
        }
        let mut energy = vec![T::zero(); n];
        for i in 0..n {
            let xe = (sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]).sqrt() + eps;
            let (me, mo) = (sum_e[i] / xe, sum_o[i] / xe);
            let mut en = T::zero();
            for eo in scales {
                let (e, od) = (eo[i].re, eo[i].im);
                en += e * me + od * mo - (e * mo - od * me).abs();
            }
            energy[i] = en;
        }
        let total_tau = tau * T::lit(total_tau_factor);
        let noise_mean = total_tau * T::lit((std::f64::consts::PI / 2.0).sqrt());
        let noise_sigma = total_tau * T::lit(((4.0 - std::f64::consts::PI) / 2.0).sqrt());
        let threshold = noise_mean + T::lit(NOISE_K) * noise_sigma;
        for i in 0..n {
            let e = (energy[i] - threshold).max(T::zero());
            let width_frac = (sum_an[i] / (max_an[i] + eps) - T::one()) / T::lit((NSCALE - 1) as f64);
            let weight = T::one() / (T::one() + ((T::lit(CUT_OFF) - width_frac) * T::lit(GAIN)).exp());
            let we = weight * e;
            let pc_o = we / (sum_an[i] + eps);
            cov_x[i] += (pc_o * ca).powi(2);
            cov_y[i] += (pc_o * sa).powi(2);
            cov_xy[i] += pc_o * pc_o * ca * sa;
            energy_all[i] += we;
            an_all[i] += sum_an[i];
        }
    }

    let half = T::lit(NORIENT as f64 / 2.0);
    let two = T::lit(2.0);
    let mut max_m = vec![T::zero(); n];
    let mut min_m = vec![T::zero(); n];
    let mut pc = vec![T::zero(); n];
    for i in 0..n {
        let cx = cov_x[i] / half;
        let cy = cov_y[i] / half;
        let cxy = two * cov_xy[i] / half;
        let denom = (cxy * cxy + (cx - cy) * (cx - cy)).sqrt() + eps;
        max_m[i] = (cy + cx + denom) / two;
        min_m[i] = (cy + cx - denom) / two;
        pc[i] = energy_all[i] / (an_all[i] + eps);
    }
    let mk = |v: Vec<T>| Plane::new(width, height, v).expect("pc shape");
    PhaseCongruency {
        pc: mk(pc),
        max_moment: mk(max_m),
        min_moment: mk(min_m),
    }
}

fn median<T: Real>(v: &[T]) -> T {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / T::lit(2.0)
    }
}

/// Phase congruency of a plane using the FFT.
pub fn phase_congruency<T: Real>(p: &Plane<T>, bank: &LogGaborBank<T>, fft: &Fft2<T>) -> PhaseCongruency<T> {
    let spectrum = fft.forward_real(p);
    let responses: Vec<Vec<Vec<Complex<T>>>> = (0..NORIENT)
        .map(|o| {
            (0..NSCALE)
                .map(|s| fft.filter_complex(&spectrum, bank.filter(o, s)))
                .collect()
        })
        .collect();
    phase_congruency_from_responses(p.width(), p.height(), &responses)
}

/// Variance below which a map counts as flat.
const FLAT_VARIANCE: f64 = 1e-10;

/// Pearson correlation of two maps, clamped to `[0, 1]`.
///
/// Two flat maps correlate perfectly; one flat map against a varying one
/// does not correlate at all.
pub fn map_correlation<T: Real>(x: &Plane<T>, y: &Plane<T>) -> T {
    let (mx, my) = (x.mean(), y.mean());
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    let mut syy = T::zero();
    for (&a, &b) in x.data().iter().zip(y.data()) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    let n = T::from_usize_lossy(x.len());
    let flat = T::lit(FLAT_VARIANCE);
    match (sxx / n <= flat, syy / n <= flat) {
        (true, true) => T::one(),
        (true, false) | (false, true) => T::zero(),
        _ => (sxy / (sxx * syy).sqrt()).max(T::zero()).min(T::one()),
    }
}

/// Q_P from precomputed phase-congruency maps of `a`, `b`, `max(a, b)` and `f`.
pub fn qp_from_maps<T: Real>(
    a: &PhaseCongruency<T>,
    b: &PhaseCongruency<T>,
    s: &PhaseCongruency<T>,
    f: &PhaseCongruency<T>,
) -> T {
    let best = |pick: fn(&PhaseCongruency<T>) -> &Plane<T>| {
        [a, b, s]
            .iter()
            .map(|x| map_correlation(pick(x), pick(f)))
            .fold(T::zero(), |m, v| m.max(v))
    };
    let p = best(|m| &m.pc);
    let big = best(|m| &m.max_moment);
    let small = best(|m| &m.min_moment);
    p * big * small
}

pub fn qp<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    f.ensure_min_size(QP_MIN_SIZE, QP_MIN_SIZE)?;
    let (w, h) = (f.width(), f.height());
    let bank = LogGaborBank::new(w, h);
    let fft = Fft2::new(w, h);
    let s = a.as_plane().zip_map(b.as_plane(), |x, y| x.max(y));
    let pa = phase_congruency(a.as_plane(), &bank, &fft);
    let pb = phase_congruency(b.as_plane(), &bank, &fft);
    let ps = phase_congruency(&s, &bank, &fft);
    let pf = phase_congruency(f.as_plane(), &bank, &fft);
    Ok(MetricValue::new(MetricId::Qp, qp_from_maps(&pa, &pb, &ps, &pf)))
}

//! Image-feature metrics: AG, EI, Q^AB/F, SD and SF.

use crate::error::{Error, Result};
use crate::image::filter::{sobel_plane, GradientField};
use crate::image::plane::{ensure_triple, GrayPlane};
use crate::metrics::{MetricId, MetricValue};
use crate::scalar::Real;

pub fn ag<T: Real>(f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    f.ensure_min_size(2, 2)?;
    let (w, h) = (f.width(), f.height());
    let half = T::lit(0.5);
    let mut acc = T::zero();
    for y in 0..h - 1 {
        for x in 0..w - 1 {
            let v = f.get(x, y);
            let dx = v - f.get(x + 1, y);
            let dy = v - f.get(x, y + 1);
            acc += ((dx * dx + dy * dy) * half).sqrt();
        }
    }
    let n = T::from_usize_lossy((w - 1) * (h - 1));
    Ok(MetricValue::new(MetricId::Ag, acc / n))
}

pub fn ei<T: Real>(f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    f.ensure_min_size(3, 3)?;
    let mag = sobel_plane(f.as_plane()).magnitude();
    Ok(MetricValue::new(MetricId::Ei, mag.mean()))
}

pub fn sd<T: Real>(f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    let mu = f.as_plane().mean();
    let var = f.data().iter().map(|&v| (v - mu) * (v - mu)).sum::<T>() / T::from_usize_lossy(f.len());
    Ok(MetricValue::new(MetricId::Sd, var.sqrt()))
}

pub fn sf<T: Real>(f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    f.ensure_min_size(2, 2)?;
    let (w, h) = (f.width(), f.height());
    let mut row = T::zero();
    let mut col = T::zero();
    for y in 0..h {
        for x in 0..w {
            let v = f.get(x, y);
            if x > 0 {
                let d = v - f.get(x - 1, y);
                row += d * d;
            }
            if y > 0 {
                let d = v - f.get(x, y - 1);
                col += d * d;
            }
        }
    }
    let n = T::from_usize_lossy(w * h);
    Ok(MetricValue::new(MetricId::Sf, (row / n + col / n).sqrt()))
}

/// Sigmoid constants of the edge-preservation model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeModel {
    pub gamma_g: f64,
    pub kappa_g: f64,
    pub sigma_g: f64,
    pub gamma_a: f64,
    pub kappa_a: f64,
    pub sigma_a: f64,
}

impl EdgeModel {
    pub const XYDEAS_PETROVIC: EdgeModel = EdgeModel {
        gamma_g: 0.9994,
        kappa_g: -15.0,
        sigma_g: 0.5,
        gamma_a: 0.9879,
        kappa_a: -22.0,
        sigma_a: 0.8,
    };

    fn strength<T: Real>(&self, g: T) -> T {
        T::lit(self.gamma_g) / (T::one() + (T::lit(self.kappa_g) * (g - T::lit(self.sigma_g))).exp())
    }

    fn orientation<T: Real>(&self, a: T) -> T {
        T::lit(self.gamma_a) / (T::one() + (T::lit(self.kappa_a) * (a - T::lit(self.sigma_a))).exp())
    }

    /// Preservation of one pixel, scaled so that perfect preservation scores 1.
    pub fn preservation<T: Real>(&self, rel_strength: T, rel_orientation: T) -> T {
        let full = self.strength(T::one()) * self.orientation(T::one());
        self.strength(rel_strength) * self.orientation(rel_orientation) / full
    }
}

/// Edge orientation in `[0, pi)`-equivalent form, `[-pi/2, pi/2]`.
#[inline]
fn orientation<T: Real>(gx: T, gy: T) -> T {
    if gx == T::zero() {
        if gy == T::zero() {
            T::zero()
        } else {
            T::FRAC_PI_2()
        }
    } else {
        (gy / gx).atan()
    }
}

#[inline]
fn relative_strength<T: Real>(gx: T, gf: T) -> T {
    if gx == gf {
        T::one()
    } else if gx > gf {
        gf / gx
    } else {
        gx / gf
    }
}

/// `1 - d / (pi/2)` with `d` the axial angle difference (edge orientation is mod pi).
#[inline]
fn relative_orientation<T: Real>(ax: T, af: T) -> T {
    let mut d = (ax - af).abs();
    if d > T::FRAC_PI_2() {
        d = T::PI() - d;
    }
    T::one() - d / T::FRAC_PI_2()
}

struct EdgeMaps<T> {
    strength: Vec<T>,
    angle: Vec<T>,
}

fn edge_maps<T: Real>(g: &GradientField<T>) -> EdgeMaps<T> {
    let strength = g.magnitude().into_data();
    let angle = g
        .gx
        .data()
        .iter()
        .zip(g.gy.data())
        .map(|(&x, &y)| orientation(x, y))
        .collect();
    EdgeMaps { strength, angle }
}

/// Per-pixel edge preservation of `x` in `f`.
fn preservation_map<T: Real>(x: &EdgeMaps<T>, f: &EdgeMaps<T>, model: &EdgeModel) -> Vec<T> {
    (0..x.strength.len())
        .map(|i| {
            let g = relative_strength(x.strength[i], f.strength[i]);
            let a = relative_orientation(x.angle[i], f.angle[i]);
            model.preservation(g, a)
        })
        .collect()
}

pub fn qabf<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<MetricValue<T>> {
    qabf_with(a, b, f, &EdgeModel::XYDEAS_PETROVIC)
}

pub fn qabf_with<T: Real>(
    a: &GrayPlane<T>,
    b: &GrayPlane<T>,
    f: &GrayPlane<T>,
    model: &EdgeModel,
) -> Result<MetricValue<T>> {
    ensure_triple(a, b, f)?;
    f.ensure_min_size(3, 3)?;
    let ea = edge_maps(&sobel_plane(a.as_plane()));
    let eb = edge_maps(&sobel_plane(b.as_plane()));
    let ef = edge_maps(&sobel_plane(f.as_plane()));
    let qa = preservation_map(&ea, &ef, model);
    let qb = preservation_map(&eb, &ef, model);
    let mut num = T::zero();
    let mut den = T::zero();
    for i in 0..qa.len() {
        let (wa, wb) = (ea.strength[i], eb.strength[i]);
        num += qa[i] * wa + qb[i] * wb;
        den += wa + wb;
    }
    if den <= T::zero() {
        return Err(Error::Degenerate("both sources have no edges"));
    }
    Ok(MetricValue::new(MetricId::Qabf, (num / den).min(T::one())))
}

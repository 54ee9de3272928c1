//! A small exposure-fusion baseline: well-exposedness times local contrast,
//! blended through a Laplacian pyramid.

use crate::error::{Error, Result};
use crate::image::filter::{convolve3x3, separable_same, Kernel3};
use crate::image::{ColorImage, Plane};

pub const DEFAULT_LEVELS: usize = 4;
pub const WELL_EXPOSED_SIGMA: f64 = 0.2;
pub const CONTRAST_EPSILON: f64 = 1e-6;

const BINOMIAL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Per-pixel weights of the two sources.
#[derive(Clone, Debug)]
pub struct FusionWeights {
    pub a: Plane<f64>,
    pub b: Plane<f64>,
}

impl FusionWeights {
    /// Builds weights from nonnegative raw values.
    pub fn new(a: Plane<f64>, b: Plane<f64>) -> Result<Self> {
        crate::image::plane::ensure_same_shape(&a, &b)?;
        if a.data().iter().chain(b.data()).any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter("fusion weights must be finite and nonnegative".into()));
        }
        Ok(Self { a, b })
    }

    /// Rescales so the weights sum to one at each pixel; splits evenly where both vanish.
    pub fn normalized(&self) -> Self {
        let a = self.a.zip_map(&self.b, |x, y| if x + y > 0.0 { x / (x + y) } else { 0.5 });
        let b = a.map(|x| 1.0 - x);
        Self { a, b }
    }

    /// Baseline weights for a pair of exposures.
    pub fn baseline(a: &ColorImage, b: &ColorImage) -> Result<Self> {
        a.ensure_same_shape(b)?;
        Self::new(raw_weight(a), raw_weight(b))
    }
}

fn well_exposedness(img: &ColorImage) -> Plane<f64> {
    let denom = 2.0 * WELL_EXPOSED_SIGMA * WELL_EXPOSED_SIGMA;
    Plane::from_fn(img.width(), img.height(), |x, y| {
        img.pixel(x, y)
            .iter()
            .map(|&c| {
                let d = c as f64 / 255.0 - 0.5;
                (-d * d / denom).exp()
            })
            .product()
    })
}

fn raw_weight(img: &ColorImage) -> Plane<f64> {
    let laplacian: Kernel3<f64> = [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]];
    let gray = img.to_grayscale::<f64>().into_plane().map(|v| v / 255.0);
    let contrast = convolve3x3(&gray, &laplacian).map(|v| v.abs() + CONTRAST_EPSILON);
    well_exposedness(img).zip_map(&contrast, |w, c| w * c)
}

fn downsample(p: &Plane<f64>) -> Plane<f64> {
    let blurred = separable_same(p, &BINOMIAL);
    Plane::from_fn(p.width().div_ceil(2), p.height().div_ceil(2), |x, y| blurred.get(2 * x, 2 * y))
}

/// Expands along one axis: `out[x] = 2 * sum_i k[x - 2i + 2] * p[clamp(i)]`.
fn expand_1d(len: usize, out_len: usize, get: impl Fn(usize) -> f64) -> Vec<f64> {
    (0..out_len)
        .map(|x| {
            let mut acc = 0.0;
            for (t, &k) in BINOMIAL.iter().enumerate() {
                let d = x as isize + t as isize - 2;
                if d % 2 == 0 {
                    let i = (d / 2).clamp(0, len as isize - 1) as usize;
                    acc += 2.0 * k * get(i);
                }
            }
            acc
        })
        .collect()
}

fn upsample(p: &Plane<f64>, width: usize, height: usize) -> Plane<f64> {
    let mut rows = Vec::with_capacity(width * p.height());
    for y in 0..p.height() {
        rows.extend(expand_1d(p.width(), width, |i| p.get(i, y)));
    }
    let rows = Plane::new(width, p.height(), rows).expect("expand shape");
    let mut out = Plane::zeros(width, height);
    for x in 0..width {
        for (y, v) in expand_1d(p.height(), height, |j| rows.get(x, j)).into_iter().enumerate() {
            out.set(x, y, v);
        }
    }
    out
}

fn gaussian_pyramid(p: &Plane<f64>, levels: usize) -> Vec<Plane<f64>> {
    let mut out = vec![p.clone()];
    while out.len() < levels {
        let next = downsample(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

fn laplacian_pyramid(p: &Plane<f64>, levels: usize) -> Vec<Plane<f64>> {
    let g = gaussian_pyramid(p, levels);
    let mut out: Vec<Plane<f64>> = g
        .windows(2)
        .map(|w| {
            let up = upsample(&w[1], w[0].width(), w[0].height());
            w[0].zip_map(&up, |x, u| x - u)
        })
        .collect();
    out.push(g.last().expect("nonempty").clone());
    out
}

fn collapse(pyr: Vec<Plane<f64>>) -> Plane<f64> {
    let mut iter = pyr.into_iter().rev();
    let mut acc = iter.next().expect("nonempty pyramid");
    for level in iter {
        let up = upsample(&acc, level.width(), level.height());
        acc = level.zip_map(&up, |l, u| l + u);
    }
    acc
}

/// Largest usable pyramid depth for a `width x height` image.
pub fn max_levels(width: usize, height: usize) -> usize {
    let mut n = width.min(height);
    let mut levels = 1;
    while n > 1 {
        n = n.div_ceil(2);
        levels += 1;
    }
    levels
}

/// Fuses an under-exposed and an over-exposed image. `levels` is clamped to
/// what the image size allows.
pub fn fuse_baseline(a: &ColorImage, b: &ColorImage, levels: usize) -> Result<ColorImage> {
    if levels == 0 {
        return Err(Error::InvalidParameter("pyramid depth must be at least 1".into()));
    }
    let weights = FusionWeights::baseline(a, b)?.normalized();
    let (w, h) = (a.width(), a.height());
    let levels = levels.min(max_levels(w, h));
    let wa = gaussian_pyramid(&weights.a, levels);
    let wb = gaussian_pyramid(&weights.b, levels);
    let channel = |img: &ColorImage, c: usize| Plane::from_fn(w, h, |x, y| img.pixel(x, y)[c] as f64);

    let mut out = vec![0u8; w * h * 3];
    for c in 0..3 {
        let la = laplacian_pyramid(&channel(a, c), levels);
        let lb = laplacian_pyramid(&channel(b, c), levels);
        let blended: Vec<Plane<f64>> = la
            .iter()
            .zip(&lb)
            .zip(wa.iter().zip(&wb))
            .map(|((pa, pb), (ga, gb))| {
                Plane::from_fn(pa.width(), pa.height(), |x, y| {
                    ga.get(x, y) * pa.get(x, y) + gb.get(x, y) * pb.get(x, y)
                })
            })
            .collect();
        let fused = collapse(blended);
        for (i, v) in fused.data().iter().enumerate() {
            out[i * 3 + c] = v.round().clamp(0.0, 255.0) as u8;
        }
    }
    ColorImage::new(w, h, out)
}

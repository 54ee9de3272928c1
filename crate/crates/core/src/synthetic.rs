//! Seeded synthetic exposure pairs for tests, benchmarks and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::ColorImage;

pub const UNDER_GAIN: f64 = 1.0;
pub const OVER_GAIN: f64 = 8.0;
pub const GAMMA: f64 = 2.2;
pub const SHADOW: f64 = 0.01;
pub const HIGHLIGHT: f64 = 0.7;
pub const TEXTURE: f64 = 0.35;

/// Linear scene radiance in `[0, 1]`: textured, with illumination rising
/// log-linearly along a random slanted direction from deep shadow to
/// highlight.
pub fn radiance(width: usize, height: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.3..1.0),
            )
        })
        .collect();
    let norm: f64 = waves.iter().map(|w| w.3).sum();
    let slope = rng.gen_range(-0.3..0.3);
    let (lo, hi) = (SHADOW.ln(), HIGHLIGHT.ln());
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (xf, yf) = (x as f64, y as f64);
            let t: f64 = waves
                .iter()
                .map(|&(fx, fy, ph, amp)| amp * (xf * fx + ph).sin() * (yf * fy).cos())
                .sum::<f64>()
                / norm;
            let u = ((xf + slope * (yf - height as f64 / 2.0)) / width as f64).clamp(0.0, 1.0);
            let illumination = (lo + (hi - lo) * u).exp();
            out.push((illumination * (1.0 + TEXTURE * t)).clamp(0.0, 1.0));
        }
    }
    out
}

/// Renders radiance through a clipping gamma camera at the given gain.
pub fn expose(radiance: &[f64], width: usize, height: usize, gain: f64) -> ColorImage {
    ColorImage::from_fn(width, height, |x, y| {
        let v = (radiance[y * width + x] * gain).clamp(0.0, 1.0).powf(1.0 / GAMMA);
        let g = (255.0 * v).round() as u8;
        [g, g.saturating_add(3), g.saturating_sub(3)]
    })
}

/// Under- and over-exposed renderings of one seeded scene.
pub fn exposure_pair(width: usize, height: usize, seed: u64) -> (ColorImage, ColorImage) {
    let r = radiance(width, height, seed);
    (expose(&r, width, height, UNDER_GAIN), expose(&r, width, height, OVER_GAIN))
}

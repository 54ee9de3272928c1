use std::path::Path;

use crate::error::{Error, Result};
use crate::image::plane::GrayPlane;
use crate::scalar::Real;

/// BT.601 luma weights.
pub const LUMA_R: f64 = 0.299;
pub const LUMA_G: f64 = 0.587;
pub const LUMA_B: f64 = 0.114;

/// 8-bit interleaved RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidPlane(format!("empty image {width}x{height}")));
        }
        if data.len() != width * height * 3 {
            return Err(Error::InvalidPlane(format!(
                "sample buffer length {} does not match {width}x{height}x3",
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "empty image");
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self { width, height, data }
    }

    /// Gray image replicated into all three channels.
    pub fn from_gray_u8(width: usize, height: usize, gray: &[u8]) -> Result<Self> {
        if gray.len() != width * height {
            return Err(Error::InvalidPlane("gray buffer length mismatch".into()));
        }
        Self::new(width, height, gray.iter().flat_map(|&v| [v, v, v]).collect())
    }

    /// Decodes PNG or JPEG (8-bit gray or RGB; alpha is dropped).
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|e| Error::Decode(format!("{}: {e}", path.display())))?;
        Ok(Self::from_dynamic(img))
    }

    /// Reads only the header and returns `(width, height)`.
    pub fn probe_dimensions(path: impl AsRef<Path>) -> Result<(usize, usize)> {
        let path = path.as_ref();
        let (w, h) = image::image_dimensions(path).map_err(|e| Error::Decode(format!("{}: {e}", path.display())))?;
        Ok((w as usize, h as usize))
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory(bytes).map_err(|e| Error::Decode(e.to_string()))?;
        Ok(Self::from_dynamic(img))
    }

    fn from_dynamic(img: image::DynamicImage) -> Self {
        let rgb = img.into_rgb8();
        let (w, h) = rgb.dimensions();
        Self {
            width: w as usize,
            height: h as usize,
            data: rgb.into_raw(),
        }
    }

    /// Writes the image as PNG.
    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        image::save_buffer_with_format(
            path,
            &self.data,
            self.width as u32,
            self.height as u32,
            image::ExtendedColorType::Rgb8,
            image::ImageFormat::Png,
        )
        .map_err(|e| Error::Encode(format!("{}: {e}", path.display())))
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left_w: self.width,
                left_h: self.height,
                right_w: other.width,
                right_h: other.height,
            })
        }
    }

    /// Per-pixel BT.601 luma, kept as real (not re-quantized).
    pub fn to_grayscale<T: Real>(&self) -> GrayPlane<T> {
        let (wr, wg, wb) = (T::lit(LUMA_R), T::lit(LUMA_G), T::lit(LUMA_B));
        GrayPlane::from_fn_clamped(self.width, self.height, |x, y| {
            let [r, g, b] = self.pixel(x, y);
            wr * T::lit(f64::from(r)) + wg * T::lit(f64::from(g)) + wb * T::lit(f64::from(b))
        })
    }
}

/// Free-function form of [`ColorImage::to_grayscale`].
pub fn to_grayscale<T: Real>(img: &ColorImage) -> GrayPlane<T> {
    img.to_grayscale()
}

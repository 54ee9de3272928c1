use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major real-valued plane with no range restriction.
///
/// Filter responses, gradient components and other intermediates live here.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Real> Plane<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidPlane(format!("empty plane {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidPlane(format!(
                "buffer length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::filled(width, height, T::zero())
    }

    pub fn filled(width: usize, height: usize, value: T) -> Self {
        assert!(width > 0 && height > 0, "empty plane");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(width > 0 && height > 0, "empty plane");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
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
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: T) {
        self.data[y * self.width + x] = v;
    }

    /// Sample with coordinates clamped to the nearest edge pixel.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> T {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.data[cy * self.width + cx]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Element-wise combination of two equally sized planes.
    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        debug_assert!(self.same_shape(other));
        Self {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    #[inline]
    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn mean(&self) -> T {
        self.data.iter().copied().sum::<T>() / T::from_usize_lossy(self.data.len())
    }

    pub fn min_max(&self) -> (T, T) {
        self.data
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Mirror left-to-right.
    pub fn flip_horizontal(&self) -> Self {
        Self::from_fn(self.width, self.height, |x, y| self.get(self.width - 1 - x, y))
    }

    /// Copy of the rectangle `[x0, x0+w) x [y0, y0+h)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Self {
        assert!(x0 + w <= self.width && y0 + h <= self.height, "crop out of bounds");
        Self::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y))
    }
}

/// Single-channel luminance plane on the 8-bit scale `[0, 255]`.
///
/// Every value is finite and inside the range; this is what all metrics consume.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayPlane<T> {
    plane: Plane<T>,
}

impl<T: Real> GrayPlane<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        Self::from_plane(Plane::new(width, height, data)?)
    }

    pub fn from_plane(plane: Plane<T>) -> Result<Self> {
        let max = T::lit(255.0);
        if let Some((i, v)) = plane
            .data()
            .iter()
            .enumerate()
            .find(|(_, &v)| !v.is_finite() || v < T::zero() || v > max)
        {
            return Err(Error::InvalidPlane(format!(
                "value {v} at index {i} outside [0, 255]"
            )));
        }
        Ok(Self { plane })
    }

    /// Builds a plane, clamping every value into `[0, 255]`. NaN becomes 0.
    pub fn from_fn_clamped(width: usize, height: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        let plane = Plane::from_fn(width, height, f).map(clamp_gray);
        Self { plane }
    }

    pub fn constant(width: usize, height: usize, value: T) -> Result<Self> {
        Self::from_plane(Plane::filled(width, height, value))
    }

    pub fn from_u8(width: usize, height: usize, data: &[u8]) -> Result<Self> {
        let values = data.iter().map(|&v| T::lit(f64::from(v))).collect();
        Self::new(width, height, values)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.plane.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.plane.height()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.plane.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.plane.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        self.plane.data()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.plane.get(x, y)
    }

    #[inline]
    pub fn as_plane(&self) -> &Plane<T> {
        &self.plane
    }

    pub fn into_plane(self) -> Plane<T> {
        self.plane
    }

    pub fn flip_horizontal(&self) -> Self {
        Self {
            plane: self.plane.flip_horizontal(),
        }
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> GrayPlane<U> {
        let data = self.data().iter().map(|v| U::lit(v.as_f64())).collect();
        GrayPlane {
            plane: Plane::new(self.width(), self.height(), data).expect("shape preserved"),
        }
    }

    pub fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        ensure_same_shape(self.as_plane(), other.as_plane())
    }

    pub fn ensure_min_size(&self, min_width: usize, min_height: usize) -> Result<()> {
        if self.width() < min_width || self.height() < min_height {
            return Err(Error::PlaneTooSmall {
                width: self.width(),
                height: self.height(),
                min_width,
                min_height,
            });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn clamp_gray<T: Real>(v: T) -> T {
    if v.is_nan() {
        T::zero()
    } else {
        v.max(T::zero()).min(T::lit(255.0))
    }
}

pub(crate) fn ensure_same_shape<T: Real>(a: &Plane<T>, b: &Plane<T>) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left_w: a.width(),
            left_h: a.height(),
            right_w: b.width(),
            right_h: b.height(),
        })
    }
}

/// Checks that the three planes of a fusion triple share one shape.
pub fn ensure_triple<T: Real>(a: &GrayPlane<T>, b: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<()> {
    a.ensure_same_shape(f)?;
    b.ensure_same_shape(f)
}

//! 2D discrete Fourier transforms built from row/column 1D passes.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::image::plane::Plane;
use crate::scalar::Real;

/// Signed integer frequency of DFT bin `i` out of `n` (Nyquist maps to `-n/2`).
#[inline]
pub fn signed_frequency(i: usize, n: usize) -> isize {
    if 2 * i < n {
        i as isize
    } else {
        i as isize - n as isize
    }
}

pub struct Fft2<T: Real> {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<T>>,
    col_fwd: Arc<dyn Fft<T>>,
    row_inv: Arc<dyn Fft<T>>,
    col_inv: Arc<dyn Fft<T>>,
}

impl<T: Real> Fft2<T> {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            col_fwd: planner.plan_fft_forward(height),
            row_inv: planner.plan_fft_inverse(width),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn forward_real(&self, p: &Plane<T>) -> Vec<Complex<T>> {
        assert_eq!((p.width(), p.height()), (self.width, self.height));
        let mut buf: Vec<Complex<T>> = p.data().iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut buf, &self.row_fwd, &self.col_fwd);
        buf
    }

    /// Inverse transform, normalized by `1 / (w h)`.
    pub fn inverse(&self, spectrum: &mut [Complex<T>]) {
        self.transform(spectrum, &self.row_inv, &self.col_inv);
        let scale = T::one() / T::from_usize_lossy(self.width * self.height);
        for v in spectrum.iter_mut() {
            *v = *v * scale;
        }
    }

    fn transform(&self, buf: &mut [Complex<T>], row: &Arc<dyn Fft<T>>, col: &Arc<dyn Fft<T>>) {
        let (w, h) = (self.width, self.height);
        for r in buf.chunks_exact_mut(w) {
            row.process(r);
        }
        let mut column = vec![Complex::new(T::zero(), T::zero()); h];
        for x in 0..w {
            for y in 0..h {
                column[y] = buf[y * w + x];
            }
            col.process(&mut column);
            for y in 0..h {
                buf[y * w + x] = column[y];
            }
        }
    }

    /// Multiplies a spectrum by a transfer function of signed frequencies `(kx, ky)`.
    pub fn apply(&self, spectrum: &[Complex<T>], transfer: impl Fn(isize, isize) -> T) -> Vec<Complex<T>> {
        let (w, h) = (self.width, self.height);
        let mut out = spectrum.to_vec();
        for y in 0..h {
            let ky = signed_frequency(y, h);
            for x in 0..w {
                let kx = signed_frequency(x, w);
                out[y * w + x] = out[y * w + x] * transfer(kx, ky);
            }
        }
        out
    }

    /// Inverse of `spectrum * transfer` with the transfer function given as a
    /// row-major table over DFT bins.
    pub fn filter_complex(&self, spectrum: &[Complex<T>], transfer: &[T]) -> Vec<Complex<T>> {
        let mut s: Vec<Complex<T>> = spectrum.iter().zip(transfer).map(|(&c, &t)| c * t).collect();
        self.inverse(&mut s);
        s
    }

    /// Real part of the inverse of `spectrum * transfer`.
    pub fn filter_real(&self, spectrum: &[Complex<T>], transfer: impl Fn(isize, isize) -> T) -> Plane<T> {
        let mut s = self.apply(spectrum, transfer);
        self.inverse(&mut s);
        Plane::new(self.width, self.height, s.into_iter().map(|c| c.re).collect())
            .expect("fft shape")
    }
}

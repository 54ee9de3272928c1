use crate::error::Result;
use crate::image::plane::{GrayPlane, Plane};
use crate::scalar::Real;

pub const BINS: usize = 256;

/// Gray level of a value: floor, with 255 (and anything above) in the top bin.
#[inline]
pub fn bin_index<T: Real>(v: T) -> usize {
    let f = v.floor();
    if f <= T::zero() {
        0
    } else {
        f.to_usize().unwrap_or(BINS - 1).min(BINS - 1)
    }
}

/// Normalized 256-bin intensity distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram<T> {
    bins: Vec<T>,
}

impl<T: Real> Histogram<T> {
    pub fn from_counts(counts: &[u64]) -> Self {
        assert_eq!(counts.len(), BINS);
        let total: u64 = counts.iter().sum();
        assert!(total > 0, "histogram of zero samples");
        let n = T::lit(total as f64);
        Self {
            bins: counts.iter().map(|&c| T::lit(c as f64) / n).collect(),
        }
    }

    #[inline]
    pub fn bins(&self) -> &[T] {
        &self.bins
    }

    #[inline]
    pub fn get(&self, level: usize) -> T {
        self.bins[level]
    }

    pub fn entropy(&self) -> T {
        shannon_entropy(self)
    }
}

/// Normalized 256x256 co-occurrence distribution, indexed `[x_level * 256 + f_level]`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointHistogram<T> {
    bins: Vec<T>,
}

impl<T: Real> JointHistogram<T> {
    pub fn from_counts(counts: &[u64]) -> Self {
        assert_eq!(counts.len(), BINS * BINS);
        let total: u64 = counts.iter().sum();
        assert!(total > 0, "joint histogram of zero samples");
        let n = T::lit(total as f64);
        Self {
            bins: counts.iter().map(|&c| T::lit(c as f64) / n).collect(),
        }
    }

    #[inline]
    pub fn bins(&self) -> &[T] {
        &self.bins
    }

    #[inline]
    pub fn get(&self, x: usize, f: usize) -> T {
        self.bins[x * BINS + f]
    }

    /// Marginal over the first image (rows).
    pub fn marginal_x(&self) -> Vec<T> {
        self.bins
            .chunks_exact(BINS)
            .map(|row| row.iter().copied().sum())
            .collect()
    }

    /// Marginal over the second image (columns).
    pub fn marginal_f(&self) -> Vec<T> {
        let mut out = vec![T::zero(); BINS];
        for row in self.bins.chunks_exact(BINS) {
            for (o, &v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    pub fn transposed(&self) -> Self {
        let mut bins = vec![T::zero(); BINS * BINS];
        for x in 0..BINS {
            for f in 0..BINS {
                bins[f * BINS + x] = self.bins[x * BINS + f];
            }
        }
        Self { bins }
    }

    /// Joint entropy in bits.
    pub fn entropy(&self) -> T {
        entropy_of(&self.bins)
    }

    /// Mutual information in bits, from the joint and its own marginals.
    pub fn mutual_information(&self) -> T {
        let px = self.marginal_x();
        let pf = self.marginal_f();
        let mut mi = T::zero();
        for (x, row) in self.bins.chunks_exact(BINS).enumerate() {
            for (f, &p) in row.iter().enumerate() {
                if p > T::zero() {
                    mi += p * (p / (px[x] * pf[f])).log2();
                }
            }
        }
        mi
    }
}

pub fn level_counts<T: Real>(p: &Plane<T>) -> Vec<u64> {
    let mut counts = vec![0u64; BINS];
    for &v in p.data() {
        counts[bin_index(v)] += 1;
    }
    counts
}

pub fn histogram<T: Real>(p: &GrayPlane<T>) -> Histogram<T> {
    Histogram::from_counts(&level_counts(p.as_plane()))
}

/// Histogram of an arbitrary real plane after binning by floor (values clamped to 0..=255).
pub fn histogram_of_plane<T: Real>(p: &Plane<T>) -> Histogram<T> {
    Histogram::from_counts(&level_counts(p))
}

pub(crate) fn joint_counts_levels(x: &[usize], f: &[usize]) -> Vec<u64> {
    let mut counts = vec![0u64; BINS * BINS];
    for (&i, &j) in x.iter().zip(f) {
        counts[i * BINS + j] += 1;
    }
    counts
}

pub fn joint_histogram<T: Real>(x: &GrayPlane<T>, f: &GrayPlane<T>) -> Result<JointHistogram<T>> {
    x.ensure_same_shape(f)?;
    Ok(joint_histogram_of_planes(x.as_plane(), f.as_plane()))
}

pub(crate) fn joint_histogram_of_planes<T: Real>(x: &Plane<T>, f: &Plane<T>) -> JointHistogram<T> {
    let xl: Vec<usize> = x.data().iter().map(|&v| bin_index(v)).collect();
    let fl: Vec<usize> = f.data().iter().map(|&v| bin_index(v)).collect();
    JointHistogram::from_counts(&joint_counts_levels(&xl, &fl))
}

/// `-sum p log2 p` with `0 log 0 = 0`.
pub fn shannon_entropy<T: Real>(h: &Histogram<T>) -> T {
    entropy_of(h.bins())
}

pub(crate) fn entropy_of<T: Real>(probs: &[T]) -> T {
    let h = probs
        .iter()
        .filter(|&&p| p > T::zero())
        .map(|&p| -p * p.log2())
        .sum::<T>();
    // a single full bin gives -1 * log2(1) = -0.0
    h.max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_plane(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayPlane<f64> {
        GrayPlane::from_fn_clamped(w, h, |_, _| rng.gen_range(0.0..=255.0))
    }

    #[test]
    fn two_level_plane() {
        let p = GrayPlane::<f64>::new(2, 2, vec![0.0, 0.0, 255.0, 255.0]).unwrap();
        let h = histogram(&p);
        assert_eq!(h.get(0), 0.5);
        assert_eq!(h.get(255), 0.5);
        assert_eq!(h.bins().iter().filter(|&&v| v > 0.0).count(), 2);
        assert_eq!(h.entropy(), 1.0);
    }

    #[test]
    fn constant_plane_single_bin() {
        let p = GrayPlane::<f64>::constant(3, 5, 7.0).unwrap();
        let h = histogram(&p);
        assert_eq!(h.get(7), 1.0);
        assert_eq!(shannon_entropy(&h), 0.0);
    }

    #[test]
    fn fractional_values_floor() {
        assert_eq!(bin_index(7.999_f64), 7);
        assert_eq!(bin_index(255.0_f64), 255);
        assert_eq!(bin_index(254.5_f32), 254);
        assert_eq!(bin_index(0.0_f64), 0);
    }

    #[test]
    fn uniform_entropy_is_eight() {
        let h = Histogram::<f64>::from_counts(&[3; BINS]);
        assert!((shannon_entropy(&h) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn random_histogram_matches_counting_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_plane(&mut rng, 8, 8);
        let h = histogram(&p);
        for level in 0..BINS {
            let count = p
                .data()
                .iter()
                .filter(|&&v| (v.floor() as usize).min(255) == level)
                .count();
            assert_eq!(h.get(level), count as f64 / 64.0);
        }
    }

    #[test]
    fn joint_identical_is_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_plane(&mut rng, 16, 16);
        let j = joint_histogram(&p, &p).unwrap();
        for x in 0..BINS {
            for f in 0..BINS {
                if x != f {
                    assert_eq!(j.get(x, f), 0.0);
                }
            }
        }
    }

    #[test]
    fn joint_independence_construction() {
        let x = GrayPlane::<f64>::new(2, 2, vec![0.0, 0.0, 255.0, 255.0]).unwrap();
        let f = GrayPlane::<f64>::new(2, 2, vec![0.0, 255.0, 0.0, 255.0]).unwrap();
        let j = joint_histogram(&x, &f).unwrap();
        for (a, b) in [(0, 0), (0, 255), (255, 0), (255, 255)] {
            assert_eq!(j.get(a, b), 0.25);
        }
        assert!(j.mutual_information().abs() < 1e-15);
    }

    #[test]
    fn joint_matches_counting_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_plane(&mut rng, 8, 8);
        let f = random_plane(&mut rng, 8, 8);
        let j = joint_histogram(&x, &f).unwrap();
        let mut seen = 0.0;
        for a in 0..BINS {
            for b in 0..BINS {
                let count = x
                    .data()
                    .iter()
                    .zip(f.data())
                    .filter(|(&u, &v)| u.floor() as usize == a && v.floor() as usize == b)
                    .count();
                assert_eq!(j.get(a, b), count as f64 / 64.0);
                seen += j.get(a, b);
            }
        }
        assert!((seen - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_dimension_mismatch() {
        let x = GrayPlane::<f64>::constant(2, 2, 1.0).unwrap();
        let f = GrayPlane::<f64>::constant(2, 3, 1.0).unwrap();
        assert!(joint_histogram(&x, &f).is_err());
    }

    proptest! {
        #[test]
        fn mass_and_marginals(seed in any::<u64>(), w in 1usize..20, h in 1usize..20) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_plane(&mut rng, w, h);
            let f = random_plane(&mut rng, w, h);
            let hx = histogram(&x);
            let hf = histogram(&f);
            prop_assert!((hx.bins().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let j = joint_histogram(&x, &f).unwrap();
            prop_assert!((j.bins().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (a, b) in j.marginal_x().iter().zip(hx.bins()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for (a, b) in j.marginal_f().iter().zip(hf.bins()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let e = hx.entropy();
            prop_assert!((0.0..=8.0).contains(&e));
            let single = hx.bins().iter().any(|&v| v == 1.0);
            prop_assert_eq!(e == 0.0, single);
        }
    }
}

use crate::scalar::Real;

/// Eigenvalues of a real symmetric 3x3 matrix, descending.
///
/// Closed-form trigonometric solution of the characteristic cubic.
pub(crate) fn symmetric_eigenvalues_3x3<T: Real>(m: &[[T; 3]; 3]) -> [T; 3] {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let off = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let mut ev = if off == T::zero() {
        [m[0][0], m[1][1], m[2][2]]
    } else {
        let q = (m[0][0] + m[1][1] + m[2][2]) / three;
        let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + two * off;
        let p = (p2 / T::lit(6.0)).sqrt();
        let mut b = *m;
        for (i, row) in b.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - if i == j { q } else { T::zero() }) / p;
            }
        }
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let r = (det / two).max(-T::one()).min(T::one());
        let phi = r.acos() / three;
        let l1 = q + two * p * phi.cos();
        let l3 = q + two * p * (phi + two * T::PI() / three).cos();
        [l1, three * q - l1 - l3, l3]
    };
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_spectra() {
        let ones = [[1.0f64; 3]; 3];
        let ev = symmetric_eigenvalues_3x3(&ones);
        assert!((ev[0] - 3.0).abs() < 1e-12);
        assert!(ev[1].abs() < 1e-12 && ev[2].abs() < 1e-12);

        let id = [[1.0f64, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(symmetric_eigenvalues_3x3(&id), [1.0, 1.0, 1.0]);

        let m = [[2.0f64, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        let ev = symmetric_eigenvalues_3x3(&m);
        for (a, b) in ev.iter().zip([5.0, 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_and_determinant_preserved() {
        let m = [[1.0f64, 0.3, 0.2], [0.3, 1.0, 0.7], [0.2, 0.7, 1.0]];
        let ev = symmetric_eigenvalues_3x3(&m);
        assert!((ev.iter().sum::<f64>() - 3.0).abs() < 1e-12);
        let det = 1.0 * (1.0 - 0.49) - 0.3 * (0.3 - 0.14) + 0.2 * (0.21 - 0.2);
        assert!((ev.iter().product::<f64>() - det).abs() < 1e-12);
    }
}

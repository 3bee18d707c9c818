use crate::dualquat::DualQuaternion;
use crate::scalar::Real;

/// Polar form of the Study quadric,
/// `s(x, y) = Σₖ xₖ yₖ₊₄ + xₖ₊₄ yₖ` for `k = 0..4`.
///
/// `s(p, p) = 2⟨a, c⟩`, and `s(p, q) = 0` for two points `p, q` of the
/// quadric means that `q p̄` is a rotation (or a translation).
pub fn bilinear_form<T: Real>(x: &DualQuaternion<T>, y: &DualQuaternion<T>) -> T {
    let (a, b) = (x.coords(), y.coords());
    let mut s = T::zero();
    for k in 0..4 {
        s += a[k] * b[k + 4] + a[k + 4] * b[k];
    }
    s
}

/// `s` evaluated on the max-coordinate normalized representatives.
pub fn bilinear_form_normalized<T: Real>(x: &DualQuaternion<T>, y: &DualQuaternion<T>) -> T {
    bilinear_form(&x.normalized_projective(), &y.normalized_projective())
}

/// The coefficient vector `J y` with `s(x, y) = ⟨x, J y⟩`.
pub(crate) fn polar_row<T: Real>(y: &DualQuaternion<T>) -> [T; 8] {
    let c = y.coords();
    [c[4], c[5], c[6], c[7], c[0], c[1], c[2], c[3]]
}

#[cfg(test)]
mod tests {
    use super::*;

    type DQ = DualQuaternion<f64>;

    #[test]
    fn diagonal_is_twice_the_study_form() {
        let p = DQ::from_f64([1.0, 2.0, -1.0, 0.5, 0.3, -0.7, 1.1, 2.0]);
        let expected = 2.0 * p.primal.dot(p.dual);
        assert!((bilinear_form(&p, &p) - expected).abs() < 1e-15);
        assert!((p.study_residual() - expected.abs()).abs() < 1e-14);
    }

    #[test]
    fn polar_row_matches_form() {
        let x = DQ::from_f64([1.0, 2.0, -1.0, 0.5, 0.3, -0.7, 1.1, 2.0]);
        let y = DQ::from_f64([0.2, -1.0, 3.0, 1.0, -2.0, 0.4, 0.0, 1.5]);
        let row = polar_row(&y);
        let dot: f64 = x.coords().iter().zip(row).map(|(a, b)| a * b).sum();
        assert!((dot - bilinear_form(&x, &y)).abs() < 1e-14);
    }
}

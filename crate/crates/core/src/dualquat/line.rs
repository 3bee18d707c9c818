use serde::{Deserialize, Serialize};

use crate::linalg::Vec3;
use crate::scalar::Real;

/// Spatial line in Plücker coordinates.
///
/// The moment is `m = d × P` for any point `P` on the line. With this sign
/// the axis of a rotation `a + ε c` is `(vec a, vec c)` directly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LineAxis<T: Real> {
    pub direction: Vec3<T>,
    pub moment: Vec3<T>,
}

impl<T: Real> LineAxis<T> {
    pub const fn new(direction: Vec3<T>, moment: Vec3<T>) -> Self {
        Self { direction, moment }
    }

    pub fn from_f64(direction: [f64; 3], moment: [f64; 3]) -> Self {
        Self::new(Vec3::from_f64(direction), Vec3::from_f64(moment))
    }

    pub fn through_point(point: Vec3<T>, direction: Vec3<T>) -> Self {
        Self::new(direction, direction.cross(point))
    }

    /// The point of the line closest to the origin.
    pub fn point(&self) -> Vec3<T> {
        self.moment.cross(self.direction) / self.direction.norm_squared()
    }

    /// `⟨d, m⟩ / (|d| max(|d|, |m|))`, zero for a valid line.
    pub fn plucker_residual(&self) -> T {
        let dn = self.direction.norm();
        let scale = dn * dn.max(self.moment.norm());
        if scale == T::zero() {
            return T::zero();
        }
        self.direction.dot(self.moment).abs() / scale
    }

    pub fn is_valid(&self, tol: T) -> bool {
        self.direction.norm() > tol && self.plucker_residual() <= tol
    }

    /// Same line with unit direction.
    pub fn unit(&self) -> Option<Self> {
        let n = self.direction.norm();
        if n == T::zero() {
            return None;
        }
        Some(Self::new(self.direction / n, self.moment / n))
    }

    pub fn reversed(&self) -> Self {
        Self::new(-self.direction, -self.moment)
    }

    pub fn distance_to_point(&self, x: Vec3<T>) -> T {
        let u = self.direction;
        (u.cross(x) - self.moment).norm() / u.norm()
    }

    pub fn contains_point(&self, x: Vec3<T>, tol: T) -> bool {
        self.distance_to_point(x) <= tol * T::one().max(x.norm())
    }

    /// Orthogonal projection of `x` onto the line.
    pub fn project(&self, x: Vec3<T>) -> Vec3<T> {
        let p = self.point();
        let u = self.direction;
        p + u * ((x - p).dot(u) / u.norm_squared())
    }

    pub fn coords(&self) -> [T; 6] {
        let (d, m) = (self.direction, self.moment);
        [d.x, d.y, d.z, m.x, m.y, m.z]
    }

    /// Distance between the max-coordinate normalized 6-vectors, minimized
    /// over the sign of the scale.
    pub fn projective_distance(&self, other: &Self) -> T {
        let a = normalize6(self.coords());
        let b = normalize6(other.coords());
        let mut plus = T::zero();
        let mut minus = T::zero();
        for k in 0..6 {
            plus = plus.max((a[k] - b[k]).abs());
            minus = minus.max((a[k] + b[k]).abs());
        }
        plus.min(minus)
    }

    pub fn projective_eq(&self, other: &Self, tol: T) -> bool {
        self.projective_distance(other) <= tol
    }

    pub fn cast<U: Real>(&self) -> LineAxis<U> {
        LineAxis::new(self.direction.cast(), self.moment.cast())
    }
}

fn normalize6<T: Real>(c: [T; 6]) -> [T; 6] {
    let mut best = T::zero();
    for &v in &c {
        if v.abs() > best.abs() {
            best = v;
        }
    }
    if best == T::zero() {
        c
    } else {
        c.map(|v| v / best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = LineAxis<f64>;

    #[test]
    fn point_closest_to_origin() {
        let p = Vec3::new(1.0, 2.0, 0.0);
        let l = L::through_point(p + Vec3::new(0.0, 0.0, 5.0), Vec3::new(0.0, 0.0, 2.0));
        assert!((l.point() - p).norm() < 1e-15);
        assert!(l.plucker_residual() < 1e-15);
    }

    #[test]
    fn projective_equality_ignores_sign_and_scale() {
        let l = L::from_f64([0.0, 1.0, 1.0], [2.0, 1.5, -1.5]);
        let m = L::from_f64([0.0, -24.0, -24.0], [-48.0, -36.0, 36.0]);
        assert!(l.projective_eq(&m, 1e-15));
        let n = L::from_f64([0.0, 1.0, 1.0], [2.0, 1.5, 1.5]);
        assert!(!l.projective_eq(&n, 1e-3));
    }

    #[test]
    fn distance_to_point() {
        let l = L::through_point(Vec3::zero(), Vec3::new(1.0, 0.0, 0.0));
        assert!((l.distance_to_point(Vec3::new(7.0, 3.0, 4.0)) - 5.0).abs() < 1e-14);
    }
}

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::quaternion::Quaternion;
use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// Proper rotation of ℝ³ stored as its matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", transparent)]
pub struct Rotation3<T: Real> {
    pub matrix: Mat3<T>,
}

impl<T: Real> Rotation3<T> {
    pub fn identity() -> Self {
        Self { matrix: Mat3::identity() }
    }

    /// Wraps a matrix without checking orthogonality; see [`is_valid`](Self::is_valid).
    pub fn from_matrix_unchecked(matrix: Mat3<T>) -> Self {
        Self { matrix }
    }

    /// Rodrigues' formula. A zero axis gives the identity.
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let Some(u) = axis.normalized() else {
            return Self::identity();
        };
        let k = Mat3::skew(u);
        let m = Mat3::identity() + k * angle.sin() + (k * k) * (T::one() - angle.cos());
        Self { matrix: m }
    }

    pub fn from_quaternion(q: Quaternion<T>) -> Self {
        Self { matrix: q.to_rotation_matrix() }
    }

    /// Unit quaternion with nonnegative scalar part (Shepperd's method).
    pub fn to_quaternion(&self) -> Quaternion<T> {
        let m = &self.matrix.m;
        let tr = self.matrix.trace();
        let one = T::one();
        let quarter = T::lit(0.25);
        let q = if tr > m[0][0].max(m[1][1]).max(m[2][2]) {
            let s = (one + tr).sqrt() * T::two();
            Quaternion::new(
                quarter * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
            let s = (one + m[0][0] - m[1][1] - m[2][2]).sqrt() * T::two();
            Quaternion::new(
                (m[2][1] - m[1][2]) / s,
                quarter * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if m[1][1] >= m[2][2] {
            let s = (one + m[1][1] - m[0][0] - m[2][2]).sqrt() * T::two();
            Quaternion::new(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                quarter * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = (one + m[2][2] - m[0][0] - m[1][1]).sqrt() * T::two();
            Quaternion::new(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                quarter * s,
            )
        };
        let q = q.scale(q.norm().recip());
        if q.w < T::zero() {
            -q
        } else {
            q
        }
    }

    pub fn transpose(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }

    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        self.matrix * v
    }

    /// `‖MᵀM − I‖_F` and `|det M − 1|`, the larger of the two.
    pub fn orthogonality_residual(&self) -> T {
        let e = (self.matrix.transpose() * self.matrix - Mat3::identity()).frobenius_norm();
        e.max((self.matrix.determinant() - T::one()).abs())
    }

    pub fn is_valid(&self, tol: T) -> bool {
        self.orthogonality_residual() <= tol
    }

    /// Rotation angle in `[0, π]`, robust near both ends.
    pub fn angle(&self) -> T {
        let q = self.to_quaternion();
        T::two() * q.vector().norm().atan2(q.w.abs())
    }

    /// Angle from the trace alone, `acos((tr − 1)/2)`.
    pub fn angle_from_trace(&self) -> T {
        ((self.matrix.trace() - T::one()) * T::half())
            .clamp_to(-T::one(), T::one())
            .acos()
    }

    /// Unit axis oriented so that the rotation is by [`angle`](Self::angle)
    /// counterclockwise about it. `None` for the identity.
    pub fn axis(&self) -> Option<Vec3<T>> {
        let q = self.to_quaternion();
        q.vector().normalized()
    }

    /// Distance to another rotation, `‖A − B‖_F`.
    pub fn distance(&self, other: &Self) -> T {
        (self.matrix - other.matrix).frobenius_norm()
    }
}

impl<T: Real> Mul for Rotation3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { matrix: self.matrix * o.matrix }
    }
}

impl<T: Real> Mul<Vec3<T>> for Rotation3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.matrix * v
    }
}

/// `C(v) = (I − [v]ₓ)(I + [v]ₓ)⁻¹`.
///
/// Expanded in closed form as
/// `((1 − |v|²) I − 2[v]ₓ + 2 v vᵀ) / (1 + |v|²)`,
/// which is the rotation by `2 atan|v|` about `−v/|v|`.
pub fn cayley_transform<T: Real>(v: Vec3<T>) -> Rotation3<T> {
    let n2 = v.norm_squared();
    let two = T::two();
    let m = Mat3::identity() * (T::one() - n2) - Mat3::skew(v) * two + Mat3::outer(v, v) * two;
    Rotation3 { matrix: m * (T::one() + n2).recip() }
}

/// Unit quaternion of `C(v)`, proportional to `(1, −v)`.
pub fn cayley_quaternion<T: Real>(v: Vec3<T>) -> Quaternion<T> {
    let q = Quaternion::from_scalar_vector(T::one(), -v);
    q.scale(q.norm().recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn quaternion_round_trip() {
        for (axis, angle) in [
            (Vec3::new(1.0, 2.0, 3.0), 0.3),
            (Vec3::new(0.0, 0.0, 1.0), 3.1),
            (Vec3::new(-1.0, 0.5, 0.0), std::f64::consts::PI),
        ] {
            let r = Rotation3::from_axis_angle(axis, angle);
            let back = Rotation3::from_quaternion(r.to_quaternion());
            assert!(r.distance(&back) < 1e-13);
            assert!((r.angle() - angle).abs() < 1e-12);
        }
    }

    #[test]
    fn cayley_matches_its_quaternion() {
        let v = Vec3::new(0.4, -1.3, 2.0);
        let a = cayley_transform(v);
        let b = Rotation3::from_quaternion(cayley_quaternion(v));
        assert!(a.distance(&b) < 1e-14);
    }

    #[test]
    fn cayley_of_unit_z_is_a_quarter_turn() {
        let r = cayley_transform(Vec3::new(0.0, 0.0, 1.0));
        assert!((r.angle() - FRAC_PI_2).abs() < 1e-15);
        let ax = r.axis().unwrap();
        assert!((ax - Vec3::new(0.0, 0.0, -1.0)).norm() < 1e-15);
    }
}

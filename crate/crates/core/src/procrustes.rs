//! Rigid motions and least-squares direct-congruence fitting.
//!
//! The fit follows Horn's closed form: the optimal rotation is the unit
//! quaternion belonging to the largest eigenvalue of a symmetric 4×4 matrix
//! built from the cross-covariance. A quaternion always yields `det = +1`, so
//! no reflection correction is needed.

use serde::{Deserialize, Serialize};

use crate::dualquat::{DualQuaternion, Quaternion, Rotation3};
use crate::linalg::{symmetric_eigen, Mat3, Vec3};
use crate::scalar::Real;

/// `x ↦ R x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RigidMotion<T: Real> {
    pub rotation: Rotation3<T>,
    pub translation: Vec3<T>,
}

impl<T: Real> RigidMotion<T> {
    pub fn identity() -> Self {
        Self {
            rotation: Rotation3::identity(),
            translation: Vec3::zero(),
        }
    }

    pub fn new(rotation: Rotation3<T>, translation: Vec3<T>) -> Self {
        Self { rotation, translation }
    }

    pub fn translation_only(t: Vec3<T>) -> Self {
        Self::new(Rotation3::identity(), t)
    }

    pub fn apply(&self, x: Vec3<T>) -> Vec3<T> {
        self.rotation.apply(x) + self.translation
    }

    pub fn apply_vector(&self, v: Vec3<T>) -> Vec3<T> {
        self.rotation.apply(v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            self.rotation * other.rotation,
            self.rotation.apply(other.translation) + self.translation,
        )
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self::new(rt, -rt.apply(self.translation))
    }

    /// Dual quaternion with the same point action.
    pub fn to_dual_quaternion(&self) -> DualQuaternion<T> {
        let q = self.rotation.to_quaternion();
        DualQuaternion::translation(self.translation) * DualQuaternion::new(q, Quaternion::zero())
    }

    pub fn from_dual_quaternion(
        p: &DualQuaternion<T>,
    ) -> Result<Self, crate::dualquat::DualQuatError> {
        let (m, t) = p.to_matrix_translation()?;
        Ok(Self::new(Rotation3::from_matrix_unchecked(m), t))
    }

    /// Max distance between images of `points` under the two motions.
    pub fn distance_on(&self, other: &Self, points: &[Vec3<T>]) -> T {
        points
            .iter()
            .fold(T::zero(), |m, &p| m.max(self.apply(p).distance(other.apply(p))))
    }
}

/// Result of a rigid fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidFit<T: Real> {
    pub motion: RigidMotion<T>,
    /// Largest distance between a moved source point and its target.
    pub max_residual: T,
    pub rms: T,
}

fn centroid<T: Real>(pts: &[Vec3<T>]) -> Vec3<T> {
    let mut c = Vec3::zero();
    for &p in pts {
        c += p;
    }
    c / T::lit(pts.len() as f64)
}

/// Least-squares direct-congruence fit mapping `source` onto `target`.
///
/// Returns `None` for empty or mismatched inputs.
pub fn fit_rigid<T: Real>(source: &[Vec3<T>], target: &[Vec3<T>]) -> Option<RigidFit<T>> {
    if source.is_empty() || source.len() != target.len() {
        return None;
    }
    let cs = centroid(source);
    let ct = centroid(target);
    let mut s = Mat3::zero();
    for (&x, &y) in source.iter().zip(target) {
        s = s + Mat3::outer(x - cs, y - ct);
    }
    let m = &s.m;
    let (sxx, sxy, sxz) = (m[0][0], m[0][1], m[0][2]);
    let (syx, syy, syz) = (m[1][0], m[1][1], m[1][2]);
    let (szx, szy, szz) = (m[2][0], m[2][1], m[2][2]);
    let n = [
        [sxx + syy + szz, syz - szy, szx - sxz, sxy - syx],
        [syz - szy, sxx - syy - szz, sxy + syx, szx + sxz],
        [szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy],
        [sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz],
    ];
    let (_, vecs) = symmetric_eigen(n);
    let q = Quaternion::from_array(vecs[0]);
    let rotation = Rotation3::from_quaternion(q);
    let translation = ct - rotation.apply(cs);
    let motion = RigidMotion::new(rotation, translation);

    let mut max_residual = T::zero();
    let mut sq = T::zero();
    for (&x, &y) in source.iter().zip(target) {
        let e = motion.apply(x).distance(y);
        max_residual = max_residual.max(e);
        sq += e * e;
    }
    let rms = (sq / T::lit(source.len() as f64)).sqrt();
    Some(RigidFit {
        motion,
        max_residual,
        rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Vec<Vec3<f64>> {
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.2),
            Vec3::new(1.1, 0.9, -0.1),
            Vec3::new(-0.2, 1.0, 0.3),
        ]
    }

    #[test]
    fn recovers_known_motion() {
        let m = RigidMotion::new(
            Rotation3::from_axis_angle(Vec3::new(1.0, -2.0, 0.5), 2.4),
            Vec3::new(3.0, -1.0, 0.5),
        );
        let src = pts();
        let dst: Vec<_> = src.iter().map(|&p| m.apply(p)).collect();
        let fit = fit_rigid(&src, &dst).unwrap();
        assert!(fit.max_residual < 1e-12);
        assert!(fit.motion.rotation.distance(&m.rotation) < 1e-12);
        assert!((fit.motion.translation - m.translation).norm() < 1e-12);
    }

    #[test]
    fn mirror_image_is_not_fit() {
        let src = pts();
        let dst: Vec<_> = src.iter().map(|p| Vec3::new(p.x, p.y, -p.z)).collect();
        let fit = fit_rigid(&src, &dst).unwrap();
        assert!(fit.max_residual > 1e-2);
        assert!((fit.motion.rotation.matrix.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_quaternion_round_trip() {
        let m = RigidMotion::new(
            Rotation3::from_axis_angle(Vec3::new(0.0, 1.0, 1.0), 0.8),
            Vec3::new(1.0, 2.0, 3.0),
        );
        let back = RigidMotion::from_dual_quaternion(&m.to_dual_quaternion()).unwrap();
        assert!(m.distance_on(&back, &pts()) < 1e-14);
    }
}

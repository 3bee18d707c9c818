//! Dual-quaternion algebra, the Study quadric, Plücker lines, Cayley
//! rotations and Denavit–Hartenberg extraction.
//!
//! A pose is a dual quaternion `p = a + ε c`. It acts on points by
//! `x ↦ p_ε x p̄ / (p p̄)` and on lines by `L ↦ p L p̄ / (p p̄)`, so that
//! products compose right to left: `p q` applies `q` first.

mod dh;
mod dual_quaternion;
mod line;
mod quaternion;
mod rotation;

use thiserror::Error;

pub use dh::{dh_between_axes, dh_cycle, CommonNormal, DhParams};
pub use dual_quaternion::{dq_conjugate, dq_mul, Conjugation, DualQuaternion};
pub use line::LineAxis;
pub use quaternion::Quaternion;
pub use rotation::{cayley_quaternion, cayley_transform, Rotation3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DualQuatError {
    #[error("degenerate pose: primal part has norm {norm:e}")]
    DegeneratePose { norm: f64 },
    #[error("not a rotation: {reason}")]
    NotARotation { reason: &'static str },
    #[error("axes coincide")]
    CoincidentAxes,
    #[error("line has zero direction")]
    InvalidLine,
}

/// Study condition residual `|a c̄ + c ā|`.
pub fn study_residual<T: crate::Real>(p: &DualQuaternion<T>) -> T {
    p.study_residual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vec3;

    type DQ = DualQuaternion<f64>;

    fn poses() -> [DQ; 4] {
        [
            DQ::one(),
            DQ::from_f64([1.0, 0.0, 0.0, 1.0, 0.0, -1.0, -2.0, 0.0]),
            DQ::from_f64([1.0, 0.0, -1.0, 2.0, -3.0, 0.0, -1.0, 1.0]),
            DQ::from_f64([1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 1.0]),
        ]
    }

    #[test]
    fn example_poses_lie_on_the_quadric() {
        for p in poses() {
            assert_eq!(p.study_residual(), 0.0);
        }
    }

    #[test]
    fn quarter_turn_about_z() {
        let p = DQ::from_f64([1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let y = p.act_on_point(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((y - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        let half = DQ::from_f64([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let y = half.act_on_point(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert!((y - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_axis_through_origin() {
        let r = DQ::from_f64([1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let l = r.rotation_axis(1e-12).unwrap();
        assert_eq!(l.direction, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(l.moment, Vec3::zero());
    }

    #[test]
    fn identity_and_translation_are_not_rotations() {
        assert!(!DQ::one().is_rotation(1e-9));
        assert!(!DQ::from_f64([1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).is_rotation(1e-9));
    }

    #[test]
    fn line_action_agrees_with_point_action() {
        let p = DQ::rotation(Vec3::new(1.0, 2.0, -1.0), Vec3::new(0.5, 0.0, 3.0), 0.7).unwrap()
            * DQ::translation(Vec3::new(-1.0, 4.0, 2.0));
        let x = Vec3::new(1.0, -2.0, 0.25);
        let u = Vec3::new(0.0, 1.0, 1.0);
        let l = LineAxis::through_point(x, u);
        let image = p.act_on_line(&l).unwrap();
        let y = p.act_on_point(x).unwrap();
        let y2 = p.act_on_point(x + u).unwrap();
        let expected = LineAxis::through_point(y, y2 - y);
        assert!(image.projective_eq(&expected, 1e-13));
        assert!(image.plucker_residual() < 1e-14);
    }

    #[test]
    fn example_dh_cycle() {
        let p = poses();
        let r: Vec<DQ> = (0..4).map(|i| p[(i + 1) % 4] * p[i].quat_conj()).collect();
        let axes: Vec<_> = r.iter().map(|x| x.rotation_axis(1e-9).unwrap()).collect();
        let dh = dh_cycle(&axes, 1e-9).unwrap();
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        let h = std::f64::consts::FRAC_PI_2;
        let expected = [
            (3.0 * s2, 1.0, (s3 / 3.0).acos()),
            (1.5 * s6, -s3 / 2.0, h),
            (1.5 * s2, s2 / 2.0, h),
            (3.0, -0.5, h),
        ];
        for (got, (a, d, alpha)) in dh.iter().zip(expected) {
            assert!((got.a - a).abs() < 1e-12, "{got:?}");
            assert!((got.d - d).abs() < 1e-12, "{got:?}");
            assert!((got.alpha - alpha).abs() < 1e-12, "{got:?}");
        }
    }
}

//! Denavit–Hartenberg parameters of a closed chain of revolute axes.
//!
//! Conventions, fixed here and nowhere else:
//!
//! * `a_i` is the length of the common normal of axes `i` and `i+1`.
//! * `alpha_i` is the unsigned angle in `[0, π]` between the chosen
//!   directions of axes `i` and `i+1`. The right-handed signed value about
//!   the common normal (oriented from axis `i` to axis `i+1`) is kept in
//!   [`CommonNormal::signed_twist`].
//! * `d_i` is the signed distance, measured along the direction of axis `i`,
//!   from the foot of the common normal with axis `i+1` to the foot of the
//!   common normal with axis `i−1`.

use serde::{Deserialize, Serialize};

use super::line::LineAxis;
use super::DualQuatError;
use crate::linalg::{closest_line_params, Vec3};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DhParams<T: Real> {
    pub a: T,
    pub d: T,
    pub alpha: T,
}

impl<T: Real> DhParams<T> {
    pub fn max_abs_diff(&self, o: &Self) -> T {
        (self.a - o.a)
            .abs()
            .max((self.d - o.d).abs())
            .max((self.alpha - o.alpha).abs())
    }
}

/// Common normal of two axes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CommonNormal<T: Real> {
    /// Shortest distance between the lines.
    pub distance: T,
    /// Unsigned angle between the directions, in `[0, π]`.
    pub twist: T,
    /// Right-handed angle about the common normal, in `(−π, π]`.
    pub signed_twist: T,
    pub foot_a: Vec3<T>,
    pub foot_b: Vec3<T>,
    pub parallel: bool,
}

/// Common normal of `a` and `b`.
///
/// For parallel lines the normal is not unique; the foot on `a` is then the
/// point of `a` closest to the origin.
pub fn dh_between_axes<T: Real>(
    a: &LineAxis<T>,
    b: &LineAxis<T>,
    tol: T,
) -> Result<CommonNormal<T>, DualQuatError> {
    let ua = a.direction.normalized().ok_or(DualQuatError::InvalidLine)?;
    let ub = b.direction.normalized().ok_or(DualQuatError::InvalidLine)?;
    let pa = a.point();
    let pb = b.point();
    let scale = T::one().max(pa.norm()).max(pb.norm());
    let cos = ua.dot(ub).clamp_to(-T::one(), T::one());
    let twist = cos.acos();

    let sin = ua.sin_angle(ub);
    let closest = if sin > tol {
        closest_line_params(pa, ua, pb, ub)
    } else {
        None
    };
    let (foot_a, foot_b, parallel) = match closest {
        Some((s, r, _)) => (pa + ua * s, pb + ub * r, false),
        None => (pa, b.project(pa), true),
    };
    let distance = foot_a.distance(foot_b);
    if parallel && distance <= tol * scale {
        return Err(DualQuatError::CoincidentAxes);
    }

    let normal = if distance > tol * scale {
        (foot_b - foot_a) / distance
    } else {
        ua.cross(ub).normalized().unwrap_or_else(|| ua.any_orthogonal())
    };
    let signed_twist = ua.cross(ub).dot(normal).atan2(cos);

    Ok(CommonNormal {
        distance,
        twist,
        signed_twist,
        foot_a,
        foot_b,
        parallel,
    })
}

/// DH parameters of the closed chain `axes[0], axes[1], …, axes[n−1], axes[0]`.
pub fn dh_cycle<T: Real>(axes: &[LineAxis<T>], tol: T) -> Result<Vec<DhParams<T>>, DualQuatError> {
    let n = axes.len();
    let normals = (0..n)
        .map(|i| dh_between_axes(&axes[i], &axes[(i + 1) % n], tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..n)
        .map(|i| {
            let next = &normals[i];
            let prev = &normals[(i + n - 1) % n];
            let u = axes[i].direction.normalized().expect("checked above");
            DhParams {
                a: next.distance,
                d: (prev.foot_b - next.foot_a).dot(u),
                alpha: next.twist,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_lines_unit_apart() {
        let a = LineAxis::through_point(Vec3::zero(), Vec3::new(0.0, 0.0, 1.0));
        let b = LineAxis::through_point(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        let n = dh_between_axes::<f64>(&a, &b, 1e-12).unwrap();
        assert!((n.distance - 1.0).abs() < 1e-15);
        assert_eq!(n.twist, 0.0);
        assert!(n.parallel);
    }

    #[test]
    fn identical_lines_rejected() {
        let a = LineAxis::through_point(Vec3::new(1.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        let b = a.reversed();
        assert_eq!(dh_between_axes(&a, &b, 1e-12), Err(DualQuatError::CoincidentAxes));
    }

    #[test]
    fn skew_lines_signed_twist() {
        let a = LineAxis::through_point(Vec3::zero(), Vec3::new(1.0, 0.0, 0.0));
        let b = LineAxis::through_point(Vec3::new(0.0, 0.0, 2.0), Vec3::new(0.0, 1.0, 0.0));
        let n = dh_between_axes::<f64>(&a, &b, 1e-12).unwrap();
        assert!((n.distance - 2.0).abs() < 1e-15);
        assert!((n.signed_twist - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let b2 = b.reversed();
        let n2 = dh_between_axes(&a, &b2, 1e-12).unwrap();
        assert!((n2.signed_twist + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((n2.twist - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}

use serde::{Deserialize, Serialize};

use super::RollingError;
use crate::dualquat::{cayley_transform, Rotation3};
use crate::koenigs::QuadNet3;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// Coordinate direction in which the shift operators `π` (increment) and
/// `μ` (decrement) act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Axis1,
    Axis2,
}

impl Direction {
    fn step(self) -> (i64, i64) {
        match self {
            Direction::Axis1 => (1, 0),
            Direction::Axis2 => (0, 1),
        }
    }
}

/// Direction in which the two black faces meeting at the black vertex
/// `(m, n)` of a Koenigs net lie. Their white centers are `(m, n ± 1)` when
/// `m` is even and `(m ± 1, n)` otherwise.
pub fn joint_direction(m: i64) -> Direction {
    if m.rem_euclid(2) == 0 {
        Direction::Axis2
    } else {
        Direction::Axis1
    }
}

/// `(f*_{πi}, f*_{μi})`.
fn shifted<T: Real>(
    fstar: &QuadNet3<T>,
    (m, n): (i64, i64),
    dir: Direction,
) -> Result<(Vec3<T>, Vec3<T>), RollingError> {
    let (dm, dn) = dir.step();
    match (fstar.get(m + dm, n + dn), fstar.get(m - dm, n - dn)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(RollingError::IndexOutOfWindow { m, n }),
    }
}

/// `C(t f*_{πi}) C(−t f*_{μi})`.
pub fn rolling_rotation<T: Real>(
    fstar: &QuadNet3<T>,
    i: (i64, i64),
    dir: Direction,
    t: T,
) -> Result<Rotation3<T>, RollingError> {
    let (a, b) = shifted(fstar, i, dir)?;
    Ok(cayley_transform(a * t) * cayley_transform(b * -t))
}

/// Rotation angle of [`rolling_rotation`] in `[0, π]` from
/// `cos(α/2) = (1 + t²⟨f*_μ, f*_π⟩) / √((1 + t²|f*_μ|²)(1 + t²|f*_π|²))`.
///
/// A negative right-hand side describes the same rotation with the
/// opposite quaternion sign, so its absolute value is used.
pub fn snap_angle<T: Real>(
    fstar: &QuadNet3<T>,
    i: (i64, i64),
    dir: Direction,
    t: T,
) -> Result<T, RollingError> {
    let (a, b) = shifted(fstar, i, dir)?;
    let t2 = t * t;
    let c = (T::one() + t2 * a.dot(b))
        / ((T::one() + t2 * a.norm_squared()) * (T::one() + t2 * b.norm_squared())).sqrt();
    Ok(T::two() * c.abs().clamp_to(T::zero(), T::one()).acos())
}

/// `u = f*_{πi} − f*_{μi} + t f*_{πi} × f*_{μi}`, the direction of the
/// axis of [`rolling_rotation`] in the fixed frame.
pub fn axis_direction<T: Real>(
    fstar: &QuadNet3<T>,
    i: (i64, i64),
    dir: Direction,
    t: T,
    tol: T,
) -> Result<Vec3<T>, RollingError> {
    let (a, b) = shifted(fstar, i, dir)?;
    let u = a - b + a.cross(b) * t;
    if u.norm() <= tol {
        return Err(RollingError::DegenerateAxis { m: i.0, n: i.1 });
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koenigs::{enneper_gauss_map, Window};

    #[test]
    fn zero_t_is_identity() {
        let fs = enneper_gauss_map::<f64>(Window::square(2));
        let r = rolling_rotation(&fs, (1, 1), Direction::Axis1, 0.0).unwrap();
        assert_eq!(r, Rotation3::identity());
        assert_eq!(snap_angle(&fs, (1, 1), Direction::Axis1, 0.0).unwrap(), 0.0);
        let u = axis_direction(&fs, (1, 1), Direction::Axis1, 0.0, 1e-12).unwrap();
        assert_eq!(u, fs.get(2, 1).unwrap() - fs.get(0, 1).unwrap());
    }

    #[test]
    fn antiparallel_neighbours() {
        let mut fs = QuadNet3::<f64>::empty(Window::new(-1, 1, 0, 0));
        let a = Vec3::new(0.3, -0.2, 0.5);
        fs.set(1, 0, a);
        fs.set(-1, 0, -a);
        let u = axis_direction(&fs, (0, 0), Direction::Axis1, 2.5, 1e-12).unwrap();
        assert_eq!(u, a * 2.0);
    }

    #[test]
    fn equal_neighbours_do_not_rotate() {
        let mut fs = QuadNet3::<f64>::empty(Window::new(0, 0, -1, 1));
        fs.set(0, 1, Vec3::new(0.4, 0.1, -0.7));
        fs.set(0, -1, Vec3::new(0.4, 0.1, -0.7));
        let r = rolling_rotation(&fs, (0, 0), Direction::Axis2, 3.0).unwrap();
        assert!(r.distance(&Rotation3::identity()) < 1e-15);
        assert!(snap_angle(&fs, (0, 0), Direction::Axis2, 3.0).unwrap() < 1e-7);
        assert!(matches!(
            axis_direction(&fs, (0, 0), Direction::Axis2, 3.0, 1e-12),
            Err(RollingError::DegenerateAxis { .. })
        ));
    }

    #[test]
    fn out_of_window() {
        let fs = enneper_gauss_map::<f64>(Window::square(1));
        assert!(rolling_rotation(&fs, (1, 0), Direction::Axis1, 1.0).is_err());
    }
}

use serde::{Deserialize, Serialize};

use super::net::{QuadNet3, Window};
use super::KoenigsError;
use crate::dualquat::Rotation3;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// `w_{m,n} = (m, n, 0)`.
pub fn grid_plane<T: Real>(window: Window) -> QuadNet3<T> {
    QuadNet3::from_fn(window, |m, n| {
        Vec3::new(T::lit(m as f64), T::lit(n as f64), T::zero())
    })
}

/// Inversion `x ↦ c + r² (x − c)/|x − c|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Inversion<T: Real> {
    pub center: Vec3<T>,
    pub radius: T,
}

/// Similarity `x ↦ scale · Rz(rotation) x + translation`, optionally
/// followed by a sphere inversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MoebiusParams<T: Real> {
    pub scale: T,
    /// Angle about the z-axis, radians.
    pub rotation: T,
    pub translation: Vec3<T>,
    pub inversion: Option<Inversion<T>>,
}

impl<T: Real> Default for MoebiusParams<T> {
    fn default() -> Self {
        Self {
            scale: T::one(),
            rotation: T::zero(),
            translation: Vec3::zero(),
            inversion: None,
        }
    }
}

impl<T: Real> MoebiusParams<T> {
    pub fn translation(t: Vec3<T>) -> Self {
        Self {
            translation: t,
            ..Self::default()
        }
    }

    pub fn inversion(center: Vec3<T>, radius: T) -> Self {
        Self {
            inversion: Some(Inversion { center, radius }),
            ..Self::default()
        }
    }

    pub fn apply(&self, x: Vec3<T>) -> Option<Vec3<T>> {
        let rz = Rotation3::from_axis_angle(Vec3::new(T::zero(), T::zero(), T::one()), self.rotation);
        let y = rz.apply(x) * self.scale + self.translation;
        match self.inversion {
            None => Some(y),
            Some(Inversion { center, radius }) => {
                let d = y - center;
                let n2 = d.norm_squared();
                if n2 <= T::epsilon() * T::one().max(center.norm_squared()) {
                    return None;
                }
                Some(center + d * (radius * radius / n2))
            }
        }
    }
}

pub fn moebius_pretransform<T: Real>(
    net: &QuadNet3<T>,
    params: &MoebiusParams<T>,
) -> Result<QuadNet3<T>, KoenigsError> {
    let mut out = QuadNet3::empty(net.window);
    for ((m, n), x) in net.iter() {
        let y = params.apply(x).ok_or(KoenigsError::SingularVertex { m, n })?;
        out.set(m, n, y);
    }
    Ok(out)
}

/// Maps each vertex `w` to the second intersection of the ray from
/// `center` through `w` with the sphere `(sphere_center, radius)`.
/// `center` must lie on the sphere.
pub fn inverse_stereographic<T: Real>(
    net: &QuadNet3<T>,
    center: Vec3<T>,
    sphere_center: Vec3<T>,
    radius: T,
) -> Result<QuadNet3<T>, KoenigsError> {
    let off = (center.distance(sphere_center) - radius).abs();
    if off > T::lit(1e-12) * T::one().max(radius) {
        return Err(KoenigsError::ProjectionDegenerate {
            reason: "projection center is not on the sphere",
        });
    }
    let pc = center - sphere_center;
    let mut out = QuadNet3::empty(net.window);
    for ((m, n), w) in net.iter() {
        let d = w - center;
        let dd = d.norm_squared();
        if dd <= T::epsilon() * T::one().max(center.norm_squared()) {
            return Err(KoenigsError::ProjectionDegenerate {
                reason: "vertex coincides with the projection center",
            });
        }
        let s = -T::two() * pc.dot(d) / dd;
        out.set(m, n, center + d * s);
    }
    Ok(out)
}

/// Gauss map of the discrete Enneper surface: the grid over `window`
/// projected from `(0,0,4)` onto the sphere of radius 2 about `(0,0,2)`,
/// `f*_{m,n} = (16m, 16n, 4m² + 4n²)/(m² + n² + 16)`.
pub fn enneper_gauss_map<T: Real>(window: Window) -> QuadNet3<T> {
    let c = Vec3::new(T::zero(), T::zero(), T::lit(4.0));
    let s = Vec3::new(T::zero(), T::zero(), T::two());
    inverse_stereographic(&grid_plane(window), c, s, T::two()).expect("grid avoids (0,0,4)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_inversion() {
        let p = MoebiusParams::<f64>::inversion(Vec3::zero(), 1.0);
        let y = p.apply(Vec3::new(2.0, 0.0, 0.0)).unwrap();
        assert!((y - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-16);
        assert!(p.apply(Vec3::zero()).is_none());
    }

    #[test]
    fn off_sphere_center_rejected() {
        let net = grid_plane::<f64>(Window::square(1));
        assert!(inverse_stereographic(&net, Vec3::new(0.0, 0.0, 5.0), Vec3::zero(), 2.0).is_err());
    }
}

use super::RollingError;
use crate::linalg::Vec3;
use crate::procrustes::{fit_rigid, RigidFit};
use crate::scalar::Real;

/// The rigid motion taking `source` onto `target`, fitted on all four
/// vertices. Fails when the largest vertex error exceeds `tol` relative to
/// the size of the quadrilaterals.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn align_faces<T: Real>(
    source: &[Vec3<T>; 4],
    target: &[Vec3<T>; 4],
    tol: T,
) -> Result<RigidFit<T>, RollingError> {
    let scale = source
        .iter()
        .chain(target)
        .fold(T::one(), |m, p| m.max(p.norm()));
    let fit = fit_rigid(source, target).expect("four points");
    if !(fit.max_residual <= tol * scale) {
        return Err(RollingError::NotCongruent {
            face: None,
            residual: fit.max_residual.to_f64_lossy(),
        });
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualquat::Rotation3;
    use crate::procrustes::RigidMotion;

    fn quad() -> [Vec3<f64>; 4] {
        [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.1, 0.0),
            Vec3::new(1.2, 1.0, 0.3),
            Vec3::new(-0.1, 0.9, 0.2),
        ]
    }

    #[test]
    fn identical_quads() {
        let fit = align_faces(&quad(), &quad(), 1e-12).unwrap();
        assert!(fit.motion.distance_on(&RigidMotion::identity(), &quad()) < 1e-14);
    }

    #[test]
    fn translate() {
        let t = quad().map(|p| p + Vec3::new(1.0, 0.0, 0.0));
        let fit = align_faces(&quad(), &t, 1e-12).unwrap();
        assert!(fit.motion.rotation.distance(&Rotation3::identity()) < 1e-14);
        assert!((fit.motion.translation - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mirror_image_is_not_directly_congruent() {
        let m = quad().map(|p| Vec3::new(p.x, p.y, -p.z));
        assert!(matches!(
            align_faces(&quad(), &m, 1e-9),
            Err(RollingError::NotCongruent { .. })
        ));
    }
}

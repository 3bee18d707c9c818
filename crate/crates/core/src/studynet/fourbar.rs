use serde::{Deserialize, Serialize};

use super::rotation_net::{face_closure_residual, RotationQuadrilateral};
use super::StudyNetError;
use crate::dualquat::{dh_cycle, DhParams, DualQuatError, LineAxis};
use crate::scalar::Real;

/// A spatial 4R loop in its two assembly configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FourBar<T: Real> {
    pub fixed_axes: [LineAxis<T>; 4],
    pub everted_axes: [LineAxis<T>; 4],
    pub dh: [DhParams<T>; 4],
}

impl<T: Real> FourBar<T> {
    /// Largest componentwise DH difference between the two configurations.
    pub fn dh_mismatch(&self, tol: T) -> Result<T, DualQuatError> {
        let a = dh_cycle(&self.fixed_axes, tol)?;
        let b = dh_cycle(&self.everted_axes, tol)?;
        Ok(a
            .iter()
            .zip(&b)
            .fold(T::zero(), |m, (x, y)| m.max(x.max_abs_diff(y))))
    }
}

/// The four-bar of a rotation quadrilateral.
///
/// The fixed axes are the axes `Rᵢ` of the rotations. The everted axes are
/// `Q₀ = R₀`, `Q₁ = R₁`, `Q₂ = r̄₁ R₂ r₁` and `Q₃ = r₀ R₃ r̄₀`.
pub fn fourbar_from_face<T: Real>(
    q: &RotationQuadrilateral<T>,
    tol: T,
) -> Result<FourBar<T>, StudyNetError> {
    let closure = face_closure_residual(q);
    if closure > tol {
        return Err(StudyNetError::ClosureFailed {
            residual: closure.to_f64_lossy(),
        });
    }
    let r = q.rotations;
    let mut fixed = [LineAxis::new(Default::default(), Default::default()); 4];
    for i in 0..4 {
        fixed[i] = r[i]
            .rotation_axis(tol)
            .map_err(|_| StudyNetError::NotARotationInFace(i))?;
    }
    let everted = [
        fixed[0],
        fixed[1],
        r[1].quat_conj().act_on_line(&fixed[2])?,
        r[0].act_on_line(&fixed[3])?,
    ];
    let same = (0..4).all(|i| fixed[i].projective_eq(&everted[i], tol.sqrt()));
    if same {
        return Err(StudyNetError::DegenerateFace);
    }
    let dh_fixed = dh_cycle(&fixed, tol).map_err(|_| StudyNetError::DegenerateFace)?;
    let dh_everted = dh_cycle(&everted, tol).map_err(|_| StudyNetError::DegenerateFace)?;
    let mismatch = dh_fixed
        .iter()
        .zip(&dh_everted)
        .fold(T::zero(), |m, (x, y)| m.max(x.max_abs_diff(y)));
    let scale = fixed
        .iter()
        .fold(T::one(), |m, l| m.max(l.unit().map_or(T::zero(), |u| u.moment.norm())));
    if mismatch > tol.sqrt() * scale {
        return Err(StudyNetError::DhMismatch {
            residual: mismatch.to_f64_lossy(),
        });
    }
    Ok(FourBar {
        fixed_axes: fixed,
        everted_axes: everted,
        dh: [dh_fixed[0], dh_fixed[1], dh_fixed[2], dh_fixed[3]],
    })
}

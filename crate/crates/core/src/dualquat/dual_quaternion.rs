use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::line::LineAxis;
use super::quaternion::Quaternion;
use super::DualQuatError;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// Which conjugation to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugation {
    /// `p̄ = ā + ε c̄`
    Quaternion,
    /// `p_ε = a − ε c`
    Epsilon,
}

/// Dual quaternion `p = a + ε c` with `ε² = 0`.
///
/// Poses are kept unnormalized; projective comparisons go through
/// [`DualQuaternion::normalized_projective`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DualQuaternion<T: Real> {
    pub primal: Quaternion<T>,
    pub dual: Quaternion<T>,
}

impl<T: Real> DualQuaternion<T> {
    #[inline]
    pub const fn new(primal: Quaternion<T>, dual: Quaternion<T>) -> Self {
        Self { primal, dual }
    }

    pub fn from_coords(c: [T; 8]) -> Self {
        Self::new(
            Quaternion::new(c[0], c[1], c[2], c[3]),
            Quaternion::new(c[4], c[5], c[6], c[7]),
        )
    }

    pub fn from_f64(c: [f64; 8]) -> Self {
        Self::from_coords(c.map(T::lit))
    }

    pub fn coords(&self) -> [T; 8] {
        let (a, c) = (self.primal, self.dual);
        [a.w, a.x, a.y, a.z, c.w, c.x, c.y, c.z]
    }

    pub fn one() -> Self {
        Self::new(Quaternion::one(), Quaternion::zero())
    }

    pub fn zero() -> Self {
        Self::new(Quaternion::zero(), Quaternion::zero())
    }

    pub fn from_real(s: T) -> Self {
        Self::new(Quaternion::new(s, T::zero(), T::zero(), T::zero()), Quaternion::zero())
    }

    /// Pure translation by `t`. Under the point action used here this is
    /// `1 − ½ ε t`.
    pub fn translation(t: Vec3<T>) -> Self {
        Self::new(Quaternion::one(), Quaternion::pure(t * -T::half()))
    }

    /// Rotation by `angle` about the oriented line through `point` with
    /// direction `axis`.
    pub fn rotation(axis: Vec3<T>, point: Vec3<T>, angle: T) -> Option<Self> {
        let u = axis.normalized()?;
        let half = angle * T::half();
        let r = Self::new(
            Quaternion::from_scalar_vector(half.cos(), u * half.sin()),
            Quaternion::zero(),
        );
        Some(Self::translation(point) * r * Self::translation(-point))
    }

    pub fn conj(self, kind: Conjugation) -> Self {
        match kind {
            Conjugation::Quaternion => Self::new(self.primal.conj(), self.dual.conj()),
            Conjugation::Epsilon => Self::new(self.primal, -self.dual),
        }
    }

    #[inline]
    pub fn quat_conj(self) -> Self {
        self.conj(Conjugation::Quaternion)
    }

    #[inline]
    pub fn eps_conj(self) -> Self {
        self.conj(Conjugation::Epsilon)
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.primal.scale(s), self.dual.scale(s))
    }

    pub fn max_abs(&self) -> T {
        self.primal.max_abs().max(self.dual.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }

    /// Representative with the largest-magnitude coordinate equal to `+1`.
    /// The zero dual quaternion is returned unchanged.
    pub fn normalized_projective(self) -> Self {
        let c = self.coords();
        let mut best = T::zero();
        for &v in &c {
            if v.abs() > best.abs() {
                best = v;
            }
        }
        if best == T::zero() {
            self
        } else {
            self.scale(best.recip())
        }
    }

    /// Max-coordinate distance between the projective normalizations.
    pub fn projective_distance(self, other: Self) -> T {
        let a = self.normalized_projective().coords();
        let b = other.normalized_projective().coords();
        a.iter().zip(&b).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
    }

    /// `|a c̄ + c ā|`, i.e. `2|⟨a, c⟩|`.
    pub fn study_residual(&self) -> T {
        let prod = self.primal * self.dual.conj() + self.dual * self.primal.conj();
        prod.scalar().abs()
    }

    /// Study residual of the max-coordinate normalized representative.
    pub fn study_residual_normalized(&self) -> T {
        self.normalized_projective().study_residual()
    }

    /// Real part and norm of the non-real remainder of `self`, after
    /// max-coordinate normalization.
    pub fn non_real_residual(&self) -> T {
        let c = self.normalized_projective().coords();
        c.iter()
            .enumerate()
            .filter(|(i, _)| *i != 0)
            .fold(T::zero(), |s, (_, v)| s + *v * *v)
            .sqrt()
    }

    // Written negated so that NaN norms are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn check_primal(&self) -> Result<T, DualQuatError> {
        let n2 = self.primal.norm_squared();
        let scale = self.max_abs();
        if !(n2.sqrt() > T::lit(1e-12) * scale) || scale == T::zero() {
            return Err(DualQuatError::DegeneratePose {
                norm: n2.sqrt().to_f64_lossy(),
            });
        }
        Ok(n2)
    }

    /// Displaced point `p_ε x p̄ / (p p̄)`. Any non-Study component of `p`
    /// is ignored.
    pub fn act_on_point(&self, x: Vec3<T>) -> Result<Vec3<T>, DualQuatError> {
        let n2 = self.check_primal()?;
        let (a, c) = (self.primal, self.dual);
        let rotated = a * Quaternion::pure(x) * a.conj();
        let shift = a * c.conj() - c * a.conj();
        Ok((rotated + shift).vector() / n2)
    }

    /// Transformed line `p L p̄ / (p p̄)`, the line counterpart of
    /// [`act_on_point`](Self::act_on_point).
    pub fn act_on_line(&self, line: &LineAxis<T>) -> Result<LineAxis<T>, DualQuatError> {
        let n2 = self.check_primal()?;
        let (a, c) = (self.primal, self.dual);
        let d = Quaternion::pure(line.direction);
        let m = Quaternion::pure(line.moment);
        let dir = a * d * a.conj();
        let mom = a * m * a.conj() + c * d * a.conj() + a * d * c.conj();
        Ok(LineAxis::new(dir.vector() / n2, mom.vector() / n2))
    }

    /// Rigid motion as rotation matrix and translation, `x ↦ R x + t`.
    pub fn to_matrix_translation(
        &self,
    ) -> Result<(crate::linalg::Mat3<T>, Vec3<T>), DualQuatError> {
        let t = self.act_on_point(Vec3::zero())?;
        Ok((self.primal.to_rotation_matrix(), t))
    }

    /// True iff (after normalization) the dual part has vanishing scalar and
    /// the primal vector part is nonzero. Identity and translations are not
    /// rotations.
    pub fn is_rotation(&self, tol: T) -> bool {
        let p = self.normalized_projective();
        if p.study_residual() > tol {
            return false;
        }
        p.dual.scalar().abs() <= tol && p.primal.vector().norm() > tol
    }

    /// Axis of a rotation in Plücker form: the vector parts of the primal
    /// and dual part.
    pub fn rotation_axis(&self, tol: T) -> Result<LineAxis<T>, DualQuatError> {
        if !self.is_rotation(tol) {
            let p = self.normalized_projective();
            let reason = if p.primal.vector().norm() <= tol {
                "primal vector part vanishes"
            } else if p.study_residual() > tol {
                "not on the Study quadric"
            } else {
                "dual part has a scalar component"
            };
            return Err(DualQuatError::NotARotation { reason });
        }
        Ok(LineAxis::new(self.primal.vector(), self.dual.vector()))
    }

    /// Rotation angle in `[0, π]` of the underlying rigid motion.
    pub fn rotation_angle(&self) -> T {
        let a = self.primal;
        let n = a.norm();
        let s = (a.w.abs() / n).clamp_to(T::zero(), T::one());
        T::two() * s.acos()
    }

    pub fn cast<U: Real>(self) -> DualQuaternion<U> {
        DualQuaternion::from_coords(self.coords().map(|v| U::lit(v.to_f64_lossy())))
    }
}

impl<T: Real> Add for DualQuaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.primal + o.primal, self.dual + o.dual)
    }
}

impl<T: Real> Sub for DualQuaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.primal - o.primal, self.dual - o.dual)
    }
}

impl<T: Real> Neg for DualQuaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.primal, -self.dual)
    }
}

impl<T: Real> Mul for DualQuaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.primal * o.primal,
            self.primal * o.dual + self.dual * o.primal,
        )
    }
}

/// `p · q`; `p` is applied after `q`.
pub fn dq_mul<T: Real>(p: DualQuaternion<T>, q: DualQuaternion<T>) -> DualQuaternion<T> {
    p * q
}

pub fn dq_conjugate<T: Real>(p: DualQuaternion<T>, kind: Conjugation) -> DualQuaternion<T> {
    p.conj(kind)
}

impl<T: Real> Serialize for DualQuaternion<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for DualQuaternion<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: [T; 8] = Deserialize::deserialize(d)?;
        Ok(Self::from_coords(v))
    }
}

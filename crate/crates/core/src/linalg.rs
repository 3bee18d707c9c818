//! Small fixed-size linear algebra over [`Real`].
//!
//! Only what the geometry needs: 3-vectors, 3×3 matrices, a cyclic Jacobi
//! eigen-solver for small symmetric matrices, and orthogonal complements in
//! ℝⁿ via modified Gram–Schmidt.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Real;

/// A vector in ℝ³.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn from_f64(v: [f64; 3]) -> Self {
        Self::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2]))
    }

    #[inline]
    pub fn from_array(v: [T; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    #[inline]
    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    /// Unit vector, or `None` for a (numerically) zero input.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::min_positive_value() && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    #[inline]
    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn distance(self, o: Self) -> T {
        (self - o).norm()
    }

    /// Any unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_orthogonal(self) -> Self {
        let ax = self.x.abs();
        let ay = self.y.abs();
        let az = self.z.abs();
        let other = if ax <= ay && ax <= az {
            Self::new(T::one(), T::zero(), T::zero())
        } else if ay <= az {
            Self::new(T::zero(), T::one(), T::zero())
        } else {
            Self::new(T::zero(), T::zero(), T::one())
        };
        self.cross(other).normalized().unwrap_or(other)
    }

    /// Sine of the angle between two vectors, `‖a × b‖ / (‖a‖‖b‖)`.
    ///
    /// Zero vectors are reported as parallel.
    pub fn sin_angle(self, o: Self) -> T {
        let d = self.norm() * o.norm();
        if d <= T::min_positive_value() {
            T::zero()
        } else {
            self.cross(o).norm() / d
        }
    }

    /// Unsigned angle in `[0, π]`.
    pub fn angle(self, o: Self) -> T {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        Vec3::new(
            U::lit(self.x.to_f64_lossy()),
            U::lit(self.y.to_f64_lossy()),
            U::lit(self.z.to_f64_lossy()),
        )
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Div<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T: Real> Serialize for Vec3<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y, self.z].serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Vec3<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let a = <[T; 3]>::deserialize(d)?;
        Ok(Self::from_array(a))
    }
}

/// A 3×3 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    pub fn zero() -> Self {
        Self {
            m: [[T::zero(); 3]; 3],
        }
    }

    pub fn from_rows(r0: Vec3<T>, r1: Vec3<T>, r2: Vec3<T>) -> Self {
        Self {
            m: [r0.to_array(), r1.to_array(), r2.to_array()],
        }
    }

    pub fn from_cols(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Self::from_rows(c0, c1, c2).transpose()
    }

    /// The cross-product matrix `[v]ₓ`, so that `[v]ₓ x = v × x`.
    pub fn skew(v: Vec3<T>) -> Self {
        let z = T::zero();
        Self {
            m: [[z, -v.z, v.y], [v.z, z, -v.x], [-v.y, v.x, z]],
        }
    }

    /// Outer product `a bᵀ`.
    pub fn outer(a: Vec3<T>, b: Vec3<T>) -> Self {
        let a = a.to_array();
        let b = b.to_array();
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i] * b[j];
            }
        }
        Self { m }
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3::from_array(self.m[i])
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.m[j][i];
            }
        }
        Self { m }
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn determinant(&self) -> T {
        self.row(0).dot(self.row(1).cross(self.row(2)))
    }

    /// Inverse via the adjugate; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if det.abs() <= T::min_positive_value() || !det.is_finite() {
            return None;
        }
        let (r0, r1, r2) = (self.row(0), self.row(1), self.row(2));
        // Columns of the inverse are the cross products of rows.
        let inv = Self::from_cols(r1.cross(r2), r2.cross(r0), r0.cross(r1));
        Some(inv * (T::one() / det))
    }

    pub fn frobenius_norm(&self) -> T {
        let mut s = T::zero();
        for row in &self.m {
            for &e in row {
                s += e * e;
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> T {
        let mut s = T::zero();
        for row in &self.m {
            for &e in row {
                s = s.max(e.abs());
            }
        }
        s
    }
}

impl<T: Real> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e += o.m[i][j];
            }
        }
        Self { m }
    }
}

impl<T: Real> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut m = self.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e -= o.m[i][j];
            }
        }
        Self { m }
    }
}

impl<T: Real> Mul<T> for Mat3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        let mut m = self.m;
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        Self { m }
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.row(i).dot(o.col(j));
            }
        }
        Self { m }
    }
}

impl<T: Real> Serialize for Mat3<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for Mat3<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self {
            m: <[[T; 3]; 3]>::deserialize(d)?,
        })
    }
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in descending order with the matching unit
/// eigenvectors as columns (`vectors[k][i]` is component `i` of vector `k`).
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigen<T: Real, const N: usize>(a: [[T; N]; N]) -> ([T; N], [[T; N]; N]) {
    let mut a = a;
    let mut v = [[T::zero(); N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let eps = T::epsilon();
    for _sweep in 0..64 {
        let mut off = T::zero();
        let mut scale = T::zero();
        for i in 0..N {
            scale += a[i][i] * a[i][i];
            for j in (i + 1)..N {
                off += a[i][j] * a[i][j];
            }
        }
        if off <= eps * eps * scale.max(T::min_positive_value()) {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q].abs() <= T::min_positive_value() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::two() * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap_or(std::cmp::Ordering::Equal));
    let values = std::array::from_fn(|k| a[order[k]][order[k]]);
    let vectors = std::array::from_fn(|k| std::array::from_fn(|i| v[i][order[k]]));
    (values, vectors)
}

/// Orthonormal basis of the orthogonal complement of `span(rows)` in ℝᴺ.
///
/// Also returns the numerical rank of `rows` (rows whose residual after
/// projection falls below `rel_tol` times their norm are dropped).
pub fn orthogonal_complement<T: Real, const N: usize>(
    rows: &[[T; N]],
    rel_tol: T,
) -> (Vec<[T; N]>, usize) {
    let mut basis: Vec<[T; N]> = Vec::new();
    let push = |basis: &mut Vec<[T; N]>, v: [T; N]| -> bool {
        let n0 = norm_n(&v);
        if n0 <= T::min_positive_value() {
            return false;
        }
        let mut w = v;
        // Two passes of modified Gram–Schmidt keep the basis orthogonal to
        // working precision.
        for _ in 0..2 {
            for b in basis.iter() {
                let d = dot_n(&w, b);
                for k in 0..N {
                    w[k] -= d * b[k];
                }
            }
        }
        let n = norm_n(&w);
        if n <= rel_tol * n0 {
            return false;
        }
        for e in w.iter_mut() {
            *e /= n;
        }
        basis.push(w);
        true
    };
    let mut rank = 0;
    for r in rows {
        if push(&mut basis, *r) {
            rank += 1;
        }
    }
    let mut complement = Vec::new();
    for k in 0..N {
        if basis.len() == N {
            break;
        }
        let mut e = [T::zero(); N];
        e[k] = T::one();
        if push(&mut basis, e) {
            complement.push(*basis.last().expect("just pushed"));
        }
    }
    (complement, rank)
}

pub(crate) fn dot_n<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    let mut s = T::zero();
    for k in 0..N {
        s += a[k] * b[k];
    }
    s
}

pub(crate) fn norm_n<T: Real, const N: usize>(a: &[T; N]) -> T {
    dot_n(a, a).sqrt()
}

/// Solve the 2×2 system `m x = b`; `None` when singular.
pub(crate) fn solve2<T: Real>(m: [[T; 2]; 2], b: [T; 2]) -> Option<[T; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0].abs().max(m[0][1].abs()).max(m[1][0].abs()).max(m[1][1].abs());
    if det.abs() <= T::epsilon() * scale * scale || scale <= T::zero() {
        return None;
    }
    Some([
        (b[0] * m[1][1] - m[0][1] * b[1]) / det,
        (m[0][0] * b[1] - b[0] * m[1][0]) / det,
    ])
}

/// Closest points of the lines `p + s u` and `q + r v`.
///
/// Returns `(s, r, gap)` where `gap` is the distance between the two closest
/// points; `None` when the lines are (numerically) parallel.
pub fn closest_line_params<T: Real>(
    p: Vec3<T>,
    u: Vec3<T>,
    q: Vec3<T>,
    v: Vec3<T>,
) -> Option<(T, T, T)> {
    let w = q - p;
    let uu = u.dot(u);
    let vv = v.dot(v);
    let uv = u.dot(v);
    if u.sin_angle(v) <= T::lit(1e3) * T::epsilon() {
        return None;
    }
    let [s, r] = solve2([[uu, -uv], [uv, -vv]], [w.dot(u), w.dot(v)])?;
    let gap = (p + u * s).distance(q + v * r);
    Some((s, r, gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mat3_inverse_roundtrip() {
        let a = Mat3::from_rows(
            Vec3::new(2.0, 1.0, 0.0),
            Vec3::new(-1.0, 3.0, 1.0),
            Vec3::new(0.5, 0.0, 4.0),
        );
        let inv = a.inverse().unwrap();
        assert!((a * inv - Mat3::identity()).max_abs() < 1e-14);
    }

    #[test]
    fn skew_matches_cross() {
        let v = Vec3::new(0.3, -1.2, 2.0);
        let x = Vec3::new(1.0, 0.5, -0.25);
        assert!((Mat3::skew(v) * x - v.cross(x)).norm() < 1e-15);
    }

    #[test]
    fn jacobi_recovers_diagonalization() {
        let a = [
            [4.0, 1.0, 0.5, 0.0],
            [1.0, 3.0, 0.2, 0.1],
            [0.5, 0.2, -1.0, 0.3],
            [0.0, 0.1, 0.3, 2.0],
        ];
        let (vals, vecs) = symmetric_eigen(a);
        for k in 0..4 {
            for i in 0..4 {
                let av: f64 = (0..4).map(|j| a[i][j] * vecs[k][j]).sum();
                assert!((av - vals[k] * vecs[k][i]).abs() < 1e-12);
            }
        }
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn complement_is_orthogonal() {
        let rows: [[f64; 5]; 2] = [[1.0, 2.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 0.0, 0.0]];
        let (c, rank) = orthogonal_complement(&rows, 1e-12);
        assert_eq!(rank, 2);
        assert_eq!(c.len(), 3);
        for b in &c {
            for r in &rows {
                assert!(dot_n(b, r).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn complement_detects_rank_deficiency() {
        let rows = [[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]];
        let (c, rank) = orthogonal_complement(&rows, 1e-12);
        assert_eq!(rank, 1);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn skew_lines_closest_points() {
        let (s, r, gap) = closest_line_params::<f64>(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 2.0),
            Vec3::new(0.0, 1.0, 0.0),
        )
        .unwrap();
        assert!(s.abs() < 1e-15 && r.abs() < 1e-15);
        assert!((gap - 2.0).abs() < 1e-15);
    }
}

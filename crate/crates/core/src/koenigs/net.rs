use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::Vec3;
use crate::scalar::Real;

/// Inclusive index rectangle `[m0, m1] × [n0, n1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub m0: i64,
    pub m1: i64,
    pub n0: i64,
    pub n1: i64,
}

impl Window {
    pub const fn new(m0: i64, m1: i64, n0: i64, n1: i64) -> Self {
        Self { m0, m1, n0, n1 }
    }

    /// `[-r, r]²`.
    pub const fn square(r: i64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn is_empty(&self) -> bool {
        self.m0 > self.m1 || self.n0 > self.n1
    }

    pub fn rows(&self) -> usize {
        (self.m1 - self.m0 + 1).max(0) as usize
    }

    pub fn cols(&self) -> usize {
        (self.n1 - self.n0 + 1).max(0) as usize
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        (self.m0..=self.m1).contains(&m) && (self.n0..=self.n1).contains(&n)
    }

    /// Row-major position of `(m, n)`.
    pub fn offset(&self, m: i64, n: i64) -> Option<usize> {
        self.contains(m, n)
            .then(|| (m - self.m0) as usize * self.cols() + (n - self.n0) as usize)
    }

    pub fn index_of(&self, k: usize) -> (i64, i64) {
        let c = self.cols();
        (self.m0 + (k / c) as i64, self.n0 + (k % c) as i64)
    }

    pub fn indices(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.m0..=self.m1).flat_map(move |m| (self.n0..=self.n1).map(move |n| (m, n)))
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.m0, self.m1, self.n0, self.n1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [m0, m1, n0, n1] = <[i64; 4]>::deserialize(d)?;
        Ok(Self::new(m0, m1, n0, n1))
    }
}

/// A finite piece of a map ℤ² → ℝ³. Vertices may be absent, which is how
/// the diamond-shaped diagonal nets fit into a rectangular window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct QuadNet3<T: Real> {
    pub window: Window,
    pub vertices: Vec<Option<Vec3<T>>>,
}

/// The corner offsets of face `(m, n)` in counterclockwise order.
pub const FACE_CORNERS: [(i64, i64); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

impl<T: Real> QuadNet3<T> {
    pub fn empty(window: Window) -> Self {
        Self {
            window,
            vertices: vec![None; window.len()],
        }
    }

    pub fn from_fn(window: Window, mut f: impl FnMut(i64, i64) -> Vec3<T>) -> Self {
        let vertices = window.indices().map(|(m, n)| Some(f(m, n))).collect();
        Self { window, vertices }
    }

    pub fn get(&self, m: i64, n: i64) -> Option<Vec3<T>> {
        self.window.offset(m, n).and_then(|k| self.vertices[k])
    }

    pub fn set(&mut self, m: i64, n: i64, v: Vec3<T>) {
        if let Some(k) = self.window.offset(m, n) {
            self.vertices[k] = Some(v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), Vec3<T>)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.map(|v| (self.window.index_of(k), v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_some()).count()
    }

    /// Edges `((m, n), (m', n'))` with both ends present; first-direction
    /// edges come first.
    pub fn edges(&self) -> Vec<((i64, i64), (i64, i64))> {
        let mut out = Vec::new();
        for (dm, dn) in [(1, 0), (0, 1)] {
            for ((m, n), _) in self.iter() {
                if self.get(m + dm, n + dn).is_some() {
                    out.push(((m, n), (m + dm, n + dn)));
                }
            }
        }
        out
    }

    /// Lower-left indices of faces with all four corners present.
    pub fn faces(&self) -> Vec<(i64, i64)> {
        self.iter()
            .map(|(i, _)| i)
            .filter(|&(m, n)| self.face(m, n).is_some())
            .collect()
    }

    /// Corners of face `(m, n)` in [`FACE_CORNERS`] order.
    pub fn face(&self, m: i64, n: i64) -> Option<[Vec3<T>; 4]> {
        let mut out = [Vec3::zero(); 4];
        for (k, (dm, dn)) in FACE_CORNERS.iter().enumerate() {
            out[k] = self.get(m + dm, n + dn)?;
        }
        Some(out)
    }

    /// Center followed by its four neighbours `+e₁, +e₂, −e₁, −e₂`, if all
    /// are present.
    pub fn star(&self, m: i64, n: i64) -> Option<[Vec3<T>; 5]> {
        Some([
            self.get(m, n)?,
            self.get(m + 1, n)?,
            self.get(m, n + 1)?,
            self.get(m - 1, n)?,
            self.get(m, n - 1)?,
        ])
    }

    pub fn map(&self, mut f: impl FnMut((i64, i64), Vec3<T>) -> Vec3<T>) -> Self {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| v.map(|v| f(self.window.index_of(k), v)))
            .collect();
        Self {
            window: self.window,
            vertices,
        }
    }

    /// Vertexwise combination of two nets on the same window; absent where
    /// either is absent.
    pub fn zip_with(&self, other: &Self, f: impl Fn(Vec3<T>, Vec3<T>) -> Vec3<T>) -> Option<Self> {
        if self.window != other.window {
            return None;
        }
        let vertices = self
            .vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| Some(f((*a)?, (*b)?)))
            .collect();
        Some(Self {
            window: self.window,
            vertices,
        })
    }

    pub fn max_edge_length(&self) -> T {
        self.edges().iter().fold(T::zero(), |m, &((a, b), (c, d))| {
            m.max(self.get(a, b).unwrap().distance(self.get(c, d).unwrap()))
        })
    }

    /// Largest vertex norm.
    pub fn extent(&self) -> T {
        self.iter().fold(T::zero(), |m, (_, v)| m.max(v.norm()))
    }

    /// Largest vertex distance to `other` over common vertices.
    pub fn max_distance(&self, other: &Self) -> T {
        self.iter().fold(T::zero(), |m, ((a, b), v)| match other.get(a, b) {
            Some(w) => m.max(v.distance(w)),
            None => m,
        })
    }

    pub fn cast<U: Real>(&self) -> QuadNet3<U> {
        QuadNet3 {
            window: self.window,
            vertices: self.vertices.iter().map(|v| v.map(|v| v.cast())).collect(),
        }
    }
}

/// Velocity vectors attached to the vertices of a net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", transparent)]
pub struct VelocityField<T: Real>(pub QuadNet3<T>);

impl<T: Real> Deref for VelocityField<T> {
    type Target = QuadNet3<T>;
    fn deref(&self) -> &QuadNet3<T> {
        &self.0
    }
}

impl<T: Real> VelocityField<T> {
    /// Largest `|⟨fᵢ − fⱼ, qᵢ − qⱼ⟩|` over the edges of `f`.
    pub fn orthogonality_residual(&self, f: &QuadNet3<T>) -> T {
        f.edges().iter().fold(T::zero(), |m, &((a, b), (c, d))| {
            let (Some(qi), Some(qj)) = (self.get(a, b), self.get(c, d)) else {
                return m;
            };
            let df = f.get(c, d).unwrap() - f.get(a, b).unwrap();
            m.max(df.dot(qj - qi).abs())
        })
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.iter().all(|(_, v)| v.norm() <= tol)
    }

    /// `q + v` for a constant `v`.
    pub fn translated(&self, v: Vec3<T>) -> Self {
        Self(self.0.map(|_, q| q + v))
    }

    pub fn scaled(&self, s: T) -> Self {
        Self(self.0.map(|_, q| q * s))
    }

    /// `q + (ω × x + v)` at each vertex `x` of `f`: adds a rigid (trivial)
    /// velocity field.
    pub fn plus_rigid(&self, f: &QuadNet3<T>, omega: Vec3<T>, v: Vec3<T>) -> Self {
        Self(self.0.map(|(m, n), q| q + omega.cross(f.get(m, n).unwrap_or(Vec3::zero())) + v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_offsets_round_trip() {
        let w = Window::new(-2, 1, 3, 5);
        assert_eq!(w.len(), 12);
        for (k, (m, n)) in w.indices().enumerate() {
            assert_eq!(w.offset(m, n), Some(k));
            assert_eq!(w.index_of(k), (m, n));
        }
        assert_eq!(w.offset(2, 3), None);
    }

    #[test]
    fn grid_counts() {
        let net = QuadNet3::<f64>::from_fn(Window::new(0, 2, 0, 3), |m, n| {
            Vec3::new(m as f64, n as f64, 0.0)
        });
        assert_eq!(net.edges().len(), 2 * 4 + 3 * 3);
        assert_eq!(net.faces().len(), 6);
        assert!(net.star(1, 1).is_some());
        assert!(net.star(0, 1).is_none());
    }

    #[test]
    fn json_shape() {
        let mut net = QuadNet3::<f64>::empty(Window::new(0, 0, 0, 1));
        net.set(0, 1, Vec3::new(1.0, 2.0, 3.0));
        let s = serde_json::to_string(&net).unwrap();
        assert_eq!(s, r#"{"window":[0,0,0,1],"vertices":[null,[1.0,2.0,3.0]]}"#);
    }
}

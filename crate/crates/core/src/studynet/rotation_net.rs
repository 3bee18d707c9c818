use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::net::{index_key, parse_index_key, Index, SNet};
use super::StudyNetError;
use crate::dualquat::DualQuaternion;
use crate::scalar::Real;

/// Four rotations `ϱ₀, …, ϱ₃` meant to compose to the identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RotationQuadrilateral<T: Real> {
    pub rotations: [DualQuaternion<T>; 4],
}

impl<T: Real> RotationQuadrilateral<T> {
    pub fn new(rotations: [DualQuaternion<T>; 4]) -> Self {
        Self { rotations }
    }

    /// Relative displacements `rᵢ = pᵢ₊₁ p̄ᵢ` of four cyclic poses.
    pub fn from_poses(p: &[DualQuaternion<T>; 4]) -> Self {
        Self::new(std::array::from_fn(|i| p[(i + 1) % 4] * p[i].quat_conj()))
    }

    /// `ϱ₃ ϱ₂ ϱ₁ ϱ₀`.
    pub fn product(&self) -> DualQuaternion<T> {
        let r = &self.rotations;
        r[3] * r[2] * r[1] * r[0]
    }
}

/// Norm of the non-real part of `ϱ₃ϱ₂ϱ₁ϱ₀` after max-coordinate
/// normalization. A product whose real part is not the dominant coordinate
/// therefore scores at least 1.
pub fn face_closure_residual<T: Real>(q: &RotationQuadrilateral<T>) -> T {
    q.product().non_real_residual()
}

/// Relative rotations on the edges of an S-net.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationNet<T: Real> {
    pub dim: usize,
    /// `(i, k) ↦ p_{i+e_k} p̄ᵢ`.
    pub edges: BTreeMap<(Index, usize), DualQuaternion<T>>,
}

impl<T: Real> RotationNet<T> {
    pub fn edge(&self, i: &[i64], k: usize) -> Option<&DualQuaternion<T>> {
        self.edges.get(&(i.to_vec(), k))
    }

    /// Rotation quadrilateral of the face at `i` spanned by `e_k`, `e_l`,
    /// traversed `i → i+e_k → i+e_k+e_l → i+e_l → i`.
    pub fn face(&self, i: &[i64], k: usize, l: usize) -> Option<RotationQuadrilateral<T>> {
        let ik = SNet::<T>::step(i, k);
        let il = SNet::<T>::step(i, l);
        let r0 = *self.edge(i, k)?;
        let r1 = *self.edge(&ik, l)?;
        let r2 = self.edge(&il, k)?.quat_conj();
        let r3 = self.edge(i, l)?.quat_conj();
        Some(RotationQuadrilateral::new([r0, r1, r2, r3]))
    }

    /// All faces `(i, k, l)` with every edge present.
    pub fn faces(&self) -> Vec<(Index, usize, usize)> {
        let mut out = Vec::new();
        for (i, k) in self.edges.keys() {
            for l in (*k + 1)..self.dim {
                if self.face(i, *k, l).is_some() {
                    out.push((i.clone(), *k, l));
                }
            }
        }
        out
    }

    /// Largest face closure residual.
    pub fn max_closure_residual(&self) -> T {
        self.faces()
            .par_iter()
            .map(|(i, k, l)| face_closure_residual(&self.face(i, *k, *l).expect("listed face")))
            .reduce(T::zero, T::max)
    }
}

pub fn rotation_net<T: Real>(net: &SNet<T>, tol: T) -> Result<RotationNet<T>, StudyNetError> {
    let mut edges = BTreeMap::new();
    for (i, k) in net.edges() {
        let j = SNet::<T>::step(&i, k);
        let r = (net.vertices[&j] * net.vertices[&i].quat_conj()).normalized_projective();
        if !r.is_rotation(tol) {
            return Err(StudyNetError::NotARotation { from: i, to: j });
        }
        edges.insert((i, k), r);
    }
    Ok(RotationNet {
        dim: net.dim,
        edges,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RotationNetJson<T: Real> {
    dim: usize,
    edges: BTreeMap<String, EdgeJson<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct EdgeJson<T: Real> {
    rotation: DualQuaternion<T>,
    axis: [T; 6],
}

impl<T: Real> Serialize for RotationNet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let edges = self
            .edges
            .iter()
            .map(|((i, k), r)| {
                let j = SNet::<T>::step(i, *k);
                let axis = crate::dualquat::LineAxis::new(r.primal.vector(), r.dual.vector());
                (
                    format!("{}->{}", index_key(i), index_key(&j)),
                    EdgeJson {
                        rotation: *r,
                        axis: axis.coords(),
                    },
                )
            })
            .collect();
        RotationNetJson {
            dim: self.dim,
            edges,
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for RotationNet<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = RotationNetJson::<T>::deserialize(d)?;
        let mut edges = BTreeMap::new();
        for (key, e) in j.edges {
            let bad = || D::Error::custom(format!("bad edge key {key:?}"));
            let (a, b) = key.split_once("->").ok_or_else(bad)?;
            let i = parse_index_key(a).ok_or_else(bad)?;
            let t = parse_index_key(b).ok_or_else(bad)?;
            if i.len() != j.dim || t.len() != j.dim {
                return Err(bad());
            }
            let diff: Vec<i64> = t.iter().zip(&i).map(|(x, y)| x - y).collect();
            let k = diff.iter().position(|&v| v == 1).ok_or_else(bad)?;
            if diff.iter().map(|v| v.abs()).sum::<i64>() != 1 {
                return Err(bad());
            }
            edges.insert((i, k), e.rotation);
        }
        Ok(RotationNet { dim: j.dim, edges })
    }
}

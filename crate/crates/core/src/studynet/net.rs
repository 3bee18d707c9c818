use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::extend::{snet_extend_with_rng, Branch};
use super::form::bilinear_form;
use super::StudyNetError;
use crate::dualquat::DualQuaternion;
use crate::scalar::Real;

/// Multi-index into ℤᵈ.
pub type Index = Vec<i64>;

/// Inclusive per-axis index ranges.
pub type Window = Vec<(i64, i64)>;

pub fn index_key(i: &[i64]) -> String {
    i.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_index_key(s: &str) -> Option<Index> {
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Quad net in the Study quadric over a finite window of ℤᵈ.
#[derive(Clone, Debug, PartialEq)]
pub struct SNet<T: Real> {
    pub dim: usize,
    pub window: Window,
    pub vertices: BTreeMap<Index, DualQuaternion<T>>,
}

/// Residual maxima of an S-net, on max-coordinate normalized vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SNetResiduals {
    pub study: f64,
    pub edge: f64,
    pub worst_vertex: Option<[i64; 6]>,
}

impl<T: Real> SNet<T> {
    pub fn get(&self, i: &[i64]) -> Option<&DualQuaternion<T>> {
        self.vertices.get(i)
    }

    /// Indices of the window in fill order: by ℓ¹ distance from the
    /// origin, ties broken lexicographically.
    pub fn fill_order(window: &[(i64, i64)]) -> Vec<Index> {
        let mut all: Vec<Index> = vec![Vec::new()];
        for &(lo, hi) in window {
            let mut next = Vec::new();
            for prefix in &all {
                for v in lo..=hi {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            all = next;
        }
        all.sort_by(|a, b| {
            let la: i64 = a.iter().map(|v| v.abs()).sum();
            let lb: i64 = b.iter().map(|v| v.abs()).sum();
            la.cmp(&lb).then_with(|| a.cmp(b))
        });
        all
    }

    /// Neighbours of `i` one step closer to the origin.
    pub fn predecessors(i: &[i64]) -> Vec<Index> {
        (0..i.len())
            .filter(|&k| i[k] != 0)
            .map(|k| {
                let mut j = i.to_vec();
                j[k] -= i[k].signum();
                j
            })
            .collect()
    }

    /// Directed edges `(i, axis)` from `i` to `i + e_axis`, both in the window.
    pub fn edges(&self) -> Vec<(Index, usize)> {
        let mut out = Vec::new();
        for i in self.vertices.keys() {
            for k in 0..self.dim {
                if i[k] < self.window[k].1 {
                    out.push((i.clone(), k));
                }
            }
        }
        out
    }

    /// Faces `(i, k, l)` with `k < l`, spanned by `e_k` and `e_l` at `i`.
    pub fn faces(&self) -> Vec<(Index, usize, usize)> {
        let mut out = Vec::new();
        for i in self.vertices.keys() {
            for k in 0..self.dim {
                for l in (k + 1)..self.dim {
                    if i[k] < self.window[k].1 && i[l] < self.window[l].1 {
                        out.push((i.clone(), k, l));
                    }
                }
            }
        }
        out
    }

    pub fn step(i: &[i64], k: usize) -> Index {
        let mut j = i.to_vec();
        j[k] += 1;
        j
    }

    /// Largest Study residual and largest edge-form residual.
    pub fn residuals(&self) -> SNetResiduals {
        let study = self
            .vertices
            .par_iter()
            .map(|(_, p)| p.study_residual_normalized().to_f64_lossy())
            .reduce(|| 0.0, f64::max);
        let edges = self.edges();
        let worst = edges
            .par_iter()
            .map(|(i, k)| {
                let p = self.vertices[i].normalized_projective();
                let q = self.vertices[&Self::step(i, *k)].normalized_projective();
                (bilinear_form(&p, &q).abs().to_f64_lossy(), i)
            })
            .reduce_with(|a, b| if b.0 > a.0 { b } else { a });
        let (edge, worst_vertex) = match worst {
            Some((e, i)) => {
                let mut idx = [0i64; 6];
                idx[..i.len()].copy_from_slice(i);
                (e, Some(idx))
            }
            None => (0.0, None),
        };
        SNetResiduals {
            study,
            edge,
            worst_vertex,
        }
    }
}

/// Build an S-net over `window` (which must contain the origin).
///
/// The origin is a random point of the quadric; every further vertex is
/// solved from its already known neighbours in [`SNet::fill_order`]. One
/// generator seeded with `seed` drives every draw.
pub fn snet_build<T: Real>(
    dim: usize,
    window: &[(i64, i64)],
    seed: u64,
    branch: Branch,
    tol: T,
) -> Result<SNet<T>, StudyNetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    snet_build_with_rng(dim, window, &mut rng, branch, tol)
}

pub fn snet_build_with_rng<T: Real, R: Rng + ?Sized>(
    dim: usize,
    window: &[(i64, i64)],
    rng: &mut R,
    branch: Branch,
    tol: T,
) -> Result<SNet<T>, StudyNetError> {
    if !(1..=6).contains(&dim) {
        return Err(StudyNetError::BadDimension(dim));
    }
    if window.len() != dim || window.iter().any(|&(lo, hi)| lo > 0 || hi < 0) {
        return Err(StudyNetError::BadWindow);
    }
    let mut vertices = BTreeMap::new();
    for i in SNet::<T>::fill_order(window) {
        let known: Vec<_> = SNet::<T>::predecessors(&i)
            .iter()
            .map(|j| vertices[j])
            .collect();
        let p = snet_extend_with_rng(&known, rng, branch, tol).map_err(|source| {
            StudyNetError::ConstructionFailed {
                index: i.clone(),
                source: Box::new(source),
            }
        })?;
        vertices.insert(i, p);
    }
    Ok(SNet {
        dim,
        window: window.to_vec(),
        vertices,
    })
}

/// [`snet_build`] with whole-net restarts: attempt `r` uses seed
/// `seed + r`. Returns the net and the number of restarts used.
pub fn snet_build_retrying<T: Real>(
    dim: usize,
    window: &[(i64, i64)],
    seed: u64,
    branch: Branch,
    tol: T,
    max_restarts: usize,
) -> Result<(SNet<T>, usize), StudyNetError> {
    let mut last = None;
    for r in 0..=max_restarts {
        match snet_build(dim, window, seed.wrapping_add(r as u64), branch, tol) {
            Ok(net) => return Ok((net, r)),
            Err(e @ StudyNetError::ConstructionFailed { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct SNetJson<T: Real> {
    dim: usize,
    window: Vec<[i64; 2]>,
    vertices: BTreeMap<String, DualQuaternion<T>>,
}

impl<T: Real> Serialize for SNet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SNetJson {
            dim: self.dim,
            window: self.window.iter().map(|&(a, b)| [a, b]).collect(),
            vertices: self
                .vertices
                .iter()
                .map(|(k, v)| (index_key(k), *v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for SNet<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = SNetJson::<T>::deserialize(d)?;
        if j.window.len() != j.dim {
            return Err(D::Error::custom("window length differs from dim"));
        }
        let mut vertices = BTreeMap::new();
        for (k, v) in j.vertices {
            let idx = parse_index_key(&k)
                .ok_or_else(|| D::Error::custom(format!("bad vertex key {k:?}")))?;
            if idx.len() != j.dim {
                return Err(D::Error::custom(format!("vertex key {k:?} has wrong length")));
            }
            vertices.insert(idx, v);
        }
        Ok(SNet {
            dim: j.dim,
            window: j.window.iter().map(|w| (w[0], w[1])).collect(),
            vertices,
        })
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::net::QuadNet3;
use super::KoenigsError;
use crate::linalg::{closest_line_params, Vec3};
use crate::scalar::Real;

/// Residual maxima of the Koenigs conditions for a pair `(f, f*)`.
///
/// Parallelism residuals are sines of angles. Planarity is the distance
/// between the two diagonals of a face of `f` over its longer diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KoenigsReport {
    /// Corresponding edges parallel.
    pub k1: f64,
    /// Non-corresponding diagonals parallel.
    pub k2: f64,
    pub planarity: f64,
    pub worst_face: Option<(i64, i64)>,
}

fn parallel_residual<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    let (na, nb) = (a.norm(), b.norm());
    if na == T::zero() && nb == T::zero() {
        T::zero()
    } else if na == T::zero() || nb == T::zero() {
        T::one()
    } else {
        a.cross(b).norm() / (na * nb)
    }
}

fn planarity<T: Real>(c: &[Vec3<T>; 4]) -> T {
    let d1 = c[2] - c[0];
    let d2 = c[3] - c[1];
    let len = d1.norm().max(d2.norm());
    if len == T::zero() {
        return T::zero();
    }
    match closest_line_params(c[0], d1, c[1], d2) {
        Some((_, _, gap)) => gap / len,
        // Two parallel lines always span a plane.
        None => T::zero(),
    }
}

pub fn koenigs_check<T: Real>(f: &QuadNet3<T>, fstar: &QuadNet3<T>) -> Result<KoenigsReport, KoenigsError> {
    if f.window != fstar.window {
        return Err(KoenigsError::WindowMismatch);
    }
    let k1 = f
        .edges()
        .par_iter()
        .filter_map(|&((a, b), (c, d))| {
            let e = f.get(c, d)? - f.get(a, b)?;
            let es = fstar.get(c, d)? - fstar.get(a, b)?;
            Some(parallel_residual(e, es).to_f64_lossy())
        })
        .reduce(|| 0.0, f64::max);
    let per_face: Vec<((i64, i64), f64, f64)> = f
        .faces()
        .par_iter()
        .filter_map(|&(m, n)| {
            let c = f.face(m, n)?;
            let s = fstar.face(m, n)?;
            let k2 = parallel_residual(c[2] - c[0], s[3] - s[1])
                .max(parallel_residual(c[3] - c[1], s[2] - s[0]))
                .to_f64_lossy();
            Some(((m, n), k2, planarity(&c).to_f64_lossy()))
        })
        .collect();
    let mut k2 = 0.0;
    let mut plan = 0.0;
    let mut worst_face = None;
    for (i, a, b) in per_face {
        if a > k2 {
            k2 = a;
            worst_face = Some(i);
        }
        plan = f64::max(plan, b);
    }
    Ok(KoenigsReport {
        k1,
        k2,
        planarity: plan,
        worst_face,
    })
}

/// Other two corners of a face from the known edge `(v0, v1)`: every edge
/// of `f` is parallel to the corresponding edge of `f*`, and each diagonal
/// of `f` to the other diagonal of `f*`.
fn complete_face<T: Real>(
    v0: Vec3<T>,
    v1: Vec3<T>,
    s: [Vec3<T>; 4],
    gap_tol: T,
) -> Option<(Vec3<T>, Vec3<T>)> {
    let meet = |p: Vec3<T>, u: Vec3<T>, q: Vec3<T>, v: Vec3<T>| {
        let (a, _, gap) = closest_line_params(p, u, q, v)?;
        (gap <= gap_tol).then(|| p + u * a)
    };
    let v3 = meet(v0, s[3] - s[0], v1, s[2] - s[0])?;
    let v2 = meet(v1, s[2] - s[1], v0, s[3] - s[1])?;
    Some((v2, v3))
}

/// Koenigs dual of `fstar` determined by the values `f_i`, `f_j` on one
/// edge `(i, j)`.
///
/// Faces are completed from any edge with both ends known until the window
/// is filled. Afterwards every face is recomputed from each of its four
/// edges, and all results must agree.
pub fn koenigs_dual_reconstruct<T: Real>(
    fstar: &QuadNet3<T>,
    f_i: Vec3<T>,
    f_j: Vec3<T>,
    edge: ((i64, i64), (i64, i64)),
    tol: T,
) -> Result<QuadNet3<T>, KoenigsError> {
    let ((a, b), (c, d)) = edge;
    if (a - c).abs() + (b - d).abs() != 1 {
        return Err(KoenigsError::BadSeedEdge);
    }
    let (Some(si), Some(sj)) = (fstar.get(a, b), fstar.get(c, d)) else {
        return Err(KoenigsError::BadSeedEdge);
    };
    if parallel_residual(f_j - f_i, sj - si) > tol {
        return Err(KoenigsError::NonParallelSeed);
    }
    let scale = T::one().max(f_i.norm()).max(f_j.norm()).max(f_i.distance(f_j));
    let gap_tol = tol * scale * T::lit(1e3);

    let mut f = QuadNet3::empty(fstar.window);
    f.set(a, b, f_i);
    f.set(c, d, f_j);
    let faces = fstar.faces();
    let corner = |m: i64, n: i64, k: usize| {
        let (dm, dn) = super::net::FACE_CORNERS[k % 4];
        (m + dm, n + dn)
    };
    loop {
        let mut changed = false;
        for &(m, n) in &faces {
            let idx: [(i64, i64); 4] = std::array::from_fn(|k| corner(m, n, k));
            let known: [bool; 4] = std::array::from_fn(|k| f.get(idx[k].0, idx[k].1).is_some());
            if known.iter().all(|&k| k) {
                continue;
            }
            let Some(k) = (0..4).find(|&k| known[k] && known[(k + 1) % 4]) else {
                continue;
            };
            let s = fstar.face(m, n).expect("listed face");
            let rot: [Vec3<T>; 4] = std::array::from_fn(|r| s[(k + r) % 4]);
            let at = |r: usize| idx[(k + r) % 4];
            let v0 = f.get(at(0).0, at(0).1).unwrap();
            let v1 = f.get(at(1).0, at(1).1).unwrap();
            let (v2, v3) = complete_face(v0, v1, rot, gap_tol)
                .ok_or(KoenigsError::InconsistentDual { m, n, discrepancy: f64::INFINITY })?;
            for (r, v) in [(2, v2), (3, v3)] {
                if f.get(at(r).0, at(r).1).is_none() {
                    f.set(at(r).0, at(r).1, v);
                }
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let scale = T::one().max(f.extent());
    let worst = path_discrepancy(&f, fstar, gap_tol * T::lit(1e3));
    if let Some(((m, n), e)) = worst {
        if e > tol * scale {
            return Err(KoenigsError::InconsistentDual {
                m,
                n,
                discrepancy: e.to_f64_lossy(),
            });
        }
    }
    Ok(f)
}

/// Largest disagreement, over all faces and all four starting edges,
/// between a recomputed corner and the stored one.
pub fn path_discrepancy<T: Real>(
    f: &QuadNet3<T>,
    fstar: &QuadNet3<T>,
    gap_tol: T,
) -> Option<((i64, i64), T)> {
    f.faces()
        .par_iter()
        .filter_map(|&(m, n)| {
            let c = f.face(m, n)?;
            let s = fstar.face(m, n)?;
            let mut worst = T::zero();
            for k in 0..4 {
                let rot: [Vec3<T>; 4] = std::array::from_fn(|r| s[(k + r) % 4]);
                let e = match complete_face(c[k], c[(k + 1) % 4], rot, gap_tol) {
                    Some((v2, v3)) => v2
                        .distance(c[(k + 2) % 4])
                        .max(v3.distance(c[(k + 3) % 4])),
                    None => T::infinity(),
                };
                worst = worst.max(e);
            }
            Some(((m, n), worst))
        })
        .reduce_with(|x, y| if y.1 > x.1 { y } else { x })
}

#[cfg(test)]
mod tests {
    use super::super::net::Window;
    use super::super::surfaces::grid_plane;
    use super::*;

    #[test]
    fn grid_against_itself() {
        let g = grid_plane::<f64>(Window::square(2));
        let r = koenigs_check(&g, &g).unwrap();
        assert_eq!((r.k1, r.planarity), (0.0, 0.0));
        // The diagonals of a square are orthogonal, so the grid is not its
        // own Koenigs dual.
        assert!((r.k2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dual_of_grid_is_a_reflected_grid() {
        let g = grid_plane::<f64>(Window::new(0, 3, 0, 2));
        let f = koenigs_dual_reconstruct(
            &g,
            Vec3::zero(),
            Vec3::new(2.0, 0.0, 0.0),
            ((0, 0), (1, 0)),
            1e-9,
        )
        .unwrap();
        for ((m, n), v) in f.iter() {
            assert!((v - Vec3::new(2.0 * m as f64, -2.0 * n as f64, 0.0)).norm() < 1e-12);
        }
    }
}

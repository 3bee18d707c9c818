use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::snapping::{Cell, SnappingNet};
use super::RollingError;
use crate::dualquat::{dh_between_axes, LineAxis, Rotation3};
use crate::koenigs::{QuadNet3, Window};
use crate::linalg::{Mat3, Vec3};
use crate::procrustes::{fit_rigid, RigidMotion};
use crate::scalar::Real;
use crate::studynet::FourBar;

type Vertex = (i64, i64);

/// Orthonormal frame attached to an oriented pair of skew lines: origin at
/// the foot of the common normal on `a`, first axis along `a`, third along
/// the common normal.
fn line_pair_frame<T: Real>(a: &LineAxis<T>, b: &LineAxis<T>, tol: T) -> Option<RigidMotion<T>> {
    let cn = dh_between_axes(a, b, tol).ok()?;
    if cn.parallel {
        return None;
    }
    let e1 = a.direction.normalized()?;
    let ub = b.direction.normalized()?;
    let scale = T::one().max(cn.foot_a.norm());
    let e3 = if cn.distance > tol * scale {
        (cn.foot_b - cn.foot_a) / cn.distance
    } else {
        e1.cross(ub).normalized()?
    };
    let e2 = e3.cross(e1);
    Some(RigidMotion::new(
        Rotation3::from_matrix_unchecked(Mat3::from_cols(e1, e2, e3)),
        cn.foot_a,
    ))
}

/// The rigid motion of a link carrying the oriented axes `a`, `b` in one
/// configuration and `a2`, `b2` in the other.
pub fn link_motion<T: Real>(
    a: &LineAxis<T>,
    b: &LineAxis<T>,
    a2: &LineAxis<T>,
    b2: &LineAxis<T>,
    tol: T,
) -> Option<RigidMotion<T>> {
    let f = line_pair_frame(a, b, tol)?;
    let f2 = line_pair_frame(a2, b2, tol)?;
    Some(f2.compose(&f.inverse()))
}

/// Point where the axis meets the plane through `mid` with normal `n`.
fn meet_plane<T: Real>(axis: &LineAxis<T>, mid: Vec3<T>, n: Vec3<T>, index: usize, tol: T) -> Result<Vec3<T>, RollingError> {
    let err = RollingError::ParallelPlaneAxis { axis: index };
    let n = n.normalized().ok_or(err.clone())?;
    let d = axis.direction.normalized().ok_or(err.clone())?;
    let den = d.dot(n);
    if den.abs() <= tol {
        return Err(err);
    }
    let p = axis.point();
    Ok(p + d * ((mid - p).dot(n) / den))
}

/// Completes a white quadrilateral `(g_i, g_j, g_k, g_l)` on the fixed axes
/// `axes` (in that order). `m_ij` and `m_kl` move the links joining
/// `i, j` and `k, l` from the fixed to the other configuration.
fn complete<T: Real>(
    axes: [&LineAxis<T>; 4],
    indices: [usize; 4],
    m_ij: &RigidMotion<T>,
    m_kl: &RigidMotion<T>,
    g_i: Vec3<T>,
    g_j: Vec3<T>,
    tol: T,
) -> Result<(Vec3<T>, Vec3<T>), RollingError> {
    // Move the second configuration so that the link k, l stays put.
    let to_kl = m_kl.inverse().compose(m_ij);
    let (h_i, h_j) = (to_kl.apply(g_i), to_kl.apply(g_j));
    let g_k = meet_plane(axes[2], (g_i + h_i) * T::half(), h_i - g_i, indices[2], tol)?;
    let g_l = meet_plane(axes[3], (g_j + h_j) * T::half(), h_j - g_j, indices[3], tol)?;
    Ok((g_k, g_l))
}

/// Two quadrilaterals on the axes of the two configurations of a four-bar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CongruentQuads<T: Real> {
    /// Vertices on the fixed axes.
    pub g: [Vec3<T>; 4],
    /// Corresponding vertices on the everted axes.
    pub h: [Vec3<T>; 4],
    /// Largest difference between corresponding pairwise distances.
    pub distance_residual: T,
    /// Whether a proper rigid motion maps `g` onto `h`.
    pub direct: bool,
}

fn distance_residual<T: Real>(g: &[Vec3<T>; 4], h: &[Vec3<T>; 4]) -> T {
    let mut r = T::zero();
    for a in 0..4 {
        for b in a + 1..4 {
            r = r.max((g[a].distance(g[b]) - h[a].distance(h[b])).abs());
        }
    }
    r
}

fn quads<T: Real>(g: [Vec3<T>; 4], h: [Vec3<T>; 4], tol: T) -> CongruentQuads<T> {
    let scale = g.iter().chain(&h).fold(T::one(), |m, p| m.max(p.norm()));
    let fit = fit_rigid(&g, &h).expect("four points");
    CongruentQuads {
        g,
        h,
        distance_residual: distance_residual(&g, &h),
        direct: fit.max_residual <= tol.sqrt() * scale,
    }
}

/// A quadrilateral on the fixed axes of `fourbar` congruent to the
/// corresponding one on the everted axes, with `g_i` prescribed on axis
/// `first` and `g_j` on the next axis.
///
/// The other two vertices are where the remaining axes meet the
/// perpendicular bisector planes of the diagonally opposite prescribed
/// vertex and its image, with the second configuration moved so that the
/// link between the two unknown vertices stays put.
pub fn congruent_quad_on_axes<T: Real>(
    fourbar: &FourBar<T>,
    first: usize,
    g_i: Vec3<T>,
    g_j: Vec3<T>,
    tol: T,
) -> Result<CongruentQuads<T>, RollingError> {
    let idx: [usize; 4] = std::array::from_fn(|r| (first + r) % 4);
    let fixed = &fourbar.fixed_axes;
    let ev = &fourbar.everted_axes;
    for (p, k) in [(g_i, idx[0]), (g_j, idx[1])] {
        let distance = fixed[k].distance_to_point(p);
        if distance > tol * T::one().max(p.norm()) {
            return Err(RollingError::PointsOffAxis {
                axis: k,
                distance: distance.to_f64_lossy(),
            });
        }
    }
    let motion = |a: usize| {
        let b = (a + 1) % 4;
        link_motion(&fixed[a], &fixed[b], &ev[a], &ev[b], tol)
            .ok_or(RollingError::ParallelPlaneAxis { axis: a })
    };
    let m_ij = motion(idx[0])?;
    let m_kl = motion(idx[2])?;
    let axes = idx.map(|k| &fixed[k]);
    let (g_k, g_l) = complete(axes, idx, &m_ij, &m_kl, g_i, g_j, tol)?;
    let mut g = [Vec3::zero(); 4];
    let mut h = [Vec3::zero(); 4];
    for (r, (p, m)) in [(g_i, &m_ij), (g_j, &m_ij), (g_k, &m_kl), (g_l, &m_kl)]
        .into_iter()
        .enumerate()
    {
        g[idx[r]] = p;
        h[idx[r]] = m.apply(p);
    }
    Ok(quads(g, h, tol))
}

/// Surfaces recovered from a snapping net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Propagation<T: Real> {
    /// Fixed-frame surface, vertices on the fixed axes.
    pub g: QuadNet3<T>,
    /// Everted-frame surface, vertices on the everted axes.
    pub h: QuadNet3<T>,
    pub rings: usize,
    /// Largest pairwise-distance defect over the white faces of `g`, `h`.
    pub white_congruence: T,
    /// Joints that no ring reached.
    pub undetermined: Vec<(i64, i64)>,
}

fn on_seed_diagonal(u: i64, v: i64) -> bool {
    v == u || u + v == 1
}

/// Recovers surfaces `g`, `h` whose rolling reproduces `net`.
///
/// `seeds` prescribes `g` on the joints along the diagonals `v = u` and
/// `u + v = 1` (these include the corners of the black face `(0, 0)`),
/// each on its fixed axis, and optionally on vertices that are not joints.
/// Every white face with two known neighbouring corners is then completed
/// by [`congruent_quad_on_axes`], one ring at a time.
pub fn propagate_congruent_net<T: Real>(
    net: &SnappingNet<T>,
    seeds: &BTreeMap<(i64, i64), Vec3<T>>,
    tol: T,
) -> Result<Propagation<T>, RollingError> {
    let motion = |face: (i64, i64)| net.link(face).map(|l| l.pose.inverse());
    let mut g: BTreeMap<(i64, i64), Vec3<T>> = BTreeMap::new();
    for (&(u, v), &p) in seeds {
        if let Some(j) = net.joint((u, v)) {
            if !on_seed_diagonal(u, v) {
                return Err(RollingError::SeedOffDiagonal { u, v });
            }
            let distance = j.fixed.line().distance_to_point(p);
            if distance > tol * T::one().max(p.norm()) {
                return Err(RollingError::PointsOffAxis {
                    axis: 0,
                    distance: distance.to_f64_lossy(),
                });
            }
        }
        g.insert((u, v), p);
    }

    let mut rings = 0;
    loop {
        let mut found: Vec<(Vertex, Vertex, Vec3<T>)> = Vec::new();
        for cell in &net.cells {
            let known = cell.joints.map(|v| g.contains_key(&v));
            if known.iter().filter(|&&k| k).count() != 2 {
                continue;
            }
            let Some(k) = (0..4).find(|&k| known[k] && known[(k + 1) % 4]) else {
                continue;
            };
            let wrap = |e| RollingError::Propagation {
                ring: rings + 1,
                face: cell.face,
                source: Box::new(e),
            };
            let (gk, gl) = complete_cell(net, cell, k, &g, &motion, tol).map_err(wrap)?;
            found.push((cell.face, cell.joints[(k + 2) % 4], gk));
            found.push((cell.face, cell.joints[(k + 3) % 4], gl));
        }
        if found.is_empty() {
            break;
        }
        rings += 1;
        for (face, v, p) in found {
            match g.get(&v) {
                Some(&q) if q.distance(p) > tol.sqrt() * T::one().max(p.norm()) => {
                    return Err(RollingError::Propagation {
                        ring: rings,
                        face,
                        source: Box::new(RollingError::NotCongruent {
                            face: Some(face),
                            residual: q.distance(p).to_f64_lossy(),
                        }),
                    });
                }
                _ => {
                    g.insert(v, p);
                }
            }
        }
    }

    let window: Window = net.window;
    let mut gn = QuadNet3::empty(window);
    let mut hn = QuadNet3::empty(window);
    for (&(u, v), &p) in &g {
        gn.set(u, v, p);
        let link = net
            .joint((u, v))
            .map(|j| j.links[0])
            .or_else(|| {
                [(u, v), (u - 1, v), (u - 1, v - 1), (u, v - 1)]
                    .into_iter()
                    .find(|&f| net.link(f).is_some())
            });
        // Vertices in no black face have no counterpart in the other frame.
        if let Some(m) = link.and_then(motion) {
            hn.set(u, v, m.apply(p));
        }
    }
    let mut white_congruence = T::zero();
    for cell in &net.cells {
        let (Some(a), Some(b)) = (gn.face(cell.face.0, cell.face.1), hn.face(cell.face.0, cell.face.1))
        else {
            continue;
        };
        white_congruence = white_congruence.max(distance_residual(&a, &b));
    }
    let undetermined = net
        .joints
        .iter()
        .map(|j| j.vertex)
        .filter(|v| !g.contains_key(v))
        .collect();
    Ok(Propagation {
        g: gn,
        h: hn,
        rings,
        white_congruence,
        undetermined,
    })
}

fn complete_cell<T: Real>(
    net: &SnappingNet<T>,
    cell: &Cell<T>,
    k: usize,
    g: &BTreeMap<(i64, i64), Vec3<T>>,
    motion: &impl Fn((i64, i64)) -> Option<RigidMotion<T>>,
    tol: T,
) -> Result<(Vec3<T>, Vec3<T>), RollingError> {
    let idx: [usize; 4] = std::array::from_fn(|r| (k + r) % 4);
    let lines = idx.map(|r| net.joint(cell.joints[r]).expect("cell joint").fixed.line());
    // Joint r sits between links r and r + 1.
    let m_ij = motion(cell.links[idx[1]]).expect("cell link");
    let m_kl = motion(cell.links[idx[3]]).expect("cell link");
    complete(
        [&lines[0], &lines[1], &lines[2], &lines[3]],
        idx,
        &m_ij,
        &m_kl,
        g[&cell.joints[idx[0]]],
        g[&cell.joints[idx[1]]],
        tol,
    )
}

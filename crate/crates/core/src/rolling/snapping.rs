use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::align::align_faces;
use super::formulas::{axis_direction, joint_direction, rolling_rotation, snap_angle};
use super::RollingError;
use crate::dualquat::{dh_cycle, DhParams, LineAxis, Rotation3};
use crate::koenigs::{ColoredNet, FaceColor, QuadNet3, Window};
use crate::linalg::Vec3;
use crate::procrustes::RigidMotion;
use crate::scalar::Real;
use crate::studynet::{FourBar, SNet, StudyNetError};
use crate::tolerance::Tolerance;

/// A revolute axis through `anchor`. `direction` is a unit vector, zero
/// when the joint does not rotate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AxisRecord<T: Real> {
    pub anchor: Vec3<T>,
    pub direction: Vec3<T>,
}

impl<T: Real> AxisRecord<T> {
    pub fn line(&self) -> LineAxis<T> {
        LineAxis::through_point(self.anchor, self.direction)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointKind {
    Snapping,
    /// Snap angle below the snapping threshold.
    ShakyLike,
    /// Snap angle within the threshold of π.
    ReflectionLike,
}

/// A revolute joint at vertex `vertex` of the diagonal net, joining the
/// black faces `links = [π, μ]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Joint<T: Real> {
    pub vertex: (i64, i64),
    pub links: [(i64, i64); 2],
    /// Axis in the configuration where every link sits at its fixed-frame
    /// position.
    pub fixed: AxisRecord<T>,
    /// Axis in the other configuration.
    pub everted: AxisRecord<T>,
    pub snap_angle: T,
    pub kind: JointKind,
}

/// A black face. `pose` maps the link from the everted configuration onto
/// its fixed-frame position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Link<T: Real> {
    pub face: (i64, i64),
    pub pose: RigidMotion<T>,
    pub neighbours: Vec<(i64, i64)>,
}

/// A white face: one spatial four-bar. Links run counterclockwise from the
/// left one; joint `k` sits between links `k` and `k + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Cell<T: Real> {
    pub face: (i64, i64),
    pub links: [(i64, i64); 4],
    pub joints: [(i64, i64); 4],
    /// Distance of the composed relative motions from the identity.
    pub closure_residual: T,
    /// Largest DH difference between the two configurations; absent when
    /// an axis is undefined.
    pub dh_mismatch: Option<T>,
    pub snapping: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SnappingNet<T: Real> {
    /// Index window of the diagonal net the faces and vertices refer to.
    pub window: Window,
    pub links: Vec<Link<T>>,
    pub joints: Vec<Joint<T>>,
    pub cells: Vec<Cell<T>>,
}

type Quad = [(i64, i64); 4];

/// Corners of the white face `(a, b)` and the black faces around it.
fn white_cell(a: i64, b: i64) -> (Quad, Quad) {
    (
        [(a - 1, b), (a, b - 1), (a + 1, b), (a, b + 1)],
        [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)],
    )
}

/// The two black faces `[π, μ]` meeting at vertex `(u, v)`.
fn joint_links(u: i64, v: i64) -> [(i64, i64); 2] {
    if (u + v).rem_euclid(2) == 0 {
        [(u, v), (u - 1, v - 1)]
    } else {
        [(u, v - 1), (u - 1, v)]
    }
}

fn classify_angle<T: Real>(angle: T, tol: &Tolerance<T>) -> JointKind {
    if angle < tol.snap {
        JointKind::ShakyLike
    } else if angle > T::lit(std::f64::consts::PI) - tol.snap {
        JointKind::ReflectionLike
    } else {
        JointKind::Snapping
    }
}

impl<T: Real> SnappingNet<T> {
    /// Builds the net from the poses of the black faces. Joint anchors are
    /// the vertices of `anchors` when given, else the axis points closest
    /// to the origin.
    pub fn from_poses(
        window: Window,
        poses: &BTreeMap<(i64, i64), RigidMotion<T>>,
        anchors: Option<&QuadNet3<T>>,
        tol: &Tolerance<T>,
    ) -> Result<Self, RollingError> {
        let mut vertices: Vec<(i64, i64)> = poses
            .keys()
            .flat_map(|&(a, b)| [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)])
            .filter(|&(u, v)| joint_links(u, v).iter().all(|l| poses.contains_key(l)))
            .collect();
        vertices.sort_unstable();
        vertices.dedup();

        let joints = vertices
            .par_iter()
            .map(|&(u, v)| {
                let links = joint_links(u, v);
                let (pp, pm) = (&poses[&links[0]], &poses[&links[1]]);
                let rel = pp.compose(&pm.inverse());
                let angle = rel.rotation.angle();
                let kind = classify_angle(angle, tol);
                let direction = rel.rotation.axis().unwrap_or(Vec3::zero());
                let anchor = match anchors.and_then(|g| g.get(u, v)) {
                    Some(x) => x,
                    None => rel
                        .to_dual_quaternion()
                        .rotation_axis(tol.algebraic)
                        .map(|l| l.point())
                        .unwrap_or(Vec3::zero()),
                };
                let back = pm.inverse();
                Joint {
                    vertex: (u, v),
                    links,
                    fixed: AxisRecord { anchor, direction },
                    everted: AxisRecord {
                        anchor: back.apply(anchor),
                        direction: back.apply_vector(direction),
                    },
                    snap_angle: angle,
                    kind,
                }
            })
            .collect::<Vec<_>>();

        let mut neighbours: BTreeMap<(i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
        for j in &joints {
            neighbours.entry(j.links[0]).or_default().push(j.links[1]);
            neighbours.entry(j.links[1]).or_default().push(j.links[0]);
        }
        let links = poses
            .iter()
            .map(|(&face, &pose)| {
                let mut n = neighbours.remove(&face).unwrap_or_default();
                n.sort_unstable();
                Link { face, pose, neighbours: n }
            })
            .collect();

        let mut net = SnappingNet {
            window,
            links,
            joints,
            cells: Vec::new(),
        };
        let mut whites: Vec<(i64, i64)> = poses
            .keys()
            .flat_map(|&(a, b)| [(a + 1, b), (a, b + 1), (a - 1, b), (a, b - 1)])
            .filter(|&(a, b)| white_cell(a, b).0.iter().all(|l| poses.contains_key(l)))
            .collect();
        whites.sort_unstable();
        whites.dedup();
        let cells = whites
            .par_iter()
            .map(|&(a, b)| net.build_cell(a, b, poses, tol))
            .collect::<Result<Vec<_>, _>>()?;
        net.cells = cells;
        Ok(net)
    }

    fn build_cell(
        &self,
        a: i64,
        b: i64,
        poses: &BTreeMap<(i64, i64), RigidMotion<T>>,
        tol: &Tolerance<T>,
    ) -> Result<Cell<T>, RollingError> {
        let (links, joints) = white_cell(a, b);
        let p: [RigidMotion<T>; 4] = links.map(|l| poses[&l]);
        let mut product = RigidMotion::identity();
        for k in 0..4 {
            product = p[(k + 1) % 4].compose(&p[k].inverse()).compose(&product);
        }
        let corners: Vec<Vec3<T>> = joints
            .iter()
            .map(|&v| self.joint(v).expect("cell joint").fixed.anchor)
            .collect();
        let scale = corners.iter().fold(T::one(), |m, x| m.max(x.norm()));
        let closure_residual = product
            .rotation
            .distance(&Rotation3::identity())
            .max(product.translation.norm() / scale);
        if closure_residual > tol.linear {
            return Err(RollingError::ClosureFailed {
                face: (a, b),
                residual: closure_residual.to_f64_lossy(),
            });
        }
        let all_snap = joints
            .iter()
            .all(|&v| self.joint(v).unwrap().kind == JointKind::Snapping);
        let dh_mismatch = if all_snap {
            self.fourbar(&Cell {
                face: (a, b),
                links,
                joints,
                closure_residual,
                dh_mismatch: None,
                snapping: false,
            })
            .ok()
            .and_then(|fb| fb.dh_mismatch(tol.algebraic).ok())
        } else {
            None
        };
        let snapping = all_snap && dh_mismatch.is_some_and(|m| m <= tol.linear * scale);
        Ok(Cell {
            face: (a, b),
            links,
            joints,
            closure_residual,
            dh_mismatch,
            snapping,
        })
    }

    pub fn joint(&self, v: (i64, i64)) -> Option<&Joint<T>> {
        self.joints
            .binary_search_by_key(&v, |j| j.vertex)
            .ok()
            .map(|k| &self.joints[k])
    }

    pub fn link(&self, face: (i64, i64)) -> Option<&Link<T>> {
        self.links
            .binary_search_by_key(&face, |l| l.face)
            .ok()
            .map(|k| &self.links[k])
    }

    pub fn cell(&self, face: (i64, i64)) -> Option<&Cell<T>> {
        self.cells.iter().find(|c| c.face == face)
    }

    /// The four-bar of a cell with axes in joint order.
    pub fn fourbar(&self, cell: &Cell<T>) -> Result<FourBar<T>, RollingError> {
        let j = cell.joints.map(|v| *self.joint(v).expect("cell joint"));
        let fixed = j.map(|j| j.fixed.line());
        let everted = j.map(|j| j.everted.line());
        let tol = T::lit(1e-12);
        let dh = dh_cycle(&fixed, tol)?;
        Ok(FourBar {
            fixed_axes: fixed,
            everted_axes: everted,
            dh: [dh[0], dh[1], dh[2], dh[3]],
        })
    }

    pub fn snapping_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.snapping).count()
    }

    pub fn max_closure_residual(&self) -> T {
        self.cells
            .iter()
            .fold(T::zero(), |m, c| m.max(c.closure_residual))
    }

    pub fn max_dh_mismatch(&self) -> T {
        self.cells
            .iter()
            .filter_map(|c| c.dh_mismatch)
            .fold(T::zero(), T::max)
    }

    /// Snap angle of each cell's joints in joint order.
    pub fn snap_table(&self) -> Vec<((i64, i64), [T; 4])> {
        self.cells
            .iter()
            .map(|c| (c.face, c.joints.map(|v| self.joint(v).unwrap().snap_angle)))
            .collect()
    }

    /// DH parameters of a cell in the fixed configuration.
    pub fn cell_dh(&self, cell: &Cell<T>) -> Option<[DhParams<T>; 4]> {
        self.fourbar(cell).ok().map(|f| f.dh)
    }
}

/// Rolls `gp` on `gm` along their black faces.
///
/// The pose of each black face is the rigid motion taking its `gp` copy
/// onto its `gm` copy. Fixed axes pass through the `gm` vertices and
/// everted axes through the `gp` vertices.
pub fn roll_build<T: Real>(
    gp: &ColoredNet<T>,
    gm: &ColoredNet<T>,
    tol: &Tolerance<T>,
) -> Result<SnappingNet<T>, RollingError> {
    if gp.net.window != gm.net.window {
        return Err(RollingError::WindowMismatch);
    }
    let faces = gm.faces_of_color(FaceColor::Black);
    let fitted = faces
        .par_iter()
        .filter_map(|&(a, b)| {
            let target = gm.net.face(a, b)?;
            let source = gp.net.face(a, b)?;
            Some(
                align_faces(&source, &target, tol.linear)
                    .map(|fit| ((a, b), fit.motion))
                    .map_err(|e| match e {
                        RollingError::NotCongruent { residual, .. } => RollingError::NotCongruent {
                            face: Some((a, b)),
                            residual,
                        },
                        e => e,
                    }),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let poses: BTreeMap<_, _> = fitted.into_iter().collect();
    SnappingNet::from_poses(gm.net.window, &poses, Some(&gm.net), tol)
}

/// Snapping net whose link poses are the vertices of a two-dimensional
/// S-net: vertex `(x, y)` becomes the black face `(x − y, x + y)`.
pub fn snapping_from_snet<T: Real>(
    net: &SNet<T>,
    tol: &Tolerance<T>,
) -> Result<SnappingNet<T>, RollingError> {
    if net.dim != 2 {
        return Err(StudyNetError::BadDimension(net.dim).into());
    }
    let mut poses = BTreeMap::new();
    for (i, p) in &net.vertices {
        let face = (i[0] - i[1], i[0] + i[1]);
        poses.insert(face, RigidMotion::from_dual_quaternion(p)?);
    }
    let (lo, hi) = poses.keys().fold(
        ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN)),
        |(lo, hi), &(a, b)| ((lo.0.min(a), lo.1.min(b)), (hi.0.max(a + 1), hi.1.max(b + 1))),
    );
    SnappingNet::from_poses(Window::new(lo.0, hi.0, lo.1, hi.1), &poses, None, tol)
}

/// Largest disagreement between a snapping net rolled from a Koenigs pair
/// and the closed-form rolling rotations of its dual `fstar`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaCheck {
    /// `‖ϱ − 𝓡‖_F` for the relative rotations.
    pub rotation: f64,
    /// Formula snap angle against the trace-derived angle of `𝓡`.
    pub angle_vs_matrix: f64,
    /// Formula snap angle against the joint's fitted angle.
    pub angle_vs_joint: f64,
    /// Sine of the angle between the formula axis and the eigenvector of `𝓡`.
    pub axis_vs_eigenvector: f64,
    /// Sine of the angle between the formula axis and the joint's fixed axis.
    pub axis_vs_joint: f64,
    pub joints: usize,
}

/// Compares every joint of `net` with the closed-form rotation at the
/// source vertex of `fstar`. Joints whose axis is undefined are skipped
/// for the direction checks.
pub fn formula_check<T: Real>(
    net: &SnappingNet<T>,
    fstar: &QuadNet3<T>,
    t: T,
) -> Result<FormulaCheck, RollingError> {
    let per = net
        .joints
        .par_iter()
        .map(|j| {
            let (u, v) = j.vertex;
            let i = ColoredNet::<T>::source_vertex(u, v);
            let dir = joint_direction(i.0);
            let r = rolling_rotation(fstar, i, dir, t)?;
            let rel = net
                .link(j.links[0])
                .unwrap()
                .pose
                .compose(&net.link(j.links[1]).unwrap().pose.inverse());
            let alpha = snap_angle(fstar, i, dir, t)?;
            let mut out = [
                r.distance(&rel.rotation).to_f64_lossy(),
                (alpha - r.angle_from_trace()).abs().to_f64_lossy(),
                (alpha - j.snap_angle).abs().to_f64_lossy(),
                0.0,
                0.0,
            ];
            if j.kind == JointKind::Snapping {
                let u = axis_direction(fstar, i, dir, t, T::zero())?;
                if let Some(e) = r.axis() {
                    out[3] = u.sin_angle(e).to_f64_lossy();
                }
                out[4] = u.sin_angle(j.fixed.direction).to_f64_lossy();
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, RollingError>>()?;
    let max = |k: usize| per.iter().fold(0.0, |m: f64, x| m.max(x[k]));
    Ok(FormulaCheck {
        rotation: max(0),
        angle_vs_matrix: max(1),
        angle_vs_joint: max(2),
        axis_vs_eigenvector: max(3),
        axis_vs_joint: max(4),
        joints: per.len(),
    })
}

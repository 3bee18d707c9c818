//! Discrete rolling of face-isometric nets: alignment motions, the rolling
//! rotations of Koenigs-derived pairs with their snap angles and axes,
//! assembly of snapping four-bar nets, and the congruent-quadrilateral
//! constructions that recover a surface pair from a snapping net.

mod align;
mod congruent;
mod formulas;
mod pipeline;
mod snapping;

use thiserror::Error;

pub use align::align_faces;
pub use congruent::{
    congruent_quad_on_axes, link_motion, propagate_congruent_net, CongruentQuads, Propagation,
};
pub use formulas::{axis_direction, joint_direction, rolling_rotation, snap_angle, Direction};
pub use pipeline::{run_enneper, EnneperConfig, EnneperPipeline};
pub use snapping::{
    formula_check, roll_build, snapping_from_snet, AxisRecord, Cell, FormulaCheck, Joint,
    JointKind, Link, SnappingNet,
};

use crate::dualquat::DualQuatError;
use crate::koenigs::KoenigsError;
use crate::studynet::StudyNetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RollingError {
    #[error("faces are not directly congruent (face {face:?}, residual {residual:e})")]
    NotCongruent { face: Option<(i64, i64)>, residual: f64 },
    #[error("index ({m}, {n}) or its neighbours lie outside the window")]
    IndexOutOfWindow { m: i64, n: i64 },
    #[error("rotation axis at ({m}, {n}) is undefined")]
    DegenerateAxis { m: i64, n: i64 },
    #[error("white face {face:?} does not close, residual {residual:e}")]
    ClosureFailed { face: (i64, i64), residual: f64 },
    #[error("bisector plane is parallel to axis {axis}")]
    ParallelPlaneAxis { axis: usize },
    #[error("point is {distance:e} away from axis {axis}")]
    PointsOffAxis { axis: usize, distance: f64 },
    #[error("seed at ({u}, {v}) is a joint off the two seed diagonals")]
    SeedOffDiagonal { u: i64, v: i64 },
    #[error("ring {ring}, white face {face:?}: {source}")]
    Propagation {
        ring: usize,
        face: (i64, i64),
        #[source]
        source: Box<RollingError>,
    },
    #[error("deformation parameter t must be nonzero")]
    ZeroDeformation,
    #[error("nets live on different windows")]
    WindowMismatch,
    #[error(transparent)]
    Koenigs(#[from] KoenigsError),
    #[error(transparent)]
    StudyNet(#[from] StudyNetError),
    #[error(transparent)]
    DualQuat(#[from] DualQuatError),
}

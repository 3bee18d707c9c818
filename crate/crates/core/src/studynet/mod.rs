//! Quad nets in the Study quadric ("S-nets"), their rotation nets, the
//! four-bar linkages carried by their faces, and numeric classification of
//! single 4R loops.

mod classify;
mod extend;
mod form;
mod fourbar;
mod net;
mod rotation_net;

use thiserror::Error;

pub use classify::{
    classify_fourbar, closure_defect, signed_twists, Classification, Configuration, FourBarFamily,
    SCAN_RESOLUTION,
};
pub use extend::{snet_extend, snet_extend_with_rng, Branch, MAX_ATTEMPTS};
pub use form::{bilinear_form, bilinear_form_normalized};
pub use fourbar::{fourbar_from_face, FourBar};
pub use net::{
    index_key, parse_index_key, snet_build, snet_build_retrying, snet_build_with_rng, Index, SNet,
    SNetResiduals, Window,
};
pub use rotation_net::{face_closure_residual, rotation_net, RotationNet, RotationQuadrilateral};

use crate::dualquat::DualQuatError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StudyNetError {
    #[error("at most 6 conditions fit into ℙ⁷, got {0}")]
    TooManyConditions(usize),
    #[error("linear conditions are degenerate (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("no real solution after {attempts} attempts")]
    NoRealSolution { attempts: usize },
    #[error("construction failed at vertex {index:?}: {source}")]
    ConstructionFailed {
        index: Vec<i64>,
        #[source]
        source: Box<StudyNetError>,
    },
    #[error("dimension must be in 1..=6, got {0}")]
    BadDimension(usize),
    #[error("window must have one range per axis and contain the origin")]
    BadWindow,
    #[error("edge {from:?} -> {to:?} is not a rotation")]
    NotARotation { from: Vec<i64>, to: Vec<i64> },
    #[error("rotation {0} of the face is not a rotation")]
    NotARotationInFace(usize),
    #[error("face does not close (residual {residual:e})")]
    ClosureFailed { residual: f64 },
    #[error("degenerate face: consecutive axes coincide or both configurations agree")]
    DegenerateFace,
    #[error("DH parameters of the two configurations differ by {residual:e}")]
    DhMismatch { residual: f64 },
    #[error("axis {0} is not a valid Plücker line")]
    InvalidAxis(usize),
    #[error("classification inconclusive: {reason}")]
    Inconclusive { reason: String },
    #[error(transparent)]
    DualQuat(#[from] DualQuatError),
}

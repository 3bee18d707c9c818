//! Discrete surfaces in ℝ³: Koenigs nets and their duals, the discrete
//! Enneper surface, infinitesimal isometric deformations with Whiteley
//! de-averaging, isometry predicates, and diagonal nets.

mod diagonal;
mod dual;
mod enneper;
mod iid;
mod io;
mod isometry;
mod net;
mod surfaces;

use thiserror::Error;

pub use diagonal::{diagonal_net, ColoredNet, FaceColor};
pub use dual::{koenigs_check, koenigs_dual_reconstruct, path_discrepancy, KoenigsReport};
pub use enneper::{enneper_surface, EnneperSurface};
pub use iid::{average, deaverage, first_order_length_change, iid_from_dual, rigid_field};
pub use io::{read_mesh, write_mesh};
pub use isometry::{isometry_report, IsometryMode, IsometryReport};
pub use net::{QuadNet3, VelocityField, Window, FACE_CORNERS};
pub use surfaces::{
    enneper_gauss_map, grid_plane, inverse_stereographic, moebius_pretransform, Inversion,
    MoebiusParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KoenigsError {
    #[error("vertex ({m}, {n}) sits at the inversion center")]
    SingularVertex { m: i64, n: i64 },
    #[error("projection is degenerate: {reason}")]
    ProjectionDegenerate { reason: &'static str },
    #[error("nets live on different windows")]
    WindowMismatch,
    #[error("seed edge must join two neighbouring vertices of the window")]
    BadSeedEdge,
    #[error("seed edge is not parallel to the dual edge")]
    NonParallelSeed,
    #[error("dual does not close at face ({m}, {n}), discrepancy {discrepancy:e}")]
    InconsistentDual { m: i64, n: i64, discrepancy: f64 },
    #[error("velocity field does not close at edge from ({m}, {n}), residual {residual:e}")]
    NotKoenigs { m: i64, n: i64, residual: f64 },
    #[error("nets are not edge isometric, residual {residual:e}")]
    NotIsometric { residual: f64 },
    #[error("window holds no complete vertex star with a white center")]
    WindowTooSmall,
    #[error("mesh line {line}: {reason}")]
    MeshParse { line: usize, reason: String },
}

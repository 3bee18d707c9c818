use serde::{Deserialize, Serialize};

use super::dual::koenigs_dual_reconstruct;
use super::net::{QuadNet3, Window};
use super::surfaces::{grid_plane, inverse_stereographic, moebius_pretransform, MoebiusParams};
use super::KoenigsError;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// A discrete Enneper surface `f` and its Gauss map `f*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EnneperSurface<T: Real> {
    pub fstar: QuadNet3<T>,
    pub f: QuadNet3<T>,
}

/// Gauss map from the (optionally pretransformed) grid projected onto the
/// sphere of radius 2 about `(0,0,2)` from `(0,0,4)`, and its Koenigs dual
/// with `f = 0` at the seed vertex and a unit first edge.
///
/// The seed edge is `(0,0) → (1,0)` when the window contains it, else the
/// first-direction edge at the lower-left corner.
pub fn enneper_surface<T: Real>(
    window: Window,
    moebius: &MoebiusParams<T>,
    tol: T,
) -> Result<EnneperSurface<T>, KoenigsError> {
    let w = moebius_pretransform(&grid_plane(window), moebius)?;
    let fstar = inverse_stereographic(
        &w,
        Vec3::new(T::zero(), T::zero(), T::lit(4.0)),
        Vec3::new(T::zero(), T::zero(), T::two()),
        T::two(),
    )?;
    let edge = if window.contains(0, 0) && window.contains(1, 0) {
        ((0, 0), (1, 0))
    } else {
        ((window.m0, window.n0), (window.m0 + 1, window.n0))
    };
    let ((a, b), (c, d)) = edge;
    let (Some(s0), Some(s1)) = (fstar.get(a, b), fstar.get(c, d)) else {
        return Err(KoenigsError::BadSeedEdge);
    };
    let dir = (s1 - s0).normalized().ok_or(KoenigsError::BadSeedEdge)?;
    let f = koenigs_dual_reconstruct(&fstar, Vec3::zero(), dir, edge, tol)?;
    Ok(EnneperSurface { fstar, f })
}

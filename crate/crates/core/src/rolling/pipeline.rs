use serde::{Deserialize, Serialize};

use super::snapping::{formula_check, roll_build, FormulaCheck, SnappingNet};
use super::RollingError;
use crate::koenigs::{
    deaverage, diagonal_net, enneper_surface, iid_from_dual, ColoredNet, EnneperSurface,
    MoebiusParams, QuadNet3, VelocityField, Window,
};
use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::tolerance::Tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EnneperConfig<T: Real> {
    pub window: Window,
    pub t: T,
    pub q0: Vec3<T>,
    pub moebius: MoebiusParams<T>,
    pub tol: Tolerance<T>,
}

impl<T: Real> Default for EnneperConfig<T> {
    fn default() -> Self {
        Self {
            window: Window::square(3),
            t: T::one(),
            q0: Vec3::new(T::zero(), T::zero(), T::one()),
            moebius: MoebiusParams::default(),
            tol: Tolerance::default(),
        }
    }
}

/// Every intermediate of the Enneper construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EnneperPipeline<T: Real> {
    pub config: EnneperConfig<T>,
    pub surface: EnneperSurface<T>,
    pub q: VelocityField<T>,
    pub fp: QuadNet3<T>,
    pub fm: QuadNet3<T>,
    pub gp: ColoredNet<T>,
    pub gm: ColoredNet<T>,
    pub snapping: SnappingNet<T>,
    pub formulas: FormulaCheck,
}

/// Gauss map, Koenigs dual, velocity field, de-averaged pair, diagonal
/// nets and the snapping net rolled from them.
pub fn run_enneper<T: Real>(config: &EnneperConfig<T>) -> Result<EnneperPipeline<T>, RollingError> {
    if config.t == T::zero() {
        return Err(RollingError::ZeroDeformation);
    }
    let tol = &config.tol;
    let surface = enneper_surface(config.window, &config.moebius, tol.algebraic)?;
    let q = iid_from_dual(&surface.f, &surface.fstar, config.q0, tol.algebraic)?;
    let (fp, fm) = deaverage(&surface.f, &q, config.t);
    let gp = diagonal_net(&fp)?;
    let gm = diagonal_net(&fm)?;
    let snapping = roll_build(&gp, &gm, tol)?;
    let formulas = formula_check(&snapping, &surface.fstar, config.t)?;
    Ok(EnneperPipeline {
        config: *config,
        surface,
        q,
        fp,
        fm,
        gp,
        gm,
        snapping,
        formulas,
    })
}

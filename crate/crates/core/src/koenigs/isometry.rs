use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::net::QuadNet3;
use super::KoenigsError;
use crate::linalg::Vec3;
use crate::procrustes::fit_rigid;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryMode {
    /// Corresponding edges have equal length.
    Edge,
    /// Corresponding faces are directly congruent.
    Face,
    /// Corresponding vertex stars are directly congruent.
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub mode: IsometryMode,
    pub max_residual: f64,
    /// Edge start, face lower-left corner or star center of the worst
    /// element.
    pub worst: Option<(i64, i64)>,
    pub elements: usize,
}

fn congruence<T: Real>(a: &[Vec3<T>], b: &[Vec3<T>]) -> f64 {
    fit_rigid(a, b).map_or(f64::INFINITY, |fit| fit.max_residual.to_f64_lossy())
}

/// Largest isometry defect between corresponding elements of `a` and `b`.
///
/// Edge mode compares lengths; face and star modes fit a proper rigid
/// motion to each pair of corner sets and report the largest vertex error.
pub fn isometry_report<T: Real>(
    a: &QuadNet3<T>,
    b: &QuadNet3<T>,
    mode: IsometryMode,
) -> Result<IsometryReport, KoenigsError> {
    if a.window != b.window {
        return Err(KoenigsError::WindowMismatch);
    }
    let per: Vec<((i64, i64), f64)> = match mode {
        IsometryMode::Edge => a
            .edges()
            .par_iter()
            .filter_map(|&((m, n), (k, l))| {
                let la = a.get(m, n)?.distance(a.get(k, l)?);
                let lb = b.get(m, n)?.distance(b.get(k, l)?);
                Some(((m, n), (la - lb).abs().to_f64_lossy()))
            })
            .collect(),
        IsometryMode::Face => a
            .faces()
            .par_iter()
            .filter_map(|&(m, n)| Some(((m, n), congruence(&a.face(m, n)?, &b.face(m, n)?))))
            .collect(),
        IsometryMode::Star => a
            .iter()
            .collect::<Vec<_>>()
            .par_iter()
            .filter_map(|&((m, n), _)| Some(((m, n), congruence(&a.star(m, n)?, &b.star(m, n)?))))
            .collect(),
    };
    let mut report = IsometryReport {
        mode,
        max_residual: 0.0,
        worst: None,
        elements: per.len(),
    };
    for (i, r) in per {
        if r > report.max_residual || report.worst.is_none() {
            report.max_residual = report.max_residual.max(r);
            report.worst = Some(i);
        }
    }
    Ok(report)
}

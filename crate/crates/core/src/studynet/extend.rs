use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::form::{bilinear_form, polar_row};
use super::StudyNetError;
use crate::dualquat::DualQuaternion;
use crate::linalg::orthogonal_complement;
use crate::scalar::Real;

/// Attempts per vertex before giving up with `NoRealSolution`.
pub const MAX_ATTEMPTS: usize = 16;

/// Root of the restricted quadratic: sign in front of the discriminant root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// A point `p` of the Study quadric with `s(p, k) = 0` for every `k` in
/// `known`, drawn deterministically from `seed`.
pub fn snet_extend<T: Real>(
    known: &[DualQuaternion<T>],
    seed: u64,
    branch: Branch,
    tol: T,
) -> Result<DualQuaternion<T>, StudyNetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    snet_extend_with_rng(known, &mut rng, branch, tol)
}

/// As [`snet_extend`], drawing from a caller-owned generator.
///
/// The linear conditions cut out a subspace `N`; a random line
/// `x₀ + λ v` inside `N` meets the quadric in the roots of
/// `s(v,v) λ² + 2 s(x₀,v) λ + s(x₀,x₀) = 0`. Lines without real roots, and
/// roots that are degenerate (vanishing primal part) or repeat a known
/// vertex, are redrawn up to [`MAX_ATTEMPTS`] times.
pub fn snet_extend_with_rng<T: Real, R: Rng + ?Sized>(
    known: &[DualQuaternion<T>],
    rng: &mut R,
    branch: Branch,
    tol: T,
) -> Result<DualQuaternion<T>, StudyNetError> {
    if known.len() > 6 {
        return Err(StudyNetError::TooManyConditions(known.len()));
    }
    let known: Vec<_> = known.iter().map(|k| k.normalized_projective()).collect();
    let rows: Vec<[T; 8]> = known.iter().map(polar_row).collect();
    let (basis, rank) = orthogonal_complement(&rows, T::lit(1e-10));
    if rank < known.len() {
        return Err(StudyNetError::RankDeficient {
            rank,
            expected: known.len(),
        });
    }

    let tiny = T::lit(1e-12);
    for _ in 0..MAX_ATTEMPTS {
        let x0 = random_in_span(&basis, rng);
        let v = random_in_span(&basis, rng);
        let (x0, v) = (DualQuaternion::from_coords(x0), DualQuaternion::from_coords(v));
        let a = bilinear_form(&v, &v);
        let b = bilinear_form(&x0, &v);
        let c = bilinear_form(&x0, &x0);
        let lambda = if a.abs() <= tiny {
            if b.abs() <= tiny {
                continue;
            }
            -c / (T::two() * b)
        } else {
            let disc = b * b - a * c;
            if disc < T::zero() {
                continue;
            }
            (-b + branch.sign::<T>() * disc.sqrt()) / a
        };
        let p = (x0 + v.scale(lambda)).normalized_projective();
        if !p.is_finite() || p.primal.norm() <= T::lit(1e-6) {
            continue;
        }
        if known.iter().any(|k| p.projective_distance(*k) <= T::lit(1e-6)) {
            continue;
        }
        let worst = known
            .iter()
            .map(|k| bilinear_form(&p, k).abs())
            .fold(p.study_residual(), T::max);
        if worst > tol {
            continue;
        }
        return Ok(p);
    }
    Err(StudyNetError::NoRealSolution {
        attempts: MAX_ATTEMPTS,
    })
}

fn random_in_span<T: Real, R: Rng + ?Sized>(basis: &[[T; 8]], rng: &mut R) -> [T; 8] {
    let coeffs: Vec<f64> = (0..basis.len()).map(|_| rng.sample(StandardNormal)).collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
    let mut x = [T::zero(); 8];
    for (b, c) in basis.iter().zip(&coeffs) {
        let c = T::lit(c / norm);
        for k in 0..8 {
            x[k] += c * b[k];
        }
    }
    x
}

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snapnet::koenigs::{enneper_surface, EnneperSurface, Inversion, MoebiusParams, Window};
use snapnet::studynet::{fourbar_from_face, FourBar, RotationQuadrilateral};
use snapnet::{DualQuat, Vector3};

/// The four poses of the worked example: `1`, `1 + k − ε(i + 2j)`,
/// `1 − j + 2k − ε(3 + j − k)`, `1 − j + ε(i + k)`.
pub fn example_poses() -> [DualQuat; 4] {
    [
        DualQuat::one(),
        DualQuat::from_f64([1.0, 0.0, 0.0, 1.0, 0.0, -1.0, -2.0, 0.0]),
        DualQuat::from_f64([1.0, 0.0, -1.0, 2.0, -3.0, 0.0, -1.0, 1.0]),
        DualQuat::from_f64([1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 1.0]),
    ]
}

pub fn example_fourbar() -> FourBar<f64> {
    let q = RotationQuadrilateral::from_poses(&example_poses());
    fourbar_from_face(&q, 1e-9).unwrap()
}

/// Random similarity followed by an inversion about a center in the plane
/// well away from the grid window.
pub fn random_moebius(rng: &mut ChaCha8Rng, window: Window) -> MoebiusParams<f64> {
    let reach = (window.m1 - window.m0).max(window.n1 - window.n0) as f64;
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let dist = rng.random_range(1.5 * reach..3.0 * reach);
    MoebiusParams {
        scale: rng.random_range(0.5..1.5),
        rotation: rng.random_range(-1.0..1.0),
        translation: Vector3::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), 0.0),
        inversion: Some(Inversion {
            center: Vector3::new(dist * angle.cos(), dist * angle.sin(), 0.0),
            radius: rng.random_range(0.8 * dist..1.2 * dist),
        }),
    }
}

/// A Koenigs net with its dual from a seeded Möbius image of the grid.
pub fn random_koenigs(seed: u64, window: Window) -> EnneperSurface<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_moebius(&mut rng, window);
    enneper_surface(window, &m, 1e-9).unwrap()
}

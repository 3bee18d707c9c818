mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snapnet::koenigs::*;
use snapnet::Vector3;

fn enneper() -> EnneperSurface<f64> {
    enneper_surface(Window::square(3), &MoebiusParams::default(), 1e-9).unwrap()
}

fn q0() -> Vector3 {
    Vector3::new(0.0, 0.0, 1.0)
}

#[test]
fn grid_plane_values() {
    let g = grid_plane::<f64>(Window::new(0, 1, 0, 1));
    let v: Vec<_> = g.iter().map(|(_, x)| x).collect();
    assert_eq!(
        v,
        [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(1.0, 1.0, 0.0)
        ]
    );
    let g = grid_plane::<f64>(Window::new(5, 5, -3, -3));
    assert_eq!(g.get(5, -3), Some(Vector3::new(5.0, -3.0, 0.0)));
}

#[test]
fn gauss_map_matches_closed_form() {
    let fs = enneper_gauss_map::<f64>(Window::square(3));
    assert_eq!(fs.get(0, 0), Some(Vector3::zero()));
    for ((m, n), x) in fs.iter() {
        let (m, n) = (m as f64, n as f64);
        let d = m * m + n * n + 16.0;
        let expected = Vector3::new(16.0 * m, 16.0 * n, 4.0 * (m * m + n * n)) / d;
        assert!((x - expected).norm() < 1e-15, "{m} {n}");
    }
    let x = fs.get(1, 1).unwrap();
    assert!((x - Vector3::new(16.0 / 18.0, 16.0 / 18.0, 8.0 / 18.0)).norm() < 1e-15);
}

#[test]
fn enneper_is_koenigs() {
    let e = enneper();
    let r = koenigs_check(&e.f, &e.fstar).unwrap();
    assert!(r.k1 <= 1e-9 && r.k2 <= 1e-9 && r.planarity <= 1e-9, "{r:?}");
}

#[test]
fn perturbed_dual_breaks_k2() {
    let e = enneper();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noisy = e.fstar.map(|_, x| {
        x + Vector3::new(
            rng.random_range(-1e-3..1e-3),
            rng.random_range(-1e-3..1e-3),
            rng.random_range(-1e-3..1e-3),
        )
    });
    let r = koenigs_check(&e.f, &noisy).unwrap();
    assert!(r.k2 > 1e-5, "{r:?}");
}

#[test]
fn reconstruction_is_path_independent() {
    let e = enneper();
    let (_, d) = path_discrepancy(&e.f, &e.fstar, 1e-6).unwrap();
    assert!(d <= 1e-9 * e.f.extent(), "{d:e}");
    // Vertex (2, 2) through (2, 1) and through (1, 2).
    let f = |m, n| e.f.get(m, n).unwrap();
    let s = |m, n| e.fstar.get(m, n).unwrap();
    let meet = |p: Vector3, u: Vector3, q: Vector3, v: Vector3| {
        let (a, _, _) = snapnet::linalg::closest_line_params(p, u, q, v).unwrap();
        p + u * a
    };
    let a = meet(f(2, 1), s(2, 2) - s(2, 1), f(1, 1), s(1, 2) - s(2, 1));
    let b = meet(f(1, 2), s(2, 2) - s(1, 2), f(1, 1), s(2, 1) - s(1, 2));
    assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    assert!((a - f(2, 2)).norm() <= 1e-9 * a.norm().max(1.0));
}

#[test]
fn non_parallel_seed_rejected() {
    let fs = enneper_gauss_map::<f64>(Window::square(2));
    let err = koenigs_dual_reconstruct(
        &fs,
        Vector3::zero(),
        Vector3::new(0.0, 1.0, 0.0),
        ((0, 0), (1, 0)),
        1e-9,
    );
    assert_eq!(err, Err(KoenigsError::NonParallelSeed));
}

#[test]
fn unit_grid_dual_is_scaled_grid() {
    let g = grid_plane::<f64>(Window::square(2));
    let f = koenigs_dual_reconstruct(
        &g,
        Vector3::zero(),
        Vector3::new(2.0, 0.0, 0.0),
        ((0, 0), (1, 0)),
        1e-9,
    )
    .unwrap();
    for ((m, n), x) in f.iter() {
        assert!((x.norm() - 2.0 * ((m * m + n * n) as f64).sqrt()).abs() < 1e-12);
    }
    assert!((f.max_edge_length() - 2.0).abs() < 1e-12);
}

#[test]
fn enneper_q_increments() {
    // With f*₀₀ = 0 the field cannot move along the edges at the origin.
    let e = enneper();
    let q = iid_from_dual(&e.f, &e.fstar, q0(), 1e-9).unwrap();
    let q00 = q.get(0, 0).unwrap();
    assert_eq!(q00, q0());
    assert_eq!(q.get(0, 1).unwrap(), q00);
    assert!(q.orthogonality_residual(&e.f) < 1e-12);
}

#[test]
fn q0_translates_the_field() {
    let e = enneper();
    let v = Vector3::new(0.3, -1.0, 2.0);
    let a = iid_from_dual(&e.f, &e.fstar, Vector3::zero(), 1e-9).unwrap();
    let b = iid_from_dual(&e.f, &e.fstar, v, 1e-9).unwrap();
    assert!(b.max_distance(&a.translated(v)) < 1e-14);
}

#[test]
fn wrong_dual_is_not_koenigs() {
    let e = enneper();
    let wrong = grid_plane(e.f.window);
    assert!(matches!(
        iid_from_dual(&e.f, &wrong, q0(), 1e-9),
        Err(KoenigsError::NotKoenigs { .. })
    ));
}

#[test]
fn deaverage_isometry_on_enneper() {
    let e = enneper();
    let q = iid_from_dual(&e.f, &e.fstar, q0(), 1e-9).unwrap();
    let (fp, fm) = deaverage(&e.f, &q, 1.0);
    let r = isometry_report(&fp, &fm, IsometryMode::Edge).unwrap();
    assert!(r.max_residual <= 1e-10, "{r:?}");
    let (p0, m0) = deaverage(&e.f, &q, 0.0);
    assert_eq!((&p0, &m0), (&e.f, &e.f));
}

#[test]
fn rigid_field_gives_congruent_nets() {
    let e = enneper();
    let q = rigid_field(&e.f, Vector3::new(0.2, -0.4, 0.7), Vector3::new(1.0, 0.0, -2.0));
    assert!(q.orthogonality_residual(&e.f) < 1e-12);
    let (fp, fm) = deaverage(&e.f, &q, 0.8);
    let a: Vec<_> = fp.iter().map(|(_, x)| x).collect();
    let b: Vec<_> = fm.iter().map(|(_, x)| x).collect();
    let fit = snapnet::procrustes::fit_rigid(&a, &b).unwrap();
    assert!(fit.max_residual <= 1e-9, "{:e}", fit.max_residual);
}

#[test]
fn average_round_trip() {
    let e = enneper();
    let q = iid_from_dual(&e.f, &e.fstar, q0(), 1e-9).unwrap();
    let (fp, fm) = deaverage(&e.f, &q, 1.0);
    let (f, q2) = average(&fp, &fm, 1e-9).unwrap();
    let (fp2, fm2) = deaverage(&f, &q2, 1.0);
    assert!(fp2.max_distance(&fp) <= 1e-12 && fm2.max_distance(&fm) <= 1e-12);
    let (_, z) = average(&fp, &fp, 1e-9).unwrap();
    assert!(z.is_zero(0.0));
    assert!(matches!(
        average(&fp, &e.f, 1e-9),
        Err(KoenigsError::NotIsometric { .. })
    ));
}

#[test]
fn enneper_pair_is_star_but_not_face_isometric() {
    let e = enneper();
    let q = iid_from_dual(&e.f, &e.fstar, q0(), 1e-9).unwrap();
    let (fp, fm) = deaverage(&e.f, &q, 1.0);
    for mode in [IsometryMode::Edge, IsometryMode::Face, IsometryMode::Star] {
        assert_eq!(isometry_report(&fp, &fp, mode).unwrap().max_residual, 0.0);
    }
    assert!(isometry_report(&fp, &fm, IsometryMode::Edge).unwrap().max_residual <= 1e-10);
    assert!(isometry_report(&fp, &fm, IsometryMode::Star).unwrap().max_residual <= 1e-9);
    assert!(isometry_report(&fp, &fm, IsometryMode::Face).unwrap().max_residual > 1e-3);
    let gp = diagonal_net(&fp).unwrap();
    let gm = diagonal_net(&fm).unwrap();
    let r = isometry_report(&gp.net, &gm.net, IsometryMode::Face).unwrap();
    assert!(r.max_residual <= 1e-9 && r.elements > 0, "{r:?}");
}

#[test]
fn seeded_koenigs_nets_are_koenigs() {
    for seed in 0..10 {
        let e = common::random_koenigs(seed, Window::square(3));
        let r = koenigs_check(&e.f, &e.fstar).unwrap();
        assert!(r.k1 <= 1e-8 && r.k2 <= 1e-8, "seed {seed}: {r:?}");
    }
}

#[test]
fn mesh_round_trip_of_enneper() {
    let e = enneper();
    let text = write_mesh(&e.f);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 36);
    let back: QuadNet3<f64> = read_mesh(&text).unwrap();
    assert!(back.max_distance(&e.f) <= 1e-12);
    assert_eq!(back, e.f);
}

#[test]
fn json_round_trip() {
    let e = enneper();
    let s = serde_json::to_string(&e.f).unwrap();
    let back: QuadNet3<f64> = serde_json::from_str(&s).unwrap();
    assert_eq!(back, e.f);
}

#[test]
fn works_in_single_precision() {
    let e = enneper_surface::<f32>(Window::square(2), &MoebiusParams::default(), 1e-4).unwrap();
    let r = koenigs_check(&e.f, &e.fstar).unwrap();
    assert!(r.k1 < 1e-5 && r.k2 < 1e-5, "{r:?}");
}

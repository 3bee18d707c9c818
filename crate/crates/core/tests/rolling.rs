mod common;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snapnet::dualquat::{cayley_transform, Rotation3};
use snapnet::koenigs::*;
use snapnet::procrustes::{fit_rigid, RigidMotion};
use snapnet::rolling::*;
use snapnet::studynet::{classify_fourbar, snet_build_retrying, Branch, FourBarFamily};
use snapnet::{Tol, Vector3};

fn pipeline(r: i64) -> EnneperPipeline<f64> {
    run_enneper(&EnneperConfig {
        window: Window::square(r),
        ..Default::default()
    })
    .unwrap()
}

fn quad() -> [Vector3; 4] {
    [
        Vector3::new(0.0, 0.0, 0.0),
        Vector3::new(1.0, 0.2, 0.1),
        Vector3::new(1.1, 1.3, -0.2),
        Vector3::new(-0.2, 0.8, 0.3),
    ]
}

#[test]
fn align_recovers_a_seeded_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let axis = Vector3::new(rng.random(), rng.random(), rng.random()) - Vector3::new(0.5, 0.5, 0.5);
        let m = RigidMotion::new(
            Rotation3::from_axis_angle(axis.normalized().unwrap(), rng.random_range(-3.0..3.0)),
            Vector3::new(rng.random(), rng.random(), rng.random()),
        );
        let fit = align_faces(&quad(), &quad().map(|p| m.apply(p)), 1e-12).unwrap();
        assert!(fit.motion.rotation.distance(&m.rotation) < 1e-10);
        assert!((fit.motion.translation - m.translation).norm() < 1e-10);
    }
}

#[test]
fn rolling_rotation_matches_face_alignment() {
    let p = pipeline(3);
    let fstar = &p.surface.fstar;
    let r = rolling_rotation(fstar, (1, 1), Direction::Axis1, 1.0).unwrap();
    // Black faces of g around g-vertex (1, 0) come from the stars at (2, 1)
    // and (0, 1).
    let fit = |(a, b): (i64, i64)| {
        let s = p.gp.net.face(a, b).unwrap();
        let t = p.gm.net.face(a, b).unwrap();
        fit_rigid(&s, &t).unwrap().motion
    };
    let pi = ColoredNet::<f64>::face_of_source(2, 1).unwrap();
    let mu = ColoredNet::<f64>::face_of_source(0, 1).unwrap();
    let rel = fit(pi).compose(&fit(mu).inverse());
    assert!(rel.rotation.distance(&r) <= 1e-8);
    let alpha = snap_angle(fstar, (1, 1), Direction::Axis1, 1.0).unwrap();
    assert!((alpha - r.angle_from_trace()).abs() <= 1e-10);
    let u = axis_direction(fstar, (1, 1), Direction::Axis1, 1.0, 1e-12).unwrap();
    assert!(u.sin_angle(r.axis().unwrap()) <= 1e-8);
}

#[test]
fn cayley_edge_relation_and_star_congruence() {
    let p = pipeline(3);
    let fs = &p.surface.fstar;
    let mut worst: f64 = 0.0;
    for ((m, n), _) in p.fp.iter() {
        let c = cayley_transform(fs.get(m, n).unwrap() * p.config.t);
        for (dm, dn) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            let (Some(a), Some(b)) = (p.fp.get(m + dm, n + dn), p.fm.get(m + dm, n + dn)) else {
                continue;
            };
            let ep = a - p.fp.get(m, n).unwrap();
            let em = b - p.fm.get(m, n).unwrap();
            worst = worst.max((em - c.apply(ep)).norm());
        }
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn enneper_snapping_net() {
    let p = pipeline(3);
    let s = &p.snapping;
    assert_eq!(s.cells.len(), 2);
    assert_eq!(s.snapping_cells(), 2);
    assert!(s.max_closure_residual() <= 1e-8);
    assert!(s.max_dh_mismatch() <= 1e-8);
    let f = p.formulas;
    assert!(f.angle_vs_joint <= 1e-10 && f.axis_vs_joint <= 1e-8, "{f:?}");
    for j in &s.joints {
        let fixed = j.fixed.line();
        assert!(fixed.distance_to_point(p.gm.net.get(j.vertex.0, j.vertex.1).unwrap()) < 1e-12);
        let ev = j.everted.line();
        assert!(ev.distance_to_point(p.gp.net.get(j.vertex.0, j.vertex.1).unwrap()) < 1e-9);
    }
}

#[test]
fn identical_nets_do_not_snap() {
    let p = pipeline(3);
    let s = roll_build(&p.gm, &p.gm, &Tol::default()).unwrap();
    assert!(s.joints.iter().all(|j| j.kind == JointKind::ShakyLike));
    assert_eq!(s.snapping_cells(), 0);
}

#[test]
fn single_cell_classifies_as_snapping() {
    let p = pipeline(3);
    // The white cell (-1, 0) with its four black neighbours.
    let mut gp = p.gp.clone();
    let mut gm = p.gm.clone();
    let keep: Vec<(i64, i64)> = [(-2, 0), (-1, -1), (0, 0), (-1, 1)]
        .iter()
        .flat_map(|&(a, b)| [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)])
        .collect();
    for g in [&mut gp, &mut gm] {
        let w = g.net.window;
        for (u, v) in w.indices().collect::<Vec<_>>() {
            if !keep.contains(&(u, v)) {
                g.net.vertices[w.offset(u, v).unwrap()] = None;
            }
        }
    }
    let s = roll_build(&gp, &gm, &Tol::default()).unwrap();
    assert_eq!(s.cells.len(), 1);
    let fb = s.fourbar(&s.cells[0]).unwrap();
    let c = classify_fourbar(&fb.fixed_axes, 5, &Tol::default()).unwrap();
    assert_eq!(c.family, FourBarFamily::Snapping);
    assert_eq!(c.config_count, Some(2));
}

#[test]
fn congruent_quads_on_example_fourbar() {
    let fb = common::example_fourbar();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for first in 0..4 {
        for _ in 0..10 {
            let on = |k: usize, s: f64| {
                let l = fb.fixed_axes[k];
                l.point() + l.direction.normalized().unwrap() * s
            };
            let gi = on(first, rng.random_range(-3.0..3.0));
            let gj = on((first + 1) % 4, rng.random_range(-3.0..3.0));
            let q = congruent_quad_on_axes(&fb, first, gi, gj, 1e-9).unwrap();
            assert!(q.distance_residual <= 1e-9, "{:e}", q.distance_residual);
            for k in 0..4 {
                assert!(fb.fixed_axes[k].distance_to_point(q.g[k]) < 1e-9);
                assert!(fb.everted_axes[k].distance_to_point(q.h[k]) < 1e-9);
            }
        }
    }
}

#[test]
fn congruent_quads_reject_points_off_axis() {
    let fb = common::example_fourbar();
    let l = fb.fixed_axes[0];
    let p = l.point() + l.direction.any_orthogonal().normalized().unwrap() * 5.0;
    let q = fb.fixed_axes[1].point();
    assert!(matches!(
        congruent_quad_on_axes(&fb, 0, p, q, 1e-9),
        Err(RollingError::PointsOffAxis { .. })
    ));
}

#[test]
fn propagation_recovers_the_enneper_pair() {
    let p = pipeline(5);
    let s = &p.snapping;
    let seeds: BTreeMap<_, _> = p
        .gm
        .net
        .iter()
        .filter(|&((u, v), _)| s.joint((u, v)).is_none() || v == u || u + v == 1)
        .collect();
    let pr = propagate_congruent_net(s, &seeds, 1e-9).unwrap();
    assert!(pr.undetermined.is_empty());
    assert!(pr.g.max_distance(&p.gm.net) <= 1e-7);
    assert!(pr.h.max_distance(&p.gp.net) <= 1e-7);
    let again = roll_build(
        &ColoredNet { net: pr.h.clone(), source_window: p.gp.source_window },
        &ColoredNet { net: pr.g.clone(), source_window: p.gm.source_window },
        &Tol::default(),
    )
    .unwrap();
    for (a, b) in again.links.iter().zip(&s.links) {
        assert_eq!(a.face, b.face);
        assert!(a.pose.rotation.distance(&b.pose.rotation) <= 1e-7);
    }
}

#[test]
fn propagation_on_a_seeded_snet() {
    let tol = Tol::default();
    let (snet, _) = snet_build_retrying(2, &[(0, 2), (0, 2)], 9, Branch::Plus, 1e-9, 8).unwrap();
    let s = snapping_from_snet(&snet, &tol).unwrap();
    assert_eq!(s.links.len(), 9);
    assert_eq!(s.cells.len(), 4);
    assert_eq!(s.snapping_cells(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut seeds = BTreeMap::new();
    for j in &s.joints {
        let (u, v) = j.vertex;
        if v == u || u + v == 1 {
            seeds.insert((u, v), j.fixed.anchor + j.fixed.direction * rng.random_range(-1.0..1.0));
        }
    }
    let pr = propagate_congruent_net(&s, &seeds, 1e-9).unwrap();
    assert!(pr.undetermined.is_empty(), "{:?}", pr.undetermined);
    assert!(pr.white_congruence <= 1e-8, "{:e}", pr.white_congruence);
    for l in &s.links {
        let (Some(g), Some(h)) = (pr.g.face(l.face.0, l.face.1), pr.h.face(l.face.0, l.face.1)) else {
            continue;
        };
        assert!(fit_rigid(&g, &h).unwrap().max_residual <= 1e-8);
    }
}

#[test]
fn snapping_net_json_has_axis_records() {
    let p = pipeline(3);
    let v: serde_json::Value = serde_json::to_value(&p.snapping).unwrap();
    let j = &v["joints"][0];
    assert_eq!(j["fixed"]["anchor"].as_array().unwrap().len(), 3);
    assert_eq!(j["everted"]["direction"].as_array().unwrap().len(), 3);
    assert!(j["snap_angle"].is_f64());
    assert!(v["links"][0]["neighbours"].is_array());
    let back: SnappingNet<f64> = serde_json::from_value(v).unwrap();
    assert_eq!(back, p.snapping);
}

#[test]
fn zero_t_refused() {
    let c = EnneperConfig::<f64> { t: 0.0, ..Default::default() };
    assert_eq!(run_enneper(&c).unwrap_err(), RollingError::ZeroDeformation);
}

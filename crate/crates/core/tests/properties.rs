mod common;

use proptest::prelude::*;
use snapnet::dualquat::{cayley_transform, dh_cycle, LineAxis, Rotation3};
use snapnet::koenigs::*;
use snapnet::procrustes::RigidMotion;
use snapnet::rolling::*;
use snapnet::studynet::{
    bilinear_form_normalized, face_closure_residual, fourbar_from_face, rotation_net, snet_build,
    snet_extend, Branch,
};
use snapnet::{DualQuat, Vector3};

fn vec3(r: f64) -> impl Strategy<Value = Vector3> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vector3> {
    vec3(1.0).prop_filter_map("nonzero", |v| v.normalized())
}

fn motion() -> impl Strategy<Value = RigidMotion<f64>> {
    (unit(), -3.0..3.0f64, vec3(5.0))
        .prop_map(|(a, th, t)| RigidMotion::new(Rotation3::from_axis_angle(a, th), t))
}

fn rotation_dq() -> impl Strategy<Value = DualQuat> {
    (unit(), vec3(3.0), 0.1..3.0f64)
        .prop_map(|(axis, point, angle)| DualQuat::rotation(axis, point, angle).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn point_action_is_projective(m in motion(), x in vec3(10.0), s in prop_oneof![-50.0..-0.01f64, 0.01..50.0f64]) {
        let p = m.to_dual_quaternion();
        let a = p.act_on_point(x).unwrap();
        let b = p.scale(s).act_on_point(x).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        prop_assert!((a - m.apply(x)).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn line_action_keeps_plucker(m in motion(), d in unit(), x in vec3(5.0)) {
        let l = LineAxis::through_point(x, d);
        let moved = m.to_dual_quaternion().act_on_line(&l).unwrap();
        prop_assert!(moved.direction.dot(moved.moment).abs() <= 1e-10);
    }

    #[test]
    fn cayley_is_a_rotation(v in vec3(1e3)) {
        let c = cayley_transform(v);
        prop_assert!(c.orthogonality_residual() <= 1e-12);
    }

    #[test]
    fn rotations_are_study_edges(m in motion(), r in rotation_dq()) {
        let p = m.to_dual_quaternion();
        let q = r * p;
        prop_assert!(p.study_residual_normalized() <= 1e-12);
        prop_assert!(q.study_residual_normalized() <= 1e-12);
        prop_assert!(bilinear_form_normalized(&p, &q).abs() <= 1e-10);
        prop_assert!((q * p.quat_conj()).is_rotation(1e-9));
    }

    #[test]
    fn axis_formula_is_an_eigenvector(a in vec3(2.0), b in vec3(2.0), t in -3.0..3.0f64) {
        let mut fs = QuadNet3::empty(Window::new(-1, 1, 0, 0));
        fs.set(1, 0, a);
        fs.set(-1, 0, b);
        let r = rolling_rotation(&fs, (0, 0), Direction::Axis1, t).unwrap();
        let alpha = snap_angle(&fs, (0, 0), Direction::Axis1, t).unwrap();
        prop_assert!((alpha - r.angle_from_trace()).abs() <= 1e-7);
        prop_assert!((alpha - r.angle()).abs() <= 1e-9);
        if let (Ok(u), Some(e)) = (axis_direction(&fs, (0, 0), Direction::Axis1, t, 1e-6), r.axis()) {
            if alpha > 1e-6 {
                prop_assert!(u.sin_angle(e) <= 1e-8);
                prop_assert!((r.apply(u) - u).norm() <= 1e-8 * u.norm());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn koenigs_iid_invariants(seed in any::<u64>(), t in 1e-3..10.0f64, v in vec3(2.0), w in vec3(0.5), s in -5.0..5.0f64) {
        let e = common::random_koenigs(seed, Window::new(-2, 2, -2, 3));
        let (_, d) = path_discrepancy(&e.f, &e.fstar, 1e-6).unwrap();
        prop_assert!(d <= 1e-9 * e.f.extent().max(1.0));
        let q = iid_from_dual(&e.f, &e.fstar, Vector3::new(0.0, 0.0, 1.0), 1e-9).unwrap();
        let scale = e.f.max_edge_length() * q.extent().max(1.0);
        for dl in first_order_length_change(&e.f, &q) {
            prop_assert!(dl.abs() <= 1e-10 * scale.max(1.0));
        }
        for other in [q.scaled(s), q.translated(v), q.plus_rigid(&e.f, w, v)] {
            prop_assert!(other.orthogonality_residual(&e.f) <= 1e-10 * scale.max(1.0) * (1.0 + s.abs()));
        }
        let (fp, fm) = deaverage(&e.f, &q, t);
        let r = isometry_report(&fp, &fm, IsometryMode::Edge).unwrap();
        prop_assert!(r.max_residual <= 1e-9 * fp.max_edge_length().max(fm.max_edge_length()));
    }

    #[test]
    fn rolling_invariants(seed in any::<u64>(), t in 0.05..3.0f64) {
        let e = common::random_koenigs(seed, Window::new(-3, 3, -3, 3));
        let q = iid_from_dual(&e.f, &e.fstar, Vector3::zero(), 1e-9).unwrap();
        let (fp, fm) = deaverage(&e.f, &q, t);
        let scale = fp.max_edge_length().max(1.0);
        for ((m, n), x) in fp.iter() {
            let c = cayley_transform(e.fstar.get(m, n).unwrap() * t);
            for (dm, dn) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
                if let (Some(a), Some(b)) = (fp.get(m + dm, n + dn), fm.get(m + dm, n + dn)) {
                    let em = b - fm.get(m, n).unwrap();
                    prop_assert!((em - c.apply(a - x)).norm() <= 1e-10 * scale);
                }
            }
        }
        let gp = diagonal_net(&fp).unwrap();
        let gm = diagonal_net(&fm).unwrap();
        let net = roll_build(&gp, &gm, &Default::default()).unwrap();
        prop_assert!(net.max_closure_residual() <= 1e-8);
        let check = formula_check(&net, &e.fstar, t).unwrap();
        prop_assert!(check.rotation <= 1e-8 && check.axis_vs_joint <= 1e-8, "{:?}", check);
    }

    #[test]
    fn snap_angles_grow_from_zero(seed in any::<u64>()) {
        let e = common::random_koenigs(seed, Window::square(2));
        for i in [(0, 0), (1, 1), (-1, 1)] {
            let dir = joint_direction(i.0);
            prop_assert_eq!(snap_angle(&e.fstar, i, dir, 0.0).unwrap(), 0.0);
            let a1 = snap_angle(&e.fstar, i, dir, 1e-3).unwrap();
            let a2 = snap_angle(&e.fstar, i, dir, 2e-3).unwrap();
            prop_assert!(a1 > 1e-12 && a2 > a1, "{} {}", a1, a2);
        }
    }

    #[test]
    fn snet_invariants(seed in 0u64..1000, dim in 1usize..=3) {
        let window = vec![(0, 1); dim];
        let net = snet_build::<f64>(dim, &window, seed, Branch::Plus, 1e-9).unwrap();
        let r = net.residuals();
        prop_assert!(r.study <= 1e-8 && r.edge <= 1e-8, "{:?}", r);
        if dim >= 2 {
            let rn = rotation_net(&net, 1e-9).unwrap();
            for (i, k, l) in rn.faces() {
                let face = rn.face(&i, k, l).unwrap();
                prop_assert!(face_closure_residual(&face) <= 1e-7);
                let fb = fourbar_from_face(&face, 1e-9).unwrap();
                let a = dh_cycle(&fb.fixed_axes, 1e-12).unwrap();
                let b = dh_cycle(&fb.everted_axes, 1e-12).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!(x.max_abs_diff(y) <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn extend_is_deterministic(seed in any::<u64>(), m in motion(), r1 in rotation_dq(), r2 in rotation_dq()) {
        let p = m.to_dual_quaternion();
        let known = [r1 * p, r2 * p];
        let a = snet_extend(&known, seed, Branch::Minus, 1e-9);
        let b = snet_extend(&known, seed, Branch::Minus, 1e-9);
        prop_assert_eq!(a.map(|x| x.coords().map(f64::to_bits)), b.map(|x| x.coords().map(f64::to_bits)));
    }

    #[test]
    fn double_diagonal_bookkeeping(m in -20i64..20, n in -20i64..20) {
        // (s, t) of the second diagonal net is (−2t, 2s) of the source.
        let (s, t) = (m, n);
        let (u, v) = ColoredNet::<f64>::source_vertex(s, t);
        let (a, b) = ColoredNet::<f64>::source_vertex(u, v);
        prop_assert_eq!((a, b), (-2 * t, 2 * s));
        prop_assert_eq!(ColoredNet::<f64>::vertex_of_source(a, b), Some((u, v)));
        prop_assert_eq!(ColoredNet::<f64>::vertex_of_source(u, v), Some((s, t)));
    }
}

#[test]
fn double_diagonal_of_a_net() {
    let f = QuadNet3::from_fn(Window::square(6), |m, n| Vector3::new(m as f64, n as f64, (m * n) as f64));
    let g2 = diagonal_net(&diagonal_net(&f).unwrap().net).unwrap();
    let mut seen = 0;
    for ((s, t), x) in g2.net.iter() {
        assert_eq!(Some(x), f.get(-2 * t, 2 * s));
        seen += 1;
    }
    assert!(seen > 9);
}

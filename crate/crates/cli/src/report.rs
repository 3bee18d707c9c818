use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use snapnet::koenigs::{
    deaverage, diagonal_net, isometry_report, koenigs_check, IsometryMode, QuadNet3,
};
use snapnet::rolling::{formula_check, roll_build, EnneperPipeline, SnappingNet};
use snapnet::studynet::{
    bilinear_form_normalized, face_closure_residual, fourbar_from_face, rotation_net, RotationQuadrilateral,
    SNet,
};
use snapnet::{DualQuat, Tol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    /// `None` for residuals that are reported but not checked.
    pub tolerance: Option<f64>,
    pub pass: bool,
    /// Where the largest value occurs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapRow {
    pub face: [i64; 2],
    pub angles: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: String,
    pub pass: bool,
    pub residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_scalar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_unit: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub snap_angles: Vec<SnapRow>,
}

impl VerifyReport {
    fn new(kind: &str) -> Self {
        Self {
            kind: kind.into(),
            pass: true,
            residuals: Vec::new(),
            product_scalar: None,
            angle_unit: None,
            snap_angles: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, value: f64, tolerance: f64, at: Option<String>) {
        let pass = value <= tolerance;
        self.pass &= pass;
        self.residuals.push(Residual {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            pass,
            at,
        });
    }

    fn info(&mut self, name: &str, value: f64) {
        self.residuals.push(Residual {
            name: name.into(),
            value,
            tolerance: None,
            pass: true,
            at: None,
        });
    }

    /// A check that could not be evaluated at all.
    fn broken(&mut self, name: &str, why: String) {
        self.pass = false;
        self.residuals.push(Residual {
            name: name.into(),
            value: f64::INFINITY,
            tolerance: None,
            pass: false,
            at: Some(why),
        });
    }

    #[cfg(test)]
    pub fn residual(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    fn snap_table(&mut self, net: &SnappingNet<f64>, degrees: bool) {
        self.angle_unit = Some(if degrees { "deg" } else { "rad" }.into());
        self.snap_angles = net
            .snap_table()
            .into_iter()
            .map(|((a, b), angles)| SnapRow {
                face: [a, b],
                angles: angles.map(|x| if degrees { x.to_degrees() } else { x }),
            })
            .collect();
    }
}

fn worst<I: IntoIterator<Item = (String, f64)>>(items: I) -> (f64, Option<String>) {
    items
        .into_iter()
        .fold((0.0, None), |(m, at), (k, v)| if v > m || v.is_nan() { (v, Some(k)) } else { (m, at) })
}

fn vertex_gap(a: &QuadNet3<f64>, b: &QuadNet3<f64>) -> (f64, Option<String>) {
    if a.window != b.window {
        return (f64::INFINITY, Some("window".into()));
    }
    worst(a.iter().map(|((m, n), x)| {
        let d = b.get(m, n).map_or(f64::INFINITY, |y| (x - y).norm());
        (format!("({m}, {n})"), d)
    }))
}

/// The worked-example fixture: four poses whose relative displacements
/// form a rotation quadrilateral.
pub fn fourbar_report(poses: &[DualQuat; 4], tol: &Tol) -> VerifyReport {
    let mut r = VerifyReport::new("fourbar");
    let (study, at) = worst(
        poses
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("pose {i}"), p.study_residual_normalized())),
    );
    r.check("study", study, tol.linear, at);
    let (edge, at) = worst((0..4).map(|i| {
        let s = bilinear_form_normalized(&poses[i], &poses[(i + 1) % 4]).abs();
        (format!("edge {i}-{}", (i + 1) % 4), s)
    }));
    r.check("edge-form", edge, tol.linear, at);

    let q = RotationQuadrilateral::from_poses(poses);
    r.check("closure", face_closure_residual(&q), tol.linear, None);
    let product = q.product();
    r.product_scalar = Some(product.coords()[0]);
    r.check("product-non-real", product.non_real_residual(), tol.linear, None);
    match fourbar_from_face(&q, tol.algebraic) {
        Ok(fb) => match fb.dh_mismatch(1e-12) {
            Ok(m) => r.check("dh", m, tol.linear, None),
            Err(e) => r.broken("dh", e.to_string()),
        },
        Err(e) => r.broken("dh", e.to_string()),
    }
    r
}

pub fn snet_report(net: &SNet<f64>, tol: &Tol) -> VerifyReport {
    let mut r = VerifyReport::new("snet");
    let (study, at) = worst(
        net.vertices
            .iter()
            .map(|(i, p)| (format!("{i:?}"), p.study_residual_normalized())),
    );
    r.check("study", study, tol.linear, at);
    let (edge, at) = worst(net.edges().into_iter().map(|(i, k)| {
        let j = SNet::<f64>::step(&i, k);
        let s = bilinear_form_normalized(&net.vertices[&i], &net.vertices[&j]).abs();
        (format!("{i:?} -> {j:?}"), s)
    }));
    r.check("edge-form", edge, tol.linear, at);
    match rotation_net(net, tol.algebraic) {
        Ok(rn) => r.check("closure", rn.max_closure_residual(), tol.linear, None),
        Err(e) => r.broken("closure", e.to_string()),
    }
    r
}

/// Rebuilds the net from its link poses and compares.
pub fn snapping_report(net: &SnappingNet<f64>, tol: &Tol, degrees: bool) -> VerifyReport {
    let mut r = VerifyReport::new("snapping-net");
    let poses: BTreeMap<_, _> = net.links.iter().map(|l| (l.face, l.pose)).collect();
    let mut anchors = QuadNet3::empty(net.window);
    for j in &net.joints {
        if net.window.contains(j.vertex.0, j.vertex.1) {
            anchors.set(j.vertex.0, j.vertex.1, j.fixed.anchor);
        }
    }
    let rebuilt = match SnappingNet::from_poses(net.window, &poses, Some(&anchors), tol) {
        Ok(n) => n,
        Err(e) => {
            r.broken("closure", e.to_string());
            return r;
        }
    };
    let (gap, at) = joint_gap(net, &rebuilt);
    r.check("consistency", gap, tol.linear, at);
    rolling_residuals(&mut r, &rebuilt, tol);
    r.snap_table(&rebuilt, degrees);
    r
}

fn joint_gap(stored: &SnappingNet<f64>, rebuilt: &SnappingNet<f64>) -> (f64, Option<String>) {
    if stored.joints.len() != rebuilt.joints.len() || stored.cells.len() != rebuilt.cells.len() {
        return (f64::INFINITY, Some("joint or cell count".into()));
    }
    worst(stored.joints.iter().map(|j| {
        let at = format!("joint ({}, {})", j.vertex.0, j.vertex.1);
        let Some(k) = rebuilt.joint(j.vertex) else {
            return (at, f64::INFINITY);
        };
        let d = (j.snap_angle - k.snap_angle)
            .abs()
            .max((j.fixed.direction - k.fixed.direction).norm())
            .max((j.everted.anchor - k.everted.anchor).norm())
            .max((j.everted.direction - k.everted.direction).norm());
        (at, d)
    }))
}

fn rolling_residuals(r: &mut VerifyReport, net: &SnappingNet<f64>, tol: &Tol) {
    let (closure, at) = worst(
        net.cells
            .iter()
            .map(|c| (format!("cell ({}, {})", c.face.0, c.face.1), c.closure_residual)),
    );
    r.check("closure", closure, tol.linear, at);
    let (dh, at) = worst(net.cells.iter().filter_map(|c| {
        c.dh_mismatch
            .map(|m| (format!("cell ({}, {})", c.face.0, c.face.1), m))
    }));
    r.check("dh", dh, tol.linear, at);
    r.info("cells", net.cells.len() as f64);
    r.info("snapping-cells", net.snapping_cells() as f64);
}

/// Recomputes every stage of a stored Enneper pipeline from its surface.
pub fn pipeline_report(p: &EnneperPipeline<f64>, tol: &Tol, degrees: bool) -> VerifyReport {
    let mut r = VerifyReport::new("enneper-pipeline");
    let s = &p.surface;
    match koenigs_check(&s.f, &s.fstar) {
        Ok(k) => {
            r.check("koenigs-K1", k.k1, tol.linear, k.worst_face.map(|f| format!("{f:?}")));
            r.check("koenigs-K2", k.k2, tol.linear, None);
        }
        Err(e) => r.broken("koenigs-K1", e.to_string()),
    }
    let scale = s.f.max_edge_length().max(1.0) * p.q.extent().max(1.0);
    r.check("iid", p.q.orthogonality_residual(&s.f) / scale, tol.algebraic, None);

    let t = p.config.t;
    let (fp, fm) = deaverage(&s.f, &p.q, t);
    let (a, at_a) = vertex_gap(&p.fp, &fp);
    let (b, at_b) = vertex_gap(&p.fm, &fm);
    let (gap, at) = if a >= b { (a, at_a.map(|x| format!("f+ {x}"))) } else { (b, at_b.map(|x| format!("f- {x}"))) };
    let length = fp.max_edge_length().max(fm.max_edge_length()).max(1.0);
    r.check("consistency", gap / length, tol.linear, at);

    for (mode, name, checked) in [
        (IsometryMode::Edge, "isometry-edge", true),
        (IsometryMode::Star, "isometry-star", true),
        (IsometryMode::Face, "isometry-face", false),
    ] {
        match isometry_report(&p.fp, &p.fm, mode) {
            Ok(i) if checked => r.check(
                name,
                i.max_residual / length,
                tol.algebraic,
                i.worst.map(|w| format!("{w:?}")),
            ),
            Ok(i) => r.info(name, i.max_residual / length),
            Err(e) => r.broken(name, e.to_string()),
        }
    }

    let rebuilt = diagonal_net(&p.fp)
        .and_then(|gp| Ok((gp, diagonal_net(&p.fm)?)))
        .map_err(|e| e.to_string())
        .and_then(|(gp, gm)| roll_build(&gp, &gm, tol).map_err(|e| e.to_string()));
    let net = match rebuilt {
        Ok(n) => n,
        Err(e) => {
            r.broken("closure", e);
            return r;
        }
    };
    let (gap, at) = joint_gap(&p.snapping, &net);
    r.check("snapping-consistency", gap, tol.linear, at);
    rolling_residuals(&mut r, &net, tol);
    match formula_check(&net, &s.fstar, t) {
        Ok(f) => {
            r.check("angle-vs-matrix", f.angle_vs_matrix, tol.algebraic, None);
            r.check("axis-vs-eigenvector", f.axis_vs_eigenvector, tol.angular, None);
        }
        Err(e) => r.broken("angle-vs-matrix", e.to_string()),
    }
    r.snap_table(&net, degrees);
    r
}

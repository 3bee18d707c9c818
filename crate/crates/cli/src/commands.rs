use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::Value;
use snapnet::dualquat::LineAxis;
use snapnet::koenigs::{
    deaverage as split, diagonal_net, iid_from_dual, isometry_report, read_mesh, write_mesh, ColoredNet,
    IsometryMode, QuadNet3, Window,
};
use snapnet::rolling::{roll_build, run_enneper, EnneperConfig, EnneperPipeline, SnappingNet};
use snapnet::studynet::{
    classify_fourbar, fourbar_from_face, rotation_net, snet_build_retrying, Branch, RotationQuadrilateral, SNet,
    StudyNetError,
};
use snapnet::{DualQuat, Tol, Vector3};

use crate::config::{parse_moebius, parse_ranges, parse_vec3, parse_window, tolerance, FileConfig};
use crate::report::{fourbar_report, pipeline_report, snapping_report, snet_report, VerifyReport};
use crate::{BranchArg, CliError, Common, ExitKind, Format};

struct Settings {
    file: FileConfig,
    tol: Tol,
    out: PathBuf,
    format: Format,
    degrees: bool,
}

fn settings(common: &Common, default_out: &str) -> Result<Settings, CliError> {
    let file = FileConfig::load(common.config.as_deref()).usage()?;
    let tol = tolerance(common.tol.or(file.tol)).usage()?;
    if let Some(n) = common.workers.or(file.workers) {
        if n == 0 {
            return Err(CliError::Usage(anyhow!("--workers must be at least 1")));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(Settings {
        out: common.out.clone().or(file.out.clone()).unwrap_or_else(|| default_out.into()),
        format: common.format.or(file.format).unwrap_or(Format::Json),
        degrees: common.degrees || file.degrees.unwrap_or(false),
        tol,
        file,
    })
}

/// `x` rounded to 12 significant digits, in exponent form when tiny or huge.
fn sig12(x: f64) -> String {
    let y: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if y == 0.0 || !y.is_finite() || (1e-4..1e6).contains(&y.abs()) {
        y.to_string()
    } else {
        format!("{y:e}")
    }
}

fn show_window(w: &Window) -> String {
    format!("[{}, {}] x [{}, {}]", w.m0, w.m1, w.n0, w.n1)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .usage()?;
    }
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .usage()
}

fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    write_text(path, &to_json(value))
}

fn write_net(dir: &Path, name: &str, net: &QuadNet3<f64>, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(&dir.join(format!("{name}.json")), net),
        Format::Mesh => write_text(&dir.join(format!("{name}.obj")), &write_mesh(net)),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .usage()
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

/// A net from a JSON `QuadNet3`, a JSON `ColoredNet` or a mesh file.
fn read_net(path: &Path) -> Result<QuadNet3<f64>, CliError> {
    let text = read(path)?;
    let ctx = || format!("parsing {}", path.display());
    if !is_json(path) {
        return read_mesh(&text).with_context(ctx).usage();
    }
    let v: Value = serde_json::from_str(&text).with_context(ctx).usage()?;
    if v.get("net").is_some() {
        let c: ColoredNet<f64> = serde_json::from_str(&text).with_context(ctx).usage()?;
        Ok(c.net)
    } else {
        serde_json::from_str(&text).with_context(ctx).usage()
    }
}

fn nonzero_t(t: f64) -> Result<f64, CliError> {
    if t == 0.0 {
        return Err(CliError::Usage(anyhow!(
            "t = 0 gives f+ = f- = f and nothing to de-average; pass a nonzero --t"
        )));
    }
    if !t.is_finite() {
        return Err(CliError::Usage(anyhow!("--t must be finite, got {t}")));
    }
    Ok(t)
}

fn print_report(path: &Path, r: &VerifyReport) {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    eprintln!("{}: {verdict} ({})", path.display(), r.kind);
    for res in &r.residuals {
        let tol = res.tolerance.map_or_else(|| "-".into(), sig12);
        let at = res.at.as_deref().map(|a| format!(" at {a}")).unwrap_or_default();
        let mark = if res.pass { "" } else { "  <-- fails" };
        eprintln!("  {:<22} {:<20} tol {tol}{at}{mark}", res.name, sig12(res.value));
    }
    if let Some(s) = r.product_scalar {
        eprintln!("  product scalar {}", sig12(s));
    }
}

pub fn enneper(
    common: &Common,
    window: Option<String>,
    t: Option<f64>,
    q0: Option<String>,
    moebius: Option<String>,
) -> Result<bool, CliError> {
    let s = settings(common, "enneper-out")?;
    let mut cfg = EnneperConfig::<f64> { tol: s.tol, ..Default::default() };
    if let Some(w) = window.or(s.file.window.clone()) {
        cfg.window = parse_window(&w).usage()?;
    }
    cfg.t = nonzero_t(t.or(s.file.t).unwrap_or(cfg.t))?;
    match (q0, s.file.q0) {
        (Some(q), _) => cfg.q0 = parse_vec3(&q).usage()?,
        (None, Some(q)) => cfg.q0 = Vector3::from_array(q),
        _ => {}
    }
    match (moebius, &s.file.moebius) {
        (Some(m), _) => cfg.moebius = parse_moebius(&m).usage()?,
        (None, Some(m)) => cfg.moebius = m.params().usage()?,
        _ => {}
    }
    let p = run_enneper(&cfg).construction()?;
    let dir = &s.out;
    write_net(dir, "fstar", &p.surface.fstar, s.format)?;
    write_net(dir, "f", &p.surface.f, s.format)?;
    write_json(&dir.join("q.json"), &p.q)?;
    write_net(dir, "g_plus", &p.gp.net, s.format)?;
    write_net(dir, "g_minus", &p.gm.net, s.format)?;
    write_net(dir, "f_plus", &p.fp, Format::Json)?;
    write_net(dir, "f_minus", &p.fm, Format::Json)?;
    write_net(dir, "f_plus", &p.fp, Format::Mesh)?;
    write_net(dir, "f_minus", &p.fm, Format::Mesh)?;
    write_json(&dir.join("snapping.json"), &p.snapping)?;
    write_json(&dir.join("pipeline.json"), &p)?;
    let report = pipeline_report(&p, &s.tol, s.degrees);
    write_json(&dir.join("report.json"), &report)?;

    let q00 = p.q.get(0, 0).unwrap_or_default();
    let inc = |m, n| {
        p.q.get(m, n)
            .map_or_else(|| "absent".into(), |q| format!("{:?}", (q - q00).to_array().map(sig12)))
    };
    println!("window {}, t {}", show_window(&cfg.window), sig12(cfg.t));
    println!("q(0,0) {:?}", q00.to_array().map(sig12));
    println!("q(1,0) - q(0,0) {}", inc(1, 0));
    println!("q(0,1) - q(0,0) {}", inc(0, 1));
    println!(
        "{} links, {} joints, {} cells ({} snapping)",
        p.snapping.links.len(),
        p.snapping.joints.len(),
        p.snapping.cells.len(),
        p.snapping.snapping_cells()
    );
    print_report(&dir.join("report.json"), &report);
    Ok(report.pass)
}

pub fn snet(
    common: &Common,
    dim: Option<usize>,
    window: Option<String>,
    seed: Option<u64>,
    branch: BranchArg,
    restarts: usize,
) -> Result<bool, CliError> {
    let s = settings(common, "snet-out")?;
    let dim = dim.or(s.file.dim).unwrap_or(2);
    if !(1..=6).contains(&dim) {
        return Err(CliError::Usage(anyhow!("dimension must be in 1..=6, got {dim}")));
    }
    let ranges = parse_ranges(window.or(s.file.window.clone()).as_deref().unwrap_or("0:1"), dim).usage()?;
    let seed = seed.or(s.file.seed).unwrap_or(0);
    let branch = match branch {
        BranchArg::Plus => Branch::Plus,
        BranchArg::Minus => Branch::Minus,
    };
    let (net, used) = match snet_build_retrying::<f64>(dim, &ranges, seed, branch, s.tol.algebraic, restarts) {
        Ok(x) => x,
        Err(e @ StudyNetError::BadWindow) => return Err(CliError::Usage(e.into())),
        Err(e) => {
            return Err(CliError::Construction(anyhow::Error::new(e).context(format!(
                "seeds {seed}..={} all failed; try another --seed or raise --restarts",
                seed.wrapping_add(restarts as u64)
            ))))
        }
    };
    let rn = rotation_net(&net, s.tol.algebraic).construction()?;
    write_json(&s.out.join("snet.json"), &net)?;
    write_json(&s.out.join("rotation_net.json"), &rn)?;
    let report = snet_report(&net, &s.tol);
    write_json(&s.out.join("report.json"), &report)?;
    println!(
        "dim {dim}, {} vertices, {} faces, {used} restarts",
        net.vertices.len(),
        rn.faces().len()
    );
    print_report(&s.out.join("report.json"), &report);
    Ok(report.pass)
}

pub fn deaverage(
    common: &Common,
    net: &Path,
    dual: &Path,
    t: Option<f64>,
    q0: Option<String>,
) -> Result<bool, CliError> {
    let s = settings(common, "deaverage-out")?;
    let t = nonzero_t(t.or(s.file.t).unwrap_or(1.0))?;
    let q0 = match (q0, s.file.q0) {
        (Some(q), _) => parse_vec3(&q).usage()?,
        (None, Some(q)) => Vector3::from_array(q),
        _ => Vector3::new(0.0, 0.0, 1.0),
    };
    let f = read_net(net)?;
    let fstar = read_net(dual)?;
    let q = iid_from_dual(&f, &fstar, q0, s.tol.algebraic).construction()?;
    let (fp, fm) = split(&f, &q, t);
    write_json(&s.out.join("q.json"), &q)?;
    write_net(&s.out, "f_plus", &fp, s.format)?;
    write_net(&s.out, "f_minus", &fm, s.format)?;
    let iso = isometry_report(&fp, &fm, IsometryMode::Edge).construction()?;
    let length = fp.max_edge_length().max(fm.max_edge_length()).max(1.0);
    let rel = iso.max_residual / length;
    let pass = rel <= s.tol.algebraic;
    println!(
        "edge isometry {} (tol {}): {}",
        sig12(rel),
        sig12(s.tol.algebraic),
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(pass)
}

pub fn roll(common: &Common, plus: &Path, minus: &Path) -> Result<bool, CliError> {
    let s = settings(common, "roll-out")?;
    let fp = read_net(plus)?;
    let fm = read_net(minus)?;
    if fp.window != fm.window {
        return Err(CliError::Usage(anyhow!(
            "the two nets have windows {} and {}",
            show_window(&fp.window),
            show_window(&fm.window)
        )));
    }
    let gp = diagonal_net(&fp).construction()?;
    let gm = diagonal_net(&fm).construction()?;
    let net = roll_build(&gp, &gm, &s.tol).construction()?;
    write_net(&s.out, "g_plus", &gp.net, s.format)?;
    write_net(&s.out, "g_minus", &gm.net, s.format)?;
    write_json(&s.out.join("snapping.json"), &net)?;
    let report = snapping_report(&net, &s.tol, s.degrees);
    write_json(&s.out.join("report.json"), &report)?;
    println!(
        "{} links, {} joints, {} cells ({} snapping)",
        net.links.len(),
        net.joints.len(),
        net.cells.len(),
        net.snapping_cells()
    );
    print_report(&s.out.join("report.json"), &report);
    Ok(report.pass)
}

fn parse_axes(text: &str, tol: &Tol) -> anyhow::Result<[LineAxis<f64>; 4]> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("poses").is_some() {
        let poses = parse_poses(text)?;
        let fb = fourbar_from_face(&RotationQuadrilateral::from_poses(&poses), tol.algebraic)?;
        return Ok(fb.fixed_axes);
    }
    let axes = v.get("axes").cloned().unwrap_or(v);
    Ok(serde_json::from_value(axes)?)
}

#[derive(serde::Deserialize)]
struct PoseFixture {
    poses: [DualQuat; 4],
}

fn parse_poses(text: &str) -> anyhow::Result<[DualQuat; 4]> {
    Ok(serde_json::from_str::<PoseFixture>(text)?.poses)
}

pub fn classify(common: &Common, path: &Path, seed: Option<u64>) -> Result<bool, CliError> {
    let s = settings(common, "-")?;
    let axes = parse_axes(&read(path)?, &s.tol)
        .with_context(|| format!("reading axes from {}", path.display()))
        .usage()?;
    let seed = seed.or(s.file.seed).unwrap_or(0);
    let c = match classify_fourbar(&axes, seed, &s.tol) {
        Ok(c) => c,
        Err(e @ StudyNetError::Inconclusive { .. }) => {
            eprintln!("{e}");
            return Ok(false);
        }
        Err(e) => return Err(CliError::Usage(e.into())),
    };
    let unit = if s.degrees { "deg" } else { "rad" };
    let configurations: Vec<Value> = c
        .configurations
        .iter()
        .map(|k| {
            let angles = k.angles.map(|a| if s.degrees { a.to_degrees() } else { a });
            serde_json::json!({
                "angles": angles,
                "residual": k.residual,
                "conditioning": k.conditioning,
            })
        })
        .collect();
    let out = serde_json::json!({
        "family": c.family,
        "config_count": c.config_count,
        "angle_unit": unit,
        "configurations": configurations,
    });
    if s.out.as_os_str() == "-" {
        print!("{}", to_json(&out));
    } else {
        write_json(&s.out, &out)?;
    }
    eprintln!("{} ({:?} configurations)", c.family.label(), c.config_count);
    Ok(true)
}

fn verify_one(path: &Path, s: &Settings) -> Result<VerifyReport, CliError> {
    let text = read(path)?;
    let ctx = || format!("parsing {}", path.display());
    let v: Value = serde_json::from_str(&text).with_context(ctx).usage()?;
    let has = |k: &str| v.get(k).is_some();
    Ok(if has("poses") {
        fourbar_report(&parse_poses(&text).with_context(ctx).usage()?, &s.tol)
    } else if has("surface") {
        let p: EnneperPipeline<f64> = serde_json::from_str(&text).with_context(ctx).usage()?;
        pipeline_report(&p, &s.tol, s.degrees)
    } else if has("links") {
        let n: SnappingNet<f64> = serde_json::from_str(&text).with_context(ctx).usage()?;
        snapping_report(&n, &s.tol, s.degrees)
    } else if has("dim") && has("vertices") {
        let n: SNet<f64> = serde_json::from_str(&text).with_context(ctx).usage()?;
        snet_report(&n, &s.tol)
    } else {
        return Err(CliError::Usage(anyhow!(
            "{}: not a pose fixture, S-net, snapping net or Enneper pipeline",
            path.display()
        )));
    })
}

pub fn verify(common: &Common, inputs: &[PathBuf]) -> Result<bool, CliError> {
    let s = settings(common, "-")?;
    let mut reports = Vec::new();
    for path in inputs {
        let r = verify_one(path, &s)?;
        print_report(path, &r);
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let text = if reports.len() == 1 { to_json(&reports[0]) } else { to_json(&reports) };
    if s.out.as_os_str() == "-" {
        print!("{text}");
    } else {
        write_text(&s.out, &text)?;
    }
    Ok(pass)
}

pub fn export(common: &Common, input: &Path) -> Result<bool, CliError> {
    let file = FileConfig::load(common.config.as_deref()).usage()?;
    let net = read_net(input)?;
    let format = common
        .format
        .or(file.format)
        .unwrap_or(if is_json(input) { Format::Mesh } else { Format::Json });
    let out = common.out.clone().or(file.out).unwrap_or_else(|| {
        input.with_extension(match format {
            Format::Json => "json",
            Format::Mesh => "obj",
        })
    });
    if out == input {
        return Err(CliError::Usage(anyhow!("refusing to overwrite the input {}", input.display())));
    }
    match format {
        Format::Json => write_json(&out, &net)?,
        Format::Mesh => write_text(&out, &write_mesh(&net))?,
    }
    eprintln!(
        "{} vertices, window {} -> {}",
        net.vertex_count(),
        show_window(&net.window),
        out.display()
    );
    Ok(true)
}

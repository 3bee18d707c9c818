use std::fmt::Write as _;

use super::net::{QuadNet3, Window};
use super::KoenigsError;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// Plain-text quad mesh: `v x y z` lines for the present vertices in
/// row-major order, then `f i j k l` lines with 1-based indices. Comment
/// lines record the window and any absent vertices so that
/// [`read_mesh`] restores the net exactly.
pub fn write_mesh<T: Real>(net: &QuadNet3<T>) -> String {
    let w = net.window;
    let mut out = String::new();
    writeln!(out, "# window {} {} {} {}", w.m0, w.m1, w.n0, w.n1).unwrap();
    let absent: Vec<String> = net
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(k, _)| k.to_string())
        .collect();
    if !absent.is_empty() {
        writeln!(out, "# absent {}", absent.join(" ")).unwrap();
    }
    let mut number = vec![0usize; net.vertices.len()];
    let mut next = 1;
    for (k, v) in net.vertices.iter().enumerate() {
        if let Some(v) = v {
            let [x, y, z] = v.to_array().map(|c| c.to_f64_lossy());
            writeln!(out, "v {x:?} {y:?} {z:?}").unwrap();
            number[k] = next;
            next += 1;
        }
    }
    for (m, n) in net.faces() {
        let ids: Vec<String> = super::net::FACE_CORNERS
            .iter()
            .map(|(dm, dn)| number[w.offset(m + dm, n + dn).unwrap()].to_string())
            .collect();
        writeln!(out, "f {}", ids.join(" ")).unwrap();
    }
    out
}

fn parse_err(line: usize, reason: impl Into<String>) -> KoenigsError {
    KoenigsError::MeshParse {
        line,
        reason: reason.into(),
    }
}

fn numbers<F: std::str::FromStr>(line: usize, fields: &[&str]) -> Result<Vec<F>, KoenigsError> {
    fields
        .iter()
        .map(|s| s.parse().map_err(|_| parse_err(line, format!("bad number {s:?}"))))
        .collect()
}

/// Reads a mesh written by [`write_mesh`]. Face lines are checked against
/// the window but otherwise carry no information.
pub fn read_mesh<T: Real>(text: &str) -> Result<QuadNet3<T>, KoenigsError> {
    let mut window = None;
    let mut absent = Vec::new();
    let mut coords = Vec::new();
    let mut faces = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            ["#", "window", rest @ ..] => {
                let v: Vec<i64> = numbers(line, rest)?;
                let [m0, m1, n0, n1] = v[..] else {
                    return Err(parse_err(line, "window needs four integers"));
                };
                window = Some(Window::new(m0, m1, n0, n1));
            }
            ["#", "absent", rest @ ..] => absent.extend(numbers::<usize>(line, rest)?),
            [c, ..] if c.starts_with('#') => {}
            ["v", rest @ ..] => {
                let v: Vec<f64> = numbers(line, rest)?;
                let [x, y, z] = v[..] else {
                    return Err(parse_err(line, "vertex needs three coordinates"));
                };
                coords.push(Vec3::new(T::lit(x), T::lit(y), T::lit(z)));
            }
            ["f", rest @ ..] => {
                let ids: Vec<usize> = numbers(line, rest)?;
                if ids.len() != 4 || ids.iter().any(|&k| k == 0 || k > coords.len()) {
                    return Err(parse_err(line, "face needs four vertex indices in range"));
                }
                faces += 1;
            }
            [other, ..] => return Err(parse_err(line, format!("unknown record {other:?}"))),
        }
    }
    let window = window.ok_or_else(|| parse_err(0, "missing \"# window\" header"))?;
    if window.is_empty() || coords.len() + absent.len() != window.len() {
        return Err(parse_err(0, "vertex count does not fill the window"));
    }
    let mut net = QuadNet3::empty(window);
    let mut it = coords.into_iter();
    for k in 0..window.len() {
        if !absent.contains(&k) {
            net.vertices[k] = it.next();
        }
    }
    if net.faces().len() != faces {
        return Err(parse_err(0, "face count does not match the window"));
    }
    Ok(net)
}

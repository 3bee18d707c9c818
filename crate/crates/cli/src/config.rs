use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use snapnet::koenigs::{Inversion, MoebiusParams, Window};
use snapnet::{Tol, Vector3};

use crate::Format;

/// Contents of a `--config` file. Every key is optional; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub window: Option<String>,
    pub t: Option<f64>,
    pub seed: Option<u64>,
    pub q0: Option<[f64; 3]>,
    pub moebius: Option<MoebiusToml>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub dim: Option<usize>,
    pub degrees: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoebiusToml {
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub rotation: f64,
    #[serde(default)]
    pub translation: [f64; 2],
    pub inversion_center: Option<[f64; 2]>,
    pub inversion_radius: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl MoebiusToml {
    pub fn params(&self) -> Result<MoebiusParams<f64>> {
        let inversion = match (self.inversion_center, self.inversion_radius) {
            (Some([x, y]), Some(radius)) => Some(Inversion {
                center: Vector3::new(x, y, 0.0),
                radius,
            }),
            (None, None) => None,
            _ => bail!("moebius: inversion_center and inversion_radius go together"),
        };
        Ok(MoebiusParams {
            scale: self.scale,
            rotation: self.rotation,
            translation: Vector3::new(self.translation[0], self.translation[1], 0.0),
            inversion,
        })
    }
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// `a:b` for one axis; `a:b,c:d` for several. A single range is repeated
/// `axes` times.
pub fn parse_ranges(s: &str, axes: usize) -> Result<Vec<(i64, i64)>> {
    let ranges = s
        .split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once(':')
                .with_context(|| format!("window range {part:?} is not of the form lo:hi"))?;
            let lo: i64 = a.trim().parse().with_context(|| format!("window bound {a:?}"))?;
            let hi: i64 = b.trim().parse().with_context(|| format!("window bound {b:?}"))?;
            if lo > hi {
                bail!("window range {lo}:{hi} is empty");
            }
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>>>()?;
    match ranges.len() {
        1 => Ok(vec![ranges[0]; axes]),
        n if n == axes => Ok(ranges),
        n => bail!("window has {n} ranges, expected 1 or {axes}"),
    }
}

pub fn parse_window(s: &str) -> Result<Window> {
    let r = parse_ranges(s, 2)?;
    Ok(Window::new(r[0].0, r[0].1, r[1].0, r[1].1))
}

pub fn parse_vec3(s: &str) -> Result<Vector3> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("number {x:?}")))
        .collect::<Result<_>>()?;
    let [x, y, z] = v[..] else {
        bail!("expected three comma-separated numbers, got {s:?}");
    };
    Ok(Vector3::new(x, y, z))
}

/// `scale,rotation,tx,ty` optionally followed by `cx,cy,radius` of an
/// inversion.
pub fn parse_moebius(s: &str) -> Result<MoebiusParams<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("number {x:?}")))
        .collect::<Result<_>>()?;
    let inversion = match v.len() {
        4 => None,
        7 => Some(Inversion {
            center: Vector3::new(v[4], v[5], 0.0),
            radius: v[6],
        }),
        n => bail!("--moebius takes 4 or 7 numbers, got {n}"),
    };
    Ok(MoebiusParams {
        scale: v[0],
        rotation: v[1],
        translation: Vector3::new(v[2], v[3], 0.0),
        inversion,
    })
}

pub fn tolerance(factor: Option<f64>) -> Result<Tol> {
    match factor {
        None => Ok(Tol::default()),
        Some(f) if f > 0.0 && f.is_finite() => Ok(Tol::default().scaled(f)),
        Some(f) => bail!("--tol must be a positive factor, got {f}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_ranges("-3:3", 2).unwrap(), vec![(-3, 3), (-3, 3)]);
        assert_eq!(parse_ranges("0:1, 0:2", 2).unwrap(), vec![(0, 1), (0, 2)]);
        assert!(parse_ranges("0:1,0:2", 3).is_err());
        assert!(parse_ranges("2:1", 1).is_err());
        assert!(parse_ranges("2", 1).is_err());
    }

    #[test]
    fn moebius_and_vectors() {
        assert_eq!(parse_vec3("0, 0,1").unwrap(), Vector3::new(0.0, 0.0, 1.0));
        assert!(parse_vec3("1,2").is_err());
        let m = parse_moebius("2,0.5,1,0,10,0,9").unwrap();
        assert_eq!(m.scale, 2.0);
        assert_eq!(m.inversion.unwrap().radius, 9.0);
        assert!(parse_moebius("1,2,3").is_err());
    }

    #[test]
    fn config_file_keys() {
        let c: FileConfig = toml::from_str(
            "window = \"-2:2\"\nt = 0.5\nq0 = [0.0, 0.0, 1.0]\n[moebius]\nscale = 2.0\n",
        )
        .unwrap();
        assert_eq!(c.t, Some(0.5));
        assert_eq!(c.moebius.unwrap().params().unwrap().scale, 2.0);
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
    }
}

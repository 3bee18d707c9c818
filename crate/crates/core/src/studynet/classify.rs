//! Numeric classification of a single 4R loop.
//!
//! With all joint angles measured from the given assembly, the loop closes
//! iff `Rot(R₃,θ₃) Rot(R₂,θ₂) Rot(R₁,θ₁) Rot(R₀,θ₀) = id`. Writing
//! `M = Rot(R₁,θ₁) Rot(R₀,θ₀)`, this says that `M⁻¹` moves every point of
//! `R₂` by one and the same rotation `Rot(R₃,θ₃)`. Two points on `R₂` give
//! a residual in ℝ⁶ depending on `(θ₀, θ₁)` only, once `θ₃` is fitted in
//! closed form. Its zeros on the torus are the assembly configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::StudyNetError;
use crate::dualquat::{dh_between_axes, dh_cycle, LineAxis, Rotation3};
use crate::linalg::{symmetric_eigen, Mat3, Vec3};
use crate::procrustes::RigidMotion;
use crate::scalar::Real;
use crate::tolerance::Tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FourBarFamily {
    Rigid,
    Snapping,
    Shaky,
    MobilePlanar,
    MobileSpherical,
    MobileBennett,
}

impl FourBarFamily {
    pub fn is_mobile(self) -> bool {
        matches!(
            self,
            Self::MobilePlanar | Self::MobileSpherical | Self::MobileBennett
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Rigid => "rigid",
            Self::Snapping => "snapping",
            Self::Shaky => "shaky",
            Self::MobilePlanar => "mobile_planar",
            Self::MobileSpherical => "mobile_spherical",
            Self::MobileBennett => "mobile_bennett",
        }
    }
}

/// One assembly configuration: joint angles relative to the input pose.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Configuration<T: Real> {
    pub angles: [T; 4],
    pub residual: T,
    /// Smallest over largest singular value of the closure Jacobian.
    pub conditioning: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Classification<T: Real> {
    pub family: FourBarFamily,
    /// Number of isolated configurations; `None` for mobile loops.
    pub config_count: Option<usize>,
    pub configurations: Vec<Configuration<T>>,
}

/// Grid resolution per angle of the coarse scan.
pub const SCAN_RESOLUTION: usize = 240;
const MAX_CANDIDATES: usize = 96;
const SINGULAR_RATIO: f64 = 1e-6;

pub fn classify_fourbar<T: Real>(
    axes: &[LineAxis<T>; 4],
    seed: u64,
    tol: &Tolerance<T>,
) -> Result<Classification<T>, StudyNetError> {
    for (i, l) in axes.iter().enumerate() {
        if !l.is_valid(tol.linear) {
            return Err(StudyNetError::InvalidAxis(i));
        }
    }
    let axes: [LineAxis<T>; 4] = std::array::from_fn(|i| axes[i].unit().expect("valid"));
    for i in 0..4 {
        if axes[i].projective_eq(&axes[(i + 1) % 4], tol.linear) {
            return Err(StudyNetError::DegenerateFace);
        }
    }
    let scale = axes.iter().fold(T::one(), |m, l| m.max(l.moment.norm()));

    if let Some(family) = mobile_family(&axes, scale, tol) {
        return Ok(Classification {
            family,
            config_count: None,
            configurations: Vec::new(),
        });
    }

    let loop_ = Loop::new(&axes, scale);
    let roots = loop_.scan(seed, tol)?;
    let singular = |c: &Configuration<T>| c.conditioning < T::lit(SINGULAR_RATIO);
    let family = match roots.len() {
        0 => {
            return Err(StudyNetError::Inconclusive {
                reason: "the input assembly itself was not recovered".into(),
            })
        }
        1 if singular(&roots[0]) => FourBarFamily::Shaky,
        1 => FourBarFamily::Rigid,
        2 => FourBarFamily::Snapping,
        n => {
            return Err(StudyNetError::Inconclusive {
                reason: format!("{n} isolated configurations found; a non-mobile 4R loop has at most 2"),
            })
        }
    };
    Ok(Classification {
        family,
        config_count: Some(roots.len()),
        configurations: roots,
    })
}

fn mobile_family<T: Real>(
    axes: &[LineAxis<T>; 4],
    scale: T,
    tol: &Tolerance<T>,
) -> Option<FourBarFamily> {
    let u = axes[0].direction;
    if axes.iter().all(|l| l.direction.sin_angle(u) <= tol.angular) {
        return Some(FourBarFamily::MobilePlanar);
    }
    if concurrent(axes, scale, tol.linear) {
        return Some(FourBarFamily::MobileSpherical);
    }
    if bennett(axes, scale, tol) {
        return Some(FourBarFamily::MobileBennett);
    }
    None
}

fn concurrent<T: Real>(axes: &[LineAxis<T>; 4], scale: T, tol: T) -> bool {
    let mut a = Mat3::zero();
    let mut b = Vec3::zero();
    for l in axes {
        let proj = Mat3::identity() - Mat3::outer(l.direction, l.direction);
        a = a + proj;
        b += proj * l.point();
    }
    let Some(inv) = a.inverse() else {
        return false;
    };
    let x = inv * b;
    axes.iter().all(|l| l.distance_to_point(x) <= tol * scale.max(x.norm()))
}

fn bennett<T: Real>(axes: &[LineAxis<T>; 4], scale: T, tol: &Tolerance<T>) -> bool {
    let Ok(dh) = dh_cycle(axes, tol.linear) else {
        return false;
    };
    let lin = tol.linear * scale;
    let offsets_vanish = dh.iter().all(|p| p.d.abs() <= lin);
    let opposite_equal = (dh[0].a - dh[2].a).abs() <= lin
        && (dh[1].a - dh[3].a).abs() <= lin
        && (dh[0].alpha - dh[2].alpha).abs() <= tol.angular
        && (dh[1].alpha - dh[3].alpha).abs() <= tol.angular;
    let nondegenerate = dh.iter().all(|p| p.a > lin && p.alpha.sin() > tol.angular);
    let ratio = (dh[0].a * dh[1].alpha.sin() - dh[1].a * dh[0].alpha.sin()).abs() <= lin;
    offsets_vanish && opposite_equal && nondegenerate && ratio
}

struct Loop<T: Real> {
    axes: [LineAxis<T>; 4],
    x: Vec3<T>,
    y: Vec3<T>,
    scale: T,
}

fn rotation_about<T: Real>(l: &LineAxis<T>, angle: T) -> RigidMotion<T> {
    let r = Rotation3::from_axis_angle(l.direction, angle);
    let p = l.point();
    RigidMotion::new(r, p - r.apply(p))
}

fn wrap<T: Real>(a: T) -> T {
    let two_pi = T::TAU();
    let mut w = a % two_pi;
    if w > T::PI() {
        w -= two_pi;
    } else if w <= -T::PI() {
        w += two_pi;
    }
    w
}

impl<T: Real> Loop<T> {
    fn new(axes: &[LineAxis<T>; 4], scale: T) -> Self {
        let x = axes[2].point();
        let y = x + axes[2].direction * scale;
        Self {
            axes: *axes,
            x,
            y,
            scale,
        }
    }

    /// Closure residual and the fitted `θ₃`.
    fn residual(&self, t0: T, t1: T) -> ([T; 6], T) {
        let m = rotation_about(&self.axes[1], t1).compose(&rotation_about(&self.axes[0], t0));
        let minv = m.inverse();
        let (xi, yi) = (minv.apply(self.x), minv.apply(self.y));
        let r3 = &self.axes[3];
        let (p3, u3) = (r3.point(), r3.direction);
        let perp = |v: Vec3<T>| {
            let w = v - p3;
            w - u3 * w.dot(u3)
        };
        let mut s = T::zero();
        let mut c = T::zero();
        for (a, b) in [(self.x, xi), (self.y, yi)] {
            let (pa, pb) = (perp(a), perp(b));
            s += u3.dot(pa.cross(pb));
            c += pa.dot(pb);
        }
        let t3 = s.atan2(c);
        let rot3 = rotation_about(r3, t3);
        let ex = rot3.apply(self.x) - xi;
        let ey = rot3.apply(self.y) - yi;
        ([ex.x, ex.y, ex.z, ey.x, ey.y, ey.z], t3)
    }

    fn norm(&self, t0: T, t1: T) -> T {
        self.residual(t0, t1).0.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt()
    }

    fn jacobian(&self, t0: T, t1: T) -> [[T; 2]; 6] {
        let h = T::lit(1e-6);
        let mut j = [[T::zero(); 2]; 6];
        let (a, _) = self.residual(t0 + h, t1);
        let (b, _) = self.residual(t0 - h, t1);
        let (c, _) = self.residual(t0, t1 + h);
        let (d, _) = self.residual(t0, t1 - h);
        for k in 0..6 {
            j[k][0] = (a[k] - b[k]) / (T::two() * h);
            j[k][1] = (c[k] - d[k]) / (T::two() * h);
        }
        j
    }

    fn conditioning(&self, t0: T, t1: T) -> T {
        let j = self.jacobian(t0, t1);
        let mut jtj = [[T::zero(); 2]; 2];
        for row in &j {
            for a in 0..2 {
                for b in 0..2 {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let (vals, _) = symmetric_eigen(jtj);
        if vals[0] <= T::zero() {
            return T::zero();
        }
        (vals[1].max(T::zero()) / vals[0]).sqrt()
    }

    /// Damped Gauss–Newton from `(t0, t1)`.
    fn refine(&self, mut t0: T, mut t1: T) -> Option<(T, T, T)> {
        let mut f = self.norm(t0, t1);
        let mut mu = T::lit(1e-3) * self.scale * self.scale;
        for _ in 0..200 {
            if f <= T::lit(1e-14) * self.scale {
                break;
            }
            let (r, _) = self.residual(t0, t1);
            let j = self.jacobian(t0, t1);
            let mut a = [[T::zero(); 2]; 2];
            let mut g = [T::zero(); 2];
            for k in 0..6 {
                for p in 0..2 {
                    g[p] += j[k][p] * r[k];
                    for q in 0..2 {
                        a[p][q] += j[k][p] * j[k][q];
                    }
                }
            }
            let mut stepped = false;
            for _ in 0..30 {
                let m = [[a[0][0] + mu, a[0][1]], [a[1][0], a[1][1] + mu]];
                let Some(dx) = crate::linalg::solve2(m, [-g[0], -g[1]]) else {
                    mu *= T::lit(10.0);
                    continue;
                };
                let (n0, n1) = (t0 + dx[0], t1 + dx[1]);
                let fn_ = self.norm(n0, n1);
                if fn_ < f {
                    t0 = n0;
                    t1 = n1;
                    let done = (f - fn_) <= T::epsilon() * f;
                    f = fn_;
                    mu = (mu * T::lit(0.3)).max(T::lit(1e-18));
                    stepped = !done;
                    break;
                }
                mu *= T::lit(10.0);
            }
            if !stepped {
                break;
            }
        }
        Some((wrap(t0), wrap(t1), f))
    }

    fn configuration(&self, t0: T, t1: T, residual: T) -> Configuration<T> {
        let (_, t3) = self.residual(t0, t1);
        let m = rotation_about(&self.axes[1], t1).compose(&rotation_about(&self.axes[0], t0));
        let rot2 = rotation_about(&self.axes[3], -t3).compose(&m.inverse());
        let q = rot2.rotation.to_quaternion();
        let t2 = T::two() * q.vector().dot(self.axes[2].direction).atan2(q.w);
        Configuration {
            angles: [t0, t1, wrap(t2), wrap(t3)],
            residual,
            conditioning: self.conditioning(t0, t1),
        }
    }

    fn scan(&self, seed: u64, tol: &Tolerance<T>) -> Result<Vec<Configuration<T>>, StudyNetError> {
        let n = SCAN_RESOLUTION;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let step = T::TAU() / T::lit(n as f64);
        let phase0 = T::lit(rng.random::<f64>()) * step;
        let phase1 = T::lit(rng.random::<f64>()) * step;
        let angle = |k: usize, phase: T| -T::PI() + phase + step * T::lit(k as f64);

        let grid: Vec<Vec<T>> = (0..n)
            .map(|a| (0..n).map(|b| self.norm(angle(a, phase0), angle(b, phase1))).collect())
            .collect();
        let mut minima = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let v = grid[a][b];
                let mut is_min = true;
                'nb: for da in [n - 1, 0, 1] {
                    for db in [n - 1, 0, 1] {
                        if (da, db) == (0, 0) {
                            continue;
                        }
                        if grid[(a + da) % n][(b + db) % n] < v {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    minima.push((v, a, b));
                }
            }
        }
        minima.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut starts = vec![(T::zero(), T::zero())];
        starts.extend(
            minima
                .iter()
                .take(MAX_CANDIDATES)
                .map(|&(_, a, b)| (angle(a, phase0), angle(b, phase1))),
        );

        let accept = tol.linear * self.scale;
        let same = T::lit(1e-5);
        let mut roots: Vec<Configuration<T>> = Vec::new();
        for (s0, s1) in starts {
            let Some((t0, t1, f)) = self.refine(s0, s1) else {
                continue;
            };
            if f > accept {
                continue;
            }
            let dup = roots.iter().any(|r| {
                wrap(r.angles[0] - t0).abs() < same && wrap(r.angles[1] - t1).abs() < same
            });
            if !dup {
                roots.push(self.configuration(t0, t1, f));
            }
        }
        if !roots
            .iter()
            .any(|r| r.angles[0].abs() < same && r.angles[1].abs() < same)
        {
            return Err(StudyNetError::Inconclusive {
                reason: "refinement did not recover the input assembly".into(),
            });
        }
        roots.sort_by(|x, y| {
            let kx = x.angles[0].abs() + x.angles[1].abs();
            let ky = y.angles[0].abs() + y.angles[1].abs();
            kx.partial_cmp(&ky).unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(roots)
    }
}

/// Joint-angle closure residual of a 4R loop, exposed for tests and
/// diagnostics: the norm of the six-component closure defect after the
/// angle about the last axis has been fitted.
pub fn closure_defect<T: Real>(axes: &[LineAxis<T>; 4], t0: T, t1: T) -> T {
    let axes: [LineAxis<T>; 4] = std::array::from_fn(|i| axes[i].unit().expect("nonzero axis"));
    let scale = axes.iter().fold(T::one(), |m, l| m.max(l.moment.norm()));
    Loop::new(&axes, scale).norm(t0, t1)
}

/// Signed twists of the four consecutive axis pairs.
pub fn signed_twists<T: Real>(axes: &[LineAxis<T>; 4], tol: T) -> Option<[T; 4]> {
    let mut out = [T::zero(); 4];
    for i in 0..4 {
        out[i] = dh_between_axes(&axes[i], &axes[(i + 1) % 4], tol)
            .ok()?
            .signed_twist;
    }
    Some(out)
}

use std::collections::VecDeque;

use super::net::{QuadNet3, VelocityField};
use super::KoenigsError;
use crate::linalg::Vec3;
use crate::scalar::Real;

/// Index the field is anchored at: the origin if it lies in the window,
/// otherwise the lower-left corner.
fn anchor<T: Real>(f: &QuadNet3<T>) -> (i64, i64) {
    if f.get(0, 0).is_some() {
        (0, 0)
    } else {
        f.iter().next().map(|(i, _)| i).unwrap_or((f.window.m0, f.window.n0))
    }
}

/// The infinitesimal isometric deformation of a Koenigs net `f` carried
/// by its dual `fstar`: `q_j − q_i = f*_i × (f_j − f_i)` along every edge,
/// with `q = q0` at the origin.
///
/// The field is integrated along a spanning tree and then every edge is
/// checked, so an invalid dual is reported instead of silently producing
/// a field that depends on the integration path.
pub fn iid_from_dual<T: Real>(
    f: &QuadNet3<T>,
    fstar: &QuadNet3<T>,
    q0: Vec3<T>,
    tol: T,
) -> Result<VelocityField<T>, KoenigsError> {
    if f.window != fstar.window {
        return Err(KoenigsError::WindowMismatch);
    }
    let increment = |(a, b): (i64, i64), (c, d): (i64, i64)| -> Option<Vec3<T>> {
        Some(fstar.get(a, b)?.cross(f.get(c, d)? - f.get(a, b)?))
    };
    let mut q = QuadNet3::empty(f.window);
    let start = anchor(f);
    q.set(start.0, start.1, q0);
    let mut queue = VecDeque::from([start]);
    while let Some((m, n)) = queue.pop_front() {
        let qi = q.get(m, n).unwrap();
        for (dm, dn) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            let j = (m + dm, n + dn);
            if q.get(j.0, j.1).is_some() {
                continue;
            }
            if let Some(inc) = increment((m, n), j) {
                q.set(j.0, j.1, qi + inc);
                queue.push_back(j);
            }
        }
    }

    let scale = T::one().max(f.extent()).max(fstar.extent());
    for (i, j) in f.edges() {
        let (Some(qi), Some(qj), Some(inc)) = (q.get(i.0, i.1), q.get(j.0, j.1), increment(i, j))
        else {
            continue;
        };
        let residual = (qj - qi - inc).norm();
        if residual > tol * scale * scale {
            return Err(KoenigsError::NotKoenigs {
                m: i.0,
                n: i.1,
                residual: residual.to_f64_lossy(),
            });
        }
    }
    Ok(VelocityField(q))
}

/// Whiteley de-averaging, `(f + t q, f − t q)`.
pub fn deaverage<T: Real>(
    f: &QuadNet3<T>,
    q: &VelocityField<T>,
    t: T,
) -> (QuadNet3<T>, QuadNet3<T>) {
    let plus = f.map(|(m, n), x| x + q.get(m, n).unwrap_or(Vec3::zero()) * t);
    let minus = f.map(|(m, n), x| x - q.get(m, n).unwrap_or(Vec3::zero()) * t);
    (plus, minus)
}

/// Whiteley averaging, `f = (f⁺ + f⁻)/2` and `q = (f⁺ − f⁻)/2`.
///
/// The inputs must be edge isometric within `tol` relative to their
/// longest edge. Equal inputs give `q = 0`, which callers detect with
/// [`VelocityField::is_zero`].
pub fn average<T: Real>(
    fp: &QuadNet3<T>,
    fm: &QuadNet3<T>,
    tol: T,
) -> Result<(QuadNet3<T>, VelocityField<T>), KoenigsError> {
    let f = fp.zip_with(fm, |a, b| (a + b) * T::half()).ok_or(KoenigsError::WindowMismatch)?;
    let q = fp.zip_with(fm, |a, b| (a - b) * T::half()).ok_or(KoenigsError::WindowMismatch)?;
    let scale = T::one().max(fp.max_edge_length()).max(fm.max_edge_length());
    let mut residual = T::zero();
    for ((a, b), (c, d)) in fp.edges() {
        if let (Some(x), Some(y)) = (fm.get(a, b), fm.get(c, d)) {
            let lp = fp.get(a, b).unwrap().distance(fp.get(c, d).unwrap());
            residual = residual.max((lp - x.distance(y)).abs());
        }
    }
    if residual > tol * scale {
        return Err(KoenigsError::NotIsometric {
            residual: residual.to_f64_lossy(),
        });
    }
    Ok((f, VelocityField(q)))
}

/// `ω × x + v` at every vertex `x` of `f`.
pub fn rigid_field<T: Real>(f: &QuadNet3<T>, omega: Vec3<T>, v: Vec3<T>) -> VelocityField<T> {
    VelocityField(f.map(|_, x| omega.cross(x) + v))
}

/// `d/dt |(f_j + t q_j) − (f_i + t q_i)|²` at `t = 0`, per edge, in
/// [`QuadNet3::edges`] order.
pub fn first_order_length_change<T: Real>(f: &QuadNet3<T>, q: &VelocityField<T>) -> Vec<T> {
    f.edges()
        .iter()
        .filter_map(|&((a, b), (c, d))| {
            let df = f.get(c, d)? - f.get(a, b)?;
            let dq = q.get(c, d)? - q.get(a, b)?;
            Some(T::two() * df.dot(dq))
        })
        .collect()
}

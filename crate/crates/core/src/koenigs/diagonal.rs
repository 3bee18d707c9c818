use serde::{Deserialize, Serialize};

use super::net::{QuadNet3, Window};
use super::KoenigsError;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceColor {
    Black,
    White,
}

/// A diagonal net together with its bookkeeping back to the source net.
///
/// Vertex `(u, v)` of the diagonal net is the black vertex
/// `(u − v, u + v)` of the source. Face `(a, b)` is the vertex star of the
/// source with white center `(a − b, a + b + 1)`; its corners are the four
/// neighbours of that center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ColoredNet<T: Real> {
    pub net: QuadNet3<T>,
    pub source_window: Window,
}

fn floor_half(x: i64) -> i64 {
    x.div_euclid(2)
}

fn ceil_half(x: i64) -> i64 {
    -(-x).div_euclid(2)
}

impl<T: Real> ColoredNet<T> {
    pub fn source_vertex(u: i64, v: i64) -> (i64, i64) {
        (u - v, u + v)
    }

    /// Inverse of [`source_vertex`](Self::source_vertex), defined on black
    /// source vertices.
    pub fn vertex_of_source(m: i64, n: i64) -> Option<(i64, i64)> {
        ((m + n).rem_euclid(2) == 0).then(|| ((m + n) / 2, (n - m) / 2))
    }

    /// White center of the source star that became face `(a, b)`.
    pub fn face_source(a: i64, b: i64) -> (i64, i64) {
        (a - b, a + b + 1)
    }

    /// Inverse of [`face_source`](Self::face_source), defined on white
    /// source vertices.
    pub fn face_of_source(m: i64, n: i64) -> Option<(i64, i64)> {
        ((m + n).rem_euclid(2) == 1).then(|| ((m + n - 1) / 2, (n - m - 1) / 2))
    }

    /// Checkerboard coloring: face `(a, b)` is black iff `a + b` is even,
    /// so a star with center `(m, n)` gives a black face iff `m` is even.
    pub fn face_color(a: i64, b: i64) -> FaceColor {
        if (a + b).rem_euclid(2) == 0 {
            FaceColor::Black
        } else {
            FaceColor::White
        }
    }

    /// Parity of a vertex of the diagonal net itself.
    pub fn vertex_parity(u: i64, v: i64) -> FaceColor {
        if (u + v).rem_euclid(2) == 0 {
            FaceColor::Black
        } else {
            FaceColor::White
        }
    }

    pub fn faces_of_color(&self, color: FaceColor) -> Vec<(i64, i64)> {
        self.net
            .faces()
            .into_iter()
            .filter(|&(a, b)| Self::face_color(a, b) == color)
            .collect()
    }
}

/// Net on the black vertices (even `m + n`) of `net` whose edges join
/// neighbouring vertices of each white-centered vertex star.
pub fn diagonal_net<T: Real>(net: &QuadNet3<T>) -> Result<ColoredNet<T>, KoenigsError> {
    let w = net.window;
    let window = Window::new(
        ceil_half(w.m0 + w.n0),
        floor_half(w.m1 + w.n1),
        ceil_half(w.n0 - w.m1),
        floor_half(w.n1 - w.m0),
    );
    let mut g = QuadNet3::empty(window);
    for (u, v) in window.indices() {
        let (m, n) = ColoredNet::<T>::source_vertex(u, v);
        if let Some(x) = net.get(m, n) {
            g.set(u, v, x);
        }
    }
    if g.faces().is_empty() {
        return Err(KoenigsError::WindowTooSmall);
    }
    Ok(ColoredNet {
        net: g,
        source_window: w,
    })
}

#[cfg(test)]
mod tests {
    use super::super::surfaces::grid_plane;
    use super::*;
    use crate::linalg::Vec3;

    #[test]
    fn grid_becomes_rotated_grid() {
        let g = diagonal_net(&grid_plane::<f64>(Window::square(3))).unwrap();
        for ((u, v), x) in g.net.iter() {
            assert_eq!(x, Vec3::new((u - v) as f64, (u + v) as f64, 0.0));
        }
        assert!(!g.net.edges().is_empty());
        assert!((g.net.max_edge_length() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn face_corners_are_a_white_star() {
        let f = grid_plane::<f64>(Window::square(3));
        let g = diagonal_net(&f).unwrap();
        for (a, b) in g.net.faces() {
            let (m, n) = ColoredNet::<f64>::face_source(a, b);
            let star = f.star(m, n).unwrap();
            let c = g.net.face(a, b).unwrap();
            assert_eq!(c, [star[4], star[1], star[2], star[3]]);
            assert_eq!(ColoredNet::<f64>::face_of_source(m, n), Some((a, b)));
            let black = ColoredNet::<f64>::face_color(a, b) == FaceColor::Black;
            assert_eq!(black, m.rem_euclid(2) == 0);
        }
    }

    #[test]
    fn adjacent_faces_alternate() {
        for a in -3..3 {
            for b in -3..3 {
                let c = ColoredNet::<f64>::face_color(a, b);
                assert_ne!(c, ColoredNet::<f64>::face_color(a + 1, b));
                assert_ne!(c, ColoredNet::<f64>::face_color(a, b + 1));
            }
        }
    }

    #[test]
    fn tiny_window_rejected() {
        let f = grid_plane::<f64>(Window::new(0, 1, 0, 1));
        assert_eq!(diagonal_net(&f), Err(KoenigsError::WindowTooSmall));
    }
}

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::C64;

const HULL_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonKind {
    Point,
    Segment,
    Polygon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Within `tol` of the closed set.
    Closure,
    /// Interior relative to the affine hull, with margin `tol`.
    RelativeInterior,
}

/// Convex polygon in the complex plane. Vertices are counterclockwise; one
/// vertex means a point and two vertices mean a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2D {
    vertices: Vec<C64>,
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Indices of the convex hull vertices of `points`, counterclockwise,
/// starting from the lexicographically smallest point. Collinear and
/// near-duplicate points are dropped.
pub fn hull_indices(points: &[C64]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eps = HULL_REL_TOL * (1.0 + scale);

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (points[i], points[j]);
        a.re.total_cmp(&b.re)
            .then(a.im.total_cmp(&b.im))
            .then(i.cmp(&j))
    });
    let mut uniq: Vec<usize> = Vec::with_capacity(order.len());
    for i in order {
        if uniq
            .last()
            .is_none_or(|&j| (points[i] - points[j]).norm() > eps)
        {
            uniq.push(i);
        }
    }
    if uniq.len() <= 2 {
        if uniq.len() == 2 && (points[uniq[0]] - points[uniq[1]]).norm() <= eps {
            uniq.truncate(1);
        }
        return uniq;
    }

    // Drop a turn unless it is left by more than eps times the chord length.
    let keep_turn = |o: usize, a: usize, b: usize| {
        let (po, pa, pb) = (points[o], points[a], points[b]);
        cross(pa - po, pb - po) > eps * (pb - po).norm()
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &uniq {
        while lower.len() >= 2 && !keep_turn(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in uniq.iter().rev() {
        while upper.len() >= 2 && !keep_turn(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && (points[lower[0]] - points[lower[1]]).norm() <= eps {
        lower.truncate(1);
    }
    lower
}

impl Polygon2D {
    /// Convex hull of a nonempty point set.
    pub fn hull(points: &[C64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("hull of an empty point set".into()));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite polygon vertex".into()));
        }
        let vertices = hull_indices(points).into_iter().map(|i| points[i]).collect();
        Ok(Self { vertices })
    }

    pub fn point(z: C64) -> Self {
        Self { vertices: vec![z] }
    }

    pub fn vertices(&self) -> &[C64] {
        &self.vertices
    }

    pub fn kind(&self) -> PolygonKind {
        match self.vertices.len() {
            1 => PolygonKind::Point,
            2 => PolygonKind::Segment,
            _ => PolygonKind::Polygon,
        }
    }

    /// `max Re(e^{-iθ} v)` over the vertices.
    pub fn support(&self, theta: f64) -> f64 {
        let w = C64::from_polar(1.0, -theta);
        self.vertices
            .iter()
            .map(|&v| (w * v).re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn distance(&self, z: C64) -> f64 {
        match self.kind() {
            PolygonKind::Point => (z - self.vertices[0]).norm(),
            PolygonKind::Segment => segment_distance(z, self.vertices[0], self.vertices[1]),
            PolygonKind::Polygon => {
                if self.edges().all(|(a, b)| cross(b - a, z - a) >= 0.0) {
                    0.0
                } else {
                    self.edges()
                        .map(|(a, b)| segment_distance(z, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Closest point of the polygon to `z`.
    pub fn nearest(&self, z: C64) -> C64 {
        match self.kind() {
            PolygonKind::Point => self.vertices[0],
            PolygonKind::Segment => segment_nearest(z, self.vertices[0], self.vertices[1]),
            PolygonKind::Polygon => {
                if self.edges().all(|(a, b)| cross(b - a, z - a) >= 0.0) {
                    return z;
                }
                self.edges()
                    .map(|(a, b)| segment_nearest(z, a, b))
                    .min_by(|p, q| (z - p).norm().total_cmp(&(z - q).norm()))
                    .expect("polygon has edges")
            }
        }
    }

    /// Relative-interior mode: a point polygon contains only points within
    /// `tol`; a segment needs `z` within `tol` of its line and at least `tol`
    /// from both endpoints; a polygon needs inward distance `tol` to every edge.
    pub fn contains(&self, z: C64, mode: Membership, tol: f64) -> bool {
        match mode {
            Membership::Closure => self.distance(z) <= tol,
            Membership::RelativeInterior => match self.kind() {
                PolygonKind::Point => (z - self.vertices[0]).norm() <= tol,
                PolygonKind::Segment => {
                    let (a, b) = (self.vertices[0], self.vertices[1]);
                    let d = b - a;
                    let len = d.norm();
                    let along = dot(z - a, d) / len;
                    let perp = cross(d, z - a).abs() / len;
                    perp <= tol && along >= tol && len - along >= tol
                }
                PolygonKind::Polygon => self.inward_margin(z) >= tol,
            },
        }
    }

    /// Smallest signed distance from `z` to the edge lines, positive inside.
    pub fn inward_margin(&self, z: C64) -> f64 {
        self.edges()
            .map(|(a, b)| cross(b - a, z - a) / (b - a).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Edges `(v_i, v_{i+1})`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "{},{}", v.re, v.im);
        }
        out
    }

    /// Parses the `re,im` per line format produced by [`Polygon2D::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("line {}: expected `re,im`", n + 1)))
            };
            let mut it = line.split(',');
            let re = parse(it.next())?;
            let im = parse(it.next())?;
            pts.push(C64::new(re, im));
        }
        Self::hull(&pts)
    }
}

fn segment_nearest(z: C64, a: C64, b: C64) -> C64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let s = (dot(z - a, d) / len2).clamp(0.0, 1.0);
    a + d * s
}

fn segment_distance(z: C64, a: C64, b: C64) -> f64 {
    (z - segment_nearest(z, a, b)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 1.0), c(0.2, 0.2)];
        let p = Polygon2D::hull(&pts).unwrap();
        assert_eq!(p.vertices(), &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
    }

    #[test]
    fn degenerate_kinds() {
        let p = Polygon2D::hull(&[c(1.0, 1.0), c(1.0, 1.0 + 1e-15)]).unwrap();
        assert_eq!(p.kind(), PolygonKind::Point);
        let s = Polygon2D::hull(&[c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(s.kind(), PolygonKind::Segment);
    }

    #[test]
    fn segment_relint() {
        let s = Polygon2D::hull(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(!s.contains(c(0.0, 0.0), Membership::RelativeInterior, 1e-8));
        assert!(s.contains(c(0.5, 0.0), Membership::RelativeInterior, 1e-8));
        assert!(!s.contains(c(0.5, 1e-3), Membership::RelativeInterior, 1e-8));
        assert!(s.contains(c(0.0, 0.0), Membership::Closure, 1e-8));
    }

    #[test]
    fn triangle_membership() {
        let t = Polygon2D::hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(t.contains(c(0.25, 0.25), Membership::Closure, 1e-8));
        for &v in t.vertices() {
            assert!(t.contains(v, Membership::Closure, 1e-8));
            assert!(!t.contains(v, Membership::RelativeInterior, 1e-8));
        }
        assert!((t.distance(c(1.0, 1.0)) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn point_relint_is_equality() {
        let p = Polygon2D::point(c(2.0, -1.0));
        assert!(p.contains(c(2.0, -1.0), Membership::RelativeInterior, 1e-8));
        assert!(!p.contains(c(2.0, -1.0 + 1e-6), Membership::RelativeInterior, 1e-8));
    }

    #[test]
    fn csv_round_trip() {
        let t = Polygon2D::hull(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(Polygon2D::from_csv(&t.to_csv()).unwrap(), t);
    }
}

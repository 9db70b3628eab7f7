//! Points, segments, half-planes and convex polygons in the plane.
//!
//! Every shape of the barrier construction is convex, so intersections are
//! computed by clipping against half-planes and never need general polygon
//! booleans.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Consecutive clipped vertices closer than this are merged.
pub const VERTEX_MERGE_TOL: f64 = 1e-13;

/// Vertices whose turning angle has a sine below this are dropped.
pub const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// The point of the unit circle at `angle`.
    pub fn on_circle(angle: f64) -> Self {
        Point2::new(angle.cos(), angle.sin())
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Point2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Self {
        self * (1.0 / self.norm())
    }

    pub fn lerp(self, other: Point2, t: f64) -> Self {
        self + (other - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2D {
    pub p: Point2,
    pub q: Point2,
}

impl Segment2D {
    pub fn new(p: Point2, q: Point2) -> Self {
        Segment2D { p, q }
    }

    pub fn length(&self) -> f64 {
        self.p.distance(self.q)
    }

    pub fn midpoint(&self) -> Point2 {
        self.p.lerp(self.q, 0.5)
    }

    /// Unit vector from `p` to `q`.
    pub fn direction(&self) -> Point2 {
        (self.q - self.p).normalized()
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.p.lerp(self.q, t)
    }

    /// The same segment with `p` the endpoint of smaller `x`.
    pub fn left_to_right(self) -> Self {
        if self.p.x <= self.q.x {
            self
        } else {
            Segment2D::new(self.q, self.p)
        }
    }

    pub fn distance_to(&self, point: Point2) -> f64 {
        let d = self.q - self.p;
        let len_sq = d.norm_sq();
        if len_sq == 0.0 {
            return point.distance(self.p);
        }
        let t = ((point - self.p).dot(d) / len_sq).clamp(0.0, 1.0);
        point.distance(self.point_at(t))
    }

    /// Distance from `point` to the infinite line through the segment.
    pub fn line_distance(&self, point: Point2) -> f64 {
        (point - self.p).cross(self.direction()).abs()
    }

    /// Symmetric Hausdorff distance between two segments.
    pub fn hausdorff(&self, other: &Segment2D) -> f64 {
        // the distance to a convex set is convex along a segment, so the
        // endpoints realise the maximum
        let a = self.distance_to(other.p).max(self.distance_to(other.q));
        let b = other.distance_to(self.p).max(other.distance_to(self.q));
        a.max(b)
    }
}

/// The closed half-plane `{x : normal . x <= offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub normal: Point2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point2, offset: f64) -> Self {
        HalfPlane { normal, offset }
    }

    /// The half-plane to the left of the directed line `a -> b`.
    pub fn left_of(a: Point2, b: Point2) -> Self {
        let d = (b - a).normalized();
        let normal = Point2::new(d.y, -d.x);
        HalfPlane::new(normal, normal.dot(a))
    }

    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.signed_distance(p) <= tol
    }

    /// The same half-plane pushed outward by `by`.
    pub fn expanded(&self, by: f64) -> Self {
        HalfPlane::new(self.normal, self.offset + by)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn overlaps(&self, other: &Aabb, tol: f64) -> bool {
        self.min.x <= other.max.x + tol
            && other.min.x <= self.max.x + tol
            && self.min.y <= other.max.y + tol
            && other.min.y <= self.max.y + tol
    }
}

/// A convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

fn shoelace(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum::<f64>() * 0.5
}

fn simplify(mut pts: Vec<Point2>) -> Vec<Point2> {
    // merge near-duplicates, including the wrap-around pair
    let mut merged: Vec<Point2> = Vec::with_capacity(pts.len());
    for p in pts.drain(..) {
        if merged.last().is_none_or(|last| last.distance(p) > VERTEX_MERGE_TOL) {
            merged.push(p);
        }
    }
    while merged.len() > 1 && merged[0].distance(merged[merged.len() - 1]) <= VERTEX_MERGE_TOL {
        merged.pop();
    }
    // drop vertices where the boundary does not turn
    let mut changed = true;
    while changed && merged.len() >= 3 {
        changed = false;
        let n = merged.len();
        for i in 0..n {
            let a = merged[(i + n - 1) % n];
            let b = merged[i];
            let c = merged[(i + 1) % n];
            let (u, v) = (b - a, c - b);
            if u.cross(v).abs() <= COLLINEAR_TOL * u.norm() * v.norm() {
                merged.remove(i);
                changed = true;
                break;
            }
        }
    }
    merged
}

impl ConvexPolygon {
    /// Builds a polygon from vertices in either orientation.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let mut vertices = simplify(vertices);
        if vertices.len() < 3 {
            return Err(Error::construction("polygon needs three distinct vertices"));
        }
        let area = shoelace(&vertices);
        if !(area.abs() > 0.0) {
            return Err(Error::construction("polygon has no area"));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let poly = ConvexPolygon { vertices };
        if !poly.is_convex() {
            return Err(Error::construction("polygon is not convex"));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_triangle(&self) -> bool {
        self.vertices.len() == 3
    }

    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut a) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
            a += w;
        }
        Point2::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            let (u, v) = (b - a, c - b);
            u.cross(v) >= -COLLINEAR_TOL * u.norm() * v.norm()
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2D> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment2D::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// The half-planes whose intersection is the polygon.
    pub fn half_planes(&self) -> impl Iterator<Item = HalfPlane> + '_ {
        self.edges().map(|e| HalfPlane::left_of(e.p, e.q))
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.half_planes().all(|h| h.contains(p, tol))
    }

    pub fn aabb(&self) -> Aabb {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for v in &self.vertices[1..] {
            min = Point2::new(min.x.min(v.x), min.y.min(v.y));
            max = Point2::new(max.x.max(v.x), max.y.max(v.y));
        }
        Aabb { min, max }
    }

    /// Distance from `p` to the closed polygon; zero inside.
    pub fn distance_to(&self, p: Point2) -> f64 {
        if self.contains(p, 0.0) {
            return 0.0;
        }
        self.edges().map(|e| e.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Sutherland-Hodgman clip against one half-plane; `None` if nothing
    /// with positive area is left.
    pub fn clip(&self, plane: &HalfPlane) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let da = plane.signed_distance(a);
            let db = plane.signed_distance(b);
            if da <= 0.0 {
                out.push(a);
            }
            if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
                out.push(a.lerp(b, da / (da - db)));
            }
        }
        ConvexPolygon::new(out).ok()
    }

    pub fn clip_all<'a>(&self, planes: impl IntoIterator<Item = &'a HalfPlane>) -> Option<ConvexPolygon> {
        let mut current = self.clone();
        for plane in planes {
            current = current.clip(plane)?;
        }
        Some(current)
    }

    /// Intersection with `other` grown outward by `tol`.
    pub fn intersect(&self, other: &ConvexPolygon, tol: f64) -> Option<ConvexPolygon> {
        let planes: Vec<HalfPlane> = other.half_planes().map(|h| h.expanded(tol)).collect();
        self.clip_all(&planes)
    }

    /// The edge lying on the line through `line`, if one is within `tol`.
    pub fn edge_on_line(&self, line: &Segment2D, tol: f64) -> Option<Segment2D> {
        self.edges()
            .map(|e| (line.line_distance(e.p).max(line.line_distance(e.q)), e))
            .filter(|(d, _)| *d <= tol)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, e)| e)
    }

    /// Whether the closed polygons are strictly separated by some line.
    pub fn separated_from(&self, other: &ConvexPolygon) -> bool {
        let axes = self.edges().chain(other.edges()).map(|e| (e.q - e.p).perp());
        for axis in axes {
            let project = |poly: &ConvexPolygon| {
                poly.vertices
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        let d = v.dot(axis);
                        (lo.min(d), hi.max(d))
                    })
            };
            let (a_lo, a_hi) = project(self);
            let (b_lo, b_hi) = project(other);
            if a_hi < b_lo || b_hi < a_lo {
                return true;
            }
        }
        false
    }
}

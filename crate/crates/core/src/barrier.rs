//! The barrier sets `B_n` in the closed unit disk.
//!
//! For every arc `A` of `C_n` the component `B_A` is a chain
//!
//! ```text
//! W(A) -L_1- T_0(A) -L_2- T_1(A) - ... - T_{n-1}(A) -L_{n+1}- Bot(A)
//! ```
//!
//! where `W(A)` is the circular segment cut off by the chord of `A`,
//! `T_0(A)` is the right triangle `T(A)` sitting between `Cho(A)` and
//! `Cho(Par(A))`, each later `T_k(A)` is the part of `T(Par^k(A))` swept out
//! by moving the previous link along `v(Par^k(A))`, and `Bot(A)` is the part
//! of the disk straight below the last link. Consecutive members share
//! exactly one segment, the links `L_1, ..., L_{n+1}`.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cantor::{resolve, Arc, ArcAddress, Branch};
use crate::planar::{Aabb, ConvexPolygon, HalfPlane, Point2, Segment2D};
use crate::{cut_height, Error, Result};

/// Largest depth for which whole barriers are enumerated.
pub const BARRIER_DEPTH_CAP: usize = 12;

/// Absolute tolerance of the geometric predicates on unit-disk coordinates.
pub const GEOMETRY_TOL: f64 = 1e-10;

/// Tolerance when locating the edge of a polygon that lies on a chord line.
const EDGE_TOL: f64 = 1e-9;

fn offset_point(offset: f64) -> Point2 {
    // the circle point at angle pi/2 + offset
    Point2::new(-offset.sin(), offset.cos())
}

/// `(theta - sin theta) / 2` without cancellation for small angles.
pub fn segment_area(theta: f64) -> f64 {
    let t = theta.abs();
    let excess = if t < 1.0 {
        // t - sin t = t^3/3! - t^5/5! + ...
        let t2 = t * t;
        let mut term = t * t2 / 6.0;
        let mut sum = 0.0f64;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            sum += term;
            term *= -t2 / ((k + 1.0) * (k + 2.0));
            k += 2.0;
        }
        sum
    } else {
        t - t.sin()
    };
    0.5 * excess
}

/// The chord of an arc shorter than `pi`, from the counterclockwise
/// endpoint to the clockwise one.
pub fn chord(arc: &Arc) -> Result<Segment2D> {
    if !(arc.length() < PI) {
        return Err(Error::ArcTooLong(arc.length()));
    }
    Ok(Segment2D::new(
        offset_point(arc.hi_offset()),
        offset_point(arc.lo_offset()),
    ))
}

/// `v(A)`: the unit normal of the chord pointing toward the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitNormal(Point2);

impl UnitNormal {
    pub fn direction(&self) -> Point2 {
        self.0
    }
}

pub fn inward_normal(arc: &Arc) -> Result<UnitNormal> {
    if !(arc.length() < PI) {
        return Err(Error::ArcTooLong(arc.length()));
    }
    Ok(UnitNormal(-offset_point(arc.mid_offset())))
}

/// The closed region between an arc (span below `pi`) and its chord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularSegment {
    pub start_angle: f64,
    pub end_angle: f64,
}

impl CircularSegment {
    pub fn from_arc(arc: &Arc) -> Self {
        CircularSegment {
            start_angle: arc.start_angle(),
            end_angle: arc.end_angle(),
        }
    }

    pub fn span(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    pub fn half_angle(&self) -> f64 {
        0.5 * self.span()
    }

    /// Unit vector toward the midpoint of the arc.
    pub fn mid_direction(&self) -> Point2 {
        Point2::on_circle(0.5 * (self.start_angle + self.end_angle))
    }

    /// Distance from the origin to the chord line.
    pub fn chord_distance(&self) -> f64 {
        self.half_angle().cos()
    }

    pub fn chord(&self) -> Segment2D {
        Segment2D::new(Point2::on_circle(self.end_angle), Point2::on_circle(self.start_angle))
    }

    pub fn area(&self) -> f64 {
        segment_area(self.span())
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.norm() <= 1.0 + tol && p.dot(self.mid_direction()) >= self.chord_distance() - tol
    }

    /// Triangle of the chord and the two tangents; its intersection with the
    /// disk is the segment.
    pub fn hull(&self) -> ConvexPolygon {
        let apex = self.mid_direction() * (1.0 / self.chord_distance());
        let c = self.chord();
        ConvexPolygon::new(alloc::vec![c.p, c.q, apex])
            .expect("segments of positive span have a nondegenerate tangent triangle")
    }

    pub fn boundary_samples(&self, count: usize) -> Vec<Point2> {
        (0..=count)
            .map(|i| Point2::on_circle(self.start_angle + self.span() * i as f64 / count as f64))
            .collect()
    }
}

/// `T(A)`: right angle at `corner`, longer leg `Cho(A)`, hypotenuse on
/// `Cho(Par(A))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightTriangle {
    /// The endpoint shared by `Cho(A)` and `Cho(Par(A))`.
    pub shared: Point2,
    /// The other endpoint of `Cho(A)`.
    pub corner: Point2,
    /// Where the perpendicular to `Cho(A)` through `corner` meets
    /// `Cho(Par(A))`.
    pub foot: Point2,
}

impl RightTriangle {
    pub fn polygon(&self) -> ConvexPolygon {
        ConvexPolygon::new(alloc::vec![self.shared, self.corner, self.foot])
            .expect("right triangles of the construction are nondegenerate")
    }

    pub fn hypotenuse(&self) -> Segment2D {
        Segment2D::new(self.shared, self.foot)
    }

    pub fn long_leg(&self) -> Segment2D {
        Segment2D::new(self.shared, self.corner)
    }

    pub fn short_leg(&self) -> Segment2D {
        Segment2D::new(self.corner, self.foot)
    }
}

/// `T(A)` for an arc of depth at least one.
///
/// A left child shares its parent's counterclockwise endpoint and a right
/// child the clockwise one; that shared point is the acute vertex.
pub fn right_triangle(addr: &ArcAddress) -> Result<RightTriangle> {
    let branch = addr.last_branch().ok_or(Error::RootHasNoParent)?;
    let arc = resolve(addr);
    let parent = resolve(&addr.parent()?);
    let (shared, corner, far) = match branch {
        Branch::Left => (
            offset_point(arc.hi_offset()),
            offset_point(arc.lo_offset()),
            offset_point(parent.lo_offset()),
        ),
        Branch::Right => (
            offset_point(arc.lo_offset()),
            offset_point(arc.hi_offset()),
            offset_point(parent.hi_offset()),
        ),
    };
    let leg = corner - shared;
    let along = (far - shared).normalized();
    let cos_angle = leg.normalized().dot(along);
    let foot = shared + along * (leg.norm() / cos_angle);
    if shared.distance(foot) > shared.distance(far) {
        return Err(Error::construction("hypotenuse of T(A) leaves the parent chord"));
    }
    Ok(RightTriangle { shared, corner, foot })
}

/// `Bot(A)`: the part of the closed disk on or below the cut line whose
/// abscissa lies under the last link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottomRegion {
    pub x_lo: f64,
    pub x_hi: f64,
    pub cut_height: f64,
}

impl BottomRegion {
    pub fn under(link: &Segment2D) -> Self {
        BottomRegion {
            x_lo: link.p.x.min(link.q.x),
            x_hi: link.p.x.max(link.q.x),
            cut_height: cut_height(),
        }
    }

    fn floor(x: f64) -> Point2 {
        Point2::new(x, -(1.0 - x * x).sqrt())
    }

    /// The part between the cut line and the chord of the lower arc.
    pub fn trapezoid(&self) -> ConvexPolygon {
        ConvexPolygon::new(alloc::vec![
            Point2::new(self.x_lo, self.cut_height),
            BottomRegion::floor(self.x_lo),
            BottomRegion::floor(self.x_hi),
            Point2::new(self.x_hi, self.cut_height),
        ])
        .expect("bottom trapezoid is nondegenerate")
    }

    /// The circular segment below the trapezoid.
    pub fn lower_segment(&self) -> CircularSegment {
        CircularSegment {
            start_angle: 1.5 * PI + self.x_lo.asin(),
            end_angle: 1.5 * PI + self.x_hi.asin(),
        }
    }

    pub fn area(&self) -> f64 {
        self.trapezoid().area() + self.lower_segment().area()
    }

    pub fn top(&self) -> Segment2D {
        Segment2D::new(
            Point2::new(self.x_lo, self.cut_height),
            Point2::new(self.x_hi, self.cut_height),
        )
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.y <= self.cut_height + tol && p.x >= self.x_lo - tol && p.x <= self.x_hi + tol && p.norm() <= 1.0 + tol
    }

    pub fn hull(&self) -> ConvexPolygon {
        ConvexPolygon::new(alloc::vec![
            Point2::new(self.x_lo, -1.0),
            Point2::new(self.x_hi, -1.0),
            Point2::new(self.x_hi, self.cut_height),
            Point2::new(self.x_lo, self.cut_height),
        ])
        .expect("bottom rectangle is nondegenerate")
    }

    pub fn boundary_samples(&self, count: usize) -> Vec<Point2> {
        let mut pts = alloc::vec![
            Point2::new(self.x_lo, self.cut_height),
            Point2::new(self.x_hi, self.cut_height),
        ];
        pts.extend(self.lower_segment().boundary_samples(count));
        pts
    }
}

/// One member of a barrier chain.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Segment(CircularSegment),
    Polygon(ConvexPolygon),
    Bottom(BottomRegion),
}

impl Region {
    pub fn area(&self) -> f64 {
        match self {
            Region::Segment(s) => s.area(),
            Region::Polygon(p) => p.area(),
            Region::Bottom(b) => b.area(),
        }
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        match self {
            Region::Segment(s) => s.contains(p, tol),
            Region::Polygon(poly) => poly.contains(p, tol),
            Region::Bottom(b) => b.contains(p, tol),
        }
    }

    /// A convex polygon whose intersection with the closed disk is the
    /// region.
    pub fn hull(&self) -> ConvexPolygon {
        match self {
            Region::Segment(s) => s.hull(),
            Region::Polygon(p) => p.clone(),
            Region::Bottom(b) => b.hull(),
        }
    }

    pub fn boundary_samples(&self) -> Vec<Point2> {
        match self {
            Region::Segment(s) => s.boundary_samples(8),
            Region::Polygon(p) => {
                let mut pts: Vec<Point2> = p.vertices().to_vec();
                pts.extend(p.edges().map(|e| e.midpoint()));
                pts
            }
            Region::Bottom(b) => b.boundary_samples(8),
        }
    }
}

/// Whether two regions are more than `tol` apart.
pub fn regions_separated(a: &Region, b: &Region, tol: f64) -> bool {
    match a.hull().intersect(&b.hull(), tol) {
        None => true,
        Some(common) => common.distance_to(Point2::ORIGIN) > 1.0 + tol,
    }
}

/// `B_A` for one arc.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierComponent {
    pub address: ArcAddress,
    /// `W(A)`.
    pub segment: CircularSegment,
    /// `T_0(A), ..., T_{n-1}(A)`.
    pub polygons: Vec<ConvexPolygon>,
    /// `Bot(A)`.
    pub bottom: BottomRegion,
    /// `L_1(A), ..., L_{n+1}(A)`, each oriented left to right.
    pub links: Vec<Segment2D>,
}

impl BarrierComponent {
    pub fn depth(&self) -> usize {
        self.address.depth()
    }

    /// The chain members in order, `W`, `T_0..T_{n-1}`, `Bot`.
    pub fn pieces(&self) -> Vec<Region> {
        let mut out = Vec::with_capacity(self.polygons.len() + 2);
        out.push(Region::Segment(self.segment));
        out.extend(self.polygons.iter().cloned().map(Region::Polygon));
        out.push(Region::Bottom(self.bottom));
        out
    }

    pub fn area(&self) -> f64 {
        self.segment.area() + self.polygons.iter().map(ConvexPolygon::area).sum::<f64>() + self.bottom.area()
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.segment.contains(p, tol)
            || self.bottom.contains(p, tol)
            || self.polygons.iter().any(|poly| poly.contains(p, tol))
    }

    /// Largest Hausdorff distance between a link and the matching edges of
    /// the two chain members it is supposed to join.
    pub fn link_mismatch(&self) -> f64 {
        let n = self.depth();
        let mut worst = self.links[0].hausdorff(&self.segment.chord());
        for (k, link) in self.links.iter().enumerate() {
            // L_{k+1} is the entry edge of T_k and the exit edge of T_{k-1}
            let neighbours = [k.checked_sub(1), (k < n).then_some(k)];
            for poly in neighbours.into_iter().flatten().map(|j| &self.polygons[j]) {
                let d = poly.edges().map(|e| e.hausdorff(link)).fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
        }
        worst.max(self.links[n].hausdorff(&self.bottom.top()))
    }
}

fn strip_planes(direction: Point2, link: &Segment2D) -> [HalfPlane; 2] {
    let (a, b) = (direction.dot(link.p), direction.dot(link.q));
    let (lo, hi) = (a.min(b), a.max(b));
    [HalfPlane::new(-direction, -lo), HalfPlane::new(direction, hi)]
}

/// Builds the whole chain for `addr`.
pub fn component(addr: &ArcAddress) -> Result<BarrierComponent> {
    let n = addr.depth();
    if n == 0 {
        return Err(Error::invalid("barrier components need depth >= 1"));
    }
    if n > BARRIER_DEPTH_CAP {
        return Err(Error::DepthCap {
            depth: n,
            cap: BARRIER_DEPTH_CAP,
        });
    }
    let ancestors: Vec<ArcAddress> = (0..=n).map(|k| addr.ancestor(k)).collect::<Result<_>>()?;
    let chords: Vec<Segment2D> = ancestors.iter().map(|a| chord(&resolve(a))).collect::<Result<_>>()?;

    let mut links = alloc::vec![chords[0].left_to_right()];
    let mut polygons = alloc::vec![right_triangle(addr)?.polygon()];
    for k in 0..n {
        let exit = polygons[k]
            .edge_on_line(&chords[k + 1], EDGE_TOL)
            .ok_or_else(|| Error::construction("chain polygon has no edge on the next chord"))?
            .left_to_right();
        links.push(exit);
        if k + 1 < n {
            let host = right_triangle(&ancestors[k + 1])?.polygon();
            let planes = strip_planes(chords[k + 1].direction(), &exit);
            let swept = host
                .clip_all(&planes)
                .ok_or_else(|| Error::construction("empty sweep polygon"))?;
            polygons.push(swept);
        }
    }
    let bottom = BottomRegion::under(&links[n]);
    Ok(BarrierComponent {
        address: addr.clone(),
        segment: CircularSegment::from_arc(&resolve(addr)),
        polygons,
        bottom,
        links,
    })
}

/// `T_k(A)` for `0 <= k < depth(A)`.
pub fn sweep_polygon(k: usize, addr: &ArcAddress) -> Result<ConvexPolygon> {
    let comp = component(addr)?;
    comp.polygons
        .get(k)
        .cloned()
        .ok_or_else(|| Error::invalid("stage must be below the depth"))
}

/// The edge through which the chain leaves `T_k(A)`: `L_{k+2}(A)`, lying on
/// `Cho(Par^{k+1}(A))` (on the cut line when `k = depth - 1`).
pub fn exit_segment(k: usize, addr: &ArcAddress) -> Result<Segment2D> {
    link(k + 2, addr)
}

/// `L_j(A)` for `1 <= j <= depth(A) + 1`.
pub fn link(j: usize, addr: &ArcAddress) -> Result<Segment2D> {
    let comp = component(addr)?;
    j.checked_sub(1)
        .and_then(|i| comp.links.get(i).copied())
        .ok_or_else(|| Error::invalid("link index out of range"))
}

pub fn bottom_region(addr: &ArcAddress) -> Result<BottomRegion> {
    Ok(component(addr)?.bottom)
}

#[derive(Debug, Clone)]
struct Placed {
    component: usize,
    region: Region,
    bounds: Aabb,
}

/// `B_n` as its `2^n` components, counterclockwise by arc.
#[derive(Debug, Clone, PartialEq)]
pub struct Barrier {
    depth: usize,
    components: Vec<BarrierComponent>,
}

impl Barrier {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("barriers are defined for depth >= 1"));
        }
        if n > BARRIER_DEPTH_CAP {
            return Err(Error::DepthCap {
                depth: n,
                cap: BARRIER_DEPTH_CAP,
            });
        }
        let components = (0..1u64 << n)
            .map(|i| component(&ArcAddress::from_index(n, i)?))
            .collect::<Result<_>>()?;
        Ok(Barrier { depth: n, components })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn components(&self) -> &[BarrierComponent] {
        &self.components
    }

    pub fn area(&self) -> f64 {
        self.components.iter().map(BarrierComponent::area).sum()
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.components.iter().any(|c| c.contains(p, tol))
    }

    fn placed(&self) -> Vec<Placed> {
        let mut out: Vec<Placed> = self
            .components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| {
                c.pieces().into_iter().map(move |region| {
                    let bounds = region.hull().aabb();
                    Placed {
                        component: i,
                        region,
                        bounds,
                    }
                })
            })
            .collect();
        out.sort_by(|a, b| a.bounds.min.x.total_cmp(&b.bounds.min.x));
        out
    }

    /// First pair of distinct components closer than `tol`, if any.
    pub fn find_overlap(&self, tol: f64) -> Option<(ArcAddress, ArcAddress)> {
        let placed = self.placed();
        for (i, a) in placed.iter().enumerate() {
            for b in &placed[i + 1..] {
                if b.bounds.min.x > a.bounds.max.x + tol {
                    break;
                }
                if a.component == b.component || !a.bounds.overlaps(&b.bounds, tol) {
                    continue;
                }
                if !regions_separated(&a.region, &b.region, tol) {
                    return Some((
                        self.components[a.component].address.clone(),
                        self.components[b.component].address.clone(),
                    ));
                }
            }
        }
        None
    }

    /// A boundary sample of `self` that is not within `tol` of its parent
    /// component in `coarser`, if any.
    pub fn find_escape(&self, coarser: &Barrier, tol: f64) -> Option<(ArcAddress, Point2)> {
        if coarser.depth + 1 != self.depth {
            return None;
        }
        for comp in &self.components {
            let parent_index = comp.address.parent().ok()?.index() as usize;
            let parent = &coarser.components[parent_index];
            for piece in comp.pieces() {
                for p in piece.boundary_samples() {
                    if !parent.contains(p, tol) {
                        return Some((comp.address.clone(), p));
                    }
                }
            }
        }
        None
    }
}

pub fn barrier(n: usize) -> Result<Barrier> {
    Barrier::new(n)
}

pub fn region_membership(point: Point2, n: usize) -> Result<bool> {
    Ok(Barrier::new(n)?.contains(point, GEOMETRY_TOL))
}

pub fn region_area(n: usize) -> Result<f64> {
    Ok(Barrier::new(n)?.area())
}

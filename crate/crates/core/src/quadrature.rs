//! Composite Gauss-Legendre quadrature over intervals, convex polygons,
//! circular segments and bottom pieces.
//!
//! Integrands of the form `|f|` are handled by splitting every panel at the
//! sign changes of `f`, so the rule only ever sees smooth pieces.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::barrier::{BottomRegion, CircularSegment, Region};
use crate::planar::{ConvexPolygon, Point2};
use crate::{Error, Result};

/// Absolute floor added to every quadrature margin.
pub const MARGIN_FLOOR: f64 = 1e-12;

/// Factor between an error estimate and the margin granted to a check.
pub const MARGIN_FACTOR: f64 = 10.0;

/// Sign samples per panel when looking for zeros of the integrand.
const SIGN_SAMPLES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// The `order`-point rule on `[-1, 1]`, roots found by Newton's method.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > 64 {
            return Err(Error::invalid("Gauss-Legendre order must be in 1..=64"));
        }
        let n = order;
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// One panel over `[a, b]`.
    pub fn apply(&self, f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A composite rule: `panels` equal panels of a fixed Gauss-Legendre order.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    rule: GaussLegendre,
    panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(8, 8).expect("default rule is valid")
    }
}

impl Quadrature {
    pub fn new(order: usize, panels: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::invalid("quadrature needs at least one panel"));
        }
        Ok(Quadrature {
            rule: GaussLegendre::new(order)?,
            panels,
        })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }

    /// The same rule with twice as many panels.
    pub fn refined(&self) -> Self {
        Quadrature {
            rule: self.rule.clone(),
            panels: 2 * self.panels,
        }
    }

    pub fn integrate(&self, f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let width = (b - a) / self.panels as f64;
        (0..self.panels)
            .map(|i| {
                let lo = a + width * i as f64;
                let hi = if i + 1 == self.panels { b } else { lo + width };
                self.rule.apply(f, lo, hi)
            })
            .sum()
    }

    /// `int_a^b |f|`, with every panel cut at the sign changes of `f`.
    pub fn integrate_abs(&self, f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let width = (b - a) / self.panels as f64;
        let mut total = 0.0;
        let mut cuts: Vec<f64> = Vec::with_capacity(SIGN_SAMPLES + 2);
        for i in 0..self.panels {
            let lo = a + width * i as f64;
            let hi = if i + 1 == self.panels { b } else { lo + width };
            cuts.clear();
            cuts.push(lo);
            let step = (hi - lo) / SIGN_SAMPLES as f64;
            let mut x0 = lo;
            let mut f0 = f(lo);
            for j in 1..=SIGN_SAMPLES {
                let x1 = if j == SIGN_SAMPLES { hi } else { lo + step * j as f64 };
                let f1 = f(x1);
                if (f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0) {
                    cuts.push(find_root(f, x0, x1, f0, f1));
                }
                x0 = x1;
                f0 = f1;
            }
            cuts.push(hi);
            for w in cuts.windows(2) {
                total += self.rule.apply(f, w[0], w[1]).abs();
            }
        }
        total
    }

    fn integrate_maybe_abs(&self, f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, abs: bool) -> f64 {
        if abs {
            self.integrate_abs(f, a, b)
        } else {
            self.integrate(f, a, b)
        }
    }

    /// Integral over a convex polygon, scanning in `y`. Slabs are split at
    /// vertex heights so both `x` limits are affine inside each slab.
    pub fn polygon(&self, f: &dyn Fn(Point2) -> f64, poly: &ConvexPolygon, abs: bool) -> f64 {
        let mut heights: Vec<f64> = poly.vertices().iter().map(|v| v.y).collect();
        heights.sort_by(f64::total_cmp);
        heights.dedup();
        let mut total = 0.0;
        for w in heights.windows(2) {
            let (y0, y1) = (w[0], w[1]);
            if y1 - y0 <= 0.0 {
                continue;
            }
            let mut slice = |y: f64| {
                let (xl, xr) = scan(poly, y);
                if xr <= xl {
                    return 0.0;
                }
                let mut g = |x: f64| f(Point2::new(x, y));
                self.integrate_maybe_abs(&mut g, xl, xr, abs)
            };
            total += self.integrate(&mut slice, y0, y1);
        }
        total
    }

    /// Integral over a circular segment in the coordinates
    /// `x = cos(phi) m + u t`, `0 <= phi <= half angle`, `|u| <= sin(phi)`,
    /// which keeps the rule away from the square-root profile at the tip.
    pub fn segment(&self, f: &dyn Fn(Point2) -> f64, seg: &CircularSegment, abs: bool) -> f64 {
        let m = seg.mid_direction();
        let t = m.perp();
        let half = seg.half_angle();
        let mut outer = |phi: f64| {
            let (s, c) = phi.sin_cos();
            if s <= 0.0 {
                return 0.0;
            }
            let base = m * c;
            let mut g = |u: f64| f(base + t * u);
            s * self.integrate_maybe_abs(&mut g, -s, s, abs)
        };
        self.integrate(&mut outer, 0.0, half)
    }

    pub fn bottom(&self, f: &dyn Fn(Point2) -> f64, bot: &BottomRegion, abs: bool) -> f64 {
        self.polygon(f, &bot.trapezoid(), abs) + self.segment(f, &bot.lower_segment(), abs)
    }

    pub fn region(&self, f: &dyn Fn(Point2) -> f64, region: &Region, abs: bool) -> f64 {
        match region {
            Region::Segment(s) => self.segment(f, s, abs),
            Region::Polygon(p) => self.polygon(f, p, abs),
            Region::Bottom(b) => self.bottom(f, b, abs),
        }
    }

    /// Integral over a convex polygon intersected with the closed unit
    /// disk, for pieces whose exact shape is only known through a hull.
    pub fn polygon_in_disk(&self, f: &dyn Fn(Point2) -> f64, poly: &ConvexPolygon, abs: bool) -> f64 {
        let mut heights: Vec<f64> = poly.vertices().iter().map(|v| v.y.clamp(-1.0, 1.0)).collect();
        for e in poly.edges() {
            heights.extend(circle_crossings(e.p, e.q).map(|p| p.y));
        }
        heights.sort_by(f64::total_cmp);
        heights.dedup();
        let mut total = 0.0;
        for w in heights.windows(2) {
            let (y0, y1) = (w[0], w[1]);
            if y1 <= y0 {
                continue;
            }
            let mut slice = |y: f64| {
                let (xl, xr) = scan(poly, y);
                let r = (1.0 - y * y).max(0.0).sqrt();
                let (xl, xr) = (xl.max(-r), xr.min(r));
                if xr <= xl {
                    return 0.0;
                }
                let mut g = |x: f64| f(Point2::new(x, y));
                self.integrate_maybe_abs(&mut g, xl, xr, abs)
            };
            total += self.integrate(&mut slice, y0, y1);
        }
        total
    }

    /// Runs `integral` with this rule and the refined one.
    pub fn estimate(&self, integral: impl Fn(&Quadrature) -> f64) -> Estimate {
        let coarse = integral(self);
        let fine = integral(&self.refined());
        Estimate {
            value: fine,
            error: (fine - coarse).abs(),
        }
    }
}

/// `x` range of the horizontal line at height `y` inside a convex polygon.
fn scan(poly: &ConvexPolygon, y: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for e in poly.edges() {
        let (a, b) = (e.p, e.q);
        let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
        if y < ylo || y > yhi {
            continue;
        }
        if yhi - ylo <= 0.0 {
            lo = lo.min(a.x.min(b.x));
            hi = hi.max(a.x.max(b.x));
        } else {
            let x = a.x + (b.x - a.x) * (y - a.y) / (b.y - a.y);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo, hi)
}

/// Points where the segment `pq` meets the unit circle.
fn circle_crossings(p: Point2, q: Point2) -> impl Iterator<Item = Point2> {
    let d = q - p;
    let a = d.norm_sq();
    let b = p.dot(d);
    let c = p.norm_sq() - 1.0;
    let disc = b * b - a * c;
    let roots = if a > 0.0 && disc > 0.0 {
        let r = disc.sqrt();
        [(-b - r) / a, (-b + r) / a]
    } else {
        [f64::NAN, f64::NAN]
    };
    roots
        .into_iter()
        .filter(|t| (0.0..=1.0).contains(t))
        .map(move |t| p + d * t)
}

/// Illinois-variant regula falsi on a bracketing interval, with a plain
/// bisection every third step so multiple roots still converge.
fn find_root(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    let mut side = 0i8;
    for iter in 0..300 {
        if (b - a) <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if iter % 3 == 2 || !(c > a && c < b) {
            c = 0.5 * (a + b);
            side = 0;
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc < 0.0) == (fa < 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

/// A quadrature value with the gap between two refinement levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    /// Slack granted to an inequality built on this value.
    pub fn margin(&self) -> f64 {
        MARGIN_FACTOR * self.error + MARGIN_FLOOR
    }

    pub fn plus(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
        }
    }

    pub fn scaled(self, factor: f64) -> Estimate {
        Estimate {
            value: self.value * factor,
            error: self.error * factor.abs(),
        }
    }
}

impl core::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Estimate {
        iter.fold(Estimate::exact(0.0), Estimate::plus)
    }
}

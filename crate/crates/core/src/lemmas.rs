//! Numerical forms of the three appendix inequalities: the obtuse-angle
//! criterion behind sibling triangle disjointness, the one-dimensional
//! Poincare bound on a rectangle, and the square-root lower bound.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fields::ScalarField;
use crate::planar::{ConvexPolygon, Point2};
use crate::quadrature::{Estimate, Quadrature};
use crate::{Error, Result};

/// Which side of an inequality is expected to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs >= rhs`
    AtLeast,
    /// `lhs <= rhs`
    AtMost,
    /// `|lhs - rhs| <= margin`
    Equal,
}

/// Outcome of one numerical inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub lhs: f64,
    pub rhs: f64,
    /// Slack granted for quadrature and rounding error.
    pub margin: f64,
    pub relation: Relation,
    pub holds: bool,
}

impl Verdict {
    pub fn new(lhs: f64, rhs: f64, margin: f64, relation: Relation) -> Self {
        let holds = match relation {
            Relation::AtLeast => lhs >= rhs - margin,
            Relation::AtMost => lhs <= rhs + margin,
            Relation::Equal => (lhs - rhs).abs() <= margin,
        };
        Verdict {
            lhs,
            rhs,
            margin,
            relation,
            holds,
        }
    }

    pub fn at_least(lhs: Estimate, rhs: Estimate) -> Self {
        Verdict::new(lhs.value, rhs.value, lhs.margin() + rhs.margin(), Relation::AtLeast)
    }

    pub fn at_most(lhs: Estimate, rhs: Estimate) -> Self {
        Verdict::new(lhs.value, rhs.value, lhs.margin() + rhs.margin(), Relation::AtMost)
    }

    /// How far the inequality holds without using the margin; negative when
    /// it only holds thanks to the margin, or not at all.
    pub fn slack(&self) -> f64 {
        match self.relation {
            Relation::AtLeast => self.lhs - self.rhs,
            Relation::AtMost => self.rhs - self.lhs,
            Relation::Equal => self.margin - (self.lhs - self.rhs).abs(),
        }
    }
}

fn check_angles(theta: f64, alpha: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::invalid("theta must lie in (0, 1]"));
    }
    // a few ulps of slack so a literal such as 0.005 counts as 0.1^2/2
    if !(alpha >= 0.5 * theta * theta * (1.0 - 1e-14) && alpha < theta) {
        return Err(Error::invalid("alpha must lie in [theta^2/2, theta)"));
    }
    Ok(())
}

/// The sibling configuration on an arc of length `theta` with a gap of
/// length `alpha` cut from its middle, in coordinates centred on the chord
/// midpoint `V`: `P`, `Q` on the upper half, `T` on the chord with a right
/// angle at `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Sibling {
    p: Point2,
    q: Point2,
    t: Point2,
}

fn sibling(theta: f64, alpha: f64) -> Sibling {
    let (a, b) = (0.25 * alpha, 0.25 * theta);
    // cos(alpha/2) - cos(theta/2) and sin(theta/2) - sin(alpha/2) without
    // cancellation
    let dx = 2.0 * (a + b).sin() * (b - a).sin();
    let dy = 2.0 * (a + b).cos() * (b - a).sin();
    let qy = (2.0 * a).sin();
    let p = Point2::new(0.0, qy + dy);
    let q = Point2::new(dx, qy);
    let t = Point2::new(0.0, qy - dx * dx / dy);
    Sibling { p, q, t }
}

/// `QP . QV` for the sibling configuration; negative exactly when the two
/// right triangles stay apart.
pub fn lemma31_dot(theta: f64, alpha: f64) -> Result<f64> {
    check_angles(theta, alpha)?;
    let s = sibling(theta, alpha);
    let qp = s.p - s.q;
    let qv = Point2::ORIGIN - s.q;
    Ok(qp.dot(qv))
}

/// The two right triangles `PQT` and `RSU` (mirror images across the chord
/// normal) as polygons.
pub fn sibling_triangles(theta: f64, alpha: f64) -> Result<(ConvexPolygon, ConvexPolygon)> {
    check_angles(theta, alpha)?;
    let s = sibling(theta, alpha);
    let mirror = |p: Point2| Point2::new(p.x, -p.y);
    let upper = ConvexPolygon::new(alloc::vec![s.p, s.q, s.t])?;
    let lower = ConvexPolygon::new(alloc::vec![mirror(s.p), mirror(s.q), mirror(s.t)])?;
    Ok((upper, lower))
}

/// Whether the closed sibling triangles are disjoint, by a separating axis
/// test on the constructed polygons.
pub fn triangles_disjoint(theta: f64, alpha: f64) -> Result<bool> {
    let (upper, lower) = sibling_triangles(theta, alpha)?;
    Ok(upper.separated_from(&lower))
}

/// `-theta^3/8 + theta^4/24`, the closing bound of the obtuse-angle
/// argument.
pub fn lemma31_short_bound(theta: f64) -> f64 {
    -theta.powi(3) / 8.0 + theta.powi(4) / 24.0
}

/// `-theta^3/8 + theta^4/12`: what the same cosine bounds actually give
/// once the fourth-order terms are collected.
pub fn lemma31_collected_bound(theta: f64) -> f64 {
    -theta.powi(3) / 8.0 + theta.powi(4) / 12.0
}

/// A field on `[a, b] x [c, d]` that vanishes on both vertical edges.
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleField<F> {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub field: F,
}

/// Samples per vertical edge when validating the boundary condition.
const EDGE_SAMPLES: usize = 65;

impl<F: ScalarField> RectangleField<F> {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), field: F) -> Result<Self> {
        if !(x_range.0 < x_range.1 && y_range.0 < y_range.1) {
            return Err(Error::invalid("rectangle must have positive extent"));
        }
        let scale = (0..EDGE_SAMPLES)
            .map(|i| {
                let x = x_range.0 + (x_range.1 - x_range.0) * (i as f64 + 0.5) / EDGE_SAMPLES as f64;
                field.value(Point2::new(x, 0.5 * (y_range.0 + y_range.1))).abs()
            })
            .fold(1.0, f64::max);
        for i in 0..EDGE_SAMPLES {
            let y = y_range.0 + (y_range.1 - y_range.0) * i as f64 / (EDGE_SAMPLES - 1) as f64;
            for x in [x_range.0, x_range.1] {
                if field.value(Point2::new(x, y)).abs() > 1e-12 * scale {
                    return Err(Error::invalid("field must vanish on the edges x = a and x = b"));
                }
            }
        }
        Ok(RectangleField {
            x_range,
            y_range,
            field,
        })
    }

    fn polygon(&self) -> ConvexPolygon {
        let (a, b) = self.x_range;
        let (c, d) = self.y_range;
        ConvexPolygon::new(alloc::vec![
            Point2::new(a, c),
            Point2::new(b, c),
            Point2::new(b, d),
            Point2::new(a, d),
        ])
        .expect("validated rectangle")
    }
}

/// `int |du/dx| >= 2/(b - a) int |u|` over the rectangle.
pub fn poincare_check<F: ScalarField>(rect: &RectangleField<F>, quad: &Quadrature) -> Verdict {
    let poly = rect.polygon();
    let f = &rect.field;
    let lhs = quad.estimate(|q| q.polygon(&|p| f.gradient(p).x, &poly, true));
    let mass = quad.estimate(|q| q.polygon(&|p| f.value(p), &poly, true));
    let rhs = mass.scaled(2.0 / (rect.x_range.1 - rect.x_range.0));
    Verdict::at_least(lhs, rhs)
}

/// Two nonnegative piecewise-constant functions on a common grid of cells
/// with given weights, plus the bounds `int g >= delta`, `int h <= big_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrandPair {
    g: Vec<f64>,
    h: Vec<f64>,
    cell_measure: f64,
    delta: f64,
    big_m: f64,
}

impl IntegrandPair {
    pub fn new(g: Vec<f64>, h: Vec<f64>, cell_measure: f64, delta: f64, big_m: f64) -> Result<Self> {
        if g.len() != h.len() || g.is_empty() {
            return Err(Error::invalid("g and h need the same nonzero number of cells"));
        }
        if !(cell_measure > 0.0) {
            return Err(Error::invalid("cell measure must be positive"));
        }
        if g.iter().chain(&h).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("g and h must be finite and nonnegative"));
        }
        if !(delta > 0.0 && big_m >= 0.0) {
            return Err(Error::invalid("need delta > 0 and M >= 0"));
        }
        let pair = IntegrandPair {
            g,
            h,
            cell_measure,
            delta,
            big_m,
        };
        if pair.integral_g() < delta {
            return Err(Error::invalid("int g is below delta"));
        }
        if pair.integral_h() > big_m {
            return Err(Error::invalid("int h exceeds M"));
        }
        Ok(pair)
    }

    /// The pair with the tightest admissible bounds, `delta = int g` and
    /// `M = int h`.
    pub fn tight(g: Vec<f64>, h: Vec<f64>, cell_measure: f64) -> Result<Self> {
        let sum = |v: &[f64]| v.iter().sum::<f64>() * cell_measure;
        let (delta, big_m) = (sum(&g), sum(&h));
        IntegrandPair::new(g, h, cell_measure, delta, big_m)
    }

    pub fn integral_g(&self) -> f64 {
        self.g.iter().sum::<f64>() * self.cell_measure
    }

    pub fn integral_h(&self) -> f64 {
        self.h.iter().sum::<f64>() * self.cell_measure
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn cell_measure(&self) -> f64 {
        self.cell_measure
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn big_m(&self) -> f64 {
        self.big_m
    }
}

/// `int sqrt(g^2 + h^2) >= int h + delta^2/(2M + delta)`.
pub fn sqrt_inequality_check(pair: &IntegrandPair) -> Verdict {
    let lhs = pair.g.iter().zip(&pair.h).map(|(g, h)| g.hypot(*h)).sum::<f64>() * pair.cell_measure;
    let rhs = pair.integral_h() + pair.delta * pair.delta / (2.0 * pair.big_m + pair.delta);
    // summation rounding only
    let margin = 8.0 * f64::EPSILON * (pair.g.len() as f64).sqrt() * (lhs + rhs);
    Verdict::new(lhs, rhs, margin, Relation::AtLeast)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{gap_length, theta};
    use crate::fields::{Constant, Parabola, SineSeries};
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn dot_matches_direct_coordinates() {
        for &(t, a) in &[(1.0f64, 0.5f64), (0.5, 0.2), (0.8, 0.6)] {
            let p = Point2::new((t / 2.0).cos(), (t / 2.0).sin());
            let q = Point2::new((a / 2.0).cos(), (a / 2.0).sin());
            let v = Point2::new((t / 2.0).cos(), 0.0);
            let direct = (p - q).dot(v - q);
            let got = lemma31_dot(t, a).unwrap();
            assert!((got - direct).abs() < 1e-15, "{got} vs {direct}");
        }
    }

    #[test]
    fn dot_at_unit_theta() {
        let v = lemma31_dot(1.0, 0.5).unwrap();
        assert!(v < 0.0);
        // the collected bound -1/8 + 1/12 = -1/24 is what holds at theta = 1
        assert!(v < lemma31_collected_bound(1.0));
        assert!((lemma31_collected_bound(1.0) + 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn dot_small_theta_limit() {
        let t = 1e-3;
        let ratio = lemma31_dot(t, 0.5 * t * t).unwrap() / t.powi(3);
        assert!((ratio + 0.125).abs() < 1e-3, "{ratio}");
        assert!(lemma31_dot(0.1, 0.005).unwrap() < 0.0);
    }

    #[test]
    fn out_of_range_angles() {
        assert!(lemma31_dot(0.0, 0.0).is_err());
        assert!(lemma31_dot(1.5, 1.0).is_err());
        assert!(lemma31_dot(1.0, 0.4).is_err());
        assert!(lemma31_dot(1.0, 1.0).is_err());
        assert!(triangles_disjoint(1.0, 1.2).is_err());
    }

    #[test]
    fn construction_triangles_disjoint() {
        for n in 1..=10 {
            let t = theta(n);
            assert!(triangles_disjoint(t, gap_length(n)).unwrap(), "n = {n}");
        }
        assert!(triangles_disjoint(1.0, 0.5).unwrap());
        assert!(triangles_disjoint(0.7, 0.99 * 0.7).unwrap());
    }

    #[test]
    fn foot_is_perpendicular() {
        let s = sibling(0.9, 0.6);
        assert!((s.p - s.q).dot(s.t - s.q).abs() < 1e-15);
        assert!(s.t.y > 0.0);
    }

    #[test]
    fn poincare_closed_forms() {
        let q = Quadrature::default();
        let sin = RectangleField::new(
            (0.0, 1.0),
            (0.0, 1.0),
            SineSeries::sin_profile((0.0, 1.0), (0.0, 1.0)).unwrap(),
        )
        .unwrap();
        let v = poincare_check(&sin, &q);
        assert!((v.lhs - 2.0).abs() < 1e-12 && (v.rhs - 4.0 / PI).abs() < 1e-12 && v.holds);
        let par = RectangleField::new((0.0, 1.0), (0.0, 1.0), Parabola { a: 0.0, b: 1.0 }).unwrap();
        let v = poincare_check(&par, &q);
        assert!((v.lhs - 0.5).abs() < 1e-14 && (v.rhs - 1.0 / 3.0).abs() < 1e-14 && v.holds);
        let zero = RectangleField::new((0.0, 1.0), (0.0, 1.0), Constant(0.0)).unwrap();
        let v = poincare_check(&zero, &q);
        assert_eq!((v.lhs, v.rhs), (0.0, 0.0));
        assert!(v.holds);
        assert!(RectangleField::new((0.0, 1.0), (0.0, 1.0), Constant(1.0)).is_err());
    }

    #[test]
    fn sqrt_inequality_cases() {
        // h = 0: lhs = delta and rhs = delta^2/delta
        let pair = IntegrandPair::new(vec![0.5, 1.5], vec![0.0, 0.0], 0.5, 1.0, 0.0).unwrap();
        let v = sqrt_inequality_check(&pair);
        assert!((v.lhs - 1.0).abs() < 1e-15 && (v.rhs - 1.0).abs() < 1e-15 && v.holds);
        // g = h = c: lhs = sqrt(2) c, rhs = c + c/3
        let pair = IntegrandPair::tight(vec![2.0; 4], vec![2.0; 4], 0.25).unwrap();
        let v = sqrt_inequality_check(&pair);
        assert!((v.lhs - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((v.rhs - 8.0 / 3.0).abs() < 1e-14);
        assert!(v.holds && v.slack() > 0.0);
    }

    #[test]
    fn integrand_pair_rejects_bad_input() {
        assert!(IntegrandPair::new(vec![-1.0], vec![0.0], 1.0, 0.1, 1.0).is_err());
        assert!(IntegrandPair::new(vec![1.0], vec![0.0, 1.0], 1.0, 0.1, 1.0).is_err());
        assert!(IntegrandPair::new(vec![1.0], vec![1.0], 1.0, 2.0, 1.0).is_err());
        assert!(IntegrandPair::new(vec![1.0], vec![1.0], 1.0, 0.5, 0.5).is_err());
        assert!(IntegrandPair::new(vec![1.0], vec![1.0], 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn verdict_relations() {
        assert!(Verdict::new(1.0, 1.0 + 1e-13, 1e-12, Relation::AtLeast).holds);
        assert!(!Verdict::new(1.0, 1.1, 1e-12, Relation::AtLeast).holds);
        assert!(Verdict::new(1.0, 1.1, 0.0, Relation::AtMost).holds);
        assert!(Verdict::new(1.0, 1.0 + 1e-9, 1e-8, Relation::Equal).holds);
        assert!(Verdict::new(2.0, 1.0, 0.0, Relation::AtLeast).slack() == 1.0);
    }
}

//! Smooth scalar fields with analytic gradients, used as test functions for
//! the inequality checks.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cantor::{arcs, gap_length};
use crate::planar::Point2;
use crate::{Error, Result};

pub trait ScalarField {
    fn value(&self, p: Point2) -> f64;
    fn gradient(&self, p: Point2) -> Point2;

    /// `grad u . v`.
    fn directional(&self, p: Point2, v: Point2) -> f64 {
        self.gradient(p).dot(v)
    }
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn value(&self, p: Point2) -> f64 {
        (**self).value(p)
    }

    fn gradient(&self, p: Point2) -> Point2 {
        (**self).gradient(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn value(&self, _: Point2) -> f64 {
        self.0
    }

    fn gradient(&self, _: Point2) -> Point2 {
        Point2::ORIGIN
    }
}

/// `sum c x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    terms: Vec<(u32, u32, f64)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(u32, u32, f64)>) -> Self {
        Polynomial { terms }
    }

    /// Coefficients of every monomial of total degree at most `degree`, in
    /// graded order `1, x, y, x^2, xy, y^2, ...`.
    pub fn dense(degree: u32, coefficients: &[f64]) -> Result<Self> {
        let exps: Vec<(u32, u32)> = (0..=degree).flat_map(|d| (0..=d).map(move |j| (d - j, j))).collect();
        if exps.len() != coefficients.len() {
            return Err(Error::invalid("coefficient count does not match the degree"));
        }
        Ok(Polynomial::new(
            exps.into_iter()
                .zip(coefficients)
                .map(|((i, j), c)| (i, j, *c))
                .collect(),
        ))
    }

    pub fn monomial_count(degree: u32) -> usize {
        ((degree + 1) * (degree + 2) / 2) as usize
    }

    pub fn terms(&self) -> &[(u32, u32, f64)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }
}

fn pow(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

impl ScalarField for Polynomial {
    fn value(&self, p: Point2) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * pow(p.x, i) * pow(p.y, j)).sum()
    }

    fn gradient(&self, p: Point2) -> Point2 {
        let mut g = Point2::ORIGIN;
        for &(i, j, c) in &self.terms {
            if i > 0 {
                g.x += c * i as f64 * pow(p.x, i - 1) * pow(p.y, j);
            }
            if j > 0 {
                g.y += c * j as f64 * pow(p.x, i) * pow(p.y, j - 1);
            }
        }
        g
    }
}

/// `sum c_jk sin(j pi (x - a)/(b - a)) cos(k pi (y - c)/(d - c))` on a
/// rectangle; it vanishes on the edges `x = a` and `x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSeries {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// `(j, k, c_jk)` with `j >= 1`.
    pub modes: Vec<(u32, u32, f64)>,
}

impl SineSeries {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), modes: Vec<(u32, u32, f64)>) -> Result<Self> {
        if !(x_range.0 < x_range.1 && y_range.0 < y_range.1) {
            return Err(Error::invalid("rectangle must have positive extent"));
        }
        if modes.iter().any(|m| m.0 == 0) {
            return Err(Error::invalid("sine modes start at j = 1"));
        }
        Ok(SineSeries {
            x_range,
            y_range,
            modes,
        })
    }

    /// `sin(pi (x - a)/(b - a))`.
    pub fn sin_profile(x_range: (f64, f64), y_range: (f64, f64)) -> Result<Self> {
        SineSeries::new(x_range, y_range, alloc::vec![(1, 0, 1.0)])
    }
}

impl ScalarField for SineSeries {
    fn value(&self, p: Point2) -> f64 {
        let wx = PI / (self.x_range.1 - self.x_range.0);
        let wy = PI / (self.y_range.1 - self.y_range.0);
        let (sx, sy) = (p.x - self.x_range.0, p.y - self.y_range.0);
        self.modes
            .iter()
            .map(|&(j, k, c)| c * (j as f64 * wx * sx).sin() * (k as f64 * wy * sy).cos())
            .sum()
    }

    fn gradient(&self, p: Point2) -> Point2 {
        let wx = PI / (self.x_range.1 - self.x_range.0);
        let wy = PI / (self.y_range.1 - self.y_range.0);
        let (sx, sy) = (p.x - self.x_range.0, p.y - self.y_range.0);
        let mut g = Point2::ORIGIN;
        for &(j, k, c) in &self.modes {
            let (fj, fk) = (j as f64 * wx, k as f64 * wy);
            let (sj, cj) = (fj * sx).sin_cos();
            let (sk, ck) = (fk * sy).sin_cos();
            g.x += c * fj * cj * ck;
            g.y -= c * fk * sj * sk;
        }
        g
    }
}

/// `(x - a)(b - x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parabola {
    pub a: f64,
    pub b: f64,
}

impl ScalarField for Parabola {
    fn value(&self, p: Point2) -> f64 {
        (p.x - self.a) * (self.b - p.x)
    }

    fn gradient(&self, p: Point2) -> Point2 {
        Point2::new(self.a + self.b - 2.0 * p.x, 0.0)
    }
}

/// `3t^2 - 2t^3` clamped to `[0, 1]`, and its derivative.
pub fn smoothstep(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        (0.0, 0.0)
    } else if t >= 1.0 {
        (1.0, 0.0)
    } else {
        (t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t))
    }
}

/// A C^1 bump that equals one on the circular segment of each cap and
/// fades out over a slightly larger cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCapField {
    /// `(unit mid direction, inner threshold, outer threshold)`: the field
    /// is one where `x . m >= inner` and zero where `x . m <= outer`.
    caps: Vec<(Point2, f64, f64)>,
}

impl SmoothCapField {
    /// Caps over the depth-`m` arcs, each widened by a quarter of the
    /// smallest gap so neighbouring caps never touch.
    pub fn cantor(m: usize) -> Result<Self> {
        let widen = if m == 0 { 0.05 } else { 0.25 * gap_length(m - 1) };
        let caps = arcs(m)?
            .into_iter()
            .map(|a| (a.mid_angle(), 0.5 * a.length()))
            .collect::<Vec<_>>();
        SmoothCapField::from_caps(&caps, widen)
    }

    /// Caps given as `(mid angle, half angle)`, faded out over `widen`
    /// extra radians on each side.
    pub fn from_caps(caps: &[(f64, f64)], widen: f64) -> Result<Self> {
        if !(widen > 0.0) {
            return Err(Error::invalid("cap widening must be positive"));
        }
        let caps = caps
            .iter()
            .map(|&(mid, half)| {
                if !(half > 0.0 && half + widen < core::f64::consts::FRAC_PI_2) {
                    return Err(Error::invalid("cap half angle out of range"));
                }
                Ok((Point2::on_circle(mid), half.cos(), (half + widen).cos()))
            })
            .collect::<Result<_>>()?;
        Ok(SmoothCapField { caps })
    }
}

impl ScalarField for SmoothCapField {
    fn value(&self, p: Point2) -> f64 {
        self.caps
            .iter()
            .map(|&(m, inner, outer)| smoothstep((p.dot(m) - outer) / (inner - outer)).0)
            .sum()
    }

    fn gradient(&self, p: Point2) -> Point2 {
        let mut g = Point2::ORIGIN;
        for &(m, inner, outer) in &self.caps {
            let w = inner - outer;
            let (_, d) = smoothstep((p.dot(m) - outer) / w);
            g = g + m * (d / w);
        }
        g
    }
}

/// `base(x) * S((y - y0)/width)`, which vanishes for `y <= y0`.
///
/// Every bottom piece meets the circle below `y = -cos(1/2)`, so any
/// `y0 >= -cos(1/2)` makes the field vanish there.
#[derive(Debug, Clone, PartialEq)]
pub struct BottomCutoff<F> {
    pub base: F,
    pub y0: f64,
    pub width: f64,
}

impl<F: ScalarField> ScalarField for BottomCutoff<F> {
    fn value(&self, p: Point2) -> f64 {
        self.base.value(p) * smoothstep((p.y - self.y0) / self.width).0
    }

    fn gradient(&self, p: Point2) -> Point2 {
        let (s, ds) = smoothstep((p.y - self.y0) / self.width);
        self.base.gradient(p) * s + Point2::new(0.0, self.base.value(p) * ds / self.width)
    }
}

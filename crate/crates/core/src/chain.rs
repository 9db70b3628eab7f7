//! Parametrized links of a barrier chain and the step-by-step lower bound on
//! the directional variation of a field across the chain.
//!
//! For an arc `A` of depth `n` and `s` the length of its chord, `phi_k` maps
//! `[0, s]` linearly onto the link `L_k(A)` (left end to right end) and
//! `phi_0` pushes `phi_1` outward along `-v(A)` onto the arc. With
//! `g_k = u o phi_k`, each difference `g_{k+1} - g_k` is bounded by the
//! variation of `u` across the chain member between the two links, and the
//! last trace `g_{n+1}` by the variation across the bottom piece when `u`
//! vanishes where that piece meets the circle.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::barrier::{chord, component, inward_normal, Barrier, BarrierComponent, Region};
use crate::cantor::{arcs, cantor_measure_limit, resolve, theta, Arc, ArcAddress};
use crate::fields::ScalarField;
use crate::lemmas::{Relation, Verdict};
use crate::planar::{Point2, Segment2D};
use crate::quadrature::{Estimate, Quadrature};
use crate::{Error, Result};

/// Samples along the lower boundary of a bottom piece when deciding whether
/// a field vanishes there.
const BOTTOM_SAMPLES: usize = 129;

/// Agreement required between the two groupings of the regrouped sum.
pub const REGROUPING_TOL: f64 = 1e-8;

/// The maps `phi_0, ..., phi_{n+1}` for one arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordTrace {
    pub address: ArcAddress,
    /// Length of `Cho(A)`, the common parameter interval `[0, s]`.
    pub parameter_length: f64,
    arc: Arc,
    normal: Point2,
    /// `L_1, ..., L_{n+1}`, oriented left to right.
    links: Vec<Segment2D>,
}

impl ChordTrace {
    pub fn depth(&self) -> usize {
        self.address.depth()
    }

    pub fn arc(&self) -> Arc {
        self.arc
    }

    pub fn links(&self) -> &[Segment2D] {
        &self.links
    }

    /// `phi_k(t)` for `0 <= k <= n + 1`.
    pub fn phi(&self, k: usize, t: f64) -> Point2 {
        let u = t / self.parameter_length;
        if k == 0 {
            let p = self.links[0].point_at(u);
            let pv = p.dot(self.normal);
            let lambda = pv + (pv * pv + 1.0 - p.norm_sq()).max(0.0).sqrt();
            p - self.normal * lambda
        } else {
            self.links[k - 1].point_at(u)
        }
    }

    /// `count + 1` equally spaced `(t, phi_k(t))` pairs for each `k`.
    pub fn samples(&self, count: usize) -> Vec<Vec<(f64, Point2)>> {
        (0..=self.depth() + 1)
            .map(|k| {
                (0..=count)
                    .map(|i| {
                        let t = self.parameter_length * i as f64 / count as f64;
                        (t, self.phi(k, t))
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn chord_chain(addr: &ArcAddress) -> Result<ChordTrace> {
    let comp = component(addr)?;
    Ok(trace_of(&comp))
}

fn trace_of(comp: &BarrierComponent) -> ChordTrace {
    let arc = resolve(&comp.address);
    ChordTrace {
        address: comp.address.clone(),
        parameter_length: comp.links[0].length(),
        arc,
        normal: inward_normal(&arc).expect("construction arcs are short").direction(),
        links: comp.links.clone(),
    }
}

/// Quadrature settings for the chain checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOptions {
    pub quadrature: Quadrature,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            quadrature: Quadrature::new(8, 4).expect("valid rule"),
        }
    }
}

/// Every quantity and inequality of the chain argument for one arc.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub address: ArcAddress,
    /// `||g_0||`.
    pub g0_norm: Estimate,
    /// `int_A |u| dH^1`.
    pub arc_mass: Estimate,
    /// `||g_{k+1} - g_k||` for `k = 0..=n`.
    pub differences: Vec<Estimate>,
    /// `||g_{n+1}||`.
    pub last_norm: Estimate,
    /// Directional variation over `W`, `T_0, ..., T_{n-1}` and `Bot`.
    pub region_integrals: Vec<Estimate>,
    /// `||g_0|| >= cos(theta_n/2) int_A |u|`.
    pub arc_bound: Verdict,
    /// `||g_0|| <= sum of differences + ||g_{n+1}||`.
    pub triangle: Verdict,
    /// `||g_{k+1} - g_k|| <= ` variation over the member between the links,
    /// for `k = 0..=n`.
    pub steps: Vec<Verdict>,
    /// Whether `u` vanishes where `Bot(A)` meets the circle.
    pub vanishes_at_bottom: bool,
    /// `||g_{n+1}|| <= int_Bot |du/dy|`, when `u` vanishes at the bottom.
    pub bottom: Option<Verdict>,
    /// Total variation over the chain `>= cos(theta_n/2) int_A |u|`, when
    /// `u` vanishes at the bottom.
    pub aggregate: Option<Verdict>,
    /// The same total `>= cos(theta_n/2) K_inf / 2^n`, when `u` vanishes at
    /// the bottom and its mass on `A` is at least `K_inf / 2^n`.
    pub cantor_bound: Option<Verdict>,
}

impl ChainReport {
    /// All applicable verdicts.
    pub fn verdicts(&self) -> Vec<Verdict> {
        let mut out = alloc::vec![self.arc_bound, self.triangle];
        out.extend(self.steps.iter().copied());
        out.extend(self.bottom);
        out.extend(self.aggregate);
        out.extend(self.cantor_bound);
        out
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts().iter().all(|v| v.holds)
    }
}

fn direction_integrand<'a, F: ScalarField + ?Sized>(u: &'a F, v: Point2) -> impl Fn(Point2) -> f64 + 'a {
    move |p| u.gradient(p).dot(v)
}

/// Whether `u` is zero along the circular part of the bottom piece.
fn vanishes_below<F: ScalarField + ?Sized>(u: &F, comp: &BarrierComponent) -> bool {
    comp.bottom
        .lower_segment()
        .boundary_samples(BOTTOM_SAMPLES - 1)
        .into_iter()
        .all(|p| u.value(p) == 0.0)
}

pub fn chain_inequality_check<F: ScalarField + ?Sized>(
    u: &F,
    addr: &ArcAddress,
    options: &ChainOptions,
) -> Result<ChainReport> {
    let comp = component(addr)?;
    let trace = trace_of(&comp);
    let n = trace.depth();
    let s = trace.parameter_length;
    let quad = &options.quadrature;

    let g = |k: usize, t: f64| u.value(trace.phi(k, t));
    let g0_norm = quad.estimate(|q| q.integrate_abs(&mut |t| g(0, t), 0.0, s));
    let arc = trace.arc;
    let arc_mass = quad.estimate(|q| {
        q.integrate_abs(
            &mut |a| u.value(Point2::on_circle(a)),
            arc.start_angle(),
            arc.end_angle(),
        )
    });
    let differences: Vec<Estimate> = (0..=n)
        .map(|k| quad.estimate(|q| q.integrate_abs(&mut |t| g(k + 1, t) - g(k, t), 0.0, s)))
        .collect();
    let last_norm = quad.estimate(|q| q.integrate_abs(&mut |t| g(n + 1, t), 0.0, s));

    let normals: Vec<Point2> = (0..n)
        .map(|k| Ok(inward_normal(&resolve(&addr.ancestor(k)?))?.direction()))
        .collect::<Result<_>>()?;
    let pieces = comp.pieces();
    let region_integrals: Vec<Estimate> = pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            // W uses v(A), T_k uses v(Par^k A), Bot uses j
            let v = match i {
                0 => normals[0],
                i if i <= n => normals[i - 1],
                _ => Point2::new(0.0, 1.0),
            };
            let f = direction_integrand(u, v);
            quad.estimate(|q| q.region(&f, piece, true))
        })
        .collect();

    let cos_half = (0.5 * theta(n)).cos();
    let arc_bound = Verdict::at_least(g0_norm, arc_mass.scaled(cos_half));
    let decomposition: Estimate = differences.iter().copied().sum::<Estimate>().plus(last_norm);
    let triangle = Verdict::at_most(g0_norm, decomposition);
    let steps: Vec<Verdict> = differences
        .iter()
        .zip(&region_integrals)
        .map(|(d, r)| Verdict::at_most(*d, *r))
        .collect();

    let vanishes_at_bottom = vanishes_below(u, &comp);
    let total: Estimate = region_integrals.iter().copied().sum();
    let (bottom, aggregate, cantor_bound) = if vanishes_at_bottom {
        let bottom = Verdict::at_most(last_norm, region_integrals[n + 1]);
        let aggregate = Verdict::at_least(total, arc_mass.scaled(cos_half));
        let share = cantor_measure_limit(1e-15)? / (1u64 << n) as f64;
        let cantor = (arc_mass.value - arc_mass.margin() >= share)
            .then(|| Verdict::at_least(total, Estimate::exact(cos_half * share)));
        (Some(bottom), Some(aggregate), cantor)
    } else {
        (None, None, None)
    };

    Ok(ChainReport {
        address: addr.clone(),
        g0_norm,
        arc_mass,
        differences,
        last_norm,
        region_integrals,
        arc_bound,
        triangle,
        steps,
        vanishes_at_bottom,
        bottom,
        aggregate,
        cantor_bound,
    })
}

/// The two groupings of the triangle terms over a whole barrier.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub depth: usize,
    /// `sum_A int_W(A) |grad u . v(A)|` over depth-`n` arcs.
    pub segments: Estimate,
    /// `sum_{m <= n} sum_{A in A_m} int_{T(A) cap B_n} |grad u . v(A)|`.
    pub s1: Estimate,
    /// `sum_{A in A_n} sum_k int_{T_k(A)} |grad u . v(Par^k A)|`.
    pub s2: Estimate,
    /// `int_{B_n cap D_-} |du/dy|`.
    pub bottoms: Estimate,
    /// `S_1 = S_2` to `REGROUPING_TOL`.
    pub regrouping: Verdict,
    /// Left side of the aggregated bound against `cos(theta_n/2) K_inf`.
    pub lower_bound: Verdict,
}

/// Evaluates both groupings of the triangle terms over `B_n`.
pub fn aggregate_check<F: ScalarField + ?Sized>(u: &F, n: usize, options: &ChainOptions) -> Result<AggregateReport> {
    if n == 0 || n > 5 {
        return Err(Error::invalid("aggregate check runs for 1 <= n <= 5"));
    }
    let quad = &options.quadrature;
    let barrier = Barrier::new(n)?;

    let mut segments = Estimate::exact(0.0);
    let mut s2 = Estimate::exact(0.0);
    let mut bottoms = Estimate::exact(0.0);
    for comp in barrier.components() {
        let v = inward_normal(&resolve(&comp.address))?.direction();
        let f = direction_integrand(u, v);
        segments = segments.plus(quad.estimate(|q| q.segment(&f, &comp.segment, true)));
        for (k, poly) in comp.polygons.iter().enumerate() {
            let v = inward_normal(&resolve(&comp.address.ancestor(k)?))?.direction();
            let f = direction_integrand(u, v);
            s2 = s2.plus(quad.estimate(|q| q.polygon(&f, poly, true)));
        }
        let f = direction_integrand(u, Point2::new(0.0, 1.0));
        bottoms = bottoms.plus(quad.estimate(|q| q.bottom(&f, &comp.bottom, true)));
    }

    let pieces: Vec<(Region, crate::planar::Aabb)> = barrier
        .components()
        .iter()
        .flat_map(|c| c.pieces())
        .map(|r| {
            let b = r.hull().aabb();
            (r, b)
        })
        .collect();
    let mut s1 = Estimate::exact(0.0);
    for m in 1..=n {
        for i in 0..1u64 << m {
            let a = ArcAddress::from_index(m, i)?;
            let tri = crate::barrier::right_triangle(&a)?.polygon();
            let tri_box = tri.aabb();
            let v = inward_normal(&resolve(&a))?.direction();
            let f = direction_integrand(u, v);
            for (piece, bounds) in &pieces {
                if !tri_box.overlaps(bounds, 0.0) {
                    continue;
                }
                let Some(common) = tri.intersect(&piece.hull(), 0.0) else {
                    continue;
                };
                let part = match piece {
                    Region::Polygon(_) => quad.estimate(|q| q.polygon(&f, &common, true)),
                    _ => quad.estimate(|q| q.polygon_in_disk(&f, &common, true)),
                };
                s1 = s1.plus(part);
            }
        }
    }

    let regrouping = Verdict::new(s1.value, s2.value, REGROUPING_TOL, Relation::Equal);
    let lhs = segments.plus(s1).plus(bottoms);
    let rhs = (0.5 * theta(n)).cos() * cantor_measure_limit(1e-15)?;
    let lower_bound = Verdict::at_least(lhs, Estimate::exact(rhs));
    Ok(AggregateReport {
        depth: n,
        segments,
        s1,
        s2,
        bottoms,
        regrouping,
        lower_bound,
    })
}

/// Chord length of any depth-`n` arc, `2 sin(theta_n / 2)`.
pub fn chord_length(n: usize) -> f64 {
    2.0 * (0.5 * theta(n)).sin()
}

/// Checks that `chord` and the construction agree on every depth-`n` arc.
pub fn chord_lengths_consistent(n: usize, tol: f64) -> Result<bool> {
    let want = chord_length(n);
    for arc in arcs(n)? {
        if (chord(&arc)?.length() - want).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

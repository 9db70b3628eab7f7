//! Discrete least-gradient problem on the unit disk.
//!
//! The disk is covered by a square grid of spacing `h = 2 / resolution`.
//! Cells with centre inside the closed disk are free; cells in a thin band
//! outside the circle carry the prescribed trace and never move. Inside the
//! disk the objective is the isotropic forward-difference total variation
//! `h * sum sqrt(dx^2 + dy^2)`, with a difference counted only when both
//! cells are free. The jump between the field and the band across the
//! circle is charged in one of two ways:
//!
//! * [`Coupling::Circle`] measures it along the circle, `int_S |u - f|`,
//!   with every short arc attached to its nearest free cell;
//! * [`Coupling::Band`] counts the lattice differences between free cells
//!   and band cells like any other difference.
//!
//! The objective is minimized over fields with values in `[0, 1]` by the
//! Chambolle-Pock primal-dual iteration.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::barrier::segment_area;
use crate::cantor::{arcs, cantor_measure, cantor_measure_limit, theta, trace_value};
use crate::{Error, Result};

/// Smallest accepted grid resolution.
pub const MIN_RESOLUTION: usize = 64;

/// Deepest trace the solver accepts.
pub const MAX_TRACE_DEPTH: usize = 12;

/// Deepest stage of the non-attainment experiment.
pub const MAX_EXPERIMENT_DEPTH: usize = 6;

/// Role of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum CellKind {
    Outside = 0,
    Interior = 1,
    Band = 2,
}

/// Square grid over `[-(1 + w), 1 + w]^2` with cells classified against the
/// unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    resolution: usize,
    band_width: f64,
    h: f64,
    side: usize,
    kinds: Vec<CellKind>,
    /// Angle of the nearest circle point, for band cells only.
    angles: Vec<f64>,
}

/// `max(2h, 0.01)`.
pub fn default_band_width(resolution: usize) -> f64 {
    (4.0 / resolution as f64).max(0.01)
}

impl DiskGrid {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn band_width(&self) -> f64 {
        self.band_width
    }

    /// Cell spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Cells per row and per column.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn kinds(&self) -> &[CellKind] {
        &self.kinds
    }

    pub fn kind(&self, i: usize, j: usize) -> CellKind {
        self.kinds[j * self.side + i]
    }

    /// Cell centre coordinate along either axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.side as f64 - 1.0)) * self.h
    }

    pub fn centre(&self, index: usize) -> (f64, f64) {
        (self.coordinate(index % self.side), self.coordinate(index / self.side))
    }

    pub fn interior_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == CellKind::Interior).count()
    }

    /// Band cells with their nearest-angle tags, in storage order.
    pub fn band(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == CellKind::Band)
            .map(move |(i, _)| (i, self.angles[i]))
    }

    pub fn band_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == CellKind::Band).count()
    }

    /// Whether the interior cells form one 4-connected set.
    pub fn interior_connected(&self) -> bool {
        let n = self.side;
        let Some(start) = self.kinds.iter().position(|k| *k == CellKind::Interior) else {
            return false;
        };
        let mut seen = alloc::vec![false; self.kinds.len()];
        let mut stack = alloc::vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(c) = stack.pop() {
            count += 1;
            let (i, j) = (c % n, c / n);
            let mut visit = |d: usize| {
                if self.kinds[d] == CellKind::Interior && !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            };
            if i > 0 {
                visit(c - 1);
            }
            if i + 1 < n {
                visit(c + 1);
            }
            if j > 0 {
                visit(c - n);
            }
            if j + 1 < n {
                visit(c + n);
            }
        }
        count == self.interior_count()
    }
}

pub fn build_grid(resolution: usize, band_width: f64) -> Result<DiskGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::invalid("resolution must be at least 64"));
    }
    let h = 2.0 / resolution as f64;
    if !(band_width >= h) || !band_width.is_finite() || band_width > 0.5 {
        return Err(Error::invalid("band width must lie in [2/resolution, 0.5]"));
    }
    let margin = (band_width / h).ceil() as usize + 1;
    let side = resolution + 2 * margin;
    let mut grid = DiskGrid {
        resolution,
        band_width,
        h,
        side,
        kinds: alloc::vec![CellKind::Outside; side * side],
        angles: alloc::vec![0.0; side * side],
    };
    for j in 0..side {
        let y = grid.coordinate(j);
        for i in 0..side {
            let x = grid.coordinate(i);
            let r = x.hypot(y);
            let c = j * side + i;
            if r <= 1.0 {
                grid.kinds[c] = CellKind::Interior;
            } else if r <= 1.0 + band_width {
                grid.kinds[c] = CellKind::Band;
                grid.angles[c] = y.atan2(x);
            }
        }
    }
    Ok(grid)
}

/// Boundary datum a trace was sampled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceProfile {
    Constant(u8),
    /// Indicator of `C_depth` turned counterclockwise by `rotation`.
    Cantor {
        depth: usize,
        rotation: f64,
    },
}

/// Prescribed values on the band: the indicator of `C_n` at each band
/// cell's nearest angle, optionally rotated.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceData {
    pub profile: TraceProfile,
    /// One value per band cell, in `DiskGrid::band` order.
    pub values: Vec<u8>,
}

impl TraceData {
    pub fn ones(&self) -> usize {
        self.values.iter().filter(|v| **v == 1).count()
    }

    /// Cantor depth, zero for constant traces.
    pub fn depth(&self) -> usize {
        match self.profile {
            TraceProfile::Constant(_) => 0,
            TraceProfile::Cantor { depth, .. } => depth,
        }
    }

    /// The datum at a circle angle.
    pub fn value_at(&self, angle: f64) -> u8 {
        match self.profile {
            TraceProfile::Constant(v) => v,
            TraceProfile::Cantor { depth, rotation } => trace_value(angle - rotation, depth),
        }
    }
}

pub fn sample_trace(grid: &DiskGrid, n: usize) -> Result<TraceData> {
    sample_trace_rotated(grid, n, 0.0)
}

/// The trace of `C_n` turned counterclockwise by `rotation`.
pub fn sample_trace_rotated(grid: &DiskGrid, n: usize, rotation: f64) -> Result<TraceData> {
    if n > MAX_TRACE_DEPTH {
        return Err(Error::DepthCap {
            depth: n,
            cap: MAX_TRACE_DEPTH,
        });
    }
    let values = grid.band().map(|(_, angle)| trace_value(angle - rotation, n)).collect();
    Ok(TraceData {
        profile: TraceProfile::Cantor { depth: n, rotation },
        values,
    })
}

/// A trace equal to `value` on every band cell.
pub fn constant_trace(grid: &DiskGrid, value: u8) -> TraceData {
    TraceData {
        profile: TraceProfile::Constant(value.min(1)),
        values: alloc::vec![value.min(1); grid.band_count()],
    }
}

/// Measures of `{f = 1}` along the circle, cut into short arcs.
struct CircleWeights {
    /// Per cell: arc length with `f = 0` minus arc length with `f = 1`.
    linear: Vec<f64>,
    /// Arc length with `f = 1`, the energy of the zero field.
    constant: f64,
}

/// Arcs per grid spacing in the circle coupling.
const ARCS_PER_CELL: usize = 8;

fn circle_weights(grid: &DiskGrid, trace: &TraceData) -> Result<CircleWeights> {
    let tau = 2.0 * core::f64::consts::PI;
    let ones: Vec<(f64, f64)> = match trace.profile {
        TraceProfile::Constant(0) => Vec::new(),
        TraceProfile::Constant(_) => alloc::vec![(-tau, 2.0 * tau)],
        TraceProfile::Cantor { depth, .. } => arcs(depth)?.iter().map(|a| (a.start_angle(), a.end_angle())).collect(),
    };
    let rotation = match trace.profile {
        TraceProfile::Cantor { rotation, .. } => rotation,
        TraceProfile::Constant(_) => 0.0,
    };
    // exact measure of the arcs inside [s, s + len], angles relative to the
    // unrotated datum and reduced to a window centred on the top of the circle
    let measure = |s: f64, len: f64| -> f64 {
        let base = core::f64::consts::FRAC_PI_2 - core::f64::consts::PI;
        let shifted = s - rotation - base;
        let s = base + shifted - tau * (shifted / tau).floor();
        let e = s + len;
        let first = ones.partition_point(|(_, hi)| *hi <= s);
        ones[first..]
            .iter()
            .take_while(|(lo, _)| *lo < e)
            .map(|(lo, hi)| (hi.min(e) - lo.max(s)).max(0.0))
            .sum()
    };
    let side = grid.side as isize;
    let count = ARCS_PER_CELL * ((tau / grid.h).ceil() as usize);
    let step = tau / count as f64;
    let mut linear = alloc::vec![0.0; grid.kinds.len()];
    let mut constant = 0.0;
    for k in 0..count {
        let start = -core::f64::consts::PI + step * k as f64;
        let (sin, cos) = (start + 0.5 * step).sin_cos();
        let index = |v: f64| (v / grid.h + 0.5 * (grid.side as f64 - 1.0)).round() as isize;
        let (ci, cj) = (index(cos), index(sin));
        let mut best = (f64::INFINITY, usize::MAX);
        for j in (cj - 3).max(0)..(cj + 4).min(side) {
            for i in (ci - 3).max(0)..(ci + 4).min(side) {
                let c = (j * side + i) as usize;
                if grid.kinds[c] != CellKind::Interior {
                    continue;
                }
                let (x, y) = grid.centre(c);
                let d = (x - cos).hypot(y - sin);
                if d < best.0 {
                    best = (d, c);
                }
            }
        }
        if best.1 == usize::MAX {
            return Err(Error::invalid("no free cell next to the circle"));
        }
        let one = measure(start, step).clamp(0.0, step);
        linear[best.1] += step - 2.0 * one;
        constant += one;
    }
    Ok(CircleWeights { linear, constant })
}

/// How the jump between the field and the trace is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    /// `int_S |u - f| dH^1`, measured along the circle.
    #[default]
    Circle,
    /// Lattice differences between free cells and band cells.
    Band,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub tau: f64,
    pub sigma: f64,
    /// Relative energy change that counts as stagnation.
    pub stagnation_tol: f64,
    /// Iterations between stagnation checks.
    pub check_every: usize,
    pub coupling: Coupling,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let step = 0.99 / 8f64.sqrt();
        SolverConfig {
            max_iterations: 20_000,
            tau: step,
            sigma: step,
            stagnation_tol: 1e-7,
            check_every: 50,
            coupling: Coupling::Circle,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.check_every == 0 {
            return Err(Error::invalid("iteration counts must be positive"));
        }
        if !(self.tau > 0.0 && self.sigma > 0.0) {
            return Err(Error::invalid("step sizes must be positive"));
        }
        // the discrete gradient has operator norm at most sqrt(8)
        if !(self.tau * self.sigma * 8.0 < 1.0) {
            return Err(Error::invalid("step sizes violate tau * sigma * 8 < 1"));
        }
        if !(self.stagnation_tol >= 0.0) {
            return Err(Error::invalid("stagnation tolerance must be nonnegative"));
        }
        Ok(())
    }
}

/// Values on a square grid, row-major with `y` increasing by row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub side: usize,
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.side + i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub field: GridField,
    /// Discrete total variation of `field`.
    pub energy: f64,
    /// `int |u|` over the free cells.
    pub l1_mass: f64,
    pub iterations: usize,
    /// Relative energy change over the last check interval.
    pub residual: f64,
    /// Primal-dual gap of the final iterate, in energy units.
    pub gap: f64,
    pub converged: bool,
}

/// Precomputed operator structure shared by the iterations.
struct Operator {
    side: usize,
    /// Whether cell `c` moves.
    free: Vec<bool>,
    /// Whether the difference `c -> c + 1` counts.
    active_x: Vec<bool>,
    /// Whether the difference `c -> c + side` counts.
    active_y: Vec<bool>,
    /// Rows that contain any participating cell.
    rows: (usize, usize),
}

impl Operator {
    fn new(grid: &DiskGrid, coupling: Coupling) -> Self {
        let n = grid.side;
        let takes_part = |c: usize| match coupling {
            Coupling::Circle => grid.kinds[c] == CellKind::Interior,
            Coupling::Band => grid.kinds[c] != CellKind::Outside,
        };
        let free: Vec<bool> = grid.kinds.iter().map(|k| *k == CellKind::Interior).collect();
        let mut active_x = alloc::vec![false; n * n];
        let mut active_y = alloc::vec![false; n * n];
        let (mut lo, mut hi) = (n, 0);
        for c in 0..n * n {
            let (i, j) = (c % n, c / n);
            if takes_part(c) {
                lo = lo.min(j);
                hi = hi.max(j);
            }
            if i + 1 < n {
                let d = c + 1;
                active_x[c] = takes_part(c) && takes_part(d) && (free[c] || free[d]);
            }
            if j + 1 < n {
                let d = c + n;
                active_y[c] = takes_part(c) && takes_part(d) && (free[c] || free[d]);
            }
        }
        Operator {
            side: n,
            free,
            active_x,
            active_y,
            rows: (lo, hi + 1),
        }
    }

    /// Unscaled total variation `sum sqrt(dx^2 + dy^2)`.
    fn variation(&self, u: &[f64]) -> f64 {
        let n = self.side;
        let mut total = 0.0;
        for c in self.rows.0 * n..self.rows.1 * n {
            let gx = if self.active_x[c] { u[c + 1] - u[c] } else { 0.0 };
            let gy = if self.active_y[c] { u[c + n] - u[c] } else { 0.0 };
            total += gx.hypot(gy);
        }
        total
    }

    /// `K^T p` at cell `c`; inactive differences always carry zero duals.
    fn adjoint(&self, px: &[f64], py: &[f64], c: usize) -> f64 {
        let n = self.side;
        let mut d = -px[c] - py[c];
        if c >= 1 {
            d += px[c - 1];
        }
        if c >= n {
            d += py[c - n];
        }
        d
    }

    /// Lower bound from the dual iterate: `min over admissible u of
    /// <Ku, p> + <linear, u>`.
    fn dual_value(&self, u: &[f64], px: &[f64], py: &[f64], linear: &[f64]) -> f64 {
        let n = self.side;
        let mut total = 0.0;
        for c in self.rows.0 * n..self.rows.1 * n {
            let a = self.adjoint(px, py, c) + linear[c];
            if self.free[c] {
                total += a.min(0.0);
            } else {
                total += a * u[c];
            }
        }
        total
    }
}

pub fn solve_tv(grid: &DiskGrid, trace: &TraceData, config: &SolverConfig) -> Result<SolveResult> {
    config.validate()?;
    if trace.values.len() != grid.band_count() {
        return Err(Error::invalid("trace does not match the grid band"));
    }
    let op = Operator::new(grid, config.coupling);
    let n = op.side;
    let cells = n * n;
    let h = grid.h;
    // the circle term in units of the scaled objective `energy / h`
    let (linear, offset) = match config.coupling {
        Coupling::Circle => {
            let w = circle_weights(grid, trace)?;
            (w.linear.iter().map(|l| l / h).collect(), w.constant / h)
        }
        Coupling::Band => (alloc::vec![0.0; cells], 0.0),
    };
    let objective = |u: &[f64]| -> f64 {
        let jump: f64 = linear.iter().zip(u).map(|(l, v)| l * v).sum();
        op.variation(u) + jump + offset
    };
    let mut u = alloc::vec![0.0; cells];
    for ((c, _), v) in grid.band().zip(&trace.values) {
        u[c] = f64::from(*v);
    }
    let mut ubar = u.clone();
    let mut px = alloc::vec![0.0; cells];
    let mut py = alloc::vec![0.0; cells];
    let (tau, sigma) = (config.tau, config.sigma);
    let span = op.rows.0 * n..op.rows.1 * n;

    let mut last = objective(&u);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        for c in span.clone() {
            let ax = op.active_x[c];
            let ay = op.active_y[c];
            if !(ax || ay) {
                continue;
            }
            let mut qx = px[c];
            let mut qy = py[c];
            if ax {
                qx += sigma * (ubar[c + 1] - ubar[c]);
            }
            if ay {
                qy += sigma * (ubar[c + n] - ubar[c]);
            }
            let norm = qx.hypot(qy);
            if norm > 1.0 {
                qx /= norm;
                qy /= norm;
            }
            px[c] = qx;
            py[c] = qy;
        }
        for c in span.clone() {
            if !op.free[c] {
                continue;
            }
            let old = u[c];
            let new = (old - tau * (op.adjoint(&px, &py, c) + linear[c])).clamp(0.0, 1.0);
            u[c] = new;
            ubar[c] = 2.0 * new - old;
        }
        iterations += 1;
        if iterations % config.check_every == 0 {
            let current = objective(&u);
            residual = (current - last).abs() / last.max(f64::MIN_POSITIVE);
            last = current;
            if residual < config.stagnation_tol {
                converged = true;
                break;
            }
        }
    }

    let scaled = objective(&u);
    let gap = h * (scaled - op.dual_value(&u, &px, &py, &linear) - offset).max(0.0);
    let l1_mass = u
        .iter()
        .zip(&op.free)
        .filter(|(_, f)| **f)
        .map(|(v, _)| v.abs())
        .sum::<f64>()
        * h
        * h;
    Ok(SolveResult {
        field: GridField { side: n, h, values: u },
        energy: h * scaled,
        l1_mass,
        iterations,
        residual,
        gap,
        converged,
    })
}

/// Total chord length of `C_n`, `2^{n+1} sin(theta_n / 2)`.
pub fn chord_sum_reference(n: usize) -> f64 {
    2f64.powi(n as i32 + 1) * (0.5 * theta(n)).sin()
}

/// Total area of the circular segments cut off by the chords of `C_n`,
/// `2^n (theta_n - sin theta_n) / 2`.
pub fn segment_mass_reference(n: usize) -> f64 {
    2f64.powi(n as i32) * segment_area(theta(n))
}

/// One row of the non-attainment experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub resolution: usize,
    pub energy: f64,
    pub chord_sum_reference: f64,
    pub k_n: f64,
    pub k_inf: f64,
    pub l1_mass: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Results of the experiment, plus the field of every solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTable {
    pub rows: Vec<ExperimentRow>,
    pub fields: Vec<GridField>,
}

impl ExperimentTable {
    /// `E_0 > E_1 > ...`.
    pub fn energy_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].energy < w[0].energy)
    }

    /// `E_n > K_inf - margin` for every row.
    pub fn energies_above(&self, margin: f64) -> bool {
        self.rows.iter().all(|r| r.energy > r.k_inf - margin)
    }

    /// `l1_mass` non-increasing.
    pub fn mass_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].l1_mass <= w[0].l1_mass)
    }
}

/// One solve with the trace of `C_n`, recorded next to its references.
pub fn experiment_row(grid: &DiskGrid, n: usize, config: &SolverConfig) -> Result<(ExperimentRow, GridField)> {
    if n > MAX_EXPERIMENT_DEPTH {
        return Err(Error::DepthCap {
            depth: n,
            cap: MAX_EXPERIMENT_DEPTH,
        });
    }
    let trace = sample_trace(grid, n)?;
    let result = solve_tv(grid, &trace, config)?;
    let row = ExperimentRow {
        n,
        resolution: grid.resolution,
        energy: result.energy,
        chord_sum_reference: chord_sum_reference(n),
        k_n: cantor_measure(n),
        k_inf: cantor_measure_limit(1e-15)?,
        l1_mass: result.l1_mass,
        iterations: result.iterations,
        converged: result.converged,
    };
    Ok((row, result.field))
}

/// Solves with the trace of `C_n` for every `n <= n_max` on one grid.
pub fn nonattainment_experiment(n_max: usize, resolution: usize, config: &SolverConfig) -> Result<ExperimentTable> {
    if n_max > MAX_EXPERIMENT_DEPTH {
        return Err(Error::DepthCap {
            depth: n_max,
            cap: MAX_EXPERIMENT_DEPTH,
        });
    }
    let grid = build_grid(resolution, default_band_width(resolution))?;
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut fields = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (row, field) = experiment_row(&grid, n, config)?;
        rows.push(row);
        fields.push(field);
    }
    Ok(ExperimentTable { rows, fields })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::arcs;
    use core::f64::consts::PI;

    #[test]
    fn grid_area_and_band() {
        let g = build_grid(256, default_band_width(256)).unwrap();
        let want = PI * 128.0 * 128.0;
        let got = g.interior_count() as f64;
        assert!(((got - want) / want).abs() < 0.01);
        assert!((got * g.h() * g.h() - PI).abs() < 10.0 / 256.0);
        for (c, angle) in g.band() {
            let (x, y) = g.centre(c);
            let d = (x - angle.cos()).hypot(y - angle.sin());
            assert!(d <= g.band_width() + 1e-12);
        }
        assert!(g.interior_connected());
    }

    #[test]
    fn band_covers_every_direction() {
        let g = build_grid(128, default_band_width(128)).unwrap();
        let tags: Vec<f64> = g.band().map(|(_, a)| a).collect();
        for i in 0..720 {
            let a = -PI + 2.0 * PI * i as f64 / 720.0;
            let near = tags.iter().any(|t| {
                let d = (t - a).rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d) <= 2.0 * PI / 128.0
            });
            assert!(near, "angle {a}");
        }
    }

    #[test]
    fn grid_preconditions() {
        assert!(build_grid(64, 2.0 / 64.0).is_ok());
        assert!(build_grid(32, 0.1).is_err());
        assert!(build_grid(64, 0.01).is_err());
        assert!(build_grid(64, f64::NAN).is_err());
    }

    #[test]
    fn trace_values() {
        let g = build_grid(256, default_band_width(256)).unwrap();
        let t0 = sample_trace(&g, 0).unwrap();
        for ((_, a), v) in g.band().zip(&t0.values) {
            let inside = (a - PI / 2.0).abs() <= 0.5;
            assert_eq!(*v == 1, inside, "angle {a}");
        }
        let t1 = sample_trace(&g, 1).unwrap();
        let gap = arcs(1).unwrap();
        let (lo, hi) = (gap[0].end_angle(), gap[1].start_angle());
        assert!((hi - lo - 0.5).abs() < 1e-12);
        for ((_, a), v) in g.band().zip(&t1.values) {
            if a > lo + 1e-9 && a < hi - 1e-9 {
                assert_eq!(*v, 0);
            }
        }
        for n in 0..4 {
            let t = sample_trace(&g, n).unwrap();
            let frac = t.ones() as f64 / t.values.len() as f64;
            let want = cantor_measure(n) / (2.0 * PI);
            assert!((frac - want).abs() < 0.01 * want + 0.002, "n = {n}");
        }
        assert!(sample_trace(&g, 13).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            tau: 1.0,
            sigma: 1.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn constant_trace_gives_constant_field() {
        let g = build_grid(64, default_band_width(64)).unwrap();
        let t = constant_trace(&g, 1);
        let config = SolverConfig {
            max_iterations: 4000,
            ..SolverConfig::default()
        };
        let r = solve_tv(&g, &t, &config).unwrap();
        assert!(r.energy < 1e-6, "{}", r.energy);
        for (v, k) in r.field.values.iter().zip(g.kinds()) {
            if *k == CellKind::Interior {
                assert!((v - 1.0).abs() < 1e-5);
            }
        }
        let zero = solve_tv(&g, &constant_trace(&g, 0), &config).unwrap();
        assert_eq!(zero.energy, 0.0);
        assert!(zero.converged);
    }

    #[test]
    fn references() {
        assert!((chord_sum_reference(0) - 0.958_851_077_208_406).abs() < 1e-15);
        assert!((chord_sum_reference(1) - 4.0 * 0.125f64.sin()).abs() < 1e-15);
        assert!((chord_sum_reference(3) - 16.0 * (21.0f64 / 1024.0).sin()).abs() < 1e-15);
        let k_inf = cantor_measure_limit(1e-15).unwrap();
        for n in 0..30 {
            let c = chord_sum_reference(n);
            // K_n - chord is below one ulp past n ~ 18
            assert!(c > k_inf && c <= cantor_measure(n));
            if n <= 15 {
                assert!(c < cantor_measure(n));
            }
            assert!(chord_sum_reference(n + 1) < c);
        }
        assert!((chord_sum_reference(30) - k_inf).abs() < 1e-9);
        assert!((segment_mass_reference(0) - 0.5 * (1.0 - 1f64.sin())).abs() < 1e-16);
        assert!((segment_mass_reference(2) - 2.0 * (0.09375 - 0.09375f64.sin())).abs() < 1e-16);
    }

    #[test]
    fn circle_weights_carry_the_trace_measure() {
        let g = build_grid(128, default_band_width(128)).unwrap();
        for n in 0..8 {
            for rotation in [0.0, 1.3, -2.9] {
                let t = sample_trace_rotated(&g, n, rotation).unwrap();
                let w = circle_weights(&g, &t).unwrap();
                assert!((w.constant - cantor_measure(n)).abs() < 1e-12, "n = {n}");
                let total: f64 = w.linear.iter().sum();
                assert!((total - (2.0 * PI - 2.0 * cantor_measure(n))).abs() < 1e-11);
            }
        }
        let w = circle_weights(&g, &constant_trace(&g, 1)).unwrap();
        assert!((w.constant - 2.0 * PI).abs() < 1e-12);
        for (l, k) in w.linear.iter().zip(g.kinds()) {
            assert!(*k == CellKind::Interior || *l == 0.0);
        }
    }

    #[test]
    fn trace_profile_values() {
        let g = build_grid(64, default_band_width(64)).unwrap();
        let t = sample_trace_rotated(&g, 2, 0.5).unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.value_at(PI / 2.0 + 0.5), 0);
        assert_eq!(t.value_at(PI / 2.0), 1);
        for ((_, a), v) in g.band().zip(&t.values) {
            assert_eq!(t.value_at(a), *v);
        }
        assert_eq!(constant_trace(&g, 1).value_at(0.3), 1);
    }

    #[test]
    fn band_coupling_constant_traces() {
        let g = build_grid(64, default_band_width(64)).unwrap();
        let config = SolverConfig {
            max_iterations: 4000,
            coupling: Coupling::Band,
            ..SolverConfig::default()
        };
        let r = solve_tv(&g, &constant_trace(&g, 1), &config).unwrap();
        assert!(r.energy < 1e-6, "{}", r.energy);
        let t = sample_trace(&g, 0).unwrap();
        let r = solve_tv(&g, &t, &config).unwrap();
        assert!(r.energy > 0.9 && r.energy < 1.2, "{}", r.energy);
    }

    #[test]
    fn zero_field_is_certified_for_deep_traces() {
        // below the lattice scale the trace competitor is optimal
        let g = build_grid(128, default_band_width(128)).unwrap();
        let t = sample_trace(&g, 3).unwrap();
        let r = solve_tv(&g, &t, &SolverConfig::default()).unwrap();
        assert!((r.energy - cantor_measure(3)).abs() < 1e-9);
        assert!(r.gap < 1e-9);
    }

    #[test]
    fn small_solve_respects_bounds() {
        let g = build_grid(64, default_band_width(64)).unwrap();
        let t = sample_trace(&g, 0).unwrap();
        let r = solve_tv(&g, &t, &SolverConfig::default()).unwrap();
        assert!(r.field.values.iter().all(|v| (-1e-6..=1.0 + 1e-6).contains(v)));
        assert!(r.energy > 0.0 && r.energy < 1.2);
        assert!(r.gap >= 0.0);
    }
}

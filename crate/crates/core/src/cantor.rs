//! The fat Cantor set `C_inf` on the unit circle.
//!
//! `C_0` is the closed arc of length one centred at the top of the circle.
//! Every arc of `C_n` has length `theta(n)`; `C_{n+1}` removes an open gap of
//! length `theta(n) / 2^(n+1)` from the centre of each arc, which leaves two
//! closed arcs of length `theta(n+1)`.
//!
//! Angles are handled internally as offsets from `pi/2`, so the construction
//! is symmetric about zero; [`Arc::start_angle`] and [`Arc::end_angle`]
//! convert to absolute radians.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Largest depth for which [`arcs`] enumerates `2^n` arcs.
pub const ARC_ENUMERATION_CAP: usize = 40;

/// Largest depth accepted by address-based queries.
pub const ADDRESS_DEPTH_CAP: usize = 1000;

/// Angular slack when deciding whether an angle sits on an arc endpoint.
///
/// Absolute angles near `pi/2 +- 1/2` carry about `2e-16` of rounding, so an
/// endpoint passed in radians is recovered only to that accuracy.
pub const ENDPOINT_SLACK: f64 = 1e-15;

fn halving_factor(i: usize) -> f64 {
    // 1 - 2^-i, exact in binary for i <= 53
    1.0 - 0.5f64.powi(i.min(1100) as i32)
}

/// Arc length of every arc in `C_n`: `2^-n * prod_{i=1..n} (1 - 2^-i)`.
pub fn theta(n: usize) -> f64 {
    (1..=n).fold(1.0, |t, i| t * 0.5 * halving_factor(i))
}

/// Total length `K_n = prod_{i=1..n} (1 - 2^-i)` of `C_n`.
pub fn cantor_measure(n: usize) -> f64 {
    (1..=n).fold(1.0, |k, i| k * halving_factor(i))
}

/// Length of the open gap removed from the centre of each depth-`n` arc
/// when passing to depth `n + 1`.
pub fn gap_length(n: usize) -> f64 {
    theta(n) * 0.5f64.powi(n as i32 + 1)
}

/// Total length of all gaps removed while building `C_1, ..., C_n`.
pub fn removed_length(n: usize) -> f64 {
    let mut total = 0.0;
    let mut t = 1.0;
    let mut count = 1.0;
    for k in 0..n {
        total += count * t * 0.5f64.powi(k as i32 + 1);
        t *= 0.5 * halving_factor(k + 1);
        count *= 2.0;
    }
    total
}

/// `K_N` for the smallest `N` with `K_N - K_{N+32} < tolerance`.
///
/// The sequence decreases to `K_inf ~ 0.2887881`, so the result is an upper
/// bracket of the limit within roughly `tolerance`.
pub fn cantor_measure_limit(tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut table = MeasureTable::new(64);
    let mut n = 0;
    loop {
        if table.max_depth() < n + 32 {
            table = MeasureTable::new(2 * (n + 32));
        }
        let k = table.measure(n);
        if k - table.measure(n + 32) < tolerance {
            return Ok(k);
        }
        n += 1;
    }
}

/// Cached running products for `theta(n)` and `K_n`, `0 <= n <= max_depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureTable {
    theta: Vec<f64>,
    measure: Vec<f64>,
}

impl MeasureTable {
    pub fn new(max_depth: usize) -> Self {
        let mut theta = Vec::with_capacity(max_depth + 1);
        let mut measure = Vec::with_capacity(max_depth + 1);
        let (mut t, mut k) = (1.0, 1.0);
        theta.push(t);
        measure.push(k);
        for i in 1..=max_depth {
            let f = halving_factor(i);
            t *= 0.5 * f;
            k *= f;
            theta.push(t);
            measure.push(k);
        }
        MeasureTable { theta, measure }
    }

    pub fn max_depth(&self) -> usize {
        self.theta.len() - 1
    }

    /// Panics if `n > max_depth()`.
    pub fn theta(&self, n: usize) -> f64 {
        self.theta[n]
    }

    pub fn measure(&self, n: usize) -> f64 {
        self.measure[n]
    }
}

/// One step down the binary arc tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// The counterclockwise child.
    Left,
    /// The clockwise child.
    Right,
}

/// Identifies an arc of `C_n` by the branch choices taken from `C_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ArcAddress {
    path: Vec<Branch>,
}

impl ArcAddress {
    /// The address of `C_0`.
    pub fn root() -> Self {
        ArcAddress { path: Vec::new() }
    }

    pub fn from_path(path: Vec<Branch>) -> Result<Self> {
        if path.len() > ADDRESS_DEPTH_CAP {
            return Err(Error::DepthCap {
                depth: path.len(),
                cap: ADDRESS_DEPTH_CAP,
            });
        }
        Ok(ArcAddress { path })
    }

    /// Address of the `index`-th arc of `C_depth` in counterclockwise order.
    pub fn from_index(depth: usize, index: u64) -> Result<Self> {
        if depth > 63 {
            return Err(Error::DepthCap { depth, cap: 63 });
        }
        if index >> depth != 0 {
            return Err(Error::invalid("arc index out of range for depth"));
        }
        let path = (0..depth)
            .map(|level| {
                let bit = (index >> (depth - 1 - level)) & 1;
                if bit == 1 {
                    Branch::Left
                } else {
                    Branch::Right
                }
            })
            .collect();
        Ok(ArcAddress { path })
    }

    /// Position of this arc among the arcs of its depth, counterclockwise.
    pub fn index(&self) -> u64 {
        self.path
            .iter()
            .fold(0u64, |acc, b| (acc << 1) | u64::from(*b == Branch::Left))
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn path(&self) -> &[Branch] {
        &self.path
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn child(&self, branch: Branch) -> Result<Self> {
        let mut path = self.path.clone();
        path.push(branch);
        ArcAddress::from_path(path)
    }

    /// `(Chi_L, Chi_R)`.
    pub fn children(&self) -> Result<(Self, Self)> {
        Ok((self.child(Branch::Left)?, self.child(Branch::Right)?))
    }

    pub fn parent(&self) -> Result<Self> {
        if self.is_root() {
            return Err(Error::RootHasNoParent);
        }
        Ok(ArcAddress {
            path: self.path[..self.path.len() - 1].to_vec(),
        })
    }

    /// `Par^k`, with `Par^0` the address itself.
    pub fn ancestor(&self, k: usize) -> Result<Self> {
        if k > self.depth() {
            return Err(Error::RootHasNoParent);
        }
        Ok(ArcAddress {
            path: self.path[..self.path.len() - k].to_vec(),
        })
    }

    /// The branch that leads from the parent to this arc.
    pub fn last_branch(&self) -> Option<Branch> {
        self.path.last().copied()
    }
}

/// A closed arc of the unit circle, stored as offsets from `pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    lo: f64,
    hi: f64,
}

impl Arc {
    /// The arc `[pi/2 + lo, pi/2 + hi]`.
    pub fn from_offsets(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Arc { lo, hi }
    }

    pub fn from_angles(start: f64, end: f64) -> Self {
        Arc::from_offsets(start - FRAC_PI_2, end - FRAC_PI_2)
    }

    /// `C_0`.
    pub fn root() -> Self {
        Arc { lo: -0.5, hi: 0.5 }
    }

    pub fn lo_offset(&self) -> f64 {
        self.lo
    }

    pub fn hi_offset(&self) -> f64 {
        self.hi
    }

    pub fn mid_offset(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn start_angle(&self) -> f64 {
        FRAC_PI_2 + self.lo
    }

    pub fn end_angle(&self) -> f64 {
        FRAC_PI_2 + self.hi
    }

    pub fn mid_angle(&self) -> f64 {
        FRAC_PI_2 + self.mid_offset()
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Children of a depth-`depth` arc, `(counterclockwise, clockwise)`.
    ///
    /// The left child keeps the counterclockwise endpoint bit for bit and the
    /// right child the clockwise one.
    pub fn split(&self, child_length: f64) -> (Arc, Arc) {
        (
            Arc {
                lo: self.hi - child_length,
                hi: self.hi,
            },
            Arc {
                lo: self.lo,
                hi: self.lo + child_length,
            },
        )
    }

    pub fn contains_offset(&self, offset: f64) -> bool {
        offset >= self.lo - ENDPOINT_SLACK && offset <= self.hi + ENDPOINT_SLACK
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        self.contains_offset(wrap_offset(angle))
    }

    pub fn is_disjoint_from(&self, other: &Arc) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn contains_arc(&self, other: &Arc) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Offset from `pi/2` of `angle`, wrapped into `(-pi, pi]`.
pub fn wrap_offset(angle: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut o = angle - FRAC_PI_2;
    if o > PI || o <= -PI {
        o -= TAU * ((o + PI) / TAU).floor();
        if o <= -PI {
            o += TAU;
        }
    }
    o
}

/// The arc addressed by `addr`.
pub fn resolve(addr: &ArcAddress) -> Arc {
    let mut arc = Arc::root();
    let mut t = 1.0;
    for (level, branch) in addr.path().iter().enumerate() {
        t *= 0.5 * halving_factor(level + 1);
        let (left, right) = arc.split(t);
        arc = match branch {
            Branch::Left => left,
            Branch::Right => right,
        };
    }
    arc
}

/// The `2^n` arcs of `C_n`, counterclockwise.
pub fn arcs(n: usize) -> Result<Vec<Arc>> {
    if n > ARC_ENUMERATION_CAP {
        return Err(Error::DepthCap {
            depth: n,
            cap: ARC_ENUMERATION_CAP,
        });
    }
    let table = MeasureTable::new(n);
    let mut level = alloc::vec![Arc::root()];
    for depth in 1..=n {
        let t = table.theta(depth);
        let mut next = Vec::with_capacity(level.len() * 2);
        for arc in &level {
            let (left, right) = arc.split(t);
            next.push(right);
            next.push(left);
        }
        level = next;
    }
    Ok(level)
}

/// Where an angle sits relative to `C_0 ⊃ C_1 ⊃ ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// The angle lies on an arc of `C_n`.
    InsideAtDepth(usize),
    /// The angle lies in a gap opened while building `C_k`; `k = 0` means
    /// it is outside `C_0`.
    RemovedAtStage(usize),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::InsideAtDepth(_))
    }
}

/// Membership of an offset from `pi/2`.
pub fn membership_offset(offset: f64, depth: usize) -> Membership {
    let mut arc = Arc::root();
    if !arc.contains_offset(offset) {
        return Membership::RemovedAtStage(0);
    }
    let mut t = 1.0;
    for level in 1..=depth {
        t *= 0.5 * halving_factor(level);
        let (left, right) = arc.split(t);
        arc = if left.contains_offset(offset) {
            left
        } else if right.contains_offset(offset) {
            right
        } else {
            return Membership::RemovedAtStage(level);
        };
    }
    Membership::InsideAtDepth(depth)
}

pub fn membership(angle: f64, depth: usize) -> Membership {
    membership_offset(wrap_offset(angle), depth)
}

/// `chi_{C_n}(angle)`.
pub fn trace_value(angle: f64, depth: usize) -> u8 {
    u8::from(membership(angle, depth).is_inside())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    // Partial products of prod (1 - 2^-i), evaluated with 30-digit
    // arithmetic until they stop changing.
    const K_INF: f64 = 0.288_788_095_086_602_42;

    #[test]
    fn theta_hand_values() {
        assert_eq!(theta(0), 1.0);
        assert_eq!(theta(1), 0.25);
        assert_eq!(theta(2), 0.09375);
        assert_eq!(theta(3), 21.0 / 512.0);
    }

    #[test]
    fn measure_hand_values() {
        assert_eq!(cantor_measure(0), 1.0);
        assert_eq!(cantor_measure(1), 0.5);
        assert_eq!(cantor_measure(2), 0.375);
        assert_eq!(cantor_measure(3), 0.328125);
    }

    #[test]
    fn theta_scales_to_measure() {
        for n in 0..=30 {
            let lhs = 2f64.powi(n as i32) * theta(n);
            let rhs = cantor_measure(n);
            assert!(((lhs - rhs) / rhs).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn measure_decreases_and_stays_above_bound() {
        for n in 0..64 {
            // 1 - 2^-n rounds to 1 once n passes the mantissa width
            if n < 52 {
                assert!(cantor_measure(n + 1) < cantor_measure(n));
            }
            assert!(cantor_measure(n + 1) <= cantor_measure(n));
            assert!(cantor_measure(n + 1) > 0.288);
        }
    }

    #[test]
    fn table_matches_free_functions() {
        let table = MeasureTable::new(50);
        for n in 0..=50 {
            assert_eq!(table.theta(n), theta(n));
            assert_eq!(table.measure(n), cantor_measure(n));
        }
        // no overflow or underflow trouble far out
        let deep = MeasureTable::new(900);
        assert!(deep.theta(900) > 0.0);
        assert!((deep.measure(900) - K_INF).abs() < 1e-15);
    }

    #[test]
    fn limit_values() {
        let tight = cantor_measure_limit(1e-12).unwrap();
        assert!((tight - K_INF).abs() < 1e-12);
        assert!(tight > 0.2887880 && tight < 0.2887881);
        let loose = cantor_measure_limit(0.5).unwrap();
        assert!((K_INF..=1.0).contains(&loose));
        let mid = cantor_measure_limit(1e-6).unwrap();
        assert!((mid - tight).abs() < 1e-6);
        assert!(cantor_measure_limit(0.0).is_err());
        assert!(cantor_measure_limit(f64::NAN).is_err());
    }

    #[test]
    fn bookkeeping_identity() {
        for n in 0..=40 {
            let total = cantor_measure(n) + removed_length(n);
            assert!((total - 1.0).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn first_levels_of_arcs() {
        let a0 = arcs(0).unwrap();
        assert_eq!(a0.len(), 1);
        assert!((a0[0].start_angle() - (PI / 2.0 - 0.5)).abs() < 1e-15);
        assert!((a0[0].end_angle() - (PI / 2.0 + 0.5)).abs() < 1e-15);

        let a1 = arcs(1).unwrap();
        assert_eq!(a1.len(), 2);
        assert_eq!((a1[0].lo_offset(), a1[0].hi_offset()), (-0.5, -0.25));
        assert_eq!((a1[1].lo_offset(), a1[1].hi_offset()), (0.25, 0.5));

        let a2 = arcs(2).unwrap();
        assert_eq!(a2.len(), 4);
        for a in &a2 {
            assert!((a.length() - 3.0 / 32.0).abs() < 1e-15);
        }
        assert!(matches!(arcs(41), Err(Error::DepthCap { .. })));
    }

    #[test]
    fn arcs_are_sorted_disjoint_and_measure_correctly() {
        for n in 0..=14 {
            let list = arcs(n).unwrap();
            assert_eq!(list.len(), 1 << n);
            let total: f64 = list.iter().map(Arc::length).sum();
            assert!((total - cantor_measure(n)).abs() < 1e-12);
            for w in list.windows(2) {
                assert!(w[0].hi_offset() < w[1].lo_offset());
            }
            for a in &list {
                assert!((a.length() - theta(n)).abs() < 1e-12);
                assert!(a.lo_offset() >= -0.5 && a.hi_offset() <= 0.5);
            }
        }
    }

    #[test]
    fn addresses_follow_enumeration_order() {
        for n in 0..=8 {
            let list = arcs(n).unwrap();
            for (i, arc) in list.iter().enumerate() {
                let addr = ArcAddress::from_index(n, i as u64).unwrap();
                assert_eq!(addr.index(), i as u64);
                assert_eq!(resolve(&addr), *arc);
            }
        }
    }

    #[test]
    fn parent_child_relations() {
        let root = ArcAddress::root();
        let (left, right) = root.children().unwrap();
        assert_eq!(left.parent().unwrap(), root);
        assert_eq!(resolve(&root), Arc::root());
        assert_eq!(resolve(&left), Arc::from_offsets(0.25, 0.5));
        assert_eq!(resolve(&right), Arc::from_offsets(-0.5, -0.25));
        assert_eq!(root.parent(), Err(Error::RootHasNoParent));
    }

    #[test]
    fn children_nest_with_prescribed_gap() {
        // every address down to depth 12
        let mut frontier = alloc::vec![ArcAddress::root()];
        for depth in 0..12 {
            let mut next = Vec::new();
            for addr in &frontier {
                let parent = resolve(addr);
                let (l, r) = addr.children().unwrap();
                let (la, ra) = (resolve(&l), resolve(&r));
                assert!(parent.contains_arc(&la) && parent.contains_arc(&ra));
                assert!(la.is_disjoint_from(&ra));
                assert_eq!(la.hi_offset(), parent.hi_offset());
                assert_eq!(ra.lo_offset(), parent.lo_offset());
                let gap = la.lo_offset() - ra.hi_offset();
                assert!((gap - gap_length(depth)).abs() < 1e-15);
                next.push(l);
                next.push(r);
            }
            frontier = next;
        }
    }

    #[test]
    fn deep_addresses_resolve() {
        let addr = ArcAddress::from_path(alloc::vec![Branch::Left; 999]).unwrap();
        let arc = resolve(&addr);
        assert!(arc.length() >= 0.0);
        assert_eq!(arc.hi_offset(), 0.5);
        assert!(ArcAddress::from_path(alloc::vec![Branch::Left; 1001]).is_err());
    }

    #[test]
    fn membership_examples() {
        for depth in 1..10 {
            assert_eq!(membership(PI / 2.0, depth), Membership::RemovedAtStage(1));
        }
        for depth in 0..20 {
            assert_eq!(membership(PI / 2.0 - 0.5, depth), Membership::InsideAtDepth(depth));
        }
        assert_eq!(membership(0.0, 0), Membership::RemovedAtStage(0));
        assert_eq!(trace_value(PI / 2.0, 1), 0);
        assert_eq!(trace_value(PI / 2.0 - 0.5, 5), 1);
        assert_eq!(trace_value(0.0, 0), 0);
        // wrapping
        assert_eq!(membership(PI / 2.0 + 0.4 + 2.0 * PI, 0), Membership::InsideAtDepth(0));
    }

    #[test]
    fn membership_is_stable_and_monotone() {
        for i in 0..2000 {
            let angle = PI / 2.0 - 0.6 + 1.2 * (i as f64 + 0.37) / 2000.0;
            let mut removed_at = None;
            for depth in 0..16 {
                let m = membership(angle, depth);
                match (removed_at, m) {
                    (Some(k), Membership::RemovedAtStage(j)) => assert_eq!(k, j),
                    (Some(_), Membership::InsideAtDepth(_)) => {
                        panic!("removed angle came back")
                    }
                    (None, Membership::RemovedAtStage(j)) => {
                        assert!(j <= depth);
                        removed_at = Some(j);
                    }
                    (None, Membership::InsideAtDepth(d)) => assert_eq!(d, depth),
                }
            }
        }
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let list = arcs(6).unwrap();
        for i in 0..5000 {
            let offset = -0.5 + (i as f64 + 0.5) / 5000.0;
            let inside = list.iter().any(|a| a.contains_offset(offset));
            assert_eq!(membership_offset(offset, 6).is_inside(), inside);
        }
    }
}

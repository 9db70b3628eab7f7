//! The `verify` suites: every construction invariant and inequality check,
//! collected into one JSON report.

use std::f64::consts::PI;

use leastgrad_core::barrier::{Barrier, GEOMETRY_TOL};
use leastgrad_core::cantor::{
    arcs, cantor_measure, cantor_measure_limit, gap_length, removed_length, theta, ArcAddress,
};
use leastgrad_core::chain::{aggregate_check, chain_inequality_check, chord_lengths_consistent, ChainOptions};
use leastgrad_core::fields::{Parabola, Polynomial, SineSeries};
use leastgrad_core::lemmas::{
    lemma31_collected_bound, lemma31_dot, lemma31_short_bound, poincare_check, sqrt_inequality_check,
    triangles_disjoint, IntegrandPair, RectangleField, Relation, Verdict,
};
use leastgrad_core::quadrature::Quadrature;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Suite;
use crate::error::Result;
use crate::number::{fmt17, F17};

pub const REPORT_FORMAT: &str = "leastgrad-verify/1";

/// Random trials per suite.
pub const POINCARE_TRIALS: usize = 500;
pub const SQRT_TRIALS: usize = 1000;
pub const CHAIN_FIELDS: usize = 200;
pub const REGROUPING_FIELDS: usize = 8;
pub const ANGLE_TRIALS: usize = 200;

const POLY_DEGREE: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// SHA-256 of the canonical text of the inputs.
    pub inputs_hash: String,
    pub lhs: F17,
    pub rhs: F17,
    pub margin: F17,
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    /// Observations that do not affect the outcome.
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub provenance: String,
    pub passed: usize,
    pub failed: usize,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn holds(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| s.checks.iter()).filter(|c| !c.holds)
    }
}

fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::AtLeast => "at_least",
        Relation::AtMost => "at_most",
        Relation::Equal => "equal",
    }
}

fn digest(inputs: &str) -> String {
    hex::encode(Sha256::digest(inputs.as_bytes()))
}

fn floats(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(",")
}

/// Collects checks for one suite.
struct Recorder {
    suite: Suite,
    notes: Vec<String>,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder {
            suite,
            notes: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn verdict(&mut self, name: impl Into<String>, inputs: &str, v: Verdict) {
        let name = name.into();
        self.checks.push(Check {
            inputs_hash: digest(&format!("{}:{name}:{inputs}", self.suite.name())),
            name,
            lhs: F17(v.lhs),
            rhs: F17(v.rhs),
            margin: F17(v.margin),
            relation: relation_name(v.relation).to_string(),
            holds: v.holds,
        });
    }

    fn equal(&mut self, name: impl Into<String>, inputs: &str, lhs: f64, rhs: f64, margin: f64) {
        self.verdict(name, inputs, Verdict::new(lhs, rhs, margin, Relation::Equal));
    }

    fn flag(&mut self, name: impl Into<String>, inputs: &str, ok: bool) {
        self.equal(name, inputs, f64::from(u8::from(ok)), 1.0, 0.0);
    }

    /// `lhs < rhs` with no slack at all.
    fn below(&mut self, name: impl Into<String>, inputs: &str, lhs: f64, rhs: f64) {
        let mut v = Verdict::new(lhs, rhs, 0.0, Relation::AtMost);
        v.holds = lhs < rhs;
        self.verdict(name, inputs, v);
    }

    fn finish(self) -> SuiteReport {
        let failed = self.checks.iter().filter(|c| !c.holds).count();
        SuiteReport {
            suite: self.suite.name().to_string(),
            passed: self.checks.len() - failed,
            failed,
            notes: self.notes,
            checks: self.checks,
        }
    }
}

/// Settings of one `verify` run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub suite: Suite,
    /// Deepest barrier for the geometry suite.
    pub depth: usize,
    pub seed: u64,
}

pub fn run(options: &VerifyOptions, provenance: &str) -> Result<Report> {
    let mut suites = Vec::new();
    for suite in options.suite.expand() {
        // each suite draws from its own stream, whatever else is selected
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(suite as u64);
        let report = match suite {
            Suite::Cantor => cantor_suite()?,
            Suite::Geometry => geometry_suite(options.depth)?,
            Suite::Lemma31 => lemma31_suite(&mut rng)?,
            Suite::Lemma32 => lemma32_suite(&mut rng)?,
            Suite::Lemma33 => lemma33_suite(&mut rng)?,
            Suite::Chain => chain_suite(&mut rng)?,
            Suite::All => unreachable!("expanded above"),
        };
        suites.push(report);
    }
    let passed = suites.iter().map(|s| s.passed).sum();
    let failed = suites.iter().map(|s| s.failed).sum();
    Ok(Report {
        format: REPORT_FORMAT.to_string(),
        provenance: provenance.to_string(),
        passed,
        failed,
        suites,
    })
}

fn cantor_suite() -> Result<SuiteReport> {
    let mut r = Recorder::new(Suite::Cantor);
    for (n, want) in [1.0, 0.5, 0.375, 21.0 / 64.0].into_iter().enumerate() {
        let got = cantor_measure(n);
        r.equal(format!("measure n={n}"), &format!("n={n}"), got, want, 1e-12 * want);
    }
    for (n, want) in [1.0, 0.25, 0.09375].into_iter().enumerate() {
        r.equal(format!("theta n={n}"), &format!("n={n}"), theta(n), want, 1e-12 * want);
    }
    for n in 0..=40 {
        let inputs = format!("n={n}");
        let total = cantor_measure(n) + removed_length(n);
        r.equal(format!("measure plus gaps n={n}"), &inputs, total, 1.0, 1e-12);
        let split = 2.0 * theta(n + 1) + gap_length(n);
        r.equal(format!("children plus gap n={n}"), &inputs, split, theta(n), 1e-15);
        r.below(format!("theta decreasing n={n}"), &inputs, theta(n + 1), theta(n));
    }
    for n in 0..=10 {
        let total: f64 = arcs(n)?.iter().map(|a| a.length()).sum();
        r.equal(
            format!("arc lengths n={n}"),
            &format!("n={n}"),
            total,
            cantor_measure(n),
            1e-13,
        );
    }
    let limit = cantor_measure_limit(1e-12)?;
    r.verdict(
        "limit above",
        "tol=1e-12",
        Verdict::new(limit, 0.288_788_0, 0.0, Relation::AtLeast),
    );
    r.verdict(
        "limit below",
        "tol=1e-12",
        Verdict::new(limit, 0.288_788_1, 0.0, Relation::AtMost),
    );
    Ok(r.finish())
}

fn geometry_suite(depth: usize) -> Result<SuiteReport> {
    let mut r = Recorder::new(Suite::Geometry);
    let mut previous: Option<Barrier> = None;
    for n in 1..=depth {
        let inputs = format!("n={n}");
        let b = Barrier::new(n)?;
        r.equal(
            format!("component count n={n}"),
            &inputs,
            b.components().len() as f64,
            (1u64 << n) as f64,
            0.0,
        );
        r.flag(
            format!("disjoint n={n}"),
            &inputs,
            b.find_overlap(GEOMETRY_TOL).is_none(),
        );
        let mismatch = b.components().iter().map(|c| c.link_mismatch()).fold(0.0, f64::max);
        r.verdict(
            format!("links join the chain n={n}"),
            &inputs,
            Verdict::new(mismatch, 0.0, 1e-12, Relation::AtMost),
        );
        if n <= 6 {
            r.flag(
                format!("chord lengths n={n}"),
                &inputs,
                chord_lengths_consistent(n, 1e-12)?,
            );
        }
        if let Some(coarser) = &previous {
            r.flag(
                format!("nested n={n}"),
                &inputs,
                b.find_escape(coarser, GEOMETRY_TOL).is_none(),
            );
            r.below(format!("area decreasing n={n}"), &inputs, b.area(), coarser.area());
        }
        previous = Some(b);
    }
    Ok(r.finish())
}

/// The 200-point grid of arc lengths in `[1e-3, 1]`.
pub fn theta_grid() -> impl Iterator<Item = f64> {
    (0..200).map(|i| 1e-3 + (1.0 - 1e-3) * i as f64 / 199.0)
}

fn lemma31_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut r = Recorder::new(Suite::Lemma31);
    let mut exceeded = Vec::new();
    for t in theta_grid() {
        let alpha = 0.5 * t * t;
        let inputs = format!("theta={},alpha={}", fmt17(t), fmt17(alpha));
        let dot = lemma31_dot(t, alpha)?;
        let bound = lemma31_collected_bound(t);
        r.below(format!("dot below bound theta={}", fmt17(t)), &inputs, dot, bound);
        r.below(format!("bound negative theta={}", fmt17(t)), &inputs, bound, 0.0);
        r.flag(
            format!("triangles disjoint theta={}", fmt17(t)),
            &inputs,
            triangles_disjoint(t, alpha)?,
        );
        if dot >= lemma31_short_bound(t) {
            exceeded.push(t);
        }
    }
    for i in 0..ANGLE_TRIALS {
        let t: f64 = rng.random_range(1e-3..1.0);
        let lo = 0.5 * t * t;
        let alpha = lo + rng.random_range(0.0..0.99) * (t - lo);
        let inputs = format!("theta={},alpha={}", fmt17(t), fmt17(alpha));
        let dot = lemma31_dot(t, alpha)?;
        r.below(format!("dot negative trial={i}"), &inputs, dot, 0.0);
        r.flag(
            format!("triangles disjoint trial={i}"),
            &inputs,
            triangles_disjoint(t, alpha)?,
        );
    }
    if let Some(first) = exceeded.first() {
        r.notes.push(format!(
            "the dot product reaches -t^3/8 + t^4/24 at {} of 200 grid points, from t = {}; the checks use -t^3/8 + t^4/12",
            exceeded.len(),
            fmt17(*first)
        ));
    }
    Ok(r.finish())
}

fn random_sine_series(rng: &mut ChaCha8Rng) -> Result<SineSeries> {
    let a = rng.random_range(-2.0..2.0);
    let w = rng.random_range(0.1..3.0);
    let c = rng.random_range(-2.0..2.0);
    let h = rng.random_range(0.1..3.0);
    let count = rng.random_range(1..6);
    let modes = (0..count)
        .map(|_| {
            (
                rng.random_range(1..6u32),
                rng.random_range(0..5u32),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    Ok(SineSeries::new((a, a + w), (c, c + h), modes)?)
}

fn sine_inputs(s: &SineSeries) -> String {
    let modes: Vec<String> = s
        .modes
        .iter()
        .map(|(j, k, c)| format!("{j}:{k}:{}", fmt17(*c)))
        .collect();
    format!(
        "x={},y={},modes={}",
        floats(&[s.x_range.0, s.x_range.1]),
        floats(&[s.y_range.0, s.y_range.1]),
        modes.join(";")
    )
}

fn lemma32_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut r = Recorder::new(Suite::Lemma32);
    let quad = Quadrature::default();
    let sine = SineSeries::sin_profile((0.0, PI), (0.0, 1.0))?;
    let v = poincare_check(&RectangleField::new((0.0, PI), (0.0, 1.0), sine)?, &quad);
    r.verdict("sine profile", "sin(x) on [0,pi]x[0,1]", v);
    r.equal("sine profile lhs", "sin(x) on [0,pi]x[0,1]", v.lhs, 2.0, 1e-8);
    r.equal("sine profile rhs", "sin(x) on [0,pi]x[0,1]", v.rhs, 4.0 / PI, 1e-8);
    let parabola = Parabola { a: 0.0, b: 1.0 };
    let v = poincare_check(&RectangleField::new((0.0, 1.0), (0.0, 1.0), parabola)?, &quad);
    r.verdict("parabola", "x^2 on [0,1]^2", v);
    r.equal("parabola lhs", "x^2 on [0,1]^2", v.lhs, 0.5, 1e-8);
    r.equal("parabola rhs", "x^2 on [0,1]^2", v.rhs, 1.0 / 3.0, 1e-8);
    for i in 0..POINCARE_TRIALS {
        let field = random_sine_series(rng)?;
        let inputs = sine_inputs(&field);
        let (x, y) = (field.x_range, field.y_range);
        let v = poincare_check(&RectangleField::new(x, y, field)?, &quad);
        r.verdict(format!("sine series trial={i}"), &inputs, v);
    }
    Ok(r.finish())
}

fn random_pair(rng: &mut ChaCha8Rng) -> Result<IntegrandPair> {
    let len = rng.random_range(1..64);
    let mut g: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..10.0)).collect();
    let h: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..10.0)).collect();
    g[0] += 0.1;
    let cell = rng.random_range(1e-3..2.0);
    let int_g = g.iter().sum::<f64>() * cell;
    let int_h = h.iter().sum::<f64>() * cell;
    let delta = rng.random_range(0.01..1.0) * int_g;
    let big_m = int_h * (1.0 + rng.random_range(0.0..5.0));
    Ok(IntegrandPair::new(g, h, cell, delta, big_m)?)
}

fn record_pair(r: &mut Recorder, name: String, inputs: String, pair: &IntegrandPair) {
    let v = sqrt_inequality_check(pair);
    r.verdict(name.clone(), &inputs, v);
    let slack = Verdict::new(v.slack(), 0.0, 0.0, Relation::AtLeast);
    r.verdict(format!("{name} slack"), &inputs, slack);
}

fn lemma33_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut r = Recorder::new(Suite::Lemma33);
    for c in [0.1, 1.0, 7.5] {
        let pair = IntegrandPair::tight(vec![c; 16], vec![c; 16], 1.0 / 16.0)?;
        record_pair(
            &mut r,
            format!("equal integrands c={c}"),
            format!("g=h={c},cells=16"),
            &pair,
        );
    }
    for i in 0..SQRT_TRIALS {
        let pair = random_pair(rng)?;
        let inputs = format!(
            "cell={};delta={};M={};g={};h={}",
            fmt17(pair.cell_measure()),
            fmt17(pair.delta()),
            fmt17(pair.big_m()),
            floats(pair.g()),
            floats(pair.h())
        );
        record_pair(&mut r, format!("random pair trial={i}"), inputs, &pair);
    }
    Ok(r.finish())
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Result<Polynomial> {
    let coefficients: Vec<f64> = (0..Polynomial::monomial_count(POLY_DEGREE))
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    Ok(Polynomial::dense(POLY_DEGREE, &coefficients)?)
}

fn polynomial_inputs(p: &Polynomial) -> String {
    let terms: Vec<String> = p
        .terms()
        .iter()
        .map(|(i, j, c)| format!("{i}:{j}:{}", fmt17(*c)))
        .collect();
    terms.join(";")
}

fn chain_suite(rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut r = Recorder::new(Suite::Chain);
    let options = ChainOptions::default();
    let addresses: Vec<ArcAddress> = (1..=2)
        .flat_map(|n| (0..1u64 << n).map(move |i| ArcAddress::from_index(n, i)))
        .collect::<std::result::Result<_, _>>()?;
    for trial in 0..CHAIN_FIELDS {
        let u = random_polynomial(rng)?;
        let field = polynomial_inputs(&u);
        for addr in &addresses {
            let path = crate::geometry::path_string(addr);
            let inputs = format!("{field};arc={path}");
            let rep = chain_inequality_check(&u, addr, &options)?;
            let tag = format!("trial={trial} arc={path}");
            r.verdict(format!("arc bound {tag}"), &inputs, rep.arc_bound);
            r.verdict(format!("triangle {tag}"), &inputs, rep.triangle);
            for (k, step) in rep.steps.iter().enumerate() {
                r.verdict(format!("step k={k} {tag}"), &inputs, *step);
            }
        }
    }
    for trial in 0..REGROUPING_FIELDS {
        let u = random_polynomial(rng)?;
        let n = 1 + trial % 2;
        let inputs = format!("{};n={n}", polynomial_inputs(&u));
        let agg = aggregate_check(&u, n, &options)?;
        r.verdict(format!("regrouping trial={trial} n={n}"), &inputs, agg.regrouping);
    }
    Ok(r.finish())
}

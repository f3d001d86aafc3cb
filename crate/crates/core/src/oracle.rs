//! Brute-force ground truth and randomized validation.
//!
//! Everything on the "expected" side of a check is computed here straight
//! from the joint law (suffix sums, expectations of binomial products) and
//! never through the moment or bound code it is checking.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    bonferroni_pair, chung_bound, comparison_bound, frechet_gumbel_type, frechet_lower,
    gumbel_upper, BoundValue, Comparison,
};
use crate::error::{domain, ensure, Error, Result};
use crate::model::{
    bonferroni_sums, counting_pmf, event_system_from_pmf, moments_from_pmf, Atom, EventSystem,
    JointPmf, MomentMatrix,
};
use crate::scalar::{ratio, Scalar};
use crate::transforms::{
    complementary_moment, complementary_moment_s, complementary_moment_t, moment_series_eval,
    moments_from_tails, pgf_eval, pmf_from_moments, prob_origin_by_antidiagonals,
    tails_from_moments, union_product_moment, TailTable,
};
use crate::Rational;

/// Integer weights of random instances are drawn from `0..=WEIGHT_GRANULARITY`.
pub const WEIGHT_GRANULARITY: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    DensePmf,
    SparsePmf,
    EventSystem,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::DensePmf => "dense_pmf",
            InstanceKind::SparsePmf => "sparse_pmf",
            InstanceKind::EventSystem => "event_system",
        }
    }
}

/// Everything needed to regenerate one random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub kind: InstanceKind,
    /// Atom count, for [`InstanceKind::EventSystem`] only.
    pub atoms: Option<usize>,
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(seed={}, m={}, n={}",
            self.kind.name(),
            self.seed,
            self.m,
            self.n
        )?;
        if let Some(a) = self.atoms {
            write!(f, ", atoms={a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Pmf(JointPmf<Rational>),
    Events(EventSystem<Rational>),
}

impl Instance {
    /// The joint law of the instance (the counting law for event systems).
    pub fn pmf(&self) -> JointPmf<Rational> {
        match self {
            Instance::Pmf(p) => p.clone(),
            Instance::Events(es) => counting_pmf(es),
        }
    }
}

fn normalize(weights: Vec<u32>) -> Vec<Rational> {
    let total: u32 = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| ratio(i64::from(w), i64::from(total)))
        .collect()
}

/// Deterministically generates the instance described by `spec`.
pub fn random_instance(spec: &InstanceSpec) -> Result<Instance> {
    let (m, n) = (spec.m, spec.n);
    ensure(m >= 1 && n >= 1, || {
        format!("instance dimensions must be positive, got m={m}, n={n}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let cells = (m + 1) * (n + 1);
    match spec.kind {
        InstanceKind::DensePmf | InstanceKind::SparsePmf => {
            let sparse = spec.kind == InstanceKind::SparsePmf;
            let mut w: Vec<u32> = (0..cells)
                .map(|_| {
                    let keep = !sparse || rng.gen_bool(0.5);
                    let x = rng.gen_range(0..=WEIGHT_GRANULARITY);
                    if keep {
                        x
                    } else {
                        0
                    }
                })
                .collect();
            if w.iter().all(|&x| x == 0) {
                w[rng.gen_range(0..cells)] = 1;
            }
            Ok(Instance::Pmf(JointPmf::from_flat(m, n, normalize(w))?))
        }
        InstanceKind::EventSystem => {
            let count = spec
                .atoms
                .ok_or_else(|| domain("event_system instances need an atom count"))?;
            ensure(count >= 1, || {
                "event_system instances need at least one atom".into()
            })?;
            let raw: Vec<(u32, Vec<bool>, Vec<bool>)> = (0..count)
                .map(|_| {
                    let a = (0..m).map(|_| rng.gen_bool(0.5)).collect();
                    let b = (0..n).map(|_| rng.gen_bool(0.5)).collect();
                    (rng.gen_range(0..=WEIGHT_GRANULARITY), a, b)
                })
                .collect();
            let mut weights: Vec<u32> = raw.iter().map(|r| r.0).collect();
            if weights.iter().all(|&x| x == 0) {
                weights[0] = 1;
            }
            let atoms = normalize(weights)
                .into_iter()
                .zip(raw)
                .map(|(w, (_, a, b))| Atom::new(w, a, b))
                .collect();
            Ok(Instance::Events(EventSystem::new(m, n, atoms)?))
        }
    }
}

/// Draws `trials` instance specs with `m` in `1..=mmax` and `n` in `1..=nmax`,
/// cycling through `kinds`. Event systems get `1..=16` atoms.
pub fn sample_specs(
    seed: u64,
    trials: usize,
    mmax: usize,
    nmax: usize,
    kinds: &[InstanceKind],
) -> Vec<InstanceSpec> {
    assert!(!kinds.is_empty(), "at least one instance kind");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|i| {
            let kind = kinds[i % kinds.len()];
            let m = rng.gen_range(1..=mmax.max(1));
            let n = rng.gen_range(1..=nmax.max(1));
            let atoms = rng.gen_range(1..=16);
            InstanceSpec {
                seed: rng.gen(),
                m,
                n,
                kind,
                atoms: (kind == InstanceKind::EventSystem).then_some(atoms),
            }
        })
        .collect()
}

/// `P(S >= u, T >= v)` by direct summation of the pmf.
pub fn exact_tail(pmf: &JointPmf<Rational>, u: usize, v: usize) -> Result<Rational> {
    ensure(u <= pmf.m() && v <= pmf.n(), || {
        format!("({u},{v}) outside 0..={} x 0..={}", pmf.m(), pmf.n())
    })?;
    Ok(pmf
        .cells()
        .filter(|&(i, j, _)| i >= u && j >= v)
        .fold(Rational::from_int(0), |acc, (_, _, p)| acc + p))
}

/// Exact integer binomial, independent of the library's rational `binom`.
fn choose(d: usize, r: usize) -> BigInt {
    num_integer::binomial(BigInt::from(d), BigInt::from(r))
}

fn expect(pmf: &JointPmf<Rational>, f: impl Fn(usize, usize) -> BigInt) -> Rational {
    pmf.support().fold(Rational::from_int(0), |acc, (u, v, p)| {
        acc + p * Rational::from_integer(f(u, v))
    })
}

/// `E[(binom(m,k) - binom(m-S,k)) (binom(n,l) - binom(n-T,l))]` from the pmf.
pub fn expected_union_product(pmf: &JointPmf<Rational>, k: usize, l: usize) -> Rational {
    let (m, n) = (pmf.m(), pmf.n());
    let (cm, cn) = (choose(m, k), choose(n, l));
    expect(pmf, |u, v| {
        (&cm - choose(m - u, k)) * (&cn - choose(n - v, l))
    })
}

/// `binom(m,k) E binom(n-T,l) + binom(n,l) E binom(m-S,k) - E binom(m-S,k) binom(n-T,l)` from the pmf.
pub fn expected_complementary_moment(pmf: &JointPmf<Rational>, k: usize, l: usize) -> Rational {
    let (m, n) = (pmf.m(), pmf.n());
    let (cm, cn) = (choose(m, k), choose(n, l));
    expect(pmf, |u, v| {
        let (a, b) = (choose(m - u, k), choose(n - v, l));
        &cm * &b + &cn * &a - a * b
    })
}

/// Selectable invariant suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    /// pmf -> moments -> pmf, and the anti-diagonal form of `P(S=0,T=0)`.
    PmfRoundTrip,
    /// Tails from moments match suffix sums; moments from tails match the moments.
    TailRoundTrip,
    /// Subset-enumerated Bonferroni sums equal binomial moments of the counting law.
    GumbelIdentity,
    /// `P(1+t, 1+s) = sum S[i][j] t^i s^j` on a fixed grid of 9 points.
    PgfIdentity,
    /// Linear-form complementary moments agree with their expectation definitions.
    ComplementaryMoments,
    /// Every bound sits on the correct side of the exact tail.
    Sandwich,
    FrechetShape,
    GumbelShape,
    /// Monotonicity, convexity and the step recursion of the Chung-type bound.
    ChungShape,
    /// Cases where a bound is exact or two bounds coincide.
    Anchors,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::PmfRoundTrip,
        Property::TailRoundTrip,
        Property::GumbelIdentity,
        Property::PgfIdentity,
        Property::ComplementaryMoments,
        Property::Sandwich,
        Property::FrechetShape,
        Property::GumbelShape,
        Property::ChungShape,
        Property::Anchors,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::PmfRoundTrip => "pmf_roundtrip",
            Property::TailRoundTrip => "tail_roundtrip",
            Property::GumbelIdentity => "gumbel_identity",
            Property::PgfIdentity => "pgf_identity",
            Property::ComplementaryMoments => "complementary_moments",
            Property::Sandwich => "sandwich",
            Property::FrechetShape => "frechet_shape",
            Property::GumbelShape => "gumbel_shape",
            Property::ChungShape => "chung_shape",
            Property::Anchors => "anchors",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.id() == id)
            .ok_or_else(|| Error::UnknownProperty(id.to_string()))
    }

    /// Parses a comma-separated list of ids; `all` selects every suite.
    pub fn parse_list(list: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for id in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if id == "all" {
                return Ok(Self::ALL.to_vec());
            }
            out.push(Self::from_id(id)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One property violation, with enough data to reproduce it.
///
/// `relation` is `"=="` or `"<="` and reads `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub spec: InstanceSpec,
    pub property: Property,
    pub check: String,
    pub params: Vec<(&'static str, i64)>,
    pub relation: &'static str,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub trials: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Equal trials and failures, ignoring timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.trials == other.trials && self.failures == other.failures
    }
}

/// A deliberate corruption of the moment matrix, used to confirm the
/// validator actually detects errors.
#[derive(Debug, Clone, PartialEq)]
pub enum Fault {
    /// Subtract one from `S[i][j]` (when that order exists).
    DecrementMoment { i: usize, j: usize },
}

/// Runs property suites over generated instances.
#[derive(Debug, Clone, Default)]
pub struct Validator {
    properties: Vec<Property>,
    fault: Option<Fault>,
}

impl Validator {
    pub fn new(properties: impl IntoIterator<Item = Property>) -> Self {
        let mut properties: Vec<Property> = properties.into_iter().collect();
        properties.sort();
        properties.dedup();
        Self {
            properties,
            fault: None,
        }
    }

    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn properties(&self) -> &[Property] {
        &self.properties
    }

    /// Checks every spec; violations are collected, never raised.
    pub fn run(&self, specs: &[InstanceSpec]) -> Result<ValidationReport> {
        let start = Instant::now();
        let per_trial: Vec<Result<Vec<Failure>>> =
            specs.par_iter().map(|spec| self.check_spec(spec)).collect();
        let mut failures = Vec::new();
        for r in per_trial {
            failures.extend(r?);
        }
        Ok(ValidationReport {
            trials: specs.len(),
            failures,
            elapsed: start.elapsed(),
        })
    }

    fn check_spec(&self, spec: &InstanceSpec) -> Result<Vec<Failure>> {
        if self.properties.is_empty() {
            return Ok(Vec::new());
        }
        let instance = random_instance(spec)?;
        let pmf = instance.pmf();
        let mut mm = moments_from_pmf(&pmf);
        if let Some(Fault::DecrementMoment { i, j }) = self.fault {
            if let Some(x) = mm.get(i, j).cloned() {
                mm = mm.with_entry(i, j, x - Rational::from_int(1));
            }
        }
        let mut ctx = Checker {
            spec: *spec,
            property: Property::Anchors,
            failures: Vec::new(),
        };
        for &property in &self.properties {
            ctx.property = property;
            let outcome = match property {
                Property::PmfRoundTrip => pmf_round_trip(&mut ctx, &pmf, &mm),
                Property::TailRoundTrip => tail_round_trip(&mut ctx, &pmf, &mm),
                Property::GumbelIdentity => gumbel_identity(&mut ctx, &instance, &pmf),
                Property::PgfIdentity => pgf_identity(&mut ctx, &pmf, &mm),
                Property::ComplementaryMoments => complementary_moments(&mut ctx, &pmf, &mm),
                Property::Sandwich => sandwich(&mut ctx, &pmf, &mm),
                Property::FrechetShape => frechet_shape(&mut ctx, &mm),
                Property::GumbelShape => gumbel_shape(&mut ctx, &mm),
                Property::ChungShape => chung_shape(&mut ctx, &pmf, &mm),
                Property::Anchors => anchors(&mut ctx, &pmf, &mm),
            };
            // A formula refusing a corrupted matrix is itself a finding.
            if let Err(e) = outcome {
                ctx.failures.push(Failure {
                    spec: *spec,
                    property,
                    check: format!("evaluation error: {e}"),
                    params: Vec::new(),
                    relation: "==",
                    lhs: Rational::from_int(0),
                    rhs: Rational::from_int(0),
                });
            }
        }
        Ok(ctx.failures)
    }
}

/// Runs the selected properties over `specs`.
pub fn validate(specs: &[InstanceSpec], properties: &[Property]) -> Result<ValidationReport> {
    Validator::new(properties.iter().copied()).run(specs)
}

struct Checker {
    spec: InstanceSpec,
    property: Property,
    failures: Vec<Failure>,
}

impl Checker {
    fn record(
        &mut self,
        check: &str,
        params: &[(&'static str, usize)],
        relation: &'static str,
        lhs: &Rational,
        rhs: &Rational,
    ) {
        self.failures.push(Failure {
            spec: self.spec,
            property: self.property,
            check: check.to_string(),
            params: params.iter().map(|&(k, v)| (k, v as i64)).collect(),
            relation,
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        });
    }

    fn eq(
        &mut self,
        check: &str,
        params: &[(&'static str, usize)],
        lhs: &Rational,
        rhs: &Rational,
    ) {
        if lhs != rhs {
            self.record(check, params, "==", lhs, rhs);
        }
    }

    fn le(
        &mut self,
        check: &str,
        params: &[(&'static str, usize)],
        lhs: &Rational,
        rhs: &Rational,
    ) {
        if lhs > rhs {
            self.record(check, params, "<=", lhs, rhs);
        }
    }

    fn bound(&mut self, b: &BoundValue<Rational>, exact: &Rational) {
        if !b.holds_for(exact) {
            let (lhs, rhs) = match b.direction {
                crate::bounds::Direction::Lower => (&b.value, exact),
                crate::bounds::Direction::Upper => (exact, &b.value),
            };
            let check = format!("{} {} bound", b.family, b.direction);
            self.record(&check, &b.params, "<=", lhs, rhs);
        }
    }
}

type Pmf = JointPmf<Rational>;
type Moments = MomentMatrix<Rational>;

fn pmf_round_trip(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    for (u, v, p) in pmf.cells() {
        ctx.eq(
            "pmf from moments",
            &[("u", u), ("v", v)],
            &pmf_from_moments(mm, u, v)?,
            p,
        );
    }
    ctx.eq(
        "origin mass by anti-diagonals",
        &[],
        &prob_origin_by_antidiagonals(mm)?,
        &pmf.prob(0, 0),
    );
    Ok(())
}

fn tail_round_trip(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    let tails = TailTable::from_pmf(pmf);
    for u in 0..=pmf.m() {
        for v in 0..=pmf.n() {
            let exact = exact_tail(pmf, u, v)?;
            ctx.eq(
                "suffix-sum tail table",
                &[("u", u), ("v", v)],
                &tails.tail(u, v),
                &exact,
            );
            ctx.eq(
                "tail from moments",
                &[("u", u), ("v", v)],
                &tails_from_moments(mm, u, v)?,
                &exact,
            );
            ctx.eq(
                "moment from tails",
                &[("i", u), ("j", v)],
                &moments_from_tails(&tails, u, v)?,
                &mm.moment(u, v)?,
            );
        }
    }
    Ok(())
}

fn gumbel_identity(ctx: &mut Checker, instance: &Instance, pmf: &Pmf) -> Result<()> {
    let es = match instance {
        Instance::Events(es) => es.clone(),
        Instance::Pmf(p) => {
            let es = event_system_from_pmf(p);
            let back = counting_pmf(&es);
            for (u, v, x) in p.cells() {
                ctx.eq(
                    "counting law of constructed system",
                    &[("u", u), ("v", v)],
                    &back.prob(u, v),
                    x,
                );
            }
            es
        }
    };
    let sums = bonferroni_sums(&es, es.m(), es.n())?;
    let moments = moments_from_pmf(pmf);
    for i in 0..=es.m() {
        for j in 0..=es.n() {
            ctx.eq(
                "bonferroni sum = binomial moment",
                &[("k", i), ("l", j)],
                &sums.moment(i, j)?,
                &moments.moment(i, j)?,
            );
        }
    }
    Ok(())
}

/// Evaluation points for the generating-function identity.
pub fn pgf_grid() -> Vec<(Rational, Rational)> {
    let ts = [ratio(-1, 2), ratio(1, 3), ratio(2, 1)];
    let ss = [ratio(-3, 4), ratio(1, 5), ratio(3, 2)];
    ts.iter()
        .flat_map(|t| ss.iter().map(move |s| (t.clone(), s.clone())))
        .collect()
}

fn pgf_identity(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    let one = Rational::from_int(1);
    for (idx, (t, s)) in pgf_grid().into_iter().enumerate() {
        let lhs = pgf_eval(pmf, &(one.clone() + &t), &(one.clone() + &s));
        ctx.eq(
            "pgf at shifted point",
            &[("point", idx)],
            &lhs,
            &moment_series_eval(mm, &t, &s)?,
        );
    }
    Ok(())
}

fn complementary_moments(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    let (m, n) = (pmf.m(), pmf.n());
    for k in 0..=m {
        let direct = expect(pmf, |u, _| choose(m - u, k));
        ctx.eq(
            "E binom(m-S,k)",
            &[("k", k)],
            &complementary_moment_s(mm, k)?,
            &direct,
        );
    }
    for l in 0..=n {
        let direct = expect(pmf, |_, v| choose(n - v, l));
        ctx.eq(
            "E binom(n-T,l)",
            &[("l", l)],
            &complementary_moment_t(mm, l)?,
            &direct,
        );
    }
    for k in 1..=m {
        for l in 1..=n {
            let p = [("k", k), ("l", l)];
            ctx.eq(
                "complementary moment",
                &p,
                &complementary_moment(mm, k, l)?,
                &expected_complementary_moment(pmf, k, l),
            );
            ctx.eq(
                "expectation of product",
                &p,
                &union_product_moment(mm, k, l)?,
                &expected_union_product(pmf, k, l),
            );
        }
    }
    Ok(())
}

fn sandwich(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    let (m, n) = (pmf.m(), pmf.n());
    for u in 1..=m {
        for v in 1..=n {
            let exact = exact_tail(pmf, u, v)?;
            let mut k = 0;
            loop {
                let (lo, up) = bonferroni_pair(mm, u, v, k)?;
                ctx.bound(&lo, &exact);
                ctx.bound(&up, &exact);
                if u + v + 2 * k >= m + n {
                    break;
                }
                k += 1;
            }
            for k in 1..=m {
                for l in 1..=n {
                    let pair = frechet_gumbel_type(mm, u, v, k, l)?;
                    for side in [pair.lower, pair.upper] {
                        match side {
                            Ok(b) => ctx.bound(&b, &exact),
                            Err(Error::UndefinedBound(_)) => {}
                            Err(e) => return Err(e),
                        }
                    }
                    if k >= u && l >= v {
                        ctx.bound(&chung_bound(mm, u, v, k, l)?, &exact);
                    }
                }
            }
        }
    }
    let exact11 = exact_tail(pmf, 1, 1)?;
    for k in 1..=m {
        for l in 1..=n {
            ctx.bound(&frechet_lower(mm, k, l)?, &exact11);
            ctx.bound(&gumbel_upper(mm, k, l)?, &exact11);
        }
    }
    if m >= 2 && n >= 2 {
        ctx.bound(
            &comparison_bound(mm, Comparison::C1GalambosXu, None, None)?,
            &exact11,
        );
        ctx.bound(
            &comparison_bound(mm, Comparison::C6MadiNagyPrekopa, None, None)?,
            &exact11,
        );
        for a in m / 2..=m + 1 {
            for b in n / 2..=n + 1 {
                ctx.bound(
                    &comparison_bound(mm, Comparison::C3ChenSeneta, Some(a), Some(b))?,
                    &exact11,
                );
            }
        }
    }
    Ok(())
}

/// `values[k-1][l-1]` for `1 <= k <= m`, `1 <= l <= n`.
fn grid(
    m: usize,
    n: usize,
    f: impl Fn(usize, usize) -> Result<BoundValue<Rational>>,
) -> Result<Vec<Vec<Rational>>> {
    (1..=m)
        .map(|k| (1..=n).map(|l| Ok(f(k, l)?.value)).collect())
        .collect()
}

/// Checks `sign * (x[i+1] - x[i]) >= 0` and `curvature * second difference >= 0`
/// along both axes, where `sign`/`curvature` are +1 or -1.
fn check_shape(
    ctx: &mut Checker,
    name: &str,
    values: &[Vec<Rational>],
    origin: (usize, usize),
    increasing: bool,
    convex: bool,
) {
    let zero = Rational::from_int(0);
    let rows = values.len();
    let cols = values.first().map_or(0, Vec::len);
    for r in 0..rows {
        for c in 0..cols {
            let at = [("k", r + origin.0), ("l", c + origin.1)];
            for (axis, next) in [
                ("k", (r + 1 < rows).then(|| (r + 1, c))),
                ("l", (c + 1 < cols).then(|| (r, c + 1))),
            ] {
                let Some((r1, c1)) = next else { continue };
                let (x0, x1) = (&values[r][c], &values[r1][c1]);
                if increasing {
                    ctx.le(&format!("{name} nondecreasing in {axis}"), &at, x0, x1);
                } else {
                    ctx.le(&format!("{name} nonincreasing in {axis}"), &at, x1, x0);
                }
                let (r2, c2) = (2 * r1 - r, 2 * c1 - c);
                if r2 < rows && c2 < cols {
                    let second = values[r2][c2].clone() - x1 - x1 + x0;
                    if convex {
                        ctx.le(&format!("{name} convex in {axis}"), &at, &zero, &second);
                    } else {
                        ctx.le(&format!("{name} concave in {axis}"), &at, &second, &zero);
                    }
                }
            }
        }
    }
}

fn frechet_shape(ctx: &mut Checker, mm: &Moments) -> Result<()> {
    let values = grid(mm.m(), mm.n(), |k, l| frechet_lower(mm, k, l))?;
    check_shape(ctx, "frechet", &values, (1, 1), true, false);
    Ok(())
}

fn gumbel_shape(ctx: &mut Checker, mm: &Moments) -> Result<()> {
    let values = grid(mm.m(), mm.n(), |k, l| gumbel_upper(mm, k, l))?;
    check_shape(ctx, "gumbel", &values, (1, 1), false, true);
    Ok(())
}

fn chung_shape(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    let (m, n) = (mm.m(), mm.n());
    let chung = |s, t, k, l| chung_bound(mm, s, t, k, l).map(|b| b.value);
    for s in 1..=m {
        for t in 1..=n {
            let values: Vec<Vec<Rational>> = (s..=m)
                .map(|k| (t..=n).map(|l| chung(s, t, k, l)).collect())
                .collect::<Result<_>>()?;
            check_shape(ctx, "chung", &values, (s, t), false, true);
            ctx.eq(
                "chung exact at (m,n)",
                &[("s", s), ("t", t)],
                &chung(s, t, m, n)?,
                &exact_tail(pmf, s, t)?,
            );
            for k in s..m {
                for l in t..=n {
                    let step = chung(s, t, k, l)? - chung(s, t, k + 1, l)?;
                    let scaled = ratio(s as i64, (m - s) as i64) * chung(s + 1, t, k + 1, l)?;
                    ctx.eq(
                        "chung step recursion in k",
                        &[("s", s), ("t", t), ("k", k), ("l", l)],
                        &step,
                        &scaled,
                    );
                }
            }
            for k in s..=m {
                for l in t..n {
                    let step = chung(s, t, k, l)? - chung(s, t, k, l + 1)?;
                    let scaled = ratio(t as i64, (n - t) as i64) * chung(s, t + 1, k, l + 1)?;
                    ctx.eq(
                        "chung step recursion in l",
                        &[("s", s), ("t", t), ("k", k), ("l", l)],
                        &step,
                        &scaled,
                    );
                }
            }
        }
    }
    Ok(())
}

fn anchors(ctx: &mut Checker, pmf: &Pmf, mm: &Moments) -> Result<()> {
    let (m, n) = (mm.m(), mm.n());
    let exact11 = exact_tail(pmf, 1, 1)?;
    ctx.eq(
        "frechet exact at (m,n)",
        &[],
        &frechet_lower(mm, m, n)?.value,
        &exact11,
    );
    ctx.eq(
        "gumbel(1,1) = S[1][1]",
        &[],
        &gumbel_upper(mm, 1, 1)?.value,
        &mm.moment(1, 1)?,
    );
    for s in 1..=m {
        for t in 1..=n {
            let exact = exact_tail(pmf, s, t)?;
            ctx.eq(
                "chung exact at (m,n)",
                &[("s", s), ("t", t)],
                &chung_bound(mm, s, t, m, n)?.value,
                &exact,
            );
            let k = (m + n).saturating_sub(s + t).div_ceil(2);
            let (lo, up) = bonferroni_pair(mm, s, t, k)?;
            ctx.eq(
                "bonferroni lower at full depth",
                &[("u", s), ("v", t), ("k", k)],
                &lo.value,
                &exact,
            );
            ctx.eq(
                "bonferroni upper at full depth",
                &[("u", s), ("v", t), ("k", k)],
                &up.value,
                &exact,
            );
        }
    }
    for k in 1..=m {
        for l in 1..=n {
            let pair = frechet_gumbel_type(mm, 1, 1, k, l)?;
            let p = [("k", k), ("l", l)];
            ctx.eq(
                "frechet-type at s=t=1",
                &p,
                &pair.lower?.value,
                &frechet_lower(mm, k, l)?.value,
            );
            ctx.eq(
                "gumbel-type at s=t=1",
                &p,
                &pair.upper?.value,
                &gumbel_upper(mm, k, l)?.value,
            );
        }
    }
    if m >= 2 && n >= 2 {
        let c3 = comparison_bound(mm, Comparison::C3ChenSeneta, Some(m - 1), Some(n - 1))?;
        ctx.eq(
            "c3 at a=m-1, b=n-1 equals frechet(2,2)",
            &[],
            &c3.value,
            &frechet_lower(mm, 2, 2)?.value,
        );
    }
    Ok(())
}

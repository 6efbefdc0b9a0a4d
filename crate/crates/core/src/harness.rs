//! Instance files, seeded generators and the fuzz harness.
//!
//! Every random choice flows from one 64-bit seed. Trial `i` draws from a
//! ChaCha8 stream selected by `i`, so any trial replays on its own.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{
    brute_minimal_covers, brute_minimal_covers_bounded, find_witness, is_cover, minimalize,
    WitnessedCover,
};
use crate::epset::{Card, EpSet};
use crate::hypergraph::{CheckOutcome, Hypergraph, HypergraphError};
use crate::stepping::{
    build_closure_chain, is_good_cut, layered_cover, layered_order, multiplicity, two_tier_cover,
    BruteSolver, CoverSolver, Cut, MaxWoSolver,
};
use crate::wellorder::{build_maximizing, klimo_extract, subsystems};

pub const MAX_EDGES: usize = 64;
pub const MAX_VERTICES: u64 = 1_000_000;
/// Periods of generated progressions divide this.
pub const MAX_PERIOD: u64 = 210;
/// Total edge draws allowed per generated instance.
pub const EDGE_BUDGET: usize = 50_000;
/// Consecutive rejections after which a partial family is thrown away.
const RESTART_AFTER: usize = 200;
/// Universe bound for the brute oracle on truncated instances.
pub const TRUNCATION_BOUND: usize = 20;

const PERIODS: [u64; 15] = [2, 3, 5, 6, 7, 10, 14, 15, 21, 30, 35, 42, 70, 105, 210];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("declared C({k},{r}) fails on edges {edges:?}")]
    Declared { k: usize, r: u64, edges: Vec<usize> },
    #[error("k and r must be declared together")]
    PartialDeclaration,
}

/// A hypergraph with an optional name and an optional declared C(k, r),
/// checked whenever the instance is built or parsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct Instance {
    pub hypergraph: Hypergraph,
    pub name: Option<String>,
    declared: Option<(usize, u64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u64>,
    edges: Vec<EpSet>,
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = InstanceError;

    fn try_from(r: InstanceRepr) -> Result<Self, Self::Error> {
        let mut inst = Instance {
            hypergraph: Hypergraph::new(r.edges)?,
            name: r.name,
            declared: None,
        };
        match (r.k, r.r) {
            (Some(k), Some(rr)) => inst = inst.declare(k, rr)?,
            (None, None) => {}
            _ => return Err(InstanceError::PartialDeclaration),
        }
        Ok(inst)
    }
}

impl From<Instance> for InstanceRepr {
    fn from(i: Instance) -> Self {
        InstanceRepr {
            name: i.name,
            k: i.declared.map(|d| d.0),
            r: i.declared.map(|d| d.1),
            edges: i.hypergraph.edges().to_vec(),
        }
    }
}

impl Instance {
    pub fn new(hypergraph: Hypergraph) -> Self {
        Instance {
            hypergraph,
            name: None,
            declared: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Attaches a C(k, r) declaration after checking it.
    pub fn declare(mut self, k: usize, r: u64) -> Result<Self, InstanceError> {
        let bad = |edges| InstanceError::Declared { k, r, edges };
        match self.hypergraph.check_c(k, Card::Finite(r)) {
            Ok(CheckOutcome::Ok) => {}
            Ok(CheckOutcome::Violation(t)) => return Err(bad(t)),
            Err(_) => return Err(bad(Vec::new())),
        }
        self.declared = Some((k, r));
        Ok(self)
    }

    pub fn declared(&self) -> Option<(usize, u64)> {
        self.declared
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let repr: InstanceRepr =
            serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
        Instance::try_from(repr)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances serialize")
    }
}

/// Parses `finite:N` or `omega`.
pub fn parse_rho(s: &str) -> Result<Card, String> {
    if s == "omega" {
        return Ok(Card::Aleph0);
    }
    let n = s
        .strip_prefix("finite:")
        .ok_or_else(|| format!("expected finite:N or omega, got {s:?}"))?;
    match n.parse::<u64>() {
        Ok(0) => Err("bound must be positive".into()),
        Ok(n) => Ok(Card::Finite(n)),
        Err(e) => Err(format!("bad bound {n:?}: {e}")),
    }
}

/// Smallest `r` with C(2, r), or `None` when two edges meet infinitely.
pub fn pairwise_r(h: &Hypergraph) -> Option<u64> {
    let idx = h.distinct_indices();
    let mut r = 1;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[..a] {
            match h.edge(i).intersect(h.edge(j)).cardinality() {
                Card::Finite(n) => r = r.max(n + 1),
                Card::Aleph0 => return None,
            }
        }
    }
    Some(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    FiniteCkr,
    EpsetCkr,
    SunflowerViolation,
    /// Finite edges plus progressions mod 4 with distinct residues; suited
    /// to the two-tier cover and small enough to truncate.
    Mixed,
}

impl GenKind {
    pub const ALL: [GenKind; 4] = [
        GenKind::FiniteCkr,
        GenKind::EpsetCkr,
        GenKind::SunflowerViolation,
        GenKind::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::FiniteCkr => "finite_ckr",
            GenKind::EpsetCkr => "epset_ckr",
            GenKind::SunflowerViolation => "sunflower_violation",
            GenKind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenKind::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown generator {s:?}"))
    }
}

/// `vertices` bounds the labels of finite edges; for epset_ckr it is the
/// window for finite edges and perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub k: usize,
    pub r: u64,
    pub edges: usize,
    pub vertices: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{kind} gave up after {attempts} draws")]
    GenerationTimeout { kind: GenKind, attempts: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub instance: Instance,
    /// Indices of the planted sunflower, ascending.
    pub planted: Option<Vec<usize>>,
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn generate(kind: GenKind, params: &GenParams, seed: u64) -> Result<Generated, GenError> {
    generate_with(kind, params, &mut trial_rng(seed, 0))
}

pub fn generate_with<R: Rng>(
    kind: GenKind,
    params: &GenParams,
    rng: &mut R,
) -> Result<Generated, GenError> {
    check_params(kind, params)?;
    let GenParams {
        k,
        r,
        edges,
        vertices,
    } = *params;
    let ckr = |family: &[EpSet]| {
        Hypergraph::new(family.to_vec())
            .ok()
            .and_then(|h| h.check_c(k, Card::Finite(r)).ok())
            .is_some_and(|o| o.is_ok())
    };
    // C(1, r) only admits edges with fewer than r points.
    let max_size = |cap: u64| {
        if k == 1 {
            (r - 1).min(cap)
        } else {
            (r + 2).min(cap)
        }
    };
    let family = match kind {
        GenKind::FiniteCkr => {
            let top = max_size(5.min(vertices));
            grow_family(
                kind,
                edges,
                EDGE_BUDGET,
                rng,
                |g| random_finite(g, vertices, top),
                ckr,
            )?
        }
        GenKind::EpsetCkr => {
            let top = max_size(4.min(vertices));
            grow_family(
                kind,
                edges,
                EDGE_BUDGET,
                rng,
                |g| {
                    if k == 1 || g.random_bool(0.25) {
                        random_finite(g, vertices, top)
                    } else {
                        let d = PERIODS[g.random_range(0..PERIODS.len())];
                        let a = g.random_range(0..d);
                        perturb(g, EpSet::ap(a, d), vertices.min(20))
                    }
                },
                ckr,
            )?
        }
        GenKind::Mixed => {
            let top = max_size(4.min(vertices));
            mixed_family(kind, rng, edges, vertices, top, &ckr)?
        }
        GenKind::SunflowerViolation => {
            let (family, planted) = sunflower(rng, k, r, edges);
            let instance = Instance::new(Hypergraph::new(family).expect("nonempty edges"))
                .with_name(format!("sunflower_k{k}_r{r}"));
            return Ok(Generated {
                instance,
                planted: Some(planted),
            });
        }
    };
    let instance = Instance::new(Hypergraph::new(family).expect("nonempty edges"))
        .with_name(format!("{kind}_k{k}_r{r}"))
        .declare(k, r)
        .expect("generated family satisfies its property");
    Ok(Generated {
        instance,
        planted: None,
    })
}

fn check_params(kind: GenKind, p: &GenParams) -> Result<(), GenError> {
    let bad = |m: &str| Err(GenError::BadParams(m.into()));
    if p.k == 0 || p.r == 0 {
        return bad("k and r must be positive");
    }
    if p.edges > MAX_EDGES {
        return bad("too many edges");
    }
    if p.vertices == 0 || p.vertices > MAX_VERTICES {
        return bad("vertex bound out of range");
    }
    match kind {
        GenKind::SunflowerViolation => {
            if p.edges < p.k {
                return bad("a sunflower needs at least k edges");
            }
            if p.k == 1 && p.r == 1 && p.edges > 1 {
                return bad("C(1,1) admits no extra edges");
            }
        }
        _ if p.k == 1 && p.r == 1 && p.edges > 0 => return bad("C(1,1) admits no edges"),
        GenKind::Mixed if p.edges == 0 => return bad("mixed instances need an edge"),
        _ => {}
    }
    Ok(())
}

fn random_finite<R: Rng>(rng: &mut R, vertices: u64, max_size: u64) -> EpSet {
    let size = rng.random_range(1..=max_size) as usize;
    EpSet::finite(
        index::sample(rng, vertices as usize, size)
            .into_iter()
            .map(|v| v as u64),
    )
}

/// Adds and removes up to two points below `window`.
fn perturb<R: Rng>(rng: &mut R, base: EpSet, window: u64) -> EpSet {
    let add: Vec<u64> = (0..rng.random_range(0..=2))
        .map(|_| rng.random_range(0..window))
        .collect();
    let drop: Vec<u64> = (0..rng.random_range(0..=2))
        .map(|_| rng.random_range(0..window))
        .collect();
    let out = base
        .union(&EpSet::finite(add))
        .difference(&EpSet::finite(drop));
    if out.is_finite() && out.is_empty() {
        base
    } else {
        out
    }
}

/// Rejection-samples `edges` distinct edges one at a time, keeping each
/// draw only if `accept` still holds for the family.
fn grow_family<R: Rng>(
    kind: GenKind,
    edges: usize,
    budget: usize,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> EpSet,
    accept: impl Fn(&[EpSet]) -> bool,
) -> Result<Vec<EpSet>, GenError> {
    let mut family: Vec<EpSet> = Vec::with_capacity(edges);
    let mut stale = 0;
    let mut attempts = 0;
    while family.len() < edges {
        if attempts == budget {
            return Err(GenError::GenerationTimeout { kind, attempts });
        }
        attempts += 1;
        let candidate = draw(rng);
        if !family.contains(&candidate) {
            family.push(candidate);
            if accept(&family) {
                stale = 0;
                continue;
            }
            family.pop();
        }
        stale += 1;
        if stale == RESTART_AFTER {
            family.clear();
            stale = 0;
        }
    }
    Ok(family)
}

/// Progressions mod 4 on distinct residues, perturbed below `vertices`,
/// then finite edges. The progression count is redrawn on every attempt.
fn mixed_family<R: Rng>(
    kind: GenKind,
    rng: &mut R,
    edges: usize,
    vertices: u64,
    top: u64,
    ckr: &dyn Fn(&[EpSet]) -> bool,
) -> Result<Vec<EpSet>, GenError> {
    let antichain = |family: &[EpSet]| {
        family.iter().enumerate().all(|(i, a)| {
            family
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.is_subset(b))
        })
    };
    let mut attempts = 0;
    let mut residues = [0u64, 1, 2, 3];
    loop {
        residues.shuffle(rng);
        let infinite = rng.random_range(1..=edges.min(4));
        let mut family: Vec<EpSet> = residues[..infinite]
            .iter()
            .map(|&a| perturb(rng, EpSet::ap(a, 4), vertices))
            .collect();
        if antichain(&family) && ckr(&family) {
            let rest = grow_family(
                kind,
                edges - infinite,
                RESTART_AFTER * 10,
                rng,
                |g| random_finite(g, vertices, top),
                |fs| {
                    let all: Vec<EpSet> = family.iter().chain(fs).cloned().collect();
                    antichain(&all) && ckr(&all)
                },
            );
            if let Ok(rest) = rest {
                family.extend(rest);
                family.shuffle(rng);
                return Ok(family);
            }
        }
        attempts += 1;
        if attempts == RESTART_AFTER {
            return Err(GenError::GenerationTimeout { kind, attempts });
        }
    }
}

/// `k` planted edges sharing exactly the core `{0, …, r-1}`, plus extra
/// edges disjoint from everything, in shuffled order.
fn sunflower<R: Rng>(rng: &mut R, k: usize, r: u64, edges: usize) -> (Vec<EpSet>, Vec<usize>) {
    let core = EpSet::range(0, r);
    let mut fresh = r;
    let mut take = |n: u64| {
        let s = EpSet::range(fresh, fresh + n);
        fresh += n;
        s
    };
    let mut tagged: Vec<(EpSet, bool)> = Vec::with_capacity(edges);
    for _ in 0..k {
        let petal = take(rng.random_range(1..=2));
        tagged.push((core.union(&petal), true));
    }
    let extra_max = if k == 1 { (r - 1).min(3) } else { 3 };
    for _ in k..edges {
        tagged.push((take(rng.random_range(1..=extra_max)), false));
    }
    tagged.shuffle(rng);
    let planted = (0..tagged.len()).filter(|&i| tagged[i].1).collect();
    (tagged.into_iter().map(|t| t.0).collect(), planted)
}

/// A bound `T` past every point where the structure of `h` and `cover`
/// lives: finite edges, thresholds and minima of infinite edges, pairwise
/// meets and the cover itself.
pub fn truncation_point(h: &Hypergraph, cover: &BTreeSet<u64>) -> u64 {
    let mut top = cover.iter().copied().max().map_or(0, |y| y + 1);
    for (i, e) in h.edges().iter().enumerate() {
        if !e.is_finite() {
            top = top.max(e.threshold());
        }
        if let Ok(m) = e.min_element() {
            top = top.max(m + 1);
        }
        if let Some(m) = e.max_element() {
            top = top.max(m + 1);
        }
        for f in &h.edges()[..i] {
            if let Some(m) = e.intersect(f).max_element() {
                top = top.max(m + 1);
            }
        }
    }
    top
}

/// The edges cut down to `[0, t)`.
pub fn truncate(h: &Hypergraph, t: u64) -> Result<Hypergraph, HypergraphError> {
    let window = EpSet::range(0, t);
    Hypergraph::new(h.edges().iter().map(|e| e.intersect(&window)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Property check; planted sunflowers must be flagged with their tuple.
    CheckC,
    /// Maximizing order, inner subsystems, and the extracted cover.
    Maxwo,
    /// Every cover pipeline lands in the brute oracle.
    Oracle,
    /// Closure chains are good cuts and respect the multiplicity bound.
    Closure,
    /// Layered cover and order over degenerate and nontrivial cuts.
    Layered,
    /// Two-tier cover against the oracle on the truncated instance.
    TwoTier,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::CheckC,
        Check::Maxwo,
        Check::Oracle,
        Check::Closure,
        Check::Layered,
        Check::TwoTier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::CheckC => "check_c",
            Check::Maxwo => "maxwo",
            Check::Oracle => "oracle",
            Check::Closure => "closure",
            Check::Layered => "layered",
            Check::TwoTier => "two_tier",
        }
    }

    pub fn applies_to(self, kind: GenKind) -> bool {
        use GenKind::*;
        match self {
            Check::CheckC => true,
            Check::Maxwo | Check::Layered => kind != SunflowerViolation,
            Check::Oracle | Check::Closure => kind == FiniteCkr,
            Check::TwoTier => kind == Mixed,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// One fuzz trial. Failed trials carry the instance, which together with
/// `seed` and `trial` replays the failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: u64,
    pub seed: u64,
    pub generator: GenKind,
    pub params: GenParams,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
}

/// Parameter overrides; unset fields are drawn per trial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParamOverrides {
    pub k: Option<usize>,
    pub r: Option<u64>,
    pub edges: Option<usize>,
    pub vertices: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: u64,
    pub generators: Vec<GenKind>,
    pub checks: Vec<Check>,
    pub overrides: ParamOverrides,
}

impl FuzzConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        FuzzConfig {
            trials,
            seed,
            generators: GenKind::ALL.to_vec(),
            checks: Check::ALL.to_vec(),
            overrides: ParamOverrides::default(),
        }
    }
}

/// Default parameter ranges per generator.
pub fn draw_params<R: Rng>(kind: GenKind, o: &ParamOverrides, rng: &mut R) -> GenParams {
    let (k, r, vertices) = match kind {
        GenKind::FiniteCkr => (rng.random_range(1..=4), rng.random_range(1..=3), 10),
        GenKind::EpsetCkr => (rng.random_range(2..=4), rng.random_range(1..=5), 40),
        GenKind::SunflowerViolation => (rng.random_range(1..=4), rng.random_range(1..=4), 10),
        GenKind::Mixed => (rng.random_range(2..=3), rng.random_range(1..=3), 8),
    };
    let k = o.k.unwrap_or(k);
    let mut r = o.r.unwrap_or(r);
    if k == 1 && o.r.is_none() {
        r = r.max(2);
    }
    let edges = o.edges.unwrap_or_else(|| match kind {
        GenKind::FiniteCkr | GenKind::Mixed => rng.random_range(1..=6),
        GenKind::EpsetCkr => rng.random_range(1..=12),
        GenKind::SunflowerViolation => k + rng.random_range(0..=4),
    });
    GenParams {
        k,
        r,
        edges,
        vertices: o.vertices.unwrap_or(vertices),
    }
}

pub fn run_trial(cfg: &FuzzConfig, trial: u64) -> TrialReport {
    let mut rng = trial_rng(cfg.seed, trial);
    let generator = cfg.generators[(trial % cfg.generators.len() as u64) as usize];
    let params = draw_params(generator, &cfg.overrides, &mut rng);
    let mut report = TrialReport {
        trial,
        seed: cfg.seed,
        generator,
        params,
        checks: Vec::new(),
        passed: false,
        error: None,
        instance: None,
    };
    let generated = match generate_with(generator, &params, &mut rng) {
        Ok(g) => g,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    for &check in cfg.checks.iter().filter(|c| c.applies_to(generator)) {
        let outcome = run_check(check, &generated, &params, &mut rng);
        report.checks.push(CheckResult {
            check,
            passed: outcome.is_ok(),
            detail: outcome.err(),
        });
    }
    report.passed = report.checks.iter().all(|c| c.passed);
    if !report.passed {
        report.instance = Some(generated.instance);
    }
    report
}

/// Runs every trial on the rayon pool and returns the reports by trial
/// index.
pub fn fuzz(cfg: &FuzzConfig) -> Vec<TrialReport> {
    if cfg.generators.is_empty() {
        return Vec::new();
    }
    let mut reports: Vec<TrialReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect();
    reports.sort_by_key(|r| r.trial);
    reports
}

pub fn run_check<R: Rng>(
    check: Check,
    g: &Generated,
    params: &GenParams,
    rng: &mut R,
) -> Result<(), String> {
    let h = &g.instance.hypergraph;
    let (k, r) = (params.k, params.r);
    match check {
        Check::CheckC => check_property(h, k, r, g.planted.as_deref()),
        Check::Maxwo => check_maxwo(h, k, r),
        Check::Oracle => check_oracle(h, k, r),
        Check::Closure => check_closure(h, k, r, rng),
        Check::Layered => check_layered(h, k, r, rng),
        Check::TwoTier => check_two_tier(h, k, r),
    }
}

fn show<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check_property(
    h: &Hypergraph,
    k: usize,
    r: u64,
    planted: Option<&[usize]>,
) -> Result<(), String> {
    let out = h.check_c(k, Card::Finite(r)).map_err(show)?;
    match (planted, out) {
        (None, CheckOutcome::Ok) => Ok(()),
        (Some(p), CheckOutcome::Violation(t)) if t == p => Ok(()),
        (p, o) => Err(format!("expected {p:?}, got {o:?}")),
    }
}

fn verify_cover(h: &Hypergraph, w: &WitnessedCover) -> Result<(), String> {
    w.verify(h).map_err(show)?;
    if !is_cover(h, &w.cover_set()) {
        return Err("not a cover".into());
    }
    find_witness(h, &w.cover).map(|_| ()).map_err(show)
}

fn check_maxwo(h: &Hypergraph, k: usize, r: u64) -> Result<(), String> {
    let order = build_maximizing(h, k, r).map_err(show)?;
    if !order.is_maximizing(h).map_err(show)? {
        return Err("order is not maximizing".into());
    }
    if k >= 2 {
        for (n, _, sub) in subsystems(h) {
            if !sub.check_c(k - 1, Card::Finite(r)).map_err(show)?.is_ok() {
                return Err(format!("subsystem below edge {n} fails C({},{r})", k - 1));
            }
        }
    }
    let w = klimo_extract(&order, h).map_err(show)?;
    verify_cover(h, &w)
}

fn in_oracle(
    oracle: &[BTreeSet<u64>],
    h: &Hypergraph,
    w: &WitnessedCover,
    name: &str,
) -> Result<(), String> {
    verify_cover(h, w).map_err(|e| format!("{name}: {e}"))?;
    if oracle.contains(&w.cover) {
        Ok(())
    } else {
        Err(format!("{name}: {:?} is not a minimal cover", w.cover))
    }
}

/// Two-tier cover of the inclusion-minimal edges, with witnesses moved
/// back to indices of `h`. It covers `h` because every edge contains a
/// minimal one.
pub fn two_tier_on_antichain(h: &Hypergraph, k: usize, r: u64) -> Result<WitnessedCover, String> {
    let minimal = h.min_family();
    let mut w = two_tier_cover(&h.subfamily(&minimal), k, r).map_err(show)?;
    for e in w.witness.values_mut() {
        *e = minimal[*e];
    }
    Ok(w)
}

fn check_oracle(h: &Hypergraph, k: usize, r: u64) -> Result<(), String> {
    let oracle = brute_minimal_covers(h).map_err(show)?;
    let chain = build_closure_chain(h, k, r, &crate::stepping::default_seeds(h)).map_err(show)?;
    let layered = layered_cover(h, &chain, &BruteSolver).map_err(show)?;
    in_oracle(&oracle, h, &layered, "brute-layered")?;
    let maxwo = MaxWoSolver { k, r }.solve(h).map_err(show)?;
    in_oracle(&oracle, h, &maxwo, "maxwo+klimo")?;
    in_oracle(&oracle, h, &two_tier_on_antichain(h, k, r)?, "two_tier")?;
    let everything: BTreeSet<u64> = h.universe().iter().collect();
    let pruned = minimalize(h, &everything).map_err(show)?;
    in_oracle(&oracle, h, &pruned, "minimalize")
}

/// Seeds for a random closure chain: a few singletons and pairs from the
/// universe.
pub fn random_seeds<R: Rng>(h: &Hypergraph, rng: &mut R) -> Vec<EpSet> {
    let points: Vec<u64> = h.universe().iter().collect();
    if points.is_empty() {
        return Vec::new();
    }
    let count = rng.random_range(1..=points.len());
    (0..count)
        .map(|_| {
            let size = rng.random_range(1..=2.min(points.len()));
            EpSet::finite(
                index::sample(rng, points.len(), size)
                    .into_iter()
                    .map(|i| points[i]),
            )
        })
        .collect()
}

fn check_closure<R: Rng>(h: &Hypergraph, k: usize, r: u64, rng: &mut R) -> Result<(), String> {
    let cut = build_closure_chain(h, k, r, &random_seeds(h, rng)).map_err(show)?;
    if !is_good_cut(h, &cut) {
        return Err(format!(
            "closure chain {:?} is not a good cut",
            cut.layers()
        ));
    }
    let points: Vec<u64> = h.universe().iter().collect();
    if points.len() < r as usize {
        return Ok(());
    }
    for _ in 0..20 {
        let x: Vec<u64> = index::sample(rng, points.len(), r as usize)
            .into_iter()
            .map(|i| points[i])
            .collect();
        let m = multiplicity(h, &x);
        if m + 1 > k {
            return Err(format!("{x:?} lies in {m} edges"));
        }
    }
    Ok(())
}

fn check_layered<R: Rng>(h: &Hypergraph, k: usize, r: u64, rng: &mut R) -> Result<(), String> {
    let universe = h.universe();
    let maxwo = MaxWoSolver { k, r };
    let finite = universe.is_finite();
    let degenerate = Cut::trivial(universe.clone());
    let direct = if finite {
        BruteSolver.solve(h)
    } else {
        maxwo.solve(h)
    }
    .map_err(show)?;
    let via_cut = if finite {
        layered_cover(h, &degenerate, &BruteSolver)
    } else {
        layered_cover(h, &degenerate, &maxwo)
    }
    .map_err(show)?;
    if via_cut != direct {
        return Err("degenerate cut differs from the direct solver".into());
    }
    let cut = if finite {
        build_closure_chain(h, k, r, &random_seeds(h, rng)).map_err(show)?
    } else {
        let small: Vec<EpSet> = h
            .edges()
            .iter()
            .filter(|e| e.is_finite())
            .cloned()
            .collect();
        Cut::new(vec![EpSet::empty(), EpSet::union_all(&small), universe]).map_err(show)?
    };
    let w = if finite {
        layered_cover(h, &cut, &BruteSolver)
    } else {
        layered_cover(h, &cut, &maxwo)
    }
    .map_err(show)?;
    verify_cover(h, &w)?;
    if finite && !brute_minimal_covers(h).map_err(show)?.contains(&w.cover) {
        return Err(format!("layered cover {:?} is not minimal", w.cover));
    }
    let order = layered_order(h, &cut, &maxwo).map_err(show)?;
    if !order.is_maximizing(h).map_err(show)? {
        return Err("layered order is not maximizing".into());
    }
    Ok(())
}

/// Two-tier cover of `h` compared with the oracle on the truncation of `h`
/// past all of its structure.
pub fn check_two_tier(h: &Hypergraph, k: usize, r: u64) -> Result<(), String> {
    let w = two_tier_cover(h, k, r).map_err(show)?;
    verify_cover(h, &w)?;
    let t = truncation_point(h, &w.cover);
    let cut_down = truncate(h, t).map_err(show)?;
    let window = EpSet::range(0, t);
    for i in 0..h.len() {
        for j in 0..i {
            let meet = h.edge(i).intersect(h.edge(j));
            if meet.is_finite() && meet != cut_down.edge(i).intersect(cut_down.edge(j)) {
                return Err(format!("truncation at {t} changes the meet of {j} and {i}"));
            }
        }
        if !h.edge(i).intersect(&window).is_subset(cut_down.edge(i)) {
            return Err("truncation lost points".into());
        }
    }
    let oracle = brute_minimal_covers_bounded(&cut_down, TRUNCATION_BOUND).map_err(show)?;
    if oracle.contains(&w.cover) {
        Ok(())
    } else {
        Err(format!(
            "{:?} is not minimal on the truncation at {t}",
            w.cover
        ))
    }
}

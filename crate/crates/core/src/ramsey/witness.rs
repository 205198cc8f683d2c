//! Least-witness searches for the finite Ramsey statements.
//!
//! Each level `m` becomes a [`Problem`]: the keys are the approximations to
//! be colored and each configuration is the set of keys below one target.
//! Levels are tried upward from the first one with a target; the first level
//! without a bad coloring is the witness.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use super::search::{backtracking, exhaustive, Problem, Search, EXHAUSTIVE_CEILING};
use crate::gf::{enumerate_rre, subspace_leq};
use crate::space::{approximations_at_depth, Space, Stem};
use crate::spaces::{coarsenings, enumerate_partitions, Ellentuck, EllentuckApprox};
use crate::{Error, Result};

/// Largest key or target list built for one level.
pub const DOMAIN_CEILING: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// All `s^|domain|` colorings, refusing above the ceiling.
    Exhaustive { ceiling: u64 },
    /// Complete depth-first search up to `budget` nodes per level.
    Backtracking { budget: u64 },
}

impl Mode {
    pub fn exhaustive() -> Self {
        Mode::Exhaustive { ceiling: EXHAUSTIVE_CEILING }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive { .. } => "exhaustive",
            Mode::Backtracking { .. } => "backtracking",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    /// Every `s`-coloring of `M^[k]` has a monochromatic `H^[k]`, `H ∈ M^[n]`.
    Classical { k: usize, n: usize, s: usize, bound: usize },
    /// `k`-dimensional subspaces of `F_q^m` and an `n`-dimensional target.
    Glr { q: u8, k: usize, n: usize, s: usize, bound: usize },
    /// `k`-partitions of `n` and a target `t ∈ (n)^m` with `(t)^k` monochromatic.
    ParamSet { k: usize, m: usize, s: usize, bound: usize },
    /// `AR_k^m(A)` in Ellentuck's space with `A = {0, …, ground-1}`.
    Abstract { ground: usize, k: usize, n: usize, s: usize, bound: usize },
}

impl Instance {
    pub fn colors(&self) -> usize {
        match *self {
            Instance::Classical { s, .. }
            | Instance::Glr { s, .. }
            | Instance::ParamSet { s, .. }
            | Instance::Abstract { s, .. } => s,
        }
    }

    pub fn bound(&self) -> usize {
        match *self {
            Instance::Classical { bound, .. }
            | Instance::Glr { bound, .. }
            | Instance::ParamSet { bound, .. }
            | Instance::Abstract { bound, .. } => bound,
        }
    }

    /// The smallest level with at least one target.
    pub fn first_level(&self) -> usize {
        match *self {
            Instance::Classical { n, .. } => n,
            Instance::Glr { n, .. } => n,
            Instance::ParamSet { m, .. } => m,
            Instance::Abstract { n, .. } => n,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut words = s.split(' ');
        let kind = words.next().unwrap_or("");
        let mut get = |key: &str| -> Result<usize> {
            let w = words.next().ok_or_else(|| Error::Parse(format!("missing {key} in {s:?}")))?;
            let v = w
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::Parse(format!("expected {key}= in {s:?}")))?;
            v.parse().map_err(|_| Error::Parse(format!("bad {key} in {s:?}")))
        };
        let inst = match kind {
            "classical" => Instance::Classical { k: get("k")?, n: get("n")?, s: get("s")?, bound: get("bound")? },
            "glr" => {
                let q = get("q")?;
                let q = u8::try_from(q).map_err(|_| Error::Parse(format!("bad q in {s:?}")))?;
                Instance::Glr { q, k: get("k")?, n: get("n")?, s: get("s")?, bound: get("bound")? }
            }
            "paramset" => Instance::ParamSet { k: get("k")?, m: get("m")?, s: get("s")?, bound: get("bound")? },
            "abstract" => Instance::Abstract {
                ground: get("ground")?,
                k: get("k")?,
                n: get("n")?,
                s: get("s")?,
                bound: get("bound")?,
            },
            _ => return Err(Error::Parse(format!("unknown instance {s:?}"))),
        };
        if words.next().is_some() {
            return Err(Error::Parse(format!("trailing words in {s:?}")));
        }
        Ok(inst)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instance::Classical { k, n, s, bound } => write!(f, "classical k={k} n={n} s={s} bound={bound}"),
            Instance::Glr { q, k, n, s, bound } => write!(f, "glr q={q} k={k} n={n} s={s} bound={bound}"),
            Instance::ParamSet { k, m, s, bound } => write!(f, "paramset k={k} m={m} s={s} bound={bound}"),
            Instance::Abstract { ground, k, n, s, bound } => {
                write!(f, "abstract ground={ground} k={k} n={n} s={s} bound={bound}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// The least witness.
    Found(usize),
    /// No witness up to this level; the next level ran out of budget.
    LowerBound(usize),
    /// Bad colorings at every level up to the bound.
    ExhaustedBound(usize),
}

impl fmt::Display for WitnessOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessOutcome::Found(v) => write!(f, "found {v}"),
            WitnessOutcome::LowerBound(v) => write!(f, "lower-bound {v}"),
            WitnessOutcome::ExhaustedBound(v) => write!(f, "exhausted {v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelResult {
    Bad,
    AllGood,
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub keys: usize,
    pub configs: usize,
    pub checked: u64,
    pub result: LevelResult,
}

/// A coloring with no monochromatic configuration at `level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadColoring {
    pub level: usize,
    pub entries: Vec<(String, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessResult {
    pub instance: Instance,
    pub mode: Mode,
    pub outcome: WitnessOutcome,
    pub levels: Vec<LevelReport>,
    /// The bad coloring at the highest level that has one.
    pub bad: Option<BadColoring>,
}

impl WitnessResult {
    /// Total colorings or nodes examined.
    pub fn checked(&self) -> u64 {
        self.levels.iter().map(|l| l.checked).sum()
    }

    pub fn value(&self) -> usize {
        match self.outcome {
            WitnessOutcome::Found(v) | WitnessOutcome::LowerBound(v) | WitnessOutcome::ExhaustedBound(v) => v,
        }
    }

    /// Deterministic text form read back by the verifier.
    pub fn certificate(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance {}", self.instance);
        let _ = writeln!(out, "mode {}", self.mode.name());
        let _ = writeln!(out, "outcome {}", self.outcome);
        for l in &self.levels {
            let r = match l.result {
                LevelResult::Bad => "bad",
                LevelResult::AllGood => "good",
                LevelResult::Budget => "budget",
            };
            let _ = writeln!(out, "level {} keys={} configs={} checked={} {r}", l.level, l.keys, l.configs, l.checked);
        }
        if let Some(b) = &self.bad {
            let _ = writeln!(out, "bad {}", b.level);
            for (k, c) in &b.entries {
                let _ = writeln!(out, "color {k} {c}");
            }
        }
        out
    }
}

/// One level: keys in canonical order, configurations as key indices.
struct Level {
    keys: Vec<String>,
    configs: Vec<Vec<u32>>,
}

fn check_params(k: usize, n: usize, s: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ k ≤ n, got k={k} n={n}")));
    }
    if s == 0 || s > 255 {
        return Err(Error::InvalidParameter(format!("colors must be in 1..=255, got {s}")));
    }
    Ok(())
}

fn level_from<A: Ord + fmt::Display>(domain: &[A], targets: &[A], below: impl Fn(&A, &A) -> bool) -> Level {
    let keys = domain.iter().map(ToString::to_string).collect();
    let configs =
        targets.iter().map(|t| (0..domain.len() as u32).filter(|&i| below(&domain[i as usize], t)).collect()).collect();
    Level { keys, configs }
}

/// Drives the level loop. `build(m)` returns `None` when level `m` has no
/// target.
fn run(
    instance: Instance,
    mode: Mode,
    levels: impl Iterator<Item = usize>,
    mut build: impl FnMut(usize) -> Result<Option<Level>>,
) -> Result<WitnessResult> {
    let s = instance.colors();
    let mut reports = Vec::new();
    let mut bad = None;
    let mut last_bad = instance.first_level().saturating_sub(1);
    for m in levels {
        let Some(level) = build(m)? else {
            continue;
        };
        let problem = Problem::new(level.keys.len(), s, level.configs)?;
        let report = match mode {
            Mode::Exhaustive { ceiling } => exhaustive(&problem, ceiling)?,
            Mode::Backtracking { budget } => backtracking(&problem, budget),
        };
        let result = match &report.result {
            Search::Bad(_) => LevelResult::Bad,
            Search::AllGood => LevelResult::AllGood,
            Search::Budget => LevelResult::Budget,
        };
        reports.push(LevelReport {
            level: m,
            keys: problem.keys(),
            configs: problem.configs().len(),
            checked: report.checked,
            result,
        });
        match report.result {
            Search::AllGood => {
                return Ok(WitnessResult { instance, mode, outcome: WitnessOutcome::Found(m), levels: reports, bad });
            }
            Search::Budget => {
                return Ok(WitnessResult {
                    instance,
                    mode,
                    outcome: WitnessOutcome::LowerBound(last_bad),
                    levels: reports,
                    bad,
                });
            }
            Search::Bad(c) => {
                last_bad = m;
                bad = Some(BadColoring { level: m, entries: level.keys.into_iter().zip(c).collect() });
            }
        }
    }
    Ok(WitnessResult {
        instance,
        mode,
        outcome: WitnessOutcome::ExhaustedBound(instance.bound()),
        levels: reports,
        bad,
    })
}

/// Least `m ≤ bound` such that every `s`-coloring of `AR_k^m(A)` admits
/// `b ∈ AR_n^m(A)` with `AR_k^m(A, b)` monochromatic. The instance
/// descriptor records the space and stem only for Ellentuck full stems;
/// other spaces are reported as the space's own name and parameters.
pub fn finite_ramsey_witness<S: Space>(
    space: &S,
    stem: &Stem<S::Approx>,
    k: usize,
    n: usize,
    s: usize,
    bound: usize,
    mode: Mode,
) -> Result<(WitnessResult, String)> {
    check_params(k, n, s)?;
    space.check(stem.top())?;
    let len = space.length(stem.top());
    if bound > len {
        return Err(Error::OutOfRange { index: bound, limit: len });
    }
    let ground = len;
    let instance = Instance::Abstract { ground, k, n, s, bound };
    let r = run(instance, mode, n..=bound, |m| {
        let targets = approximations_at_depth(space, stem, n, m)?;
        if targets.is_empty() {
            return Ok(None);
        }
        let domain = approximations_at_depth(space, stem, k, m)?;
        Ok(Some(level_from(&domain, &targets, |a, b| space.fin_leq(a, b))))
    })?;
    let label = format!("{} {} base={}", space.name(), space.params(), stem);
    Ok((r, label))
}

/// The abstract search on Ellentuck's space `{0, …, ground-1}`.
pub fn abstract_ellentuck_witness(
    ground: usize,
    k: usize,
    n: usize,
    s: usize,
    bound: usize,
    mode: Mode,
) -> Result<WitnessResult> {
    let space = Ellentuck::new(u32::try_from(ground).unwrap_or(u32::MAX))?;
    let stem = Stem::new(&space, space.full())?;
    Ok(finite_ramsey_witness(&space, &stem, k, n, s, bound, mode)?.0)
}

/// Classical finite Ramsey numbers through the `k+1, n+1, m-1` shift:
/// level `M` of the result is level `M + 1` of the abstract search, with
/// the point `M` removed from every key.
pub fn classical_ramsey_number(k: usize, n: usize, s: usize, bound: usize, mode: Mode) -> Result<WitnessResult> {
    check_params(k, n, s)?;
    if bound + 1 > crate::spaces::ellentuck::MAX_GROUND as usize {
        return Err(Error::InvalidParameter(format!("bound {bound} too large")));
    }
    let shifted = abstract_ellentuck_witness(bound + 1, k + 1, n + 1, s, bound + 1, mode)?;
    let back = |m: usize| m - 1;
    let strip = |key: &str, m: usize| -> String {
        let a = EllentuckApprox::parse(key).expect("keys come from the space");
        EllentuckApprox::new(a.elements().iter().copied().filter(|&x| x as usize != m - 1).collect()).to_string()
    };
    let outcome = match shifted.outcome {
        WitnessOutcome::Found(m) => WitnessOutcome::Found(back(m)),
        WitnessOutcome::LowerBound(m) => WitnessOutcome::LowerBound(m.saturating_sub(1)),
        WitnessOutcome::ExhaustedBound(_) => WitnessOutcome::ExhaustedBound(bound),
    };
    let levels = shifted.levels.iter().map(|l| LevelReport { level: back(l.level), ..*l }).collect();
    let bad = shifted.bad.map(|b| BadColoring {
        level: back(b.level),
        entries: b.entries.iter().map(|(key, c)| (strip(key, b.level), *c)).collect(),
    });
    Ok(WitnessResult { instance: Instance::Classical { k, n, s, bound }, mode, outcome, levels, bad })
}

/// Least `m` such that every `s`-coloring of the `k`-dimensional subspaces
/// of `F_q^m` leaves an `n`-dimensional subspace with all its
/// `k`-dimensional subspaces one color.
pub fn glr_witness(q: u8, k: usize, n: usize, s: usize, bound: usize, mode: Mode) -> Result<WitnessResult> {
    check_params(k, n, s)?;
    crate::gf::check_modulus(q)?;
    let instance = Instance::Glr { q, k, n, s, bound };
    run(instance, mode, n..=bound, |m| {
        let targets = enumerate_rre(n, m, q, DOMAIN_CEILING)?;
        let domain = enumerate_rre(k, m, q, DOMAIN_CEILING)?;
        Ok(Some(level_from(&domain, &targets, |a, b| subspace_leq(a, b).unwrap_or(false))))
    })
}

/// Least `n` such that every `s`-coloring of `(n)^k` leaves `t ∈ (n)^m`
/// with `(t)^k` monochromatic.
pub fn gr_paramset_witness(k: usize, m: usize, s: usize, bound: usize, mode: Mode) -> Result<WitnessResult> {
    check_params(k, m, s)?;
    let instance = Instance::ParamSet { k, m, s, bound };
    run(instance, mode, m..=bound, |n| {
        let domain = enumerate_partitions(n, k, DOMAIN_CEILING)?;
        let targets = enumerate_partitions(n, m, DOMAIN_CEILING)?;
        let keys: Vec<String> = domain.iter().map(ToString::to_string).collect();
        let mut configs = Vec::with_capacity(targets.len());
        for t in &targets {
            let c = coarsenings(t, k)?;
            configs
                .push(c.iter().map(|p| domain.binary_search(p).expect("coarsening is a k-partition") as u32).collect());
        }
        Ok(Some(Level { keys, configs }))
    })
}

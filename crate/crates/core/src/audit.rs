//! Exhaustive bounded checks of the axioms on a truncated universe.
//!
//! Every stem of the truncation is visited. The amalgamation and pigeonhole
//! axioms, and the length/depth lemma, range over pairs `(a, A)` with
//! `a ∈ AR(A)`, `|a| ≤ max_len` and `depth_A(a) ≤ max_depth`. Verdicts are
//! never stronger than "bounded-pass".
//!
//! A6 in a truncation: stems near the boundary have no one-step extensions at
//! all, which would make the axiom vacuous. The audit requires the witness
//! `B` to keep at least one extension of `a`, and counts base pairs whose
//! extension set is already empty as boundary-skipped.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::space::Space;
use crate::{Error, Result, DEFAULT_CEILING};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditBounds {
    /// Largest `depth_A(a)` visited by A5, A6.
    pub max_depth: usize,
    /// Largest `|a|` visited by A5, A6.
    pub max_len: usize,
    /// Run the pigeonhole check.
    pub a6: bool,
    /// Refuse when the estimated instance count exceeds this.
    pub ceiling: u64,
}

impl AuditBounds {
    pub fn new(max_depth: usize, max_len: usize) -> Self {
        AuditBounds { max_depth, max_len, a6: true, ceiling: DEFAULT_CEILING }
    }

    pub fn without_a6(mut self) -> Self {
        self.a6 = false;
        self
    }

    pub fn with_ceiling(mut self, ceiling: u64) -> Self {
        self.ceiling = ceiling;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4i,
    A4ii,
    A5i,
    A5ii,
    A6,
    /// `|a| ≤ depth_A(a)`.
    LengthDepth,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::A1,
        Axiom::A2,
        Axiom::A3,
        Axiom::A4i,
        Axiom::A4ii,
        Axiom::A5i,
        Axiom::A5ii,
        Axiom::A6,
        Axiom::LengthDepth,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::A1 => "A1",
            Axiom::A2 => "A2",
            Axiom::A3 => "A3",
            Axiom::A4i => "A4(i)",
            Axiom::A4ii => "A4(ii)",
            Axiom::A5i => "A5(i)",
            Axiom::A5ii => "A5(ii)",
            Axiom::A6 => "A6",
            Axiom::LengthDepth => "length-depth",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample among `instances` checked instances.
    BoundedPass {
        instances: u64,
        boundary_skipped: u64,
    },
    /// A replayable description of the failing instance.
    Counterexample {
        witness: String,
    },
    Skipped,
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }

    pub fn is_bounded_pass(&self) -> bool {
        matches!(self, Verdict::BoundedPass { .. })
    }

    pub fn instances(&self) -> u64 {
        match self {
            Verdict::BoundedPass { instances, .. } => *instances,
            _ => 0,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::BoundedPass { instances, boundary_skipped } => {
                write!(f, "bounded-pass instances={instances} boundary-skipped={boundary_skipped}")
            }
            Verdict::Counterexample { witness } => write!(f, "counterexample {witness}"),
            Verdict::Skipped => f.write_str("skipped"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub space: String,
    pub params: String,
    pub bounds: AuditBounds,
    pub stems: u64,
    pub verdicts: Vec<(Axiom, Verdict)>,
}

impl AxiomReport {
    pub fn verdict(&self, axiom: Axiom) -> &Verdict {
        &self.verdicts.iter().find(|(a, _)| *a == axiom).expect("every axiom is reported").1
    }

    /// No axiom produced a counterexample.
    pub fn passed(&self) -> bool {
        !self.verdicts.iter().any(|(_, v)| v.is_counterexample())
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "audit space={} {} stems={} max_depth={} max_len={}",
            self.space, self.params, self.stems, self.bounds.max_depth, self.bounds.max_len
        )?;
        for (a, v) in &self.verdicts {
            writeln!(f, "{a} {v}")?;
        }
        Ok(())
    }
}

fn cex(witness: String) -> Verdict {
    Verdict::Counterexample { witness }
}

fn pass(instances: u64, boundary_skipped: u64) -> Verdict {
    Verdict::BoundedPass { instances, boundary_skipped }
}

struct Sweep<A> {
    tops: Vec<A>,
    chains: Vec<Vec<A>>,
    below: Vec<Vec<A>>,
}

/// A base pair `(a, A)` with `n = depth_A(a)`.
struct Pair<A> {
    stem: usize,
    a: A,
    depth: usize,
    ext: Vec<A>,
}

pub fn audit_axioms<S: Space>(space: &S, bounds: &AuditBounds) -> Result<AxiomReport> {
    let size = space.universe_size();
    let ceiling = bounds.ceiling as u128;
    let pair_cost = size.saturating_mul(size);
    if pair_cost > ceiling {
        return Err(Error::CeilingExceeded { estimate: pair_cost, ceiling });
    }
    let tops = space.universe();
    let chains: Vec<Vec<S::Approx>> =
        tops.iter().map(|t| (0..=space.length(t)).map(|n| space.restrict(t, n)).collect()).collect();
    let below = tops.iter().map(|t| space.fin_below(t)).collect();
    let sweep = Sweep { tops, chains, below };

    let (lemma, pairs) = length_depth(space, &sweep, bounds);
    let a6_cost: u128 = if bounds.a6 {
        pairs.iter().map(|p| 1u128.checked_shl(p.ext.len() as u32).unwrap_or(u128::MAX)).fold(0, u128::saturating_add)
    } else {
        0
    };
    let estimate = pair_cost.saturating_add(a6_cost);
    if estimate > ceiling {
        return Err(Error::CeilingExceeded { estimate, ceiling });
    }

    let verdicts = alloc::vec![
        (Axiom::A1, a1(space, &sweep)),
        (Axiom::A2, a2(&sweep)),
        (Axiom::A3, a3(space, &sweep)),
        (Axiom::A4i, a4i(space, &sweep)),
        (Axiom::A4ii, a4ii(space, &sweep)),
        (Axiom::A5i, a5i(space, &sweep, &pairs)),
        (Axiom::A5ii, a5ii(space, &sweep, &pairs)),
        (Axiom::A6, if bounds.a6 { a6(space, &sweep, &pairs) } else { Verdict::Skipped }),
        (Axiom::LengthDepth, lemma),
    ];
    Ok(AxiomReport {
        space: String::from(space.name()),
        params: space.params(),
        bounds: *bounds,
        stems: sweep.tops.len() as u64,
        verdicts,
    })
}

fn a1<S: Space>(space: &S, sw: &Sweep<S::Approx>) -> Verdict {
    let e = space.empty();
    if space.length(&e) != 0 {
        return cex(format!("|empty|={}", space.length(&e)));
    }
    for (top, chain) in sw.tops.iter().zip(&sw.chains) {
        if chain[0] != e {
            return cex(format!("stem={top} r_0={}", chain[0]));
        }
    }
    pass(sw.tops.len() as u64, 0)
}

fn a2<A: Ord + Clone + fmt::Display>(sw: &Sweep<A>) -> Verdict {
    let mut seen: BTreeMap<&[A], &A> = BTreeMap::new();
    for (top, chain) in sw.tops.iter().zip(&sw.chains) {
        if let Some(other) = seen.insert(chain, top) {
            return cex(format!("stems {other} and {top} share every approximation"));
        }
    }
    pass(sw.tops.len() as u64, 0)
}

fn a3<S: Space>(space: &S, sw: &Sweep<S::Approx>) -> Verdict {
    let mut seen: BTreeMap<&S::Approx, (usize, &S::Approx)> = BTreeMap::new();
    let mut count = 0u64;
    for (top, chain) in sw.tops.iter().zip(&sw.chains) {
        for (n, x) in chain.iter().enumerate() {
            count += 1;
            if space.length(x) != n {
                return cex(format!("stem={top} n={n} |r_n|={}", space.length(x)));
            }
            if let Some((m, other)) = seen.get(x) {
                let oc = &sw.chains[sw.tops.binary_search(other).expect("top of the universe")];
                if *m != n || oc[..n] != chain[..n] {
                    return cex(format!("r_{n}({top}) = r_{m}({other}) = {x} with different prefixes"));
                }
            } else {
                seen.insert(x, (n, top));
            }
        }
    }
    pass(count, 0)
}

fn a4i<S: Space>(space: &S, sw: &Sweep<S::Approx>) -> Verdict {
    let mut count = 0u64;
    for (b, cb) in sw.tops.iter().zip(&sw.chains) {
        for (a, ca) in sw.tops.iter().zip(&sw.chains) {
            count += 1;
            let native = space.stem_leq(b, a);
            let finite = cb.iter().all(|x| ca.iter().any(|y| space.fin_leq(x, y)));
            if native != finite {
                return cex(format!("B={b} A={a} order={native} finitization={finite}"));
            }
        }
    }
    pass(count, 0)
}

fn a4ii<S: Space>(space: &S, sw: &Sweep<S::Approx>) -> Verdict {
    let e = space.empty();
    let mut count = 0u64;
    for (a, below) in sw.tops.iter().zip(&sw.below) {
        count += 1;
        if !space.fin_leq(a, a) {
            return cex(format!("a={a} not reflexive"));
        }
        let set: BTreeSet<&S::Approx> = below.iter().collect();
        if set.len() != below.len() {
            return cex(format!("fin_below({a}) repeats an element"));
        }
        if !set.contains(a) || !set.contains(&e) {
            return cex(format!("fin_below({a}) misses a or the empty approximation"));
        }
        let filtered: BTreeSet<&S::Approx> = sw.tops.iter().filter(|b| space.fin_leq(b, a)).collect();
        if filtered != set {
            return cex(format!("fin_below({a}) differs from the universe filter"));
        }
        for b in below {
            let inner = space.fin_below(b);
            count += inner.len() as u64;
            if let Some(c) = inner.iter().find(|c| !space.fin_leq(c, a)) {
                return cex(format!("{c} ≤ {b} ≤ {a} but not {c} ≤ {a}"));
            }
        }
    }
    pass(count, 0)
}

fn length_depth<S: Space>(space: &S, sw: &Sweep<S::Approx>, bounds: &AuditBounds) -> (Verdict, Vec<Pair<S::Approx>>) {
    let mut pairs = Vec::new();
    let mut count = 0u64;
    let mut violation = None;
    for (i, (top, chain)) in sw.tops.iter().zip(&sw.chains).enumerate() {
        for a in &sw.below[i] {
            count += 1;
            let Some(depth) = chain.iter().position(|r| space.fin_leq(a, r)) else {
                violation.get_or_insert_with(|| format!("a={a} A={top} has no depth"));
                continue;
            };
            if space.length(a) > depth {
                violation.get_or_insert_with(|| format!("a={a} A={top} |a|={} depth={depth}", space.length(a)));
            }
            if space.length(a) <= bounds.max_len && depth <= bounds.max_depth {
                let k = space.length(a);
                let ext = sw.below[i]
                    .iter()
                    .filter(|c| space.length(c) == k + 1 && space.restrict(c, k) == *a)
                    .cloned()
                    .collect();
                pairs.push(Pair { stem: i, a: a.clone(), depth, ext });
            }
        }
    }
    let verdict = match violation {
        Some(w) => cex(w),
        None => pass(count, 0),
    };
    (verdict, pairs)
}

/// Tops of `[n, A]` among the reducts of `A`, shortest first.
fn reducts_at<'a, S: Space>(space: &S, sw: &'a Sweep<S::Approx>, stem: usize, n: usize) -> Vec<&'a S::Approx> {
    let base = &sw.chains[stem][n];
    let mut out: Vec<&S::Approx> =
        sw.below[stem].iter().filter(|c| space.length(c) >= n && space.restrict(c, n) == *base).collect();
    out.sort_by_key(|c| space.length(c));
    out
}

/// Tops of `[a, A]`.
fn neighborhood<'a, S: Space>(space: &S, sw: &'a Sweep<S::Approx>, stem: usize, a: &S::Approx) -> Vec<&'a S::Approx> {
    let k = space.length(a);
    sw.below[stem].iter().filter(|c| space.length(c) >= k && space.restrict(c, k) == *a).collect()
}

fn a5i<S: Space>(space: &S, sw: &Sweep<S::Approx>, pairs: &[Pair<S::Approx>]) -> Verdict {
    let mut count = 0u64;
    for p in pairs {
        for b in reducts_at(space, sw, p.stem, p.depth) {
            count += 1;
            if !space.fin_leq(&p.a, b) {
                return cex(format!("a={} A={} B={b}: [a,B] empty", p.a, sw.tops[p.stem]));
            }
        }
    }
    pass(count, 0)
}

fn a5ii<S: Space>(space: &S, sw: &Sweep<S::Approx>, pairs: &[Pair<S::Approx>]) -> Verdict {
    let mut count = 0u64;
    for p in pairs {
        let nbhd = neighborhood(space, sw, p.stem, &p.a);
        let candidates = reducts_at(space, sw, p.stem, p.depth);
        for b in &nbhd {
            count += 1;
            let found =
                candidates.iter().any(|a2| nbhd.iter().filter(|c| space.fin_leq(c, a2)).all(|c| space.fin_leq(c, b)));
            if !found {
                return cex(format!("a={} A={} B={b}: no A' in [depth,A] with [a,A'] ⊆ [a,B]", p.a, sw.tops[p.stem]));
            }
        }
    }
    pass(count, 0)
}

fn a6<S: Space>(space: &S, sw: &Sweep<S::Approx>, pairs: &[Pair<S::Approx>]) -> Verdict {
    let mut count = 0u64;
    let mut skipped = 0u64;
    for p in pairs {
        if p.ext.is_empty() {
            skipped += 1;
            continue;
        }
        let masks: BTreeSet<u64> = reducts_at(space, sw, p.stem, p.depth)
            .into_iter()
            .map(|b| p.ext.iter().enumerate().filter(|(_, c)| space.fin_leq(c, b)).fold(0u64, |m, (i, _)| m | 1 << i))
            .filter(|&m| m != 0)
            .collect();
        for o in 0..1u64 << p.ext.len() {
            count += 1;
            if !masks.iter().any(|&m| m & !o == 0 || m & o == 0) {
                let chosen: Vec<String> =
                    (0..p.ext.len()).filter(|i| o >> i & 1 == 1).map(|i| format!("{}", p.ext[i])).collect();
                return cex(format!("a={} A={} O=[{}]: no homogeneous B", p.a, sw.tops[p.stem], chosen.join(" ")));
            }
        }
    }
    pass(count, skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Ellentuck, EllentuckApprox, MatrixSpace, PartitionSpace};

    /// Ellentuck with `r_0` replaced by `{0}`.
    struct BrokenR0(Ellentuck);

    impl Space for BrokenR0 {
        type Approx = EllentuckApprox;
        fn name(&self) -> &'static str {
            "broken"
        }
        fn params(&self) -> String {
            self.0.params()
        }
        fn empty(&self) -> EllentuckApprox {
            self.0.empty()
        }
        fn check(&self, a: &EllentuckApprox) -> Result<()> {
            self.0.check(a)
        }
        fn length(&self, a: &EllentuckApprox) -> usize {
            self.0.length(a)
        }
        fn restrict(&self, a: &EllentuckApprox, n: usize) -> EllentuckApprox {
            if n == 0 {
                EllentuckApprox::new(alloc::vec![0])
            } else {
                self.0.restrict(a, n)
            }
        }
        fn fin_leq(&self, a: &EllentuckApprox, b: &EllentuckApprox) -> bool {
            self.0.fin_leq(a, b)
        }
        fn fin_below(&self, a: &EllentuckApprox) -> Vec<EllentuckApprox> {
            self.0.fin_below(a)
        }
        fn stem_leq(&self, b: &EllentuckApprox, a: &EllentuckApprox) -> bool {
            self.0.stem_leq(b, a)
        }
        fn universe(&self) -> Vec<EllentuckApprox> {
            self.0.universe()
        }
        fn universe_size(&self) -> u128 {
            self.0.universe_size()
        }
        fn parse(&self, s: &str) -> Result<EllentuckApprox> {
            self.0.parse(s)
        }
    }

    #[test]
    fn ellentuck_small_passes() {
        let r = audit_axioms(&Ellentuck::new(5).unwrap(), &AuditBounds::new(4, 2)).unwrap();
        assert!(r.passed(), "{r}");
        for ax in Axiom::ALL {
            assert!(r.verdict(ax).is_bounded_pass(), "{ax}");
        }
    }

    #[test]
    fn matrix_small_passes() {
        let r = audit_axioms(&MatrixSpace::new(2, 3).unwrap(), &AuditBounds::new(3, 3)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn partition_small_passes() {
        let r = audit_axioms(&PartitionSpace::new(4).unwrap(), &AuditBounds::new(3, 3)).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn broken_r0_is_caught() {
        let r = audit_axioms(&BrokenR0(Ellentuck::new(4).unwrap()), &AuditBounds::new(3, 2)).unwrap();
        assert!(r.verdict(Axiom::A1).is_counterexample());
        assert!(!r.passed());
    }

    #[test]
    fn refuses_over_ceiling() {
        let e = audit_axioms(&Ellentuck::new(12).unwrap(), &AuditBounds::new(4, 2));
        assert!(matches!(e, Err(Error::CeilingExceeded { estimate, .. }) if estimate == 1 << 24));
    }

    #[test]
    fn a6_can_be_skipped() {
        let r = audit_axioms(&Ellentuck::new(4).unwrap(), &AuditBounds::new(3, 2).without_a6()).unwrap();
        assert_eq!(*r.verdict(Axiom::A6), Verdict::Skipped);
    }
}

//! Combinatorial forcing relative to a finite, length-bounded family `F`.
//!
//! `B` accepts `a` when every `C ∈ [a, B]` has an initial approximation in
//! `F`; `B` rejects `a` when `[a, B] ≠ ∅` and no element of
//! `[depth_B(a), B]` accepts `a`. Inside a truncation both notions become
//! searches over one-step extension chains, and a third outcome appears:
//! a chain can run into the edge of the truncation before it either meets
//! `F` or passes the family's length bound. Such runs are reported as
//! [`Outcome::Undecided`] with the approximation where they stopped.

mod fusion;
mod galvin;

pub use fusion::fusion;
pub use galvin::{
    check_alt1, check_alt2, galvin_search, verify_certificate, Dichotomy, GalvinParams, GalvinResult, Verified,
};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use core::cell::RefCell;
use core::fmt;

use crate::space::{Space, Stem};
use crate::{Error, Result};

/// A finite family `F ⊆ AR` whose members have length at most `length_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontFamily<A> {
    members: BTreeSet<A>,
    length_bound: usize,
}

impl<A: Clone + Ord + fmt::Display> FrontFamily<A> {
    pub fn new<S: Space<Approx = A>>(
        space: &S,
        members: impl IntoIterator<Item = A>,
        length_bound: usize,
    ) -> Result<Self> {
        let members: BTreeSet<A> = members.into_iter().collect();
        for m in &members {
            space.check(m)?;
            if space.length(m) > length_bound {
                return Err(Error::InvalidParameter(alloc::format!(
                    "member {m} is longer than the bound {length_bound}"
                )));
            }
        }
        Ok(FrontFamily { members, length_bound })
    }

    pub fn empty(length_bound: usize) -> Self {
        FrontFamily { members: BTreeSet::new(), length_bound }
    }

    /// Every approximation of length `k` below `top`.
    pub fn all_of_length<S: Space<Approx = A>>(space: &S, top: &A, k: usize) -> Self {
        let members = space.fin_below(top).into_iter().filter(|b| space.length(b) == k).collect();
        FrontFamily { members, length_bound: k }
    }

    pub fn members(&self) -> impl Iterator<Item = &A> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn length_bound(&self) -> usize {
        self.length_bound
    }

    pub fn contains(&self, a: &A) -> bool {
        self.members.contains(a)
    }

    /// Some initial approximation of `a`, `a` included, lies in `F`.
    pub fn hits<S: Space<Approx = A>>(&self, space: &S, a: &A) -> Option<usize> {
        let top = space.length(a).min(self.length_bound);
        (0..=top).find(|&i| self.members.contains(&space.restrict(a, i)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<A> {
    Accepts,
    /// A chain through `a` passed the length bound without meeting `F`.
    NotAccepted {
        escape: A,
    },
    Rejects,
    /// A reduct in `[depth_B(a), B]` accepts `a`.
    NotRejected {
        acceptor: A,
    },
    /// Neither accepts nor rejects: `escape` shows the first, `acceptor` the second.
    Neither {
        escape: A,
        acceptor: A,
    },
    /// The search stopped at `boundary` without an answer.
    Undecided {
        boundary: A,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingVerdict<A> {
    pub outcome: Outcome<A>,
    pub horizon: usize,
}

impl<A> ForcingVerdict<A> {
    pub fn accepts(&self) -> bool {
        matches!(self.outcome, Outcome::Accepts)
    }

    pub fn rejects(&self) -> bool {
        matches!(self.outcome, Outcome::Rejects)
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self.outcome, Outcome::Undecided { .. })
    }

    /// Accepts or rejects.
    pub fn decides(&self) -> bool {
        self.accepts() || self.rejects()
    }
}

impl<A: fmt::Display> fmt::Display for ForcingVerdict<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Accepts => write!(f, "accepts")?,
            Outcome::NotAccepted { escape } => write!(f, "not-accepted escape={escape}")?,
            Outcome::Rejects => write!(f, "rejects")?,
            Outcome::NotRejected { acceptor } => write!(f, "not-rejected acceptor={acceptor}")?,
            Outcome::Neither { escape, acceptor } => write!(f, "neither escape={escape} acceptor={acceptor}")?,
            Outcome::Undecided { boundary } => write!(f, "undecided boundary={boundary}")?,
        }
        write!(f, " horizon={}", self.horizon)
    }
}

/// Result of a chain scan from `a` inside a fixed top.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Scan<A> {
    Hit,
    Miss(A),
    Boundary(A),
}

/// `top → a → value`.
type Memo<A, V> = BTreeMap<A, BTreeMap<A, V>>;

/// A deciding stem and its verdict.
pub type Decider<A> = (Stem<A>, ForcingVerdict<A>);

/// Forcing engine for one family and horizon. Verdicts are memoized by
/// `(top, a)`.
pub struct Forcing<'a, S: Space> {
    space: &'a S,
    family: &'a FrontFamily<S::Approx>,
    horizon: usize,
    accept_memo: RefCell<Memo<S::Approx, Scan<S::Approx>>>,
    reject_memo: RefCell<Memo<S::Approx, Outcome<S::Approx>>>,
}

impl<'a, S: Space> Forcing<'a, S> {
    pub fn new(space: &'a S, family: &'a FrontFamily<S::Approx>, horizon: usize) -> Self {
        Forcing {
            space,
            family,
            horizon,
            accept_memo: RefCell::new(BTreeMap::new()),
            reject_memo: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn space(&self) -> &S {
        self.space
    }

    pub fn family(&self) -> &FrontFamily<S::Approx> {
        self.family
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn verdict(&self, outcome: Outcome<S::Approx>) -> ForcingVerdict<S::Approx> {
        ForcingVerdict { outcome, horizon: self.horizon }
    }

    fn require_nonempty(&self, top: &S::Approx, a: &S::Approx) -> Result<()> {
        self.space.check(a)?;
        if !self.space.fin_leq(a, top) {
            return Err(Error::EmptyNeighborhood { base: a.to_string(), stem: top.to_string() });
        }
        Ok(())
    }

    fn scan_from(&self, top: &S::Approx, c: &S::Approx, hit: bool) -> Scan<S::Approx> {
        let sp = self.space;
        if hit || self.family.contains(c) {
            return Scan::Hit;
        }
        let len = sp.length(c);
        if len >= self.family.length_bound() {
            return Scan::Miss(c.clone());
        }
        if len >= self.horizon {
            return Scan::Boundary(c.clone());
        }
        let ext = sp.extensions(c, top);
        if ext.is_empty() {
            return Scan::Boundary(c.clone());
        }
        let mut boundary = None;
        for b in &ext {
            match self.scan_from(top, b, false) {
                Scan::Hit => {}
                Scan::Miss(e) => return Scan::Miss(e),
                Scan::Boundary(e) => {
                    boundary.get_or_insert(e);
                }
            }
        }
        boundary.map_or(Scan::Hit, Scan::Boundary)
    }

    fn scan(&self, top: &S::Approx, a: &S::Approx) -> Scan<S::Approx> {
        if let Some(s) = self.accept_memo.borrow().get(top).and_then(|m| m.get(a)) {
            return s.clone();
        }
        let prefix_hit = self.family.hits(self.space, a).is_some();
        let s = self.scan_from(top, a, prefix_hit);
        self.accept_memo.borrow_mut().entry(top.clone()).or_default().insert(a.clone(), s.clone());
        s
    }

    /// Does `B` accept `a`? Accepts when every extension chain from `a`
    /// inside `B` meets `F` before the length bound; not-accepted when one
    /// passes the bound without meeting it.
    pub fn accepts(&self, b: &Stem<S::Approx>, a: &S::Approx) -> Result<ForcingVerdict<S::Approx>> {
        self.require_nonempty(b.top(), a)?;
        Ok(self.accepts_top(b.top(), a))
    }

    pub(crate) fn accepts_top(&self, top: &S::Approx, a: &S::Approx) -> ForcingVerdict<S::Approx> {
        self.verdict(match self.scan(top, a) {
            Scan::Hit => Outcome::Accepts,
            Scan::Miss(escape) => Outcome::NotAccepted { escape },
            Scan::Boundary(boundary) => Outcome::Undecided { boundary },
        })
    }

    /// Does `B` reject `a`? Enumerates `[depth_B(a), B]` for an acceptor.
    /// When none exists the answer is rejects, unless `B` itself has no
    /// chain from `a` that passes the length bound, in which case nothing
    /// in the truncation shows that `a` escapes `F`.
    pub fn rejects(&self, b: &Stem<S::Approx>, a: &S::Approx) -> Result<ForcingVerdict<S::Approx>> {
        self.require_nonempty(b.top(), a)?;
        Ok(self.rejects_top(b.top(), a))
    }

    pub(crate) fn rejects_top(&self, top: &S::Approx, a: &S::Approx) -> ForcingVerdict<S::Approx> {
        if let Some(o) = self.reject_memo.borrow().get(top).and_then(|m| m.get(a)) {
            return self.verdict(o.clone());
        }
        let sp = self.space;
        let depth = depth_in(sp, top, a);
        let mut outcome = None;
        if matches!(self.scan(top, a), Scan::Hit) {
            outcome = Some(Outcome::NotRejected { acceptor: top.clone() });
        }
        for c in sp.reducts_at(top, depth).into_iter().filter(|_| outcome.is_none()) {
            if matches!(self.scan(&c, a), Scan::Hit) {
                outcome = Some(Outcome::NotRejected { acceptor: c });
                break;
            }
        }
        let outcome = outcome.unwrap_or_else(|| match self.scan(top, a) {
            Scan::Boundary(boundary) => Outcome::Undecided { boundary },
            _ => Outcome::Rejects,
        });
        self.reject_memo.borrow_mut().entry(top.clone()).or_default().insert(a.clone(), outcome.clone());
        self.verdict(outcome)
    }

    /// Accepts, rejects, neither (with both witnesses), or undecided.
    pub fn decide(&self, b: &Stem<S::Approx>, a: &S::Approx) -> Result<ForcingVerdict<S::Approx>> {
        self.require_nonempty(b.top(), a)?;
        Ok(self.decide_top(b.top(), a))
    }

    pub(crate) fn decide_top(&self, top: &S::Approx, a: &S::Approx) -> ForcingVerdict<S::Approx> {
        let acc = self.accepts_top(top, a);
        if acc.accepts() {
            return acc;
        }
        let rej = self.rejects_top(top, a);
        let outcome = match (acc.outcome, rej.outcome) {
            (_, Outcome::Rejects) => Outcome::Rejects,
            (Outcome::NotAccepted { escape }, Outcome::NotRejected { acceptor }) => {
                Outcome::Neither { escape, acceptor }
            }
            (Outcome::Undecided { boundary }, _) | (_, Outcome::Undecided { boundary }) => {
                Outcome::Undecided { boundary }
            }
            (_, other) => other,
        };
        self.verdict(outcome)
    }

    /// Some `B' ∈ [depth_B(a), B]` that decides `a`, with its verdict.
    /// `None` when the truncation leaves `a` undecided.
    pub fn find_decider(&self, b: &Stem<S::Approx>, a: &S::Approx) -> Result<Option<Decider<S::Approx>>> {
        let v = self.decide(b, a)?;
        Ok(match v.outcome {
            Outcome::Accepts | Outcome::Rejects => Some((b.clone(), v)),
            Outcome::Neither { acceptor, .. } | Outcome::NotRejected { acceptor } => {
                let v = self.accepts_top(&acceptor, a);
                Some((Stem::from_top(acceptor), v))
            }
            _ => None,
        })
    }

    /// When `B` rejects `a`: some `B' ∈ [depth_B(a), B]` such that `B` accepts
    /// no one-step extension of `a` below `B'`. The longest such `B'` with a
    /// nonempty extension set is preferred.
    pub fn rejection_witness(&self, b: &Stem<S::Approx>, a: &S::Approx) -> Result<Option<Stem<S::Approx>>> {
        self.require_nonempty(b.top(), a)?;
        let top = b.top();
        if !self.rejects_top(top, a).rejects() {
            return Ok(None);
        }
        let sp = self.space;
        let depth = depth_in(sp, top, a);
        let keep = |c: &S::Approx| !self.accepts_top(top, c).accepts();
        if let Some(w) = sp.pigeonhole(a, top, depth, &keep) {
            return Ok(Some(Stem::from_top(w)));
        }
        // no extension of a survives anywhere in [depth, B]
        if sp.extensions(a, top).iter().all(keep) {
            return Ok(Some(b.clone()));
        }
        Ok(None)
    }
}

/// `depth_T(a)` for `a ≤_fin T`.
pub(crate) fn depth_in<S: Space>(space: &S, top: &S::Approx, a: &S::Approx) -> usize {
    (0..=space.length(top)).find(|&n| space.fin_leq(a, &space.restrict(top, n))).expect("a lies below the top")
}

//! The abstract contract `(R, ≤, r)` on finite truncations.
//!
//! An element of an infinite space is represented by a [`Stem`]: its longest
//! materialized approximation `r_N(A)`. Every shorter approximation is
//! recovered with [`Space::restrict`], so the chain `r_0(A), …, r_N(A)` is
//! coherent by construction. A stem `B` lies below a stem `A` inside the
//! truncation iff `top(B) ≤_fin top(A)`; the reducts of `A` are therefore
//! exactly `fin_below(top(A))`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub trait Space {
    type Approx: Clone + Ord + fmt::Debug + fmt::Display;

    /// Short identifier used in certificates and file headers.
    fn name(&self) -> &'static str;

    /// Truncation parameters as `key=value` pairs separated by spaces.
    fn params(&self) -> String;

    /// `r_0(A)` for every `A`.
    fn empty(&self) -> Self::Approx;

    /// Rejects approximations that are malformed or outside the truncation.
    fn check(&self, a: &Self::Approx) -> Result<()>;

    /// `|a|`.
    fn length(&self, a: &Self::Approx) -> usize;

    /// The unique initial approximation of length `n`. Callers guarantee
    /// `n ≤ length(a)`.
    fn restrict(&self, a: &Self::Approx, n: usize) -> Self::Approx;

    /// The finitization quasi-order `a ≤_fin b`.
    fn fin_leq(&self, a: &Self::Approx, b: &Self::Approx) -> bool;

    /// `{b : b ≤_fin a}` in canonical order.
    fn fin_below(&self, a: &Self::Approx) -> Vec<Self::Approx>;

    /// The space's own order on truncated elements, `b ≤ a`, computed without
    /// going through `≤_fin`. Audited against it (A4(i)).
    fn stem_leq(&self, b: &Self::Approx, a: &Self::Approx) -> bool;

    /// Every approximation inside the truncation, in canonical order.
    fn universe(&self) -> Vec<Self::Approx>;

    /// `|universe()|`, computed without enumerating it.
    fn universe_size(&self) -> u128;

    fn parse(&self, s: &str) -> Result<Self::Approx>;

    /// `r_{|a|+1}[a, A]` for the stem with top `top`.
    fn extensions(&self, a: &Self::Approx, top: &Self::Approx) -> Vec<Self::Approx> {
        let n = self.length(a);
        self.fin_below(top).into_iter().filter(|c| self.length(c) == n + 1 && self.restrict(c, n) == *a).collect()
    }

    /// Tops of the stems in `[n, A]`.
    fn reducts_at(&self, top: &Self::Approx, n: usize) -> Vec<Self::Approx> {
        let base = self.restrict(top, n);
        self.fin_below(top).into_iter().filter(|c| self.length(c) >= n && self.restrict(c, n) == base).collect()
    }

    /// A6 search: the longest `B ∈ [n, A]` whose one-step extensions of `a`
    /// are nonempty and all satisfy `keep`. Ties go to the first candidate in
    /// canonical order. Spaces override this when a direct construction is
    /// available.
    fn pigeonhole(
        &self,
        a: &Self::Approx,
        top: &Self::Approx,
        n: usize,
        keep: &dyn Fn(&Self::Approx) -> bool,
    ) -> Option<Self::Approx> {
        let mut best: Option<Self::Approx> = None;
        for b in self.reducts_at(top, n) {
            if !self.fin_leq(a, &b) {
                continue;
            }
            let ext = self.extensions(a, &b);
            if ext.is_empty() || !ext.iter().all(keep) {
                continue;
            }
            if best.as_ref().is_none_or(|cur| self.length(&b) > self.length(cur)) {
                best = Some(b);
            }
        }
        best
    }
}

/// A truncated element of a space, stored as its longest approximation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stem<A> {
    top: A,
}

impl<A: Clone> Stem<A> {
    pub fn new<S: Space<Approx = A>>(space: &S, top: A) -> Result<Self> {
        space.check(&top)?;
        Ok(Stem { top })
    }

    pub fn top(&self) -> &A {
        &self.top
    }

    pub fn into_top(self) -> A {
        self.top
    }

    pub(crate) fn from_top(top: A) -> Self {
        Stem { top }
    }
}

impl<A: fmt::Display> fmt::Display for Stem<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.top.fmt(f)
    }
}

/// The number of materialized approximations past `r_0`.
pub fn stem_len<S: Space>(space: &S, stem: &Stem<S::Approx>) -> usize {
    space.length(stem.top())
}

/// `r_n(A)`.
pub fn approx<S: Space>(space: &S, stem: &Stem<S::Approx>, n: usize) -> Result<S::Approx> {
    let len = stem_len(space, stem);
    if n > len {
        return Err(Error::OutOfRange { index: n, limit: len });
    }
    Ok(space.restrict(stem.top(), n))
}

/// `(r_0(A), …, r_N(A))`.
pub fn chain<S: Space>(space: &S, stem: &Stem<S::Approx>) -> Vec<S::Approx> {
    (0..=stem_len(space, stem)).map(|n| space.restrict(stem.top(), n)).collect()
}

pub fn length<S: Space>(space: &S, a: &S::Approx) -> usize {
    space.length(a)
}

pub fn fin_leq<S: Space>(space: &S, a: &S::Approx, b: &S::Approx) -> Result<bool> {
    space.check(a)?;
    space.check(b)?;
    Ok(space.fin_leq(a, b))
}

pub fn fin_below<S: Space>(space: &S, a: &S::Approx) -> Result<Vec<S::Approx>> {
    space.check(a)?;
    Ok(space.fin_below(a))
}

/// `depth_A(a) = min{n : a ≤_fin r_n(A)}`.
pub fn depth<S: Space>(space: &S, stem: &Stem<S::Approx>, a: &S::Approx) -> Result<usize> {
    (0..=stem_len(space, stem))
        .find(|&n| space.fin_leq(a, &space.restrict(stem.top(), n)))
        .ok_or_else(|| Error::NotInSpace(a.to_string()))
}

/// `r_{|a|+1}[a, A]`.
pub fn extensions<S: Space>(space: &S, a: &S::Approx, stem: &Stem<S::Approx>) -> Result<Vec<S::Approx>> {
    space.check(a)?;
    if !space.fin_leq(a, stem.top()) {
        return Err(Error::EmptyNeighborhood { base: a.to_string(), stem: stem.to_string() });
    }
    Ok(space.extensions(a, stem.top()))
}

/// `[a, A]` inside the truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood<A> {
    pub base: A,
    pub stem: Stem<A>,
}

impl<A: Clone + Ord + fmt::Debug + fmt::Display> Neighborhood<A> {
    pub fn new(base: A, stem: Stem<A>) -> Self {
        Neighborhood { base, stem }
    }

    /// `a ∈ AR(A)`: some truncated `B ≤ A` has `a` as an approximation.
    pub fn is_nonempty<S: Space<Approx = A>>(&self, space: &S) -> bool {
        space.fin_leq(&self.base, self.stem.top())
    }

    /// Tops of every truncated `B ∈ [a, A]`.
    pub fn members<S: Space<Approx = A>>(&self, space: &S) -> Vec<A> {
        let n = space.length(&self.base);
        space
            .fin_below(self.stem.top())
            .into_iter()
            .filter(|c| space.length(c) >= n && space.restrict(c, n) == self.base)
            .collect()
    }
}

/// `AR_k^m(A) = {a ∈ AR_k(A) : depth_A(a) = m}` in canonical order.
pub fn approximations_at_depth<S: Space>(
    space: &S,
    stem: &Stem<S::Approx>,
    k: usize,
    m: usize,
) -> Result<Vec<S::Approx>> {
    let rm = approx(space, stem, m)?;
    let prev = if m == 0 { None } else { Some(space.restrict(stem.top(), m - 1)) };
    Ok(space
        .fin_below(&rm)
        .into_iter()
        .filter(|a| space.length(a) == k)
        .filter(|a| prev.as_ref().is_none_or(|p| !space.fin_leq(a, p)))
        .collect())
}

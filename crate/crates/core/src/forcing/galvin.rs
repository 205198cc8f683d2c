//! The Galvin dichotomy on a truncation: find `B ≤ A` with either
//! `AR(B) ∩ F = ∅` (alternative 1) or every maximal chain below `B` meeting
//! `F` (alternative 2).
//!
//! The search decides approximations bottom-up along extension chains, then
//! shrinks the current top with the pigeonhole search so that all one-step
//! extensions of the node agree: all accepted or all rejected. The side that
//! keeps the longer top wins, rejection on ties. Whatever the search
//! returns is re-checked from scratch before it is reported.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::{depth_in, FrontFamily};
use crate::space::{Space, Stem};
use crate::{Error, Result, DEFAULT_CEILING};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GalvinParams {
    /// Longest chain the search follows; must cover the family's bound.
    pub horizon: usize,
    /// Alternative 1 needs a witness at least this long.
    pub min_len: usize,
    /// Refuse when the chain tree below `A` has more nodes than this.
    pub ceiling: u64,
}

impl GalvinParams {
    pub fn new(horizon: usize) -> Self {
        GalvinParams { horizon, min_len: 1, ceiling: DEFAULT_CEILING }
    }

    pub fn with_min_len(mut self, min_len: usize) -> Self {
        self.min_len = min_len;
        self
    }

    pub fn with_ceiling(mut self, ceiling: u64) -> Self {
        self.ceiling = ceiling;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy<A> {
    /// No member of `F` lies below `stem`.
    Alt1 {
        stem: Stem<A>,
    },
    /// Every maximal chain below `stem` passes through one of `hits`, the
    /// members of `F` where chains first meet the family.
    Alt2 {
        stem: Stem<A>,
        hits: Vec<A>,
    },
    Inconclusive {
        candidate: Stem<A>,
        blocking: A,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalvinResult<A> {
    pub outcome: Dichotomy<A>,
    pub certificate: String,
    /// Approximations visited by the search.
    pub nodes: u64,
}

/// Outcome of replaying a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verified {
    Alt1,
    Alt2,
    Inconclusive,
}

/// `AR(B) ∩ F = ∅`; otherwise the first member below `top`.
pub fn check_alt1<S: Space>(
    space: &S,
    family: &FrontFamily<S::Approx>,
    top: &S::Approx,
) -> core::result::Result<(), S::Approx> {
    match family.members().find(|f| space.fin_leq(f, top)) {
        Some(f) => Err(f.clone()),
        None => Ok(()),
    }
}

/// Every maximal extension chain from `∅` inside `top` has an initial
/// approximation in `F`. Returns the first-hit approximations in
/// depth-first canonical order, or the end of a chain that avoids `F`.
pub fn check_alt2<S: Space>(
    space: &S,
    family: &FrontFamily<S::Approx>,
    top: &S::Approx,
) -> core::result::Result<Vec<S::Approx>, S::Approx> {
    fn walk<S: Space>(
        space: &S,
        family: &FrontFamily<S::Approx>,
        top: &S::Approx,
        c: S::Approx,
        hits: &mut Vec<S::Approx>,
    ) -> core::result::Result<(), S::Approx> {
        if family.contains(&c) {
            hits.push(c);
            return Ok(());
        }
        if space.length(&c) >= family.length_bound() {
            return Err(c);
        }
        let ext = space.extensions(&c, top);
        if ext.is_empty() {
            return Err(c);
        }
        for b in ext {
            walk(space, family, top, b, hits)?;
        }
        Ok(())
    }
    let mut hits = Vec::new();
    walk(space, family, top, space.empty(), &mut hits)?;
    Ok(hits)
}

/// Nodes of the extension tree below `top` up to length `bound`, stopping
/// once `cap` is passed.
fn count_nodes<S: Space>(space: &S, top: &S::Approx, c: &S::Approx, bound: usize, cap: u64, count: &mut u64) {
    *count += 1;
    if *count > cap || space.length(c) >= bound {
        return;
    }
    for b in space.extensions(c, top) {
        count_nodes(space, top, &b, bound, cap, count);
        if *count > cap {
            return;
        }
    }
}

struct Search<'a, S: Space> {
    space: &'a S,
    family: &'a FrontFamily<S::Approx>,
    limit: usize,
    top: S::Approx,
    status: BTreeMap<S::Approx, bool>,
    nodes: u64,
}

impl<S: Space> Search<'_, S> {
    /// Refines `self.top` below `a` and reports whether `a` ends up accepted.
    fn refine(&mut self, a: &S::Approx, hit: bool) -> bool {
        self.nodes += 1;
        let sp = self.space;
        if hit || self.family.contains(a) {
            return true;
        }
        if sp.length(a) >= self.limit {
            return false;
        }
        let children = sp.extensions(a, &self.top);
        if children.is_empty() {
            return false;
        }
        for b in &children {
            if sp.fin_leq(b, &self.top) {
                let acc = self.refine(b, false);
                self.status.insert(b.clone(), acc);
            }
        }
        let depth = depth_in(sp, &self.top, a);
        let status = &self.status;
        let yes = sp.pigeonhole(a, &self.top, depth, &|c| status.get(c) == Some(&true));
        let no = sp.pigeonhole(a, &self.top, depth, &|c| status.get(c) == Some(&false));
        let (top, accepted) = match (yes, no) {
            (None, None) => return false,
            (Some(y), None) => (y, true),
            (None, Some(n)) => (n, false),
            (Some(y), Some(n)) => {
                if sp.length(&y) > sp.length(&n) {
                    (y, true)
                } else {
                    (n, false)
                }
            }
        };
        self.top = top;
        accepted
    }
}

pub fn galvin_search<S: Space>(
    space: &S,
    a: &Stem<S::Approx>,
    family: &FrontFamily<S::Approx>,
    params: &GalvinParams,
) -> Result<GalvinResult<S::Approx>> {
    space.check(a.top())?;
    let bound = family.length_bound();
    if bound > params.horizon {
        return Err(Error::InvalidParameter(format!("length bound {bound} exceeds the horizon {}", params.horizon)));
    }
    let mut count = 0;
    count_nodes(space, a.top(), &space.empty(), bound, params.ceiling, &mut count);
    if count > params.ceiling {
        let width = space.extensions(&space.empty(), a.top()).len() as u128;
        let estimate = (0..=bound as u32).map(|k| width.saturating_pow(k)).fold(0u128, u128::saturating_add);
        return Err(Error::CeilingExceeded { estimate: estimate.max(count as u128), ceiling: params.ceiling as u128 });
    }

    let mut search = Search { space, family, limit: bound, top: a.top().clone(), status: BTreeMap::new(), nodes: 0 };
    let root_hit = family.contains(&space.empty());
    let accepted = search.refine(&space.empty(), root_hit);
    let b = Stem::from_top(search.top);
    let outcome = if accepted {
        match check_alt2(space, family, b.top()) {
            Ok(hits) => Dichotomy::Alt2 { stem: b, hits },
            Err(blocking) => {
                Dichotomy::Inconclusive { candidate: b, blocking, reason: String::from("chain avoids the family") }
            }
        }
    } else {
        match check_alt1(space, family, b.top()) {
            Ok(()) if space.length(b.top()) >= params.min_len => Dichotomy::Alt1 { stem: b },
            Ok(()) => {
                let blocking = b.top().clone();
                Dichotomy::Inconclusive { candidate: b, blocking, reason: String::from("witness shorter than min_len") }
            }
            Err(blocking) => Dichotomy::Inconclusive {
                candidate: b,
                blocking,
                reason: String::from("family member below the witness"),
            },
        }
    };
    let certificate = certificate(space, a, family, params, &outcome);
    Ok(GalvinResult { outcome, certificate, nodes: search.nodes })
}

fn certificate<S: Space>(
    space: &S,
    a: &Stem<S::Approx>,
    family: &FrontFamily<S::Approx>,
    params: &GalvinParams,
    outcome: &Dichotomy<S::Approx>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "galvin space={} {}", space.name(), space.params());
    let _ = writeln!(out, "base {}", a.top());
    let _ = writeln!(out, "length_bound {}", family.length_bound());
    let _ = writeln!(out, "min_len {}", params.min_len);
    for m in family.members() {
        let _ = writeln!(out, "member {m}");
    }
    match outcome {
        Dichotomy::Alt1 { stem } => {
            let _ = writeln!(out, "outcome alt1");
            let _ = writeln!(out, "stem {stem}");
        }
        Dichotomy::Alt2 { stem, hits } => {
            let _ = writeln!(out, "outcome alt2");
            let _ = writeln!(out, "stem {stem}");
            for h in hits {
                let _ = writeln!(out, "hit {h} {}", space.length(h));
            }
        }
        Dichotomy::Inconclusive { candidate, blocking, reason } => {
            let _ = writeln!(out, "outcome inconclusive");
            let _ = writeln!(out, "stem {candidate}");
            let _ = writeln!(out, "blocking {blocking}");
            let _ = writeln!(out, "reason {reason}");
        }
    }
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|_| bad(format!("bad number {s:?}")))
}

/// Replays a certificate using only the space primitives: the witness must
/// lie below the base, and the claimed alternative must hold for it.
/// Alternative 2 certificates must list exactly the first-hit
/// approximations, each with its length.
pub fn verify_certificate<S: Space>(space: &S, text: &str) -> Result<Verified> {
    let mut lines = text.lines();
    let header = format!("galvin space={} {}", space.name(), space.params());
    if lines.next() != Some(header.as_str()) {
        return Err(bad("header does not match the space"));
    }
    let mut base = None;
    let mut bound = None;
    let mut min_len = None;
    let mut members = Vec::new();
    let mut outcome = None;
    let mut stem = None;
    let mut hits = Vec::new();
    for line in lines {
        let (key, rest) = line.split_once(' ').ok_or_else(|| bad(format!("malformed line {line:?}")))?;
        match key {
            "base" => base = Some(space.parse(rest)?),
            "length_bound" => bound = Some(parse_usize(rest)?),
            "min_len" => min_len = Some(parse_usize(rest)?),
            "member" => members.push(space.parse(rest)?),
            "outcome" => outcome = Some(rest.to_string()),
            "stem" => stem = Some(space.parse(rest)?),
            "hit" => {
                let (h, i) = rest.rsplit_once(' ').ok_or_else(|| bad(format!("malformed hit {rest:?}")))?;
                hits.push((space.parse(h)?, parse_usize(i)?));
            }
            "blocking" | "reason" => {}
            _ => return Err(bad(format!("unknown key {key:?}"))),
        }
    }
    let missing = |what: &str| bad(format!("missing {what}"));
    let base = base.ok_or_else(|| missing("base"))?;
    let bound = bound.ok_or_else(|| missing("length_bound"))?;
    let min_len = min_len.ok_or_else(|| missing("min_len"))?;
    let stem = stem.ok_or_else(|| missing("stem"))?;
    let family = FrontFamily::new(space, members, bound)?;
    if !space.fin_leq(&stem, &base) {
        return Err(bad("witness is not below the base"));
    }
    let alt1 = check_alt1(space, &family, &stem).is_ok();
    let alt2 = check_alt2(space, &family, &stem);
    if alt1 && alt2.is_ok() {
        return Err(bad("witness satisfies both alternatives"));
    }
    match outcome.as_deref() {
        Some("alt1") => {
            if !alt1 {
                return Err(bad("a family member lies below the witness"));
            }
            if space.length(&stem) < min_len {
                return Err(bad("witness shorter than min_len"));
            }
            if !hits.is_empty() {
                return Err(bad("alternative 1 lists hits"));
            }
            Ok(Verified::Alt1)
        }
        Some("alt2") => {
            let found = alt2.map_err(|c| bad(format!("chain ending at {c} avoids the family")))?;
            let expected: Vec<(S::Approx, usize)> = found
                .into_iter()
                .map(|h| {
                    let n = space.length(&h);
                    (h, n)
                })
                .collect();
            if expected != hits {
                return Err(bad("hit list does not match the replay"));
            }
            Ok(Verified::Alt2)
        }
        Some("inconclusive") => Ok(Verified::Inconclusive),
        _ => Err(missing("outcome")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Ellentuck, EllentuckApprox};
    use alloc::vec;

    fn e(xs: &[u32]) -> EllentuckApprox {
        EllentuckApprox::new(xs.to_vec())
    }

    fn full(sp: &Ellentuck) -> Stem<EllentuckApprox> {
        Stem::new(sp, sp.full()).unwrap()
    }

    #[test]
    fn empty_family_gives_alt1_with_a() {
        let sp = Ellentuck::new(10).unwrap();
        let a = full(&sp);
        let r = galvin_search(&sp, &a, &FrontFamily::empty(1), &GalvinParams::new(10)).unwrap();
        assert_eq!(r.outcome, Dichotomy::Alt1 { stem: a });
        assert_eq!(verify_certificate(&sp, &r.certificate).unwrap(), Verified::Alt1);
    }

    #[test]
    fn singletons_give_alt2_with_a() {
        let sp = Ellentuck::new(10).unwrap();
        let a = full(&sp);
        let f = FrontFamily::all_of_length(&sp, a.top(), 1);
        let r = galvin_search(&sp, &a, &f, &GalvinParams::new(10)).unwrap();
        assert!(matches!(&r.outcome, Dichotomy::Alt2 { stem, hits } if *stem == a && hits.len() == 10));
        assert_eq!(verify_certificate(&sp, &r.certificate).unwrap(), Verified::Alt2);
    }

    #[test]
    fn even_singletons_give_odds() {
        let sp = Ellentuck::new(20).unwrap();
        let f = FrontFamily::new(&sp, (0..20).step_by(2).map(|x| e(&[x])), 1).unwrap();
        let r = galvin_search(&sp, &full(&sp), &f, &GalvinParams::new(20)).unwrap();
        let odds: Vec<u32> = (1..20).step_by(2).collect();
        assert_eq!(r.outcome, Dichotomy::Alt1 { stem: Stem::new(&sp, e(&odds)).unwrap() });
        assert_eq!(verify_certificate(&sp, &r.certificate).unwrap(), Verified::Alt1);
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let sp = Ellentuck::new(8).unwrap();
        let f = FrontFamily::new(&sp, vec![e(&[0]), e(&[2])], 1).unwrap();
        let r = galvin_search(&sp, &full(&sp), &f, &GalvinParams::new(8)).unwrap();
        assert_eq!(verify_certificate(&sp, &r.certificate).unwrap(), Verified::Alt1);
        let t = r.certificate.replace("stem {1,", "stem {0,1,");
        assert!(verify_certificate(&sp, &t).is_err());
        let t = r.certificate.replace("outcome alt1", "outcome alt2");
        assert!(verify_certificate(&sp, &t).is_err());
        let t = r.certificate.replace("ground=8", "ground=9");
        assert!(verify_certificate(&sp, &t).is_err());
        assert!(verify_certificate(&sp, "").is_err());
    }

    #[test]
    fn refuses_over_ceiling() {
        let sp = Ellentuck::new(20).unwrap();
        let f = FrontFamily::new(&sp, vec![e(&[0, 1, 2])], 3).unwrap();
        let p = GalvinParams::new(20).with_ceiling(100);
        assert!(matches!(galvin_search(&sp, &full(&sp), &f, &p), Err(Error::CeilingExceeded { .. })));
    }

    #[test]
    fn horizon_must_cover_bound() {
        let sp = Ellentuck::new(8).unwrap();
        let r = galvin_search(&sp, &full(&sp), &FrontFamily::empty(3), &GalvinParams::new(2));
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }
}

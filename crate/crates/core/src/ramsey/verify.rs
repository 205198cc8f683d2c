//! Certificate checking that shares no code with the search: keys are
//! parsed here, the objects are rebuilt from scratch (bitmask sets, explicit
//! vector sets for subspaces, label vectors for partitions) and colorings
//! are re-enumerated with a separate loop.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::search::EXHAUSTIVE_CEILING;
use super::witness::{Instance, WitnessOutcome, WitnessResult};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub outcome: WitnessOutcome,
    pub replay: Replay,
    /// Level of the bad coloring that was confirmed.
    pub bad_level: Option<usize>,
}

fn reject(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(format!("certificate rejected: {}", msg.into()))
}

/// One level of an instance, rebuilt independently.
struct Shape<T> {
    domain: Vec<T>,
    configs: Vec<Vec<usize>>,
    parse: fn(&str, &Ctx) -> Option<T>,
}

#[derive(Clone, Copy)]
struct Ctx {
    q: u32,
    dim: usize,
}

fn subsets(points: u32, size: usize, must: Option<u32>) -> Vec<u64> {
    let mut out = Vec::new();
    for mask in 0u64..1 << points {
        if mask.count_ones() as usize == size && must.is_none_or(|p| mask >> p & 1 == 1) {
            out.push(mask);
        }
    }
    out
}

fn parse_set(s: &str, _: &Ctx) -> Option<u64> {
    let body = s.strip_prefix('{')?.strip_suffix('}')?;
    if body.is_empty() {
        return Some(0);
    }
    let mut mask = 0u64;
    let mut last = None;
    for t in body.split(',') {
        if t.is_empty() || (t.len() > 1 && t.starts_with('0')) || !t.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let x: u32 = t.parse().ok()?;
        if x >= 64 || last.is_some_and(|l| l >= x) {
            return None;
        }
        last = Some(x);
        mask |= 1 << x;
    }
    Some(mask)
}

fn configs_by<T>(domain: &[T], targets: &[T], below: impl Fn(&T, &T) -> bool) -> Vec<Vec<usize>> {
    targets.iter().map(|t| (0..domain.len()).filter(|&i| below(&domain[i], t)).collect()).collect()
}

fn set_shape(points: u32, k: usize, n: usize, must: Option<u32>) -> Shape<u64> {
    let domain = subsets(points, k, must);
    let targets = subsets(points, n, must);
    let configs = configs_by(&domain, &targets, |a, b| a & !b == 0);
    Shape { domain, configs, parse: parse_set }
}

/// Vectors of `F_q^dim` are numbered by their base-`q` digits, first
/// coordinate most significant.
fn vec_add(a: u32, b: u32, ctx: &Ctx) -> u32 {
    let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
    for _ in 0..ctx.dim {
        out += ((a % ctx.q + b % ctx.q) % ctx.q) * place;
        a /= ctx.q;
        b /= ctx.q;
        place *= ctx.q;
    }
    out
}

fn vec_scale(a: u32, c: u32, ctx: &Ctx) -> u32 {
    let (mut a, mut out, mut place) = (a, 0, 1);
    for _ in 0..ctx.dim {
        out += (a % ctx.q * c % ctx.q) * place;
        a /= ctx.q;
        place *= ctx.q;
    }
    out
}

/// The set of all vectors in the span, sorted.
fn span(gens: &[u32], ctx: &Ctx) -> Vec<u32> {
    let mut set: BTreeSet<u32> = BTreeSet::new();
    set.insert(0);
    for &g in gens {
        let current: Vec<u32> = set.iter().copied().collect();
        for v in current {
            for c in 1..ctx.q {
                set.insert(vec_add(v, vec_scale(g, c, ctx), ctx));
            }
        }
    }
    set.into_iter().collect()
}

/// All subspaces of dimension `d`, grown one generator at a time.
fn subspaces(d: usize, ctx: &Ctx) -> Vec<Vec<u32>> {
    let total = ctx.q.pow(ctx.dim as u32);
    let mut layer: BTreeSet<Vec<u32>> = BTreeSet::new();
    layer.insert(alloc::vec![0]);
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for w in &layer {
            for v in 0..total {
                if w.binary_search(&v).is_err() {
                    let mut gens = w.clone();
                    gens.push(v);
                    next.insert(span(&gens, ctx));
                }
            }
        }
        layer = next;
    }
    layer.into_iter().collect()
}

fn parse_subspace(s: &str, ctx: &Ctx) -> Option<Vec<u32>> {
    let mut parts = s.split(';');
    let q: u32 = parts.next()?.strip_prefix("q=")?.parse().ok()?;
    if q != ctx.q {
        return None;
    }
    let mut gens = Vec::new();
    for row in parts {
        if row.len() != ctx.dim {
            return None;
        }
        let mut v = 0;
        for ch in row.chars() {
            let d = ch.to_digit(36)?;
            if d >= q {
                return None;
            }
            v = v * q + d;
        }
        gens.push(v);
    }
    let sp = span(&gens, ctx);
    // the listed rows must be independent
    (sp.len() as u64 == (q as u64).pow(gens.len() as u32)).then_some(sp)
}

fn subspace_shape(q: u32, k: usize, n: usize, m: usize) -> Shape<Vec<u32>> {
    let ctx = Ctx { q, dim: m };
    let domain = subspaces(k, &ctx);
    let targets = subspaces(n, &ctx);
    let configs = configs_by(&domain, &targets, |w, v| w.iter().all(|x| v.binary_search(x).is_ok()));
    Shape { domain, configs, parse: parse_subspace }
}

/// Partitions of `{0, …, n-1}` into exactly `k` blocks as label vectors in
/// first-occurrence form.
fn partitions(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn grow(cur: &mut Vec<u8>, blocks: u8, n: usize, k: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            if blocks as usize == k {
                out.push(cur.clone());
            }
            return;
        }
        for b in 0..=blocks {
            if b as usize >= k {
                break;
            }
            cur.push(b);
            grow(cur, blocks.max(b + 1), n, k, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), 0, n, k, &mut out);
    out.sort();
    out
}

fn parse_partition(s: &str, ctx: &Ctx) -> Option<Vec<u8>> {
    let body = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut labels: Vec<Option<u8>> = alloc::vec![None; ctx.dim];
    let mut block = 0u8;
    let mut rest = body;
    while !rest.is_empty() {
        if block > 0 {
            rest = rest.strip_prefix(',')?;
        }
        let close = rest.find('}')?;
        let mask = parse_set(&rest[..=close], ctx)?;
        if mask == 0 {
            return None;
        }
        for x in 0..64 {
            if mask >> x & 1 == 1 {
                let slot = labels.get_mut(x)?;
                if slot.is_some() {
                    return None;
                }
                *slot = Some(block);
            }
        }
        block += 1;
        rest = &rest[close + 1..];
    }
    let labels: Vec<u8> = labels.into_iter().collect::<Option<_>>()?;
    // blocks must be listed by increasing minimum
    let mut seen = 0u8;
    for &l in &labels {
        if l > seen {
            return None;
        }
        if l == seen {
            seen += 1;
        }
    }
    Some(labels)
}

fn partition_shape(k: usize, m: usize, n: usize) -> Shape<Vec<u8>> {
    let domain = partitions(n, k);
    let targets = partitions(n, m);
    // p is coarser than t when p's label is constant on every block of t
    let configs = configs_by(&domain, &targets, |p, t| {
        let mut rep: Vec<Option<u8>> = alloc::vec![None; m];
        t.iter().zip(p).all(|(&tb, &pb)| match rep[tb as usize] {
            None => {
                rep[tb as usize] = Some(pb);
                true
            }
            Some(x) => x == pb,
        })
    });
    Shape { domain, configs, parse: parse_partition }
}

impl<T: Ord> Shape<T> {
    fn mono(&self, config: &[usize], coloring: &[u8]) -> bool {
        config.windows(2).all(|w| coloring[w[0]] == coloring[w[1]])
    }

    /// Maps certificate entries onto the domain, requiring a total coloring.
    fn read(&self, entries: &[(&str, u8)], s: usize, ctx: &Ctx) -> Result<Vec<u8>> {
        let mut coloring: Vec<Option<u8>> = alloc::vec![None; self.domain.len()];
        for (key, c) in entries {
            if *c as usize >= s {
                return Err(reject(format!("color {c} out of range for {key}")));
            }
            let obj = (self.parse)(key, ctx).ok_or_else(|| reject(format!("bad key {key}")))?;
            let i = self.domain.binary_search(&obj).map_err(|_| reject(format!("{key} is not in the domain")))?;
            if coloring[i].replace(*c).is_some() {
                return Err(reject(format!("{key} colored twice")));
            }
        }
        coloring.into_iter().collect::<Option<Vec<u8>>>().ok_or_else(|| reject("coloring is not total"))
    }

    fn check_bad(&self, coloring: &[u8]) -> Result<()> {
        match self.configs.iter().find(|c| self.mono(c, coloring)) {
            Some(_) => Err(reject("the claimed bad coloring has a monochromatic configuration")),
            None => Ok(()),
        }
    }

    /// Every coloring has a monochromatic configuration. Up to
    /// `EXHAUSTIVE_CEILING` colorings are enumerated one by one; larger
    /// domains fall back to a plain depth-first search that prunes on
    /// configurations completed so far, within `NODE_BUDGET` nodes.
    fn check_all_good(&self, s: usize) -> Result<Replay> {
        let d = self.domain.len();
        if total_of(s, d) > EXHAUSTIVE_CEILING as u128 {
            return self.search_all_good(s).map(Replay::Searched);
        }
        let mut coloring = alloc::vec![0u8; d];
        let mut count = 0u64;
        loop {
            count += 1;
            if !self.configs.iter().any(|c| self.mono(c, &coloring)) {
                return Err(reject("found a coloring with no monochromatic configuration"));
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(Replay::Enumerated(count));
                }
                i -= 1;
                coloring[i] += 1;
                if (coloring[i] as usize) < s {
                    break;
                }
                coloring[i] = 0;
            }
        }
    }

    fn search_all_good(&self, s: usize) -> Result<u64> {
        let d = self.domain.len();
        // configurations are checked once their largest key is colored
        let mut closing: Vec<Vec<usize>> = alloc::vec![Vec::new(); d];
        for (j, c) in self.configs.iter().enumerate() {
            match c.iter().max() {
                Some(&m) => closing[m].push(j),
                None => return Ok(0),
            }
        }
        let mut coloring = alloc::vec![0u8; d];
        let mut nodes = 0u64;
        // choice[i] is the next color to try at key i
        let mut choice = alloc::vec![0u8; d + 1];
        let mut i = 0usize;
        loop {
            if i == d {
                return Err(reject("found a coloring with no monochromatic configuration"));
            }
            if choice[i] as usize == s {
                choice[i] = 0;
                if i == 0 {
                    return Ok(nodes);
                }
                i -= 1;
                continue;
            }
            nodes += 1;
            if nodes > NODE_BUDGET {
                return Err(Error::CeilingExceeded { estimate: total_of(s, d), ceiling: NODE_BUDGET as u128 });
            }
            coloring[i] = choice[i];
            choice[i] += 1;
            if closing[i].iter().all(|&j| !self.mono(&self.configs[j], &coloring)) {
                i += 1;
            }
        }
    }
}

fn total_of(s: usize, d: usize) -> u128 {
    (s as u128).checked_pow(d as u32).unwrap_or(u128::MAX)
}

/// How a found witness was confirmed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Replay {
    /// Nothing to re-enumerate.
    None,
    /// Every coloring was listed; the count is `s^|domain|`.
    Enumerated(u64),
    /// Depth-first search nodes.
    Searched(u64),
}

/// Node cap for the fallback search.
pub const NODE_BUDGET: u64 = 1 << 28;

struct Claim<'a> {
    outcome: WitnessOutcome,
    bad_level: Option<usize>,
    entries: Vec<(&'a str, u8)>,
}

fn parse_claim(text: &str) -> Result<(Instance, Claim<'_>)> {
    let mut instance = None;
    let mut outcome = None;
    let mut bad_level = None;
    let mut entries = Vec::new();
    for line in text.lines() {
        let (key, rest) = line.split_once(' ').ok_or_else(|| reject(format!("malformed line {line:?}")))?;
        match key {
            "instance" => instance = Some(Instance::parse(rest)?),
            "mode" | "level" => {}
            "outcome" => {
                let (tag, v) = rest.split_once(' ').ok_or_else(|| reject("malformed outcome"))?;
                let v: usize = v.parse().map_err(|_| reject("malformed outcome"))?;
                outcome = Some(match tag {
                    "found" => WitnessOutcome::Found(v),
                    "lower-bound" => WitnessOutcome::LowerBound(v),
                    "exhausted" => WitnessOutcome::ExhaustedBound(v),
                    _ => return Err(reject(format!("unknown outcome {tag}"))),
                });
            }
            "bad" => bad_level = Some(rest.parse().map_err(|_| reject("malformed bad level"))?),
            "color" => {
                let (k, c) = rest.rsplit_once(' ').ok_or_else(|| reject("malformed color line"))?;
                entries.push((k, c.parse().map_err(|_| reject(format!("bad color in {line:?}")))?));
            }
            _ => return Err(reject(format!("unknown key {key}"))),
        }
    }
    let instance = instance.ok_or_else(|| reject("missing instance"))?;
    let outcome = outcome.ok_or_else(|| reject("missing outcome"))?;
    if bad_level.is_none() && !entries.is_empty() {
        return Err(reject("colors without a bad level"));
    }
    Ok((instance, Claim { outcome, bad_level, entries }))
}

enum AnyShape {
    Sets(Shape<u64>, Ctx),
    Spaces(Shape<Vec<u32>>, Ctx),
    Parts(Shape<Vec<u8>>, Ctx),
}

fn shape_at(instance: &Instance, level: usize) -> Result<AnyShape> {
    let ctx0 = Ctx { q: 0, dim: level };
    Ok(match *instance {
        Instance::Classical { k, n, .. } => {
            if level > 24 {
                return Err(reject("level too large to rebuild"));
            }
            AnyShape::Sets(set_shape(level as u32, k, n, None), ctx0)
        }
        Instance::Abstract { ground, k, n, .. } => {
            if level == 0 || level > ground || level > 24 {
                return Err(reject("level outside the ground set"));
            }
            AnyShape::Sets(set_shape(level as u32, k, n, Some(level as u32 - 1)), ctx0)
        }
        Instance::Glr { q, k, n, .. } => {
            let q = q as u32;
            if q < 2 || (q as u64).pow(level as u32) > 1 << 12 {
                return Err(reject("vector space too large to rebuild"));
            }
            AnyShape::Spaces(subspace_shape(q, k, n, level), Ctx { q, dim: level })
        }
        Instance::ParamSet { k, m, .. } => {
            if level > 12 {
                return Err(reject("level too large to rebuild"));
            }
            AnyShape::Parts(partition_shape(k, m, level), ctx0)
        }
    })
}

fn check_bad_at(instance: &Instance, level: usize, entries: &[(&str, u8)]) -> Result<()> {
    let s = instance.colors();
    match shape_at(instance, level)? {
        AnyShape::Sets(sh, ctx) => sh.check_bad(&sh.read(entries, s, &ctx)?),
        AnyShape::Spaces(sh, ctx) => sh.check_bad(&sh.read(entries, s, &ctx)?),
        AnyShape::Parts(sh, ctx) => sh.check_bad(&sh.read(entries, s, &ctx)?),
    }
}

fn check_good_at(instance: &Instance, level: usize) -> Result<Replay> {
    let s = instance.colors();
    match shape_at(instance, level)? {
        AnyShape::Sets(sh, _) => sh.check_all_good(s),
        AnyShape::Spaces(sh, _) => sh.check_all_good(s),
        AnyShape::Parts(sh, _) => sh.check_all_good(s),
    }
}

/// Replays a witness certificate. A found witness is confirmed by
/// re-enumerating every coloring at that level and, above the first level,
/// by the bad coloring one level below; lower bounds are confirmed by their
/// bad coloring.
pub fn verify_witness(certificate: &str) -> Result<Verification> {
    let (instance, claim) = parse_claim(certificate)?;
    let first = instance.first_level();
    let s = instance.colors();
    if s == 0 {
        return Err(reject("no colors"));
    }
    let need_bad = match claim.outcome {
        WitnessOutcome::Found(v) => {
            if v < first || v > instance.bound() {
                return Err(reject("witness outside the searched range"));
            }
            (v > first).then(|| v - 1)
        }
        WitnessOutcome::LowerBound(v) => (v >= first).then_some(v),
        WitnessOutcome::ExhaustedBound(v) => {
            if v != instance.bound() || v < first {
                return Err(reject("exhausted outcome does not match the bound"));
            }
            Some(v)
        }
    };
    if claim.bad_level != need_bad {
        return Err(reject("bad coloring missing or at the wrong level"));
    }
    if let Some(level) = need_bad {
        check_bad_at(&instance, level, &claim.entries)?;
    }
    let replay = match claim.outcome {
        WitnessOutcome::Found(v) => check_good_at(&instance, v)?,
        _ => Replay::None,
    };
    Ok(Verification { outcome: claim.outcome, replay, bad_level: need_bad })
}

pub fn verify_result(result: &WitnessResult) -> Result<Verification> {
    verify_witness(&result.certificate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const PENTAGON: &str = "instance classical k=2 n=3 s=2 bound=5\nmode exhaustive\noutcome exhausted 5\nbad 5\n";

    fn pentagon() -> String {
        // edges of the 5-cycle get color 0, the diagonals color 1
        let mut out = PENTAGON.to_string();
        for a in 0..5u32 {
            for b in a + 1..5 {
                let c = if b - a == 1 || b - a == 4 { 0 } else { 1 };
                out.push_str(&format!("color {{{a},{b}}} {c}\n"));
            }
        }
        out
    }

    #[test]
    fn pentagon_is_bad() {
        let v = verify_witness(&pentagon()).unwrap();
        assert_eq!(v.bad_level, Some(5));
    }

    #[test]
    fn flipped_pentagon_is_rejected() {
        let t = pentagon().replace("color {0,1} 0", "color {0,1} 1");
        assert!(verify_witness(&t).is_err());
    }

    #[test]
    fn malformed_certificates_are_rejected() {
        let p = pentagon();
        for t in [
            p.replace("color {0,1} 0\n", ""),
            p.replace("color {0,1} 0", "color {0,1} 2"),
            p.replace("color {0,1} 0", "color {1,0} 0"),
            p.replace("color {0,1} 0", "color {0,5} 0"),
            p.replace("bad 5", "bad 4"),
            p.replace("outcome exhausted 5", "outcome found 5"),
            p.replace("instance classical", "instance classic"),
            String::new(),
        ] {
            assert!(verify_witness(&t).is_err(), "{t}");
        }
    }

    use crate::ramsey::witness::{
        abstract_ellentuck_witness, classical_ramsey_number, glr_witness, gr_paramset_witness, Mode,
    };

    #[test]
    fn search_results_replay() {
        let ex = Mode::exhaustive();
        let bt = Mode::Backtracking { budget: 1 << 22 };
        for r in [
            classical_ramsey_number(2, 3, 2, 8, ex).unwrap(),
            classical_ramsey_number(1, 3, 2, 8, ex).unwrap(),
            classical_ramsey_number(2, 3, 2, 5, ex).unwrap(),
            abstract_ellentuck_witness(9, 3, 4, 2, 9, ex).unwrap(),
            glr_witness(2, 1, 2, 2, 4, ex).unwrap(),
            glr_witness(3, 1, 1, 2, 3, ex).unwrap(),
            gr_paramset_witness(1, 3, 2, 6, ex).unwrap(),
            gr_paramset_witness(2, 3, 2, 6, bt).unwrap(),
        ] {
            let v = verify_result(&r).unwrap_or_else(|e| panic!("{}: {e}", r.instance));
            assert_eq!(v.outcome, r.outcome);
        }
    }

    #[test]
    fn r33_replay_counts_all_colorings() {
        let r = classical_ramsey_number(2, 3, 2, 8, Mode::exhaustive()).unwrap();
        let v = verify_result(&r).unwrap();
        assert_eq!(v.replay, Replay::Enumerated(1 << 15));
        assert_eq!(v.bad_level, Some(5));
    }

    #[test]
    fn every_single_flip_of_the_pentagon_is_rejected() {
        for r in [
            classical_ramsey_number(2, 3, 2, 8, Mode::exhaustive()).unwrap(),
            classical_ramsey_number(2, 3, 2, 5, Mode::exhaustive()).unwrap(),
        ] {
            let cert = r.certificate();
            let lines: Vec<&str> = cert.lines().collect();
            for (i, line) in lines.iter().enumerate() {
                let Some((key, c)) = line.strip_prefix("color ").and_then(|l| l.rsplit_once(' ')) else {
                    continue;
                };
                let flipped = if c == "0" { "1" } else { "0" };
                let mut t = lines.clone();
                let new = format!("color {key} {flipped}");
                t[i] = &new;
                assert!(verify_witness(&t.join("\n")).is_err(), "{new}");
            }
        }
    }

    #[test]
    fn subspaces_of_f2_cubed() {
        let ctx = Ctx { q: 2, dim: 3 };
        assert_eq!(subspaces(1, &ctx).len(), 7);
        assert_eq!(subspaces(2, &ctx).len(), 7);
        assert_eq!(parse_subspace("q=2;011", &ctx), Some(alloc::vec![0, 3]));
        assert_eq!(parse_subspace("q=2;011;011", &ctx), None);
        let ctx = Ctx { q: 3, dim: 3 };
        assert_eq!(subspaces(1, &ctx).len(), 13);
    }

    #[test]
    fn partition_parsing() {
        let ctx = Ctx { q: 0, dim: 4 };
        assert_eq!(parse_partition("({0,2},{1,3})", &ctx), Some(alloc::vec![0, 1, 0, 1]));
        assert_eq!(parse_partition("({1,3},{0,2})", &ctx), None);
        assert_eq!(parse_partition("({0,2},{1})", &ctx), None);
        assert_eq!(partitions(4, 2).len(), 7);
    }
}

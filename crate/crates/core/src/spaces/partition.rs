//! The space `(ω)^ω` of infinite partitions of ℕ, blocks ordered by their
//! minima, under the coarsening order.
//!
//! `r_n(X)` is `(X_i ∩ min(X_n))_{i<n}`: the first `n` blocks cut at the
//! minimum of block `n`, a partition of `{0, …, min(X_n) - 1}` into exactly
//! `n` blocks. A truncated stem is such a finite partition.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ellentuck::parse_nat;
use crate::space::{Space, Stem};
use crate::{Error, Result};

/// An ordered partition of `{0, …, t-1}` into min-ordered blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartitionApprox {
    blocks: Vec<Vec<u32>>,
}

impl PartitionApprox {
    /// Validates the blocks, sorting each one and ordering blocks by minimum.
    pub fn new(mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b.first().copied());
        let p = PartitionApprox { blocks };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let t = self.domain();
        let mut seen = alloc::vec![false; t];
        for b in &self.blocks {
            if b.is_empty() {
                return Err(Error::InvalidParameter(String::from("empty block")));
            }
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(alloc::format!("block {b:?} is not strictly increasing")));
            }
            for &x in b {
                let x = x as usize;
                if x >= t || seen[x] {
                    return Err(Error::InvalidParameter(alloc::format!("blocks do not partition 0..{t}")));
                }
                seen[x] = true;
            }
        }
        if self.blocks.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return Err(Error::InvalidParameter(String::from("blocks are not min-ordered")));
        }
        Ok(())
    }

    /// Builds from a restricted growth string: `labels[x]` is the block of `x`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let k = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut blocks = alloc::vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            blocks[l].push(x as u32);
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        PartitionApprox { blocks }
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `t` such that this partitions `{0, …, t-1}`.
    pub fn domain(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of each element of the domain.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = alloc::vec![0; self.domain()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x as usize] = i;
            }
        }
        out
    }

    /// Intersection with `{0, …, d-1}`, empty blocks dropped.
    pub fn restrict_domain(&self, d: usize) -> PartitionApprox {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| (x as usize) < d).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        PartitionApprox { blocks }
    }

    /// Parses `({0,2},{1})`; the empty partition is `()`.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(alloc::format!("expected (...), got {s:?}")))?;
        if inner.is_empty() {
            return Ok(PartitionApprox::default());
        }
        let body = inner
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(alloc::format!("expected blocks in {s:?}")))?;
        let mut blocks = Vec::new();
        for part in body.split("},{") {
            if part.is_empty() {
                return Err(Error::Parse(alloc::format!("empty block in {s:?}")));
            }
            let b: Vec<u32> = part
                .split(',')
                .map(|t| parse_nat(t).ok_or_else(|| Error::Parse(alloc::format!("bad element {t:?} in {s:?}"))))
                .collect::<Result<_>>()?;
            blocks.push(b);
        }
        let p = PartitionApprox { blocks };
        p.validate().map_err(|e| Error::Parse(alloc::format!("{s:?}: {e}")))?;
        Ok(p)
    }
}

impl fmt::Display for PartitionApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str(")")
    }
}

/// Every block of `y` lies inside some block of `x`. Both must share a domain.
pub fn part_coarser(x: &PartitionApprox, y: &PartitionApprox) -> Result<bool> {
    if x.domain() != y.domain() {
        return Err(Error::DimensionMismatch { expected: x.domain(), found: y.domain() });
    }
    Ok(y.blocks.iter().all(|yb| x.blocks.iter().any(|xb| yb.iter().all(|e| xb.binary_search(e).is_ok()))))
}

/// Label-array form of coarsening on a shared domain; `x` coarser than `y`.
fn coarser_by_labels(x: &PartitionApprox, y: &PartitionApprox) -> bool {
    let lx = x.labels();
    y.blocks.iter().all(|b| b.iter().all(|&e| lx[e as usize] == lx[b[0] as usize]))
}

/// Stirling numbers of the second kind, `S(n, k)`, saturating.
pub fn stirling2(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = alloc::vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Restricted growth strings of length `n` using exactly `k` labels.
fn growth_strings(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(pos: usize, used: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pos == n {
            if used == k {
                f(cur);
            }
            return;
        }
        // not enough positions left to open the remaining labels
        if k - used > n - pos {
            return;
        }
        for l in 0..=used.min(k.saturating_sub(1)) {
            cur.push(l);
            go(pos + 1, used.max(l + 1), n, k, cur, f);
            cur.pop();
        }
    }
    if n == 0 {
        if k == 0 {
            f(&[]);
        }
        return;
    }
    if k == 0 {
        return;
    }
    go(0, 0, n, k, &mut Vec::with_capacity(n), f);
}

/// `(n)^k`: all min-ordered partitions of `{0, …, n-1}` into `k` blocks.
pub fn enumerate_partitions(n: usize, k: usize, ceiling: u64) -> Result<Vec<PartitionApprox>> {
    if k > n {
        return Err(Error::InvalidParameter(alloc::format!("{k} blocks exceed domain {n}")));
    }
    let estimate = stirling2(n, k);
    if estimate > ceiling as u128 {
        return Err(Error::CeilingExceeded { estimate, ceiling: ceiling as u128 });
    }
    let mut out = Vec::with_capacity(estimate as usize);
    growth_strings(n, k, &mut |labels| out.push(PartitionApprox::from_labels(labels)));
    out.sort();
    Ok(out)
}

/// `(t)^k`: the `k`-block partitions whose blocks are unions of blocks of `t`.
pub fn coarsenings(t: &PartitionApprox, k: usize) -> Result<Vec<PartitionApprox>> {
    if k > t.len() {
        return Err(Error::InvalidParameter(alloc::format!("{k} blocks exceed {} blocks of {t}", t.len())));
    }
    let mut out = Vec::new();
    growth_strings(t.len(), k, &mut |labels| {
        let mut blocks = alloc::vec![Vec::new(); k];
        for (bi, &l) in labels.iter().enumerate() {
            blocks[l].extend_from_slice(&t.blocks[bi]);
        }
        out.push(PartitionApprox::new(blocks).expect("merging blocks keeps a partition"));
    });
    out.sort();
    Ok(out)
}

/// Partition space truncated to domains of at most `max_domain` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSpace {
    max_domain: usize,
}

impl PartitionSpace {
    pub fn new(max_domain: usize) -> Result<Self> {
        if max_domain == 0 || max_domain > 24 {
            return Err(Error::InvalidParameter(alloc::format!("domain must be in 1..=24, got {max_domain}")));
        }
        Ok(PartitionSpace { max_domain })
    }

    pub fn max_domain(&self) -> usize {
        self.max_domain
    }
}

pub type PartitionStem = Stem<PartitionApprox>;

/// `r_n(X)`.
pub fn part_rn(space: &PartitionSpace, stem: &PartitionStem, n: usize) -> Result<PartitionApprox> {
    crate::space::approx(space, stem, n)
}

impl Space for PartitionSpace {
    type Approx = PartitionApprox;

    fn name(&self) -> &'static str {
        "partition"
    }

    fn params(&self) -> String {
        alloc::format!("domain={}", self.max_domain)
    }

    fn empty(&self) -> PartitionApprox {
        PartitionApprox::default()
    }

    fn check(&self, a: &PartitionApprox) -> Result<()> {
        a.validate()?;
        if a.domain() > self.max_domain {
            return Err(Error::SpaceMismatch(alloc::format!("{a} leaves domain {}", self.max_domain)));
        }
        Ok(())
    }

    fn length(&self, a: &PartitionApprox) -> usize {
        a.len()
    }

    fn restrict(&self, a: &PartitionApprox, n: usize) -> PartitionApprox {
        if n == a.len() {
            return a.clone();
        }
        let cut = a.blocks[n][0];
        let blocks = a.blocks[..n].iter().map(|b| b.iter().copied().filter(|&x| x < cut).collect()).collect();
        PartitionApprox { blocks }
    }

    fn fin_leq(&self, s: &PartitionApprox, t: &PartitionApprox) -> bool {
        s.domain() <= t.domain() && coarser_by_labels(s, &t.restrict_domain(s.domain()))
    }

    fn fin_below(&self, t: &PartitionApprox) -> Vec<PartitionApprox> {
        let mut out = Vec::new();
        for d in 0..=t.domain() {
            let cut = t.restrict_domain(d);
            if d == 0 {
                out.push(cut);
                continue;
            }
            for k in 1..=cut.len() {
                out.extend(coarsenings(&cut, k).expect("k within block count"));
            }
        }
        out.sort();
        out
    }

    fn stem_leq(&self, b: &PartitionApprox, a: &PartitionApprox) -> bool {
        b.domain() <= a.domain() && part_coarser(b, &a.restrict_domain(b.domain())).unwrap_or(false)
    }

    fn universe(&self) -> Vec<PartitionApprox> {
        let mut out = Vec::new();
        for n in 0..=self.max_domain {
            for k in 0..=n {
                out.extend(enumerate_partitions(n, k, u64::MAX).expect("k ≤ n"));
            }
        }
        out.sort();
        out
    }

    fn universe_size(&self) -> u128 {
        (0..=self.max_domain)
            .map(|n| (0..=n).map(|k| stirling2(n, k)).fold(0u128, u128::saturating_add))
            .fold(0, u128::saturating_add)
    }

    fn parse(&self, s: &str) -> Result<PartitionApprox> {
        let a = PartitionApprox::parse(s)?;
        self.check(&a)?;
        Ok(a)
    }
}

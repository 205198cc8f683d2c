//! Ellentuck's space: infinite subsets of ℕ ordered by inclusion, with
//! `r_n(A)` the first `n` elements of `A`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::space::Space;
use crate::{Error, Result};

/// A finite set of naturals, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EllentuckApprox(Vec<u32>);

impl EllentuckApprox {
    /// Sorts and deduplicates.
    pub fn new(mut elements: Vec<u32>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        EllentuckApprox(elements)
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &EllentuckApprox) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|x| it.any(|y| y == x))
    }

    fn with(&self, x: u32) -> EllentuckApprox {
        let mut v = self.0.clone();
        v.push(x);
        EllentuckApprox::new(v)
    }

    /// Parses `{0,2,4}`; the empty set is `{}`.
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(alloc::format!("expected {{...}}, got {s:?}")))?;
        if inner.is_empty() {
            return Ok(EllentuckApprox::default());
        }
        let v: Vec<u32> = inner
            .split(',')
            .map(|t| parse_nat(t).ok_or_else(|| Error::Parse(alloc::format!("bad element {t:?} in {s:?}"))))
            .collect::<Result<_>>()?;
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(alloc::format!("{s:?} is not strictly increasing")));
        }
        Ok(EllentuckApprox(v))
    }
}

/// Canonical decimal: no sign, no leading zeros, no whitespace.
pub(crate) fn parse_nat(t: &str) -> Option<u32> {
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
        return None;
    }
    t.parse().ok()
}

impl fmt::Display for EllentuckApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl From<&[u32]> for EllentuckApprox {
    fn from(v: &[u32]) -> Self {
        EllentuckApprox::new(v.to_vec())
    }
}

/// Ellentuck's space truncated to subsets of `{0, …, ground-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ellentuck {
    ground: u32,
}

/// Largest ground set the truncation accepts.
pub const MAX_GROUND: u32 = 64;

impl Ellentuck {
    pub fn new(ground: u32) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::InvalidParameter(alloc::format!("ground must be in 1..={MAX_GROUND}, got {ground}")));
        }
        Ok(Ellentuck { ground })
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    /// The stem `{0, …, ground-1}`, i.e. ℕ itself cut at the ground bound.
    pub fn full(&self) -> EllentuckApprox {
        EllentuckApprox((0..self.ground).collect())
    }

    fn mask(a: &EllentuckApprox) -> u64 {
        a.0.iter().fold(0u64, |m, &x| m | (1u64 << x))
    }
}

pub fn ell_space(ground: u32) -> Result<Ellentuck> {
    Ellentuck::new(ground)
}

impl Space for Ellentuck {
    type Approx = EllentuckApprox;

    fn name(&self) -> &'static str {
        "ellentuck"
    }

    fn params(&self) -> String {
        alloc::format!("ground={}", self.ground)
    }

    fn empty(&self) -> EllentuckApprox {
        EllentuckApprox::default()
    }

    fn check(&self, a: &EllentuckApprox) -> Result<()> {
        if a.0.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(alloc::format!("{a} is not strictly increasing")));
        }
        if a.max().is_some_and(|m| m >= self.ground) {
            return Err(Error::SpaceMismatch(alloc::format!("{a} leaves ground {}", self.ground)));
        }
        Ok(())
    }

    fn length(&self, a: &EllentuckApprox) -> usize {
        a.len()
    }

    fn restrict(&self, a: &EllentuckApprox, n: usize) -> EllentuckApprox {
        EllentuckApprox(a.0[..n].to_vec())
    }

    fn fin_leq(&self, a: &EllentuckApprox, b: &EllentuckApprox) -> bool {
        a.is_subset(b)
    }

    fn fin_below(&self, a: &EllentuckApprox) -> Vec<EllentuckApprox> {
        let n = a.len();
        let mut out: Vec<EllentuckApprox> = (0u64..1 << n)
            .map(|m| EllentuckApprox((0..n).filter(|i| m >> i & 1 == 1).map(|i| a.0[i]).collect()))
            .collect();
        out.sort();
        out
    }

    fn stem_leq(&self, b: &EllentuckApprox, a: &EllentuckApprox) -> bool {
        let (mb, ma) = (Self::mask(b), Self::mask(a));
        mb & !ma == 0
    }

    fn universe(&self) -> Vec<EllentuckApprox> {
        self.fin_below(&self.full())
    }

    fn universe_size(&self) -> u128 {
        1u128 << self.ground
    }

    fn parse(&self, s: &str) -> Result<EllentuckApprox> {
        let a = EllentuckApprox::parse(s)?;
        self.check(&a)?;
        Ok(a)
    }

    fn extensions(&self, a: &EllentuckApprox, top: &EllentuckApprox) -> Vec<EllentuckApprox> {
        if !a.is_subset(top) {
            return Vec::new();
        }
        let floor = a.max();
        top.0.iter().filter(|&&x| floor.is_none_or(|m| x > m)).map(|&x| a.with(x)).collect()
    }

    fn reducts_at(&self, top: &EllentuckApprox, n: usize) -> Vec<EllentuckApprox> {
        let base = &top.0[..n];
        let tail = &top.0[n..];
        let mut out: Vec<EllentuckApprox> = (0u64..1 << tail.len())
            .map(|m| {
                let mut v = base.to_vec();
                v.extend((0..tail.len()).filter(|i| m >> i & 1 == 1).map(|i| tail[i]));
                EllentuckApprox(v)
            })
            .collect();
        out.sort();
        out
    }

    fn pigeonhole(
        &self,
        a: &EllentuckApprox,
        top: &EllentuckApprox,
        n: usize,
        keep: &dyn Fn(&EllentuckApprox) -> bool,
    ) -> Option<EllentuckApprox> {
        if !a.is_subset(top) || n > top.len() {
            return None;
        }
        // Every element of a B in [n, A] above max(a) yields an extension of a;
        // r_n(A) and a itself are forced, the rest of the tail is free.
        let base = &top.0[..n];
        let floor = a.max();
        let base_max = base.last().copied();
        let mut elems: Vec<u32> = base.to_vec();
        elems.extend(a.0.iter().filter(|&&x| base_max.is_none_or(|m| x > m)));
        for &x in &top.0[n..] {
            if elems.contains(&x) {
                continue;
            }
            if floor.is_some_and(|m| x <= m) {
                continue;
            }
            if keep(&a.with(x)) {
                elems.push(x);
            }
        }
        let b = EllentuckApprox::new(elems);
        let ext = self.extensions(a, &b);
        (!ext.is_empty() && ext.iter().all(keep)).then_some(b)
    }
}

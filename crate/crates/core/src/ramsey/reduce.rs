//! Abstract Ramsey reduction: shrink a stem until a coloring of its
//! length-`k` approximations is constant, one color class at a time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::forcing::{galvin_search, Dichotomy, FrontFamily, GalvinParams};
use crate::space::{Space, Stem};
use crate::spaces::{EllentuckApprox, PartitionApprox};
use crate::{Error, Result};

/// A coloring of length-`k` approximations with `colors` colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring<A> {
    k: usize,
    colors: usize,
    map: BTreeMap<A, u8>,
}

impl<A: Ord + Clone + core::fmt::Display> Coloring<A> {
    pub fn new<S: Space<Approx = A>>(space: &S, k: usize, colors: usize, map: BTreeMap<A, u8>) -> Result<Self> {
        if colors == 0 || colors > 255 {
            return Err(Error::InvalidParameter(format!("colors must be in 1..=255, got {colors}")));
        }
        for (a, &c) in &map {
            space.check(a)?;
            if space.length(a) != k {
                return Err(Error::InvalidParameter(format!("{a} does not have length {k}")));
            }
            if c as usize >= colors {
                return Err(Error::InvalidParameter(format!("color {c} of {a} is not below {colors}")));
            }
        }
        Ok(Coloring { k, colors, map })
    }

    /// Colors every length-`k` approximation below `top` with `f`.
    pub fn from_fn<S: Space<Approx = A>>(
        space: &S,
        top: &A,
        k: usize,
        colors: usize,
        mut f: impl FnMut(&A) -> u8,
    ) -> Result<Self> {
        let map = ar_k(space, top, k).into_iter().map(|a| {
            let c = f(&a);
            (a, c)
        });
        Coloring::new(space, k, colors, map.collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn get(&self, a: &A) -> Option<u8> {
        self.map.get(a).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&A, u8)> {
        self.map.iter().map(|(a, &c)| (a, c))
    }
}

/// Length-`k` approximations below `top`.
fn ar_k<S: Space>(space: &S, top: &S::Approx, k: usize) -> Vec<S::Approx> {
    space.fin_below(top).into_iter().filter(|a| space.length(a) == k).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction<A> {
    /// Every length-`k` approximation below `stem` gets `color`. `color` is
    /// `None` when there are none.
    Monochromatic {
        stem: Stem<A>,
        color: Option<u8>,
    },
    Inconclusive {
        candidate: Stem<A>,
        reason: String,
    },
}

/// The colors used on length-`k` approximations below `top`, or the first
/// one the coloring leaves out.
fn colors_below<S: Space>(space: &S, c: &Coloring<S::Approx>, top: &S::Approx) -> Result<BTreeSet<u8>> {
    ar_k(space, top, c.k)
        .iter()
        .map(|a| c.get(a).ok_or_else(|| Error::InvalidParameter(format!("coloring is not defined at {a}"))))
        .collect()
}

/// Runs the dichotomy against each color class in turn. Alternative 2 for a
/// class makes the class fill the stem; alternative 1 removes the class and
/// the next class is tried on the smaller stem. `params.min_len` is raised
/// to `k` so that removed classes leave something to color.
pub fn abs_ramsey_reduce<S: Space>(
    space: &S,
    coloring: &Coloring<S::Approx>,
    a: &Stem<S::Approx>,
    params: &GalvinParams,
) -> Result<Reduction<S::Approx>> {
    let k = coloring.k;
    if k == 0 {
        return Err(Error::InvalidParameter(String::from("k must be at least 1")));
    }
    let params = params.with_min_len(params.min_len.max(k));
    let mut b = a.clone();
    for color in 0..coloring.colors as u8 {
        let used = colors_below(space, coloring, b.top())?;
        if used.len() <= 1 {
            return Ok(Reduction::Monochromatic { stem: b, color: used.first().copied() });
        }
        let class = ar_k(space, b.top(), k).into_iter().filter(|x| coloring.get(x) == Some(color));
        let family = FrontFamily::new(space, class, k)?;
        let r = galvin_search(space, &b, &family, &params)?;
        match r.outcome {
            Dichotomy::Alt1 { stem } | Dichotomy::Alt2 { stem, .. } => b = stem,
            Dichotomy::Inconclusive { candidate, blocking, reason } => {
                return Ok(Reduction::Inconclusive {
                    candidate,
                    reason: format!("color {color}: {reason} at {blocking}"),
                })
            }
        }
    }
    let used = colors_below(space, coloring, b.top())?;
    if used.len() <= 1 {
        Ok(Reduction::Monochromatic { stem: b, color: used.first().copied() })
    } else {
        Ok(Reduction::Inconclusive { candidate: b, reason: format!("{} colors remain", used.len()) })
    }
}

/// The block minima of `t` other than 0.
pub fn dual_to_classical_encoding(t: &PartitionApprox) -> EllentuckApprox {
    EllentuckApprox::new(t.blocks().iter().filter_map(|b| b.first().copied()).filter(|&m| m != 0).collect())
}

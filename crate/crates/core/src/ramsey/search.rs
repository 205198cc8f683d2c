//! Bad-coloring search on a finite hypergraph: keys are colored with `s`
//! colors, and a coloring is bad when no configuration is monochromatic.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Hard cap on `s^|keys|` for exhaustive enumeration.
pub const EXHAUSTIVE_CEILING: u64 = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    keys: usize,
    colors: usize,
    configs: Vec<Vec<u32>>,
    /// Configurations grouped by their largest key.
    by_last: Vec<Vec<u32>>,
}

impl Problem {
    /// Each configuration lists key indices; empty configurations are kept
    /// and count as monochromatic.
    pub fn new(keys: usize, colors: usize, configs: Vec<Vec<u32>>) -> Result<Self> {
        if colors == 0 || colors > 255 {
            return Err(Error::InvalidParameter(alloc::format!("colors must be in 1..=255, got {colors}")));
        }
        let mut by_last = alloc::vec![Vec::new(); keys];
        let mut configs: Vec<Vec<u32>> = configs
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        configs.sort();
        configs.dedup();
        for (i, c) in configs.iter().enumerate() {
            match c.last() {
                Some(&l) if (l as usize) < keys => by_last[l as usize].push(i as u32),
                Some(&l) => return Err(Error::OutOfRange { index: l as usize, limit: keys }),
                None => {}
            }
        }
        Ok(Problem { keys, colors, configs, by_last })
    }

    pub fn keys(&self) -> usize {
        self.keys
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn configs(&self) -> &[Vec<u32>] {
        &self.configs
    }

    /// `s^|keys|`, saturating.
    pub fn coloring_count(&self) -> u128 {
        (self.colors as u128).checked_pow(self.keys as u32).unwrap_or(u128::MAX)
    }

    fn mono(&self, c: &[u32], coloring: &[u8]) -> bool {
        match c.first() {
            None => true,
            Some(&f) => c.iter().all(|&i| coloring[i as usize] == coloring[f as usize]),
        }
    }

    /// No configuration is monochromatic.
    pub fn is_bad(&self, coloring: &[u8]) -> bool {
        !self.configs.iter().any(|c| self.mono(c, coloring))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search {
    /// The first bad coloring in lexicographic order.
    Bad(Vec<u8>),
    /// Every coloring has a monochromatic configuration.
    AllGood,
    /// Backtracking ran out of nodes.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub result: Search,
    /// Exhaustive: colorings up to and including the first bad one.
    /// Backtracking: search nodes.
    pub checked: u64,
}

fn decode(problem: &Problem, mut index: u64, out: &mut [u8]) {
    let s = problem.colors as u64;
    for slot in out.iter_mut().rev() {
        *slot = (index % s) as u8;
        index /= s;
    }
}

/// Scans colorings `from..to` in lexicographic order.
fn scan(problem: &Problem, from: u64, to: u64) -> Option<(u64, Vec<u8>)> {
    let mut coloring = alloc::vec![0u8; problem.keys];
    decode(problem, from, &mut coloring);
    let s = problem.colors as u8;
    for index in from..to {
        if problem.is_bad(&coloring) {
            return Some((index, coloring));
        }
        for slot in coloring.iter_mut().rev() {
            *slot += 1;
            if *slot < s {
                break;
            }
            *slot = 0;
        }
    }
    None
}

/// Enumerates all `s^|keys|` colorings, refusing above `ceiling` (itself
/// capped at [`EXHAUSTIVE_CEILING`]).
pub fn exhaustive(problem: &Problem, ceiling: u64) -> Result<SearchReport> {
    let ceiling = ceiling.min(EXHAUSTIVE_CEILING);
    let total = problem.coloring_count();
    if total > ceiling as u128 {
        return Err(Error::CeilingExceeded { estimate: total, ceiling: ceiling as u128 });
    }
    let total = total as u64;
    let found = first_bad(problem, total);
    Ok(match found {
        Some((i, c)) => SearchReport { result: Search::Bad(c), checked: i + 1 },
        None => SearchReport { result: Search::AllGood, checked: total },
    })
}

#[cfg(not(feature = "parallel"))]
fn first_bad(problem: &Problem, total: u64) -> Option<(u64, Vec<u8>)> {
    scan(problem, 0, total)
}

#[cfg(feature = "parallel")]
fn first_bad(problem: &Problem, total: u64) -> Option<(u64, Vec<u8>)> {
    use rayon::prelude::*;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|c| scan(problem, c * CHUNK, ((c + 1) * CHUNK).min(total)))
}

/// Depth-first search for a bad coloring, assigning keys in index order.
/// Colorings are taken up to renaming colors: a new color is only opened
/// once all smaller ones are in use. Complete unless the node budget runs
/// out; the bad coloring returned is the lexicographically first one.
pub fn backtracking(problem: &Problem, budget: u64) -> SearchReport {
    struct Dfs<'a> {
        p: &'a Problem,
        coloring: Vec<u8>,
        nodes: u64,
        budget: u64,
    }
    enum Step {
        Found,
        None,
        Budget,
    }
    impl Dfs<'_> {
        fn go(&mut self, i: usize, used: usize) -> Step {
            if i == self.p.keys {
                // configurations with no keys are monochromatic
                return if self.p.configs.iter().any(|c| c.is_empty()) { Step::None } else { Step::Found };
            }
            let top = (used + 1).min(self.p.colors);
            for color in 0..top {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Step::Budget;
                }
                self.coloring[i] = color as u8;
                let clash = self.p.by_last[i].iter().any(|&c| self.p.mono(&self.p.configs[c as usize], &self.coloring));
                if clash {
                    continue;
                }
                match self.go(i + 1, used.max(color + 1)) {
                    Step::None => {}
                    other => return other,
                }
            }
            Step::None
        }
    }
    let mut dfs = Dfs { p: problem, coloring: alloc::vec![0; problem.keys], nodes: 0, budget };
    let result = match dfs.go(0, 0) {
        Step::Found => Search::Bad(dfs.coloring),
        Step::None => Search::AllGood,
        Step::Budget => Search::Budget,
    };
    SearchReport { result, checked: dfs.nodes }
}

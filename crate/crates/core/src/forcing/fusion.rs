use crate::space::{Space, Stem};
use crate::{Error, Result};

/// Builds `B_1, …, B_levels` with `B_n = step(n, B_{n-1}) ∈ [n-1, B_{n-1}]`
/// and returns the diagonal `B ∈ ⋂_n [n, B_n]`, i.e. the stem whose
/// length-`n` approximation is that of `B_n` for every `n ≤ levels`.
///
/// A level fails when `step` returns `None`, leaves `[n-1, B_{n-1}]`, or
/// returns a stem too short to have an `n`-th approximation.
pub fn fusion<S, F>(space: &S, b0: &Stem<S::Approx>, levels: usize, mut step: F) -> Result<Stem<S::Approx>>
where
    S: Space,
    F: FnMut(usize, &Stem<S::Approx>) -> Option<Stem<S::Approx>>,
{
    space.check(b0.top())?;
    let mut seq = alloc::vec![b0.clone()];
    for n in 1..=levels {
        let prev = seq.last().expect("seq starts with b0");
        let next = step(n, prev).ok_or(Error::FusionExhausted { level: n })?;
        space.check(next.top())?;
        let (t, p) = (next.top(), prev.top());
        let inside =
            space.fin_leq(t, p) && space.length(t) >= n && space.restrict(t, n - 1) == space.restrict(p, n - 1);
        if !inside {
            return Err(Error::FusionExhausted { level: n });
        }
        seq.push(next);
    }
    let b = seq.pop().expect("nonempty");
    for (n, bn) in seq.iter().enumerate() {
        debug_assert_eq!(space.restrict(b.top(), n), space.restrict(bn.top(), n));
    }
    Ok(b)
}

//! Row-reduced echelon `ℕ×ℕ` matrices over a prime field, and the view of
//! their row spaces as subspaces of `F^ℕ`.
//!
//! `r_n(A)` keeps rows `0..n` and columns `0..p_n(A)`, where `p_n(A)` is the
//! pivot column of row `n`. A truncated stem is a finite echelon matrix whose
//! width is the pivot of the first unmaterialized row.

use alloc::string::String;
use alloc::vec::Vec;

use crate::gf::{self, check_modulus, enumerate_rre, gaussian_binomial, rref, EchelonMatrix};
use crate::space::{Space, Stem};
use crate::{Error, Result};

pub type MatrixApprox = EchelonMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixSpace {
    q: u8,
    max_cols: usize,
}

impl MatrixSpace {
    pub fn new(q: u8, max_cols: usize) -> Result<Self> {
        check_modulus(q)?;
        if q > 36 {
            return Err(Error::InvalidParameter(alloc::format!("q={q} has no text form; use q ≤ 31")));
        }
        if max_cols == 0 {
            return Err(Error::InvalidParameter(String::from("max-cols must be positive")));
        }
        Ok(MatrixSpace { q, max_cols })
    }

    pub fn modulus(&self) -> u8 {
        self.q
    }

    pub fn max_cols(&self) -> usize {
        self.max_cols
    }

    /// `b` cut to its first `cols` columns and re-reduced.
    fn truncated_span(b: &EchelonMatrix, cols: usize) -> EchelonMatrix {
        b.block(b.rows(), cols).expect("cols checked by caller")
    }
}

/// `p_n(A)`: the pivot column of row `n`. For the first unmaterialized row
/// this is the stem's width.
pub fn mat_pn(space: &MatrixSpace, stem: &Stem<MatrixApprox>, n: usize) -> Result<usize> {
    space.check(stem.top())?;
    let top = stem.top();
    match n.cmp(&top.rows()) {
        core::cmp::Ordering::Less => Ok(top.pivots()[n]),
        core::cmp::Ordering::Equal => Ok(top.cols()),
        core::cmp::Ordering::Greater => Err(Error::OutOfRange { index: n, limit: top.rows() }),
    }
}

/// `r_n(A)`.
pub fn mat_rn(space: &MatrixSpace, stem: &Stem<MatrixApprox>, n: usize) -> Result<MatrixApprox> {
    crate::space::approx(space, stem, n)
}

impl Space for MatrixSpace {
    type Approx = MatrixApprox;

    fn name(&self) -> &'static str {
        "matrix"
    }

    fn params(&self) -> String {
        alloc::format!("q={} max_cols={}", self.q, self.max_cols)
    }

    fn empty(&self) -> MatrixApprox {
        EchelonMatrix::empty(self.q)
    }

    fn check(&self, a: &MatrixApprox) -> Result<()> {
        if a.modulus() != self.q {
            return Err(Error::SpaceMismatch(alloc::format!(
                "GF({}) approximation in GF({}) space",
                a.modulus(),
                self.q
            )));
        }
        if a.rows() == 0 && a.cols() != 0 {
            return Err(Error::InvalidParameter(String::from("the empty approximation has no columns")));
        }
        if a.cols() > self.max_cols {
            return Err(Error::SpaceMismatch(alloc::format!("{} columns exceed max-cols {}", a.cols(), self.max_cols)));
        }
        Ok(())
    }

    fn length(&self, a: &MatrixApprox) -> usize {
        a.rows()
    }

    fn restrict(&self, a: &MatrixApprox, n: usize) -> MatrixApprox {
        if n == 0 {
            return self.empty();
        }
        if n == a.rows() {
            return a.clone();
        }
        a.block(n, a.pivots()[n]).expect("n below row count")
    }

    fn fin_leq(&self, a: &MatrixApprox, b: &MatrixApprox) -> bool {
        if a.rows() == 0 {
            return true;
        }
        if a.cols() > b.cols() {
            return false;
        }
        let span = Self::truncated_span(b, a.cols());
        (0..a.rows()).all(|r| gf::in_span(a.row(r), &span).unwrap_or(false))
    }

    fn fin_below(&self, a: &MatrixApprox) -> Vec<MatrixApprox> {
        let mut out = alloc::vec![self.empty()];
        for w in 1..=a.cols() {
            let span = Self::truncated_span(a, w);
            let basis: Vec<&[u8]> = (0..span.rows()).map(|r| span.row(r)).collect();
            for k in 1..=span.rank() {
                // subspaces of the span, in coordinates relative to its basis
                for coords in enumerate_rre(k, span.rank(), self.q, u64::MAX).expect("small") {
                    let rows: Vec<u8> = (0..k).flat_map(|r| gf::combine(self.q, &basis, coords.row(r))).collect();
                    let m = gf::FqMatrix::new(self.q, k, w, rows).expect("shape");
                    out.push(rref(&m));
                }
            }
        }
        out.sort();
        out
    }

    fn stem_leq(&self, b: &MatrixApprox, a: &MatrixApprox) -> bool {
        if b.rows() == 0 {
            return true;
        }
        if b.cols() > a.cols() {
            return false;
        }
        let cut = a.matrix().block(a.rows(), b.cols()).expect("width checked");
        gf::subspace_leq(b, &rref(&cut)).unwrap_or(false)
    }

    fn universe(&self) -> Vec<MatrixApprox> {
        let mut out = alloc::vec![self.empty()];
        for w in 1..=self.max_cols {
            for k in 1..=w {
                out.extend(enumerate_rre(k, w, self.q, u64::MAX).expect("ceiling is max"));
            }
        }
        out.sort();
        out
    }

    fn universe_size(&self) -> u128 {
        let mut n: u128 = 1;
        for w in 1..=self.max_cols as u32 {
            for k in 1..=w {
                n = n.saturating_add(gaussian_binomial(w, k, self.q as u32));
            }
        }
        n
    }

    fn parse(&self, s: &str) -> Result<MatrixApprox> {
        let a = EchelonMatrix::parse(s)?;
        self.check(&a)?;
        Ok(a)
    }
}

/// A finite-dimensional subspace `W` of `F^m`, held by its echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubspaceApprox {
    basis: EchelonMatrix,
}

impl SubspaceApprox {
    /// The row space of `m`.
    pub fn spanned_by(m: &gf::FqMatrix) -> Self {
        SubspaceApprox { basis: rref(m) }
    }

    pub fn basis(&self) -> &EchelonMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentVerdict {
    Yes,
    No,
    /// The stem is narrower than the subspace's ambient space.
    Inconclusive,
}

/// Whether `w` is an initial segment of some subspace of the stem's row
/// space: some approximation of some reduct has rows forming a basis of `w`.
pub fn subspace_initial_segment(
    space: &MatrixSpace,
    w: &SubspaceApprox,
    v_stem: &Stem<MatrixApprox>,
) -> Result<SegmentVerdict> {
    if w.basis.modulus() != space.modulus() {
        return Err(Error::SpaceMismatch(alloc::format!(
            "GF({}) subspace in GF({}) space",
            w.basis.modulus(),
            space.modulus()
        )));
    }
    if w.dim() == 0 {
        return Ok(SegmentVerdict::Yes);
    }
    if w.ambient_dim() > v_stem.top().cols() {
        return Ok(SegmentVerdict::Inconclusive);
    }
    // The basis is itself a candidate reduct; anything below the stem is one.
    Ok(if space.fin_leq(&w.basis, v_stem.top()) { SegmentVerdict::Yes } else { SegmentVerdict::No })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FqMatrix;
    use crate::space::{approx, depth, fin_leq};
    use alloc::string::ToString;

    fn em(q: u8, rows: &[&[u8]]) -> EchelonMatrix {
        EchelonMatrix::from_matrix(FqMatrix::from_rows(q, rows).unwrap()).unwrap()
    }

    #[test]
    fn identity_stem_approximations() {
        let sp = MatrixSpace::new(2, 6).unwrap();
        let id = Stem::new(&sp, EchelonMatrix::identity(2, 5)).unwrap();
        assert_eq!(mat_rn(&sp, &id, 2).unwrap(), EchelonMatrix::identity(2, 2));
        assert_eq!(mat_rn(&sp, &id, 0).unwrap(), sp.empty());
        assert_eq!(mat_pn(&sp, &id, 3).unwrap(), 3);
        assert_eq!(mat_pn(&sp, &id, 5).unwrap(), 5);
        assert!(mat_pn(&sp, &id, 6).is_err());
        for n in 0..=5 {
            assert_eq!(sp.length(&approx(&sp, &id, n).unwrap()), n);
        }
    }

    #[test]
    fn sparse_pivot_stem() {
        let sp = MatrixSpace::new(2, 6).unwrap();
        let top = em(2, &[&[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1]]);
        let stem = Stem::new(&sp, top).unwrap();
        assert_eq!(mat_pn(&sp, &stem, 1).unwrap(), 2);
        let ps: Vec<usize> = (0..3).map(|n| mat_pn(&sp, &stem, n).unwrap()).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cut_before_next_pivot() {
        let sp = MatrixSpace::new(2, 4).unwrap();
        let stem = Stem::new(&sp, em(2, &[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        let r1 = mat_rn(&sp, &stem, 1).unwrap();
        assert_eq!(r1.to_string(), "q=2;11");
        assert_eq!(sp.length(&r1), 1);
    }

    #[test]
    fn finitization_examples() {
        let sp = MatrixSpace::new(2, 4).unwrap();
        let diag = em(2, &[&[1, 1]]);
        let id = EchelonMatrix::identity(2, 2);
        assert!(fin_leq(&sp, &diag, &id).unwrap());
        assert!(!fin_leq(&sp, &id, &diag).unwrap());
        assert!(fin_leq(&sp, &id, &id).unwrap());
        let other = MatrixSpace::new(3, 4).unwrap();
        assert!(fin_leq(&other, &diag, &id).is_err());
    }

    #[test]
    fn fin_below_identity_by_brute_force() {
        let sp = MatrixSpace::new(2, 4).unwrap();
        let id = EchelonMatrix::identity(2, 2);
        let fast = sp.fin_below(&id);
        let brute: Vec<_> = sp.universe().into_iter().filter(|b| sp.fin_leq(b, &id)).collect();
        assert_eq!(fast, brute);
        // ∅, [1], [0 1], [1 0], [1 1], I_2
        assert_eq!(fast.len(), 6);
    }

    #[test]
    fn depth_of_row_in_identity() {
        let sp = MatrixSpace::new(2, 4).unwrap();
        let id = Stem::new(&sp, EchelonMatrix::identity(2, 3)).unwrap();
        assert_eq!(depth(&sp, &id, &em(2, &[&[1, 1]])).unwrap(), 2);
        assert_eq!(depth(&sp, &id, &em(2, &[&[1]])).unwrap(), 1);
    }

    #[test]
    fn universe_size_matches() {
        let sp = MatrixSpace::new(2, 4).unwrap();
        assert_eq!(sp.universe().len() as u128, sp.universe_size());
        assert_eq!(sp.universe_size(), 87);
    }

    #[test]
    fn initial_segments_of_subspaces() {
        let sp = MatrixSpace::new(2, 6).unwrap();
        let b = Stem::new(&sp, em(2, &[&[1, 0, 1, 0], &[0, 1, 1, 0]])).unwrap();
        let first = SubspaceApprox::spanned_by(&FqMatrix::from_rows(2, &[&[1, 0, 1, 0]]).unwrap());
        assert_eq!(subspace_initial_segment(&sp, &first, &b).unwrap(), SegmentVerdict::Yes);
        let zero = SubspaceApprox::spanned_by(&FqMatrix::zeros(2, 1, 4).unwrap());
        assert_eq!(subspace_initial_segment(&sp, &zero, &b).unwrap(), SegmentVerdict::Yes);
        let outside = SubspaceApprox::spanned_by(&FqMatrix::from_rows(2, &[&[0, 0, 0, 1]]).unwrap());
        assert_eq!(subspace_initial_segment(&sp, &outside, &b).unwrap(), SegmentVerdict::No);
        let wide = SubspaceApprox::spanned_by(&FqMatrix::from_rows(2, &[&[1, 0, 1, 0, 0]]).unwrap());
        assert_eq!(subspace_initial_segment(&sp, &wide, &b).unwrap(), SegmentVerdict::Inconclusive);
    }
}

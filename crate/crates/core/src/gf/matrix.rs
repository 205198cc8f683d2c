use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::field::{add_mod, check_modulus, inv_mod, mul_mod, sub_mod, Fq};
use crate::{Error, Result};

/// Dense row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqMatrix {
    q: u8,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FqMatrix {
    pub fn new(q: u8, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        check_modulus(q)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        let data = data.into_iter().map(|v| v % q).collect();
        Ok(FqMatrix { q, rows, cols, data })
    }

    pub fn zeros(q: u8, rows: usize, cols: usize) -> Result<Self> {
        Self::new(q, rows, cols, alloc::vec![0; rows * cols])
    }

    /// Builds a matrix from rows of residues. All rows must share a width.
    pub fn from_rows(q: u8, rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::new(q, rows.len(), cols, data)
    }

    pub fn modulus(&self) -> u8 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fq {
        Fq::new(self.data[r * self.cols + c] as u32, self.q)
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn raw(&self) -> &[u8] {
        &self.data
    }

    /// The leading `rows × cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Result<FqMatrix> {
        if rows > self.rows {
            return Err(Error::OutOfRange { index: rows, limit: self.rows });
        }
        if cols > self.cols {
            return Err(Error::OutOfRange { index: cols, limit: self.cols });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            data.extend_from_slice(&self.row(r)[..cols]);
        }
        Ok(FqMatrix { q: self.q, rows, cols, data })
    }
}

/// A matrix in reduced row-echelon form without zero rows.
///
/// Pivots are strictly increasing, every pivot entry is 1 and every pivot
/// column is zero outside its pivot row. Two echelon matrices are equal iff
/// they span the same subspace of `F^cols`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EchelonMatrix {
    body: FqMatrix,
    pivots: Vec<usize>,
}

impl EchelonMatrix {
    /// The canonical 0×0 matrix.
    pub fn empty(q: u8) -> Self {
        EchelonMatrix { body: FqMatrix { q, rows: 0, cols: 0, data: Vec::new() }, pivots: Vec::new() }
    }

    pub fn identity(q: u8, n: usize) -> Self {
        let mut data = alloc::vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        EchelonMatrix { body: FqMatrix { q, rows: n, cols: n, data }, pivots: (0..n).collect() }
    }

    /// Accepts `m` only if it is already in reduced row-echelon form with no
    /// zero rows.
    pub fn from_matrix(m: FqMatrix) -> Result<Self> {
        let pivots = echelon_pivots(&m)
            .ok_or_else(|| Error::InvalidParameter(String::from("matrix is not in reduced row-echelon form")))?;
        Ok(EchelonMatrix { body: m, pivots })
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.body
    }

    pub fn modulus(&self) -> u8 {
        self.body.q
    }

    pub fn rank(&self) -> usize {
        self.body.rows
    }

    pub fn rows(&self) -> usize {
        self.body.rows
    }

    pub fn cols(&self) -> usize {
        self.body.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, r: usize) -> &[u8] {
        self.body.row(r)
    }

    /// Leading `rows × cols` block, re-reduced.
    pub fn block(&self, rows: usize, cols: usize) -> Result<EchelonMatrix> {
        Ok(rref(&self.body.block(rows, cols)?))
    }
}

fn echelon_pivots(m: &FqMatrix) -> Option<Vec<usize>> {
    let mut pivots = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let row = m.row(r);
        let p = row.iter().position(|&v| v != 0)?;
        if row[p] != 1 || pivots.last().is_some_and(|&last| p <= last) {
            return None;
        }
        pivots.push(p);
    }
    for (r, &p) in pivots.iter().enumerate() {
        for other in 0..m.rows {
            if other != r && m.row(other)[p] != 0 {
                return None;
            }
        }
    }
    Some(pivots)
}

/// Gauss-Jordan elimination. Zero rows are dropped, so the result has
/// exactly `rank(m)` rows and keeps `m`'s column count.
pub fn rref(m: &FqMatrix) -> EchelonMatrix {
    let q = m.q;
    let cols = m.cols;
    let mut rows: Vec<Vec<u8>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        let Some(found) = (lead..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(lead, found);
        let inv = inv_mod(rows[lead][c], q);
        for v in rows[lead].iter_mut() {
            *v = mul_mod(*v, inv, q);
        }
        let pivot_row = rows[lead].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == lead || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (v, &p) in row.iter_mut().zip(&pivot_row) {
                *v = sub_mod(*v, mul_mod(f, p, q), q);
            }
        }
        pivots.push(c);
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
    rows.truncate(lead);
    let data = rows.concat();
    EchelonMatrix { body: FqMatrix { q, rows: lead, cols, data }, pivots }
}

/// Whether `v` is a linear combination of the rows of `m`.
pub fn in_span(v: &[u8], m: &EchelonMatrix) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.cols(), found: v.len() });
    }
    let q = m.modulus();
    let mut rest: Vec<u8> = v.iter().map(|x| x % q).collect();
    for (r, &p) in m.pivots.iter().enumerate() {
        let f = rest[p];
        if f == 0 {
            continue;
        }
        for (x, &y) in rest.iter_mut().zip(m.row(r)) {
            *x = sub_mod(*x, mul_mod(f, y, q), q);
        }
    }
    Ok(rest.iter().all(|&x| x == 0))
}

/// `a ≤ b` as subspaces of the same `F^cols`.
pub fn subspace_leq(a: &EchelonMatrix, b: &EchelonMatrix) -> Result<bool> {
    if a.modulus() != b.modulus() {
        return Err(Error::SpaceMismatch(alloc::format!("GF({}) vs GF({})", a.modulus(), b.modulus())));
    }
    if a.rank() > 0 && a.cols() != b.cols() {
        return Err(Error::DimensionMismatch { expected: b.cols(), found: a.cols() });
    }
    for r in 0..a.rows() {
        if !in_span(a.row(r), b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ coeffs[i] · rows[i]`, used by tests and the subspace views.
pub fn combine(q: u8, rows: &[&[u8]], coeffs: &[u8]) -> Vec<u8> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut out = alloc::vec![0u8; width];
    for (row, &c) in rows.iter().zip(coeffs) {
        for (o, &x) in out.iter_mut().zip(row.iter()) {
            *o = add_mod(*o, mul_mod(c, x, q), q);
        }
    }
    out
}

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// `q=2;10;01`: the field order followed by one digit string per row.
impl fmt::Display for EchelonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}", self.body.q)?;
        for r in 0..self.rows() {
            f.write_str(";")?;
            for &v in self.row(r) {
                write!(f, "{}", DIGITS[v as usize] as char)?;
            }
        }
        Ok(())
    }
}

impl EchelonMatrix {
    /// Parses the canonical text form. The matrix must already be reduced;
    /// non-canonical input is rejected rather than normalised.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(';');
        let head = parts.next().unwrap_or("");
        let q: u8 = head
            .strip_prefix("q=")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(alloc::format!("expected q=<prime> in {s:?}")))?;
        check_modulus(q)?;
        if q as usize > DIGITS.len() {
            return Err(Error::Parse(alloc::format!("q={q} has no single-digit text form")));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for part in parts {
            let row: Vec<u8> = part
                .bytes()
                .map(|b| match DIGITS.iter().position(|&d| d == b) {
                    Some(v) if v < q as usize => Ok(v as u8),
                    _ => Err(Error::Parse(alloc::format!("bad digit {:?} in {s:?}", b as char))),
                })
                .collect::<Result<_>>()?;
            if row.is_empty() || cols.is_some_and(|c| c != row.len()) {
                return Err(Error::Parse(alloc::format!("ragged or empty row in {s:?}")));
            }
            cols = Some(row.len());
            data.extend(row);
            rows += 1;
        }
        let m = FqMatrix::new(q, rows, cols.unwrap_or(0), data)?;
        EchelonMatrix::from_matrix(m)
            .map_err(|_| Error::Parse(alloc::format!("{s:?} is not in reduced row-echelon form")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn m(q: u8, rows: &[&[u8]]) -> FqMatrix {
        FqMatrix::from_rows(q, rows).unwrap()
    }

    #[test]
    fn rref_of_invertible_is_identity() {
        let e = rref(&m(2, &[&[1, 1], &[0, 1]]));
        assert_eq!(e, EchelonMatrix::identity(2, 2));
    }

    #[test]
    fn rref_of_zero_matrix_has_no_rows() {
        let e = rref(&FqMatrix::zeros(3, 2, 3).unwrap());
        assert_eq!(e.rank(), 0);
        assert_eq!(e.cols(), 3);
    }

    #[test]
    fn rref_singular_gf3() {
        // det = 4 - 1 = 3 = 0 mod 3; second row is twice the first.
        let e = rref(&m(3, &[&[2, 1], &[1, 2]]));
        assert_eq!(e.rank(), 1);
        assert_eq!(e.row(0), &[1, 2]);
    }

    #[test]
    fn span_membership() {
        let b = rref(&m(2, &[&[1, 0, 1], &[0, 1, 1]]));
        assert!(in_span(&[1, 1, 0], &b).unwrap());
        assert!(in_span(&[0, 0, 0], &b).unwrap());
        assert!(!in_span(&[1, 0, 0], &b).unwrap());
        assert!(in_span(&[1, 0], &b).is_err());
    }

    #[test]
    fn subspace_order() {
        let id = EchelonMatrix::identity(2, 2);
        let diag = rref(&m(2, &[&[1, 1]]));
        assert!(subspace_leq(&diag, &id).unwrap());
        assert!(!subspace_leq(&id, &diag).unwrap());
        assert!(subspace_leq(&id, &id).unwrap());
        assert!(subspace_leq(&diag, &EchelonMatrix::identity(2, 3)).is_err());
    }

    #[test]
    fn text_form() {
        let e = rref(&m(3, &[&[1, 0, 2], &[0, 1, 1]]));
        assert_eq!(e.to_string(), "q=3;102;011");
        assert_eq!(EchelonMatrix::parse("q=3;102;011").unwrap(), e);
        assert_eq!(EchelonMatrix::parse("q=2").unwrap(), EchelonMatrix::empty(2));
        assert!(EchelonMatrix::parse("q=2;11;01").is_err());
        assert!(EchelonMatrix::parse("q=4;10").is_err());
        assert!(EchelonMatrix::parse("q=2;12").is_err());
        assert!(EchelonMatrix::parse("q=2;10;1").is_err());
    }

    #[test]
    fn block_cuts_leading_part() {
        let id = EchelonMatrix::identity(2, 4);
        assert_eq!(id.block(2, 2).unwrap(), EchelonMatrix::identity(2, 2));
        assert!(id.block(5, 2).is_err());
    }
}

use alloc::vec::Vec;

use super::field::check_modulus;
use super::matrix::{EchelonMatrix, FqMatrix};
use crate::{Error, Result};

/// Number of `k`-dimensional subspaces of `GF(q)^m`.
///
/// Each partial product `∏_{i<j} (q^{m-i} - 1) / (q^{i+1} - 1)` is itself a
/// Gaussian binomial, so the division is exact at every step. Saturates at
/// `u128::MAX` for huge inputs.
pub fn gaussian_binomial(m: u32, k: u32, q: u32) -> u128 {
    if k > m {
        return 0;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        let (Some(num), Some(den)) = (q.checked_pow(m - i), q.checked_pow(i + 1)) else {
            return u128::MAX;
        };
        let Some(prod) = acc.checked_mul(num - 1) else {
            return u128::MAX;
        };
        acc = prod / (den - 1);
    }
    acc
}

/// All rank-`k` reduced row-echelon matrices with `m` columns over GF(q), in
/// canonical (`Ord`) order.
pub fn enumerate_rre(k: usize, m: usize, q: u8, ceiling: u64) -> Result<Vec<EchelonMatrix>> {
    check_modulus(q)?;
    if k > m {
        return Err(Error::InvalidParameter(alloc::format!("rank {k} exceeds width {m}")));
    }
    let estimate = gaussian_binomial(m as u32, k as u32, q as u32);
    if estimate > ceiling as u128 {
        return Err(Error::CeilingExceeded { estimate, ceiling: ceiling as u128 });
    }
    let mut out = Vec::with_capacity(estimate as usize);
    let mut pivots = Vec::with_capacity(k);
    pivot_sets(0, k, m, &mut pivots, &mut |piv| fill_free(piv, m, q, &mut out));
    out.sort();
    Ok(out)
}

fn pivot_sets(start: usize, k: usize, m: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for c in start..m {
        cur.push(c);
        pivot_sets(c + 1, k, m, cur, f);
        cur.pop();
    }
}

fn fill_free(pivots: &[usize], m: usize, q: u8, out: &mut Vec<EchelonMatrix>) {
    let k = pivots.len();
    // Free positions: right of a row's pivot, outside every pivot column.
    let mut free = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..m {
            if !pivots.contains(&c) {
                free.push(r * m + c);
            }
        }
    }
    let mut data = alloc::vec![0u8; k * m];
    for (r, &p) in pivots.iter().enumerate() {
        data[r * m + p] = 1;
    }
    let mut digits = alloc::vec![0u8; free.len()];
    loop {
        for (&pos, &d) in free.iter().zip(&digits) {
            data[pos] = d;
        }
        let body = FqMatrix::new(q, k, m, data.clone()).expect("shape checked");
        out.push(EchelonMatrix::from_matrix(body).expect("constructed in echelon form"));
        // odometer
        let mut i = 0;
        loop {
            if i == digits.len() {
                return;
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 1, 3), 13);
        assert_eq!(gaussian_binomial(7, 0, 5), 1);
        assert_eq!(gaussian_binomial(5, 5, 3), 1);
        assert_eq!(gaussian_binomial(2, 3, 2), 0);
    }

    #[test]
    fn lines_of_the_plane() {
        let all = enumerate_rre(1, 2, 2, 1000).unwrap();
        let text: Vec<_> = all.iter().map(|e| e.to_string()).collect();
        assert_eq!(text, ["q=2;01", "q=2;10", "q=2;11"]);
    }

    #[test]
    fn full_rank_is_identity() {
        for q in [2, 3, 5] {
            for k in 0..4 {
                assert_eq!(enumerate_rre(k, k, q, 1000).unwrap(), [EchelonMatrix::identity(q, k)]);
            }
        }
    }

    #[test]
    fn ceiling_refuses_with_estimate() {
        match enumerate_rre(2, 4, 2, 10) {
            Err(Error::CeilingExceeded { estimate, ceiling }) => {
                assert_eq!((estimate, ceiling), (35, 10));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

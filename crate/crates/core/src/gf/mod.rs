//! Prime-field arithmetic and echelon-form linear algebra.

mod enumerate;
mod field;
mod matrix;

pub use enumerate::{enumerate_rre, gaussian_binomial};
pub use field::{check_modulus, is_prime, Fq, MAX_MODULUS};
pub use matrix::{combine, in_span, rref, subspace_leq, EchelonMatrix, FqMatrix};

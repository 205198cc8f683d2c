use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// Largest supported field order. Entries are stored as `u8`.
pub const MAX_MODULUS: u8 = 251;

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_modulus(q: u8) -> Result<()> {
    if is_prime(q as u32) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("field order {q} is not a prime")))
    }
}

/// Residue modulo a prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq {
    value: u8,
    q: u8,
}

impl Fq {
    pub fn new(value: u32, q: u8) -> Self {
        debug_assert!(is_prime(q as u32));
        Fq { value: (value % q as u32) as u8, q }
    }

    pub fn zero(q: u8) -> Self {
        Fq { value: 0, q }
    }

    pub fn one(q: u8) -> Self {
        Fq { value: 1, q }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn modulus(self) -> u8 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        Some(Fq { value: inv_mod(self.value, self.q), q: self.q })
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq { value: add_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq { value: sub_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq { value: mul_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq { value: sub_mod(0, self.value, self.q), q: self.q }
    }
}

// Raw residue arithmetic used by the matrix kernels.

#[inline]
pub(crate) fn add_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 + b as u16) % q as u16) as u8
}

#[inline]
pub(crate) fn sub_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 + q as u16 - b as u16) % q as u16) as u8
}

#[inline]
pub(crate) fn mul_mod(a: u8, b: u8, q: u8) -> u8 {
    ((a as u16 * b as u16) % q as u16) as u8
}

/// Inverse by Fermat: `a^(q-2)`.
pub(crate) fn inv_mod(a: u8, q: u8) -> u8 {
    let mut base = a as u32 % q as u32;
    let mut exp = q as u32 - 2;
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u32;
        }
        base = base * base % q as u32;
        exp >>= 1;
    }
    acc as u8
}

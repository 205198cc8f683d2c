//! Executable finite truncations of topological Ramsey spaces.
//!
//! The crate is organised around the [`Space`] contract: a space supplies its
//! finite approximations, the restriction map `r_n`, the finitization order
//! `≤_fin` and a truncated universe. On top of that contract sit
//!
//! * [`audit`]: exhaustive bounded checks of the axioms A1 to A6,
//! * [`spaces`]: Ellentuck's space, row-reduced echelon matrices over a prime
//!   field and the space of infinite partitions,
//! * [`forcing`]: accepts / rejects / decides, fusion and the Galvin dichotomy,
//! * [`ramsey`]: witness search and independent certificate checking for
//!   finite Ramsey statements (classical, vector and dual).
//!
//! The crate is `no_std` and only needs `alloc`. The `parallel` feature pulls
//! in `std` and `rayon` for the exhaustive coloring enumeration.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod audit;
mod error;
pub mod forcing;
pub mod gf;
pub mod ramsey;
pub mod space;
pub mod spaces;

pub use crate::error::{Error, Result};
pub use crate::space::{Space, Stem};

/// Default ceiling on the number of instances any bounded search may visit
/// before refusing with an estimate.
pub const DEFAULT_CEILING: u64 = 1 << 20;

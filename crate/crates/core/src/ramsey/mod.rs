//! Ramsey-type witnesses: reduction of colorings on a space, least finite
//! witnesses for the classical, vector-space and parameter-set theorems,
//! and an independent certificate checker.

mod reduce;
mod search;
mod verify;
mod witness;

pub use reduce::{abs_ramsey_reduce, dual_to_classical_encoding, Coloring, Reduction};
pub use search::{backtracking, exhaustive, Problem, Search, SearchReport, EXHAUSTIVE_CEILING};
pub use verify::{verify_result, verify_witness, Replay, Verification, NODE_BUDGET};
pub use witness::{
    abstract_ellentuck_witness, classical_ramsey_number, finite_ramsey_witness, glr_witness, gr_paramset_witness,
    BadColoring, Instance, LevelReport, LevelResult, Mode, WitnessOutcome, WitnessResult, DOMAIN_CEILING,
};

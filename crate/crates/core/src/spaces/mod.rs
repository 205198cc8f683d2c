//! The three concrete spaces: Ellentuck's space, echelon matrices over a
//! prime field, and infinite partitions of ℕ.

pub mod ellentuck;
pub mod matrix;
pub mod partition;

pub use ellentuck::{ell_space, Ellentuck, EllentuckApprox};
pub use matrix::{mat_pn, mat_rn, subspace_initial_segment, MatrixApprox, MatrixSpace, SegmentVerdict, SubspaceApprox};
pub use partition::{
    coarsenings, enumerate_partitions, part_coarser, part_rn, stirling2, PartitionApprox, PartitionSpace, PartitionStem,
};

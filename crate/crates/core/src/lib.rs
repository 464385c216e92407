//! Construction and verification kernels for integrable lattice models.
//!
//! The crate builds three families of solvable-model weights and checks the
//! algebraic identities they are supposed to satisfy:
//!
//! - a 2-state vertex model in three gauges, connected by diagonal gauge
//!   sandwiches ([`six_vertex`]),
//! - a graded multi-state vertex model with gauge and twist freedom, plus its
//!   root-of-unity reduction and a monomial-span certifier ([`slmn`]),
//! - N-state edge weights on a parameter curve, their star-triangle relation,
//!   and four-weight face compositions that map onto vertex matrices
//!   ([`chiral_potts`]),
//! - q-deformed factorials and integers in two normalizations ([`qseries`]).
//!
//! Everything funnels through the dense rank-4 tensor type and the
//! Yang-Baxter residual kernel in [`tensor`]. All checks are expressed as
//! residuals (max-magnitude differences, usually relative) so that callers
//! can compare them against explicit tolerances.

pub mod chiral_potts;
pub mod dump;
pub mod qseries;
pub mod report;
pub mod sample;
pub mod six_vertex;
pub mod slmn;
pub mod tensor;

pub use report::CheckReport;
pub use tensor::{
    apply_gauge, projective_distance, ybe_residual, ybe_residual_parts, Cplx, GaugeSandwich,
    RMatrix, SupportRule, TensorError, YbeResidual,
};

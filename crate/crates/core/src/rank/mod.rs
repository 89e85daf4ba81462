//! Minrank over finite fields, orthogonal (bi-)representation certificates,
//! and the lower/upper bound bracket for orthogonality dimension.

mod bounds;
mod field;
mod minrank;
mod representation;

pub use bounds::{bound_report, Bound, BoundOptions, BoundReport, Check, MinrankBracket};
pub use field::{is_prime, FiniteFieldMatrix};
pub use minrank::{
    clique_cover_matrix, log_ceiling, minrank_finite, minrank_finite_capped, minrank_log_lower, represents,
    MinrankResult,
};
pub use representation::{
    clique_cover_representation, verify_bi_representation, verify_orthogonal_representation, BiRepCertificate, Field,
    OrthRepCertificate,
};

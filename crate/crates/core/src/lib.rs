//! Computation and certification of the invariants that bracket the
//! orthogonality dimension of graphs: independence and clique cover numbers,
//! the 2-colorability defect of set systems, (fractional) chromatic numbers,
//! fractional sub-multiplicative invariants, minrank over prime fields, and
//! hemisphere certificates built from points on the moment curve.
//!
//! Everything except the Borsuk-graph discretization works in exact
//! arithmetic, so reported equalities such as `chi_f(K(5,2)) = 5/2` are
//! rational identities rather than floating comparisons.

pub mod chromatic;
pub mod config;
pub mod defect;
pub mod error;
pub mod fractional;
pub mod geometry;
pub mod graph;
pub mod lp;
pub mod rank;
pub mod report;
pub mod serde_util;

pub use error::{Error, Result};
pub use graph::{Graph, SetSystem};
pub use lp::Rational;

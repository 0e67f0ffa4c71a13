//! Special and Ulrich cycles on resolution dual graphs of rational surface
//! singularities.
//!
//! A [`DualGraph`] records the exceptional curves of a minimal resolution and
//! their intersection numbers. Cycles are integer combinations of the curves;
//! everything above the graph itself is generic over an exact integer
//! [`Scalar`], with big-integer aliases at the crate root and `i64` variants
//! for hot loops.

pub mod builders;
pub mod classify;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod scalar;

use num_bigint::BigInt;

pub use builders::{build_ade, build_cyclic, hj_expansion, parse_graph, serialize_graph, validate, AdeFamily};
pub use classify::{golden_table, verify_rdp, CycleKind};
pub use error::{Error, Result};
pub use invariants::fundamental_cycle;
pub use lattice::{CycleOrdering, DualGraph};
pub use scalar::Scalar;

pub type Cycle = lattice::Cycle<BigInt>;
pub type Filtration = invariants::Filtration<BigInt>;
pub type Analysis<'g> = invariants::Analysis<'g, BigInt>;
pub type Classifier<'g> = classify::Classifier<'g, BigInt>;
pub type ClassificationEntry = classify::ClassificationEntry<BigInt>;
pub type ValidationReport = builders::ValidationReport<BigInt>;

pub type Cycle64 = lattice::Cycle<i64>;
pub type Filtration64 = invariants::Filtration<i64>;
pub type Analysis64<'g> = invariants::Analysis<'g, i64>;
pub type Classifier64<'g> = classify::Classifier<'g, i64>;
pub type ClassificationEntry64 = classify::ClassificationEntry<i64>;

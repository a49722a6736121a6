//! Nested sequents with input/output polarities, the nested calculus, its
//! checker, bounded proof search and the height-preserving structural rules.

mod admissible;
mod check;
mod proof;
mod rules;
mod search;
mod sequent;

pub use admissible::{admit_structural, structural_target, AdmitError, StructuralStep};
pub use check::{check_nested, is_initial, NCheckError};
pub use proof::{NParams, NRule, NestedProof};
pub use rules::{apply_backward, principal, Premise};
pub use search::{prove_bounded, prove_with_limits, SearchLimits, SearchStats};
pub use sequent::{output_pruning, prop_graph_nested, Address, NestedError, NestedSequent};
pub(crate) use sequent::RawNode;

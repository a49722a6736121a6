//! Labelled sequents and the labelled calculus with structural rules `S(n,k)`.

mod check;
mod proof;
mod sequent;

pub use check::{apply_rule_forward, check_labelled, LCheckError, Mode, SchemeError};
pub use proof::{LParams, LRule, LabelledProof};
pub use sequent::{seq_compose, LFormula, LabelledSequent, RelAtom, SequentParseError, SequentParts};

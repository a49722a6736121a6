//! Proof-theoretic toolkit for intuitionistic modal logics extended with
//! seriality and Horn-Scott-Lemmon axioms.
//!
//! The pipeline runs from axiom sets to semi-Thue grammars, uses those
//! grammars to license propagation rules over labelled and nested sequents,
//! eliminates structural rules from labelled proofs, and translates proofs
//! between the labelled and nested calculi. Finite bi-relational models serve
//! as a semantic oracle throughout.

pub mod grammar;
pub mod syntax;
pub mod labelled;
pub mod models;
pub mod nested;
pub mod random;
pub mod refine;
pub mod translate;

//! The height-preserving admissible rules of the nested calculus: necessitation
//! `(n)`, weakening `(w)`, contraction `(c)` and merge `(m)`.
//!
//! Each transformation goes through the labelled image of the proof, where
//! the rules become plain label manipulations, and comes back through the
//! tree translation.

use std::collections::BTreeSet;

use thiserror::Error;

use super::check::{check_nested, NCheckError};
use super::proof::NestedProof;
use super::sequent::{Address, NestedSequent};
use crate::labelled::{LFormula, LRule, LabelledProof, LabelledSequent, RelAtom};
use crate::syntax::{AxiomSet, Formula};
use crate::translate::{labelled_to_nested, nested_to_labelled, preorder_labels, TranslateError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralStep {
    /// `Σ` to `[Σ]`.
    Necessitation,
    /// Adds the LHS-sequent `delta` at the node `at`.
    Weaken { at: Address, delta: NestedSequent },
    /// Drops one of two copies of the input `formula` at `at`.
    Contract { at: Address, formula: Formula },
    /// Merges the children `left` and `right` of the node `at`.
    Merge { at: Address, left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AdmitError {
    #[error("source proof does not check: {0}")]
    Source(NCheckError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("transformed proof does not check: {0}")]
    Result(NCheckError),
    #[error("height grew from {from} to {to}")]
    Height { from: usize, to: usize },
}

fn shape<T>(msg: impl Into<String>) -> Result<T, AdmitError> {
    Err(AdmitError::Shape(msg.into()))
}

fn replace_at(s: &NestedSequent, at: &[usize], f: &dyn Fn(&NestedSequent) -> Result<NestedSequent, AdmitError>) -> Result<NestedSequent, AdmitError> {
    match at.split_first() {
        None => f(s),
        Some((&i, rest)) => {
            let Some(child) = s.children().get(i) else { return shape(format!("no child {i}")) };
            let mut children = s.children().to_vec();
            children[i] = replace_at(child, rest, f)?;
            Ok(NestedSequent::new(s.inputs().to_vec(), s.output().cloned(), children))
        }
    }
}

/// The conclusion the step produces from `s`.
pub fn structural_target(step: &StructuralStep, s: &NestedSequent) -> Result<NestedSequent, AdmitError> {
    match step {
        StructuralStep::Necessitation => Ok(NestedSequent::new(Vec::new(), None, vec![s.clone()])),
        StructuralStep::Weaken { at, delta } => {
            if !delta.is_lhs() {
                return shape("weakening adds an LHS-sequent, without output");
            }
            replace_at(s, at, &|n| {
                let inputs = n.inputs().iter().chain(delta.inputs()).cloned().collect();
                let children = n.children().iter().chain(delta.children()).cloned().collect();
                Ok(NestedSequent::new(inputs, n.output().cloned(), children))
            })
        }
        StructuralStep::Contract { at, formula } => replace_at(s, at, &|n| {
            if n.inputs().iter().filter(|f| *f == formula).count() < 2 {
                return shape(format!("{formula}^i does not occur twice"));
            }
            let mut inputs = n.inputs().to_vec();
            let i = inputs.iter().position(|f| f == formula).expect("counted above");
            inputs.remove(i);
            Ok(NestedSequent::new(inputs, n.output().cloned(), n.children().to_vec()))
        }),
        StructuralStep::Merge { at, left, right } => replace_at(s, at, &|n| {
            let (l, r) = (*left, *right);
            if l == r || l.max(r) >= n.children().len() {
                return shape(format!("children {l} and {r} are not two siblings"));
            }
            let (a, b) = (&n.children()[l], &n.children()[r]);
            let output = match (a.output(), b.output()) {
                (Some(_), Some(_)) => return shape("both brackets have an output"),
                (o, None) | (None, o) => o.cloned(),
            };
            let merged = NestedSequent::new(
                a.inputs().iter().chain(b.inputs()).cloned().collect(),
                output,
                a.children().iter().chain(b.children()).cloned().collect(),
            );
            let mut children: Vec<NestedSequent> =
                n.children().iter().enumerate().filter(|(i, _)| *i != l && *i != r).map(|(_, c)| c.clone()).collect();
            children.push(merged);
            Ok(NestedSequent::new(n.inputs().to_vec(), n.output().cloned(), children))
        }),
    }
}

struct Fresh {
    used: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn label(&mut self) -> String {
        loop {
            let l = format!("x{}", self.next);
            self.next += 1;
            if self.used.insert(l.clone()) {
                return l;
            }
        }
    }
}

/// Proof of the step's target built from `source`, no higher than `source`.
pub fn admit_structural(step: &StructuralStep, source: &NestedProof, a: &AxiomSet) -> Result<NestedProof, AdmitError> {
    check_nested(source, a).map_err(AdmitError::Source)?;
    let target = structural_target(step, &source.conclusion)?;
    if !target.is_full() {
        return shape("target is not a full sequent");
    }
    let lp = nested_to_labelled(source)?;
    let labels = preorder_labels(&source.conclusion);
    let mut fresh = Fresh { used: lp.labels(), next: 0 };
    let out = match step {
        StructuralStep::Necessitation => {
            let r = fresh.label();
            add_context(&lp, &[RelAtom::new(&r, &labels[&Vec::new()])], &[])
        }
        StructuralStep::Weaken { at, delta } => {
            let (mut rel, mut ante) = (Vec::new(), Vec::new());
            graft(delta, &labels[at], &mut fresh, &mut rel, &mut ante);
            add_context(&lp, &rel, &ante)
        }
        StructuralStep::Contract { at, formula } => contract(&lp, &LFormula::new(&labels[at], formula.clone()), &mut fresh),
        StructuralStep::Merge { at, left, right } => {
            let mut l = at.clone();
            l.push(*left);
            let mut r = at.clone();
            r.push(*right);
            merge_labels(&lp, &labels[&r], &labels[&l])
        }
    };
    let np = labelled_to_nested(&out)?;
    if np.conclusion != target {
        return shape(format!("transformation reached {} instead of {target}", np.conclusion));
    }
    check_nested(&np, a).map_err(AdmitError::Result)?;
    if np.height() > source.height() {
        return Err(AdmitError::Height { from: source.height(), to: np.height() });
    }
    Ok(np)
}

fn graft(delta: &NestedSequent, at: &str, fresh: &mut Fresh, rel: &mut Vec<RelAtom>, ante: &mut Vec<LFormula>) {
    ante.extend(delta.inputs().iter().map(|f| LFormula::new(at, f.clone())));
    for c in delta.children() {
        let u = fresh.label();
        rel.push(RelAtom::new(at, &u));
        graft(c, &u, fresh, rel, ante);
    }
}

fn add_context(p: &LabelledProof, rel: &[RelAtom], ante: &[LFormula]) -> LabelledProof {
    let mut c = p.conclusion.clone();
    c.rel.extend_from_slice(rel);
    c.ante.extend_from_slice(ante);
    LabelledProof {
        conclusion: c,
        premises: p.premises.iter().map(|q| add_context(q, rel, ante)).collect(),
        ..p.clone()
    }
}

fn dedup_rel(s: &LabelledSequent) -> LabelledSequent {
    let mut seen = BTreeSet::new();
    let mut out = s.clone();
    out.rel.retain(|r| seen.insert(r.clone()));
    out
}

/// Identifies `from` with `into` throughout, dropping the relational atoms
/// that become duplicates.
fn merge_labels(p: &LabelledProof, from: &str, into: &str) -> LabelledProof {
    let renamed = p.rename_labels(&|l| if l == from { into.to_string() } else { l.to_string() });
    fn dedup_all(p: &LabelledProof) -> LabelledProof {
        LabelledProof {
            conclusion: dedup_rel(&p.conclusion),
            premises: p.premises.iter().map(dedup_all).collect(),
            ..p.clone()
        }
    }
    dedup_all(&renamed)
}

#[derive(Clone, Copy)]
enum Inversion {
    And,
    OrLeft,
    OrRight,
    Imp,
}

/// Replaces one occurrence of `f` by its components throughout a proof in
/// which `f` sits in every antecedent. For diamonds the new successor is `z`.
fn invert(p: &LabelledProof, f: &LFormula, kind: Option<Inversion>, z: &str) -> LabelledProof {
    let principal = p.params.principal.as_ref() == Some(f);
    match (p.rule, kind) {
        (LRule::AndL, Some(Inversion::And)) | (LRule::OrL, Some(Inversion::OrLeft)) if principal => return p.premises[0].clone(),
        (LRule::OrL, Some(Inversion::OrRight)) | (LRule::ImpL, Some(Inversion::Imp)) if principal => return p.premises[1].clone(),
        (LRule::DiaL, None) if principal => {
            let u = p.params.label.clone().expect("diaL names its successor");
            return p.premises[0].rename_labels(&|l| if l == u { z.to_string() } else { l.to_string() });
        }
        _ => {}
    }
    let mut c = p.conclusion.clone();
    c.remove_ante(f);
    let part = |g: &Formula| LFormula::new(&f.label, g.clone());
    match (&f.formula, kind) {
        (Formula::And(a, b), Some(Inversion::And)) => c.ante.extend([part(a), part(b)]),
        (Formula::Or(a, _), Some(Inversion::OrLeft)) => c.ante.push(part(a)),
        (Formula::Or(_, b), Some(Inversion::OrRight)) => c.ante.push(part(b)),
        (Formula::Imp(_, b), Some(Inversion::Imp)) => c.ante.push(part(b)),
        (Formula::Dia(a), None) => {
            c.rel.push(RelAtom::new(&f.label, z));
            c.ante.push(LFormula::new(z, (**a).clone()));
        }
        _ => unreachable!("inversion kind matches the formula"),
    }
    LabelledProof {
        conclusion: c,
        premises: p.premises.iter().map(|q| invert(q, f, kind, z)).collect(),
        ..p.clone()
    }
}

/// Proof of the conclusion of `p` with one of its two copies of `f` removed.
fn contract(p: &LabelledProof, f: &LFormula, fresh: &mut Fresh) -> LabelledProof {
    let mut c = p.conclusion.clone();
    c.remove_ante(f);
    let principal = p.params.principal.as_ref() == Some(f);
    let w = &f.label;
    let part = |g: &Formula| LFormula::new(w, g.clone());
    let premises = match (p.rule, &f.formula) {
        (LRule::AndL, Formula::And(a, b)) if principal => {
            let q = invert(&p.premises[0], f, Some(Inversion::And), "");
            let q = contract(&q, &part(a), fresh);
            vec![contract(&q, &part(b), fresh)]
        }
        (LRule::OrL, Formula::Or(a, b)) if principal => {
            let l = invert(&p.premises[0], f, Some(Inversion::OrLeft), "");
            let r = invert(&p.premises[1], f, Some(Inversion::OrRight), "");
            vec![contract(&l, &part(a), fresh), contract(&r, &part(b), fresh)]
        }
        (LRule::ImpL, Formula::Imp(_, b)) if principal => {
            let l = contract(&p.premises[0], f, fresh);
            let r = invert(&p.premises[1], f, Some(Inversion::Imp), "");
            vec![l, contract(&r, &part(b), fresh)]
        }
        (LRule::DiaL, Formula::Dia(a)) if principal => {
            let u = p.params.label.clone().expect("diaL names its successor");
            let z = fresh.label();
            let q = invert(&p.premises[0], f, None, &z);
            let q = merge_labels(&q, &z, &u);
            vec![contract(&q, &LFormula::new(&u, (**a).clone()), fresh)]
        }
        _ => p.premises.iter().map(|q| contract(q, f, fresh)).collect(),
    };
    LabelledProof { conclusion: c, premises, ..p.clone() }
}

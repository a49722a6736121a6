use thiserror::Error;

use super::proof::{NRule, NestedProof};
use super::rules::apply_backward;
use super::sequent::{prop_graph_nested, NestedSequent};
use crate::grammar::{derives, Grammar, Word};
use crate::syntax::AxiomSet;

/// A failed node: its position as premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("node {node:?} ({rule}): {reason}")]
pub struct NCheckError {
    pub node: Vec<usize>,
    pub rule: String,
    pub reason: String,
}

/// Side condition of `pDia`/`pBox`: the path runs in `PG(conclusion)` from the
/// principal node to the target and spells a string in `L(◇)`.
fn check_path(p: &NestedProof, g: &Grammar) -> Result<(), String> {
    let path = p.params.path.as_ref().ok_or("missing propagation path")?;
    let target = p.params.target.as_ref().ok_or("missing target")?;
    let c = &p.conclusion;
    let from = c.node_id(&p.params.at).ok_or("bad address")?;
    let to = c.node_id(target).ok_or("bad target")?;
    if path.start() != from || path.end() != to {
        return Err(format!("path runs {} to {}, expected {from} to {to}", path.start(), path.end()));
    }
    if !path.is_path_in(&prop_graph_nested(c)) {
        return Err(format!("{path} is not a path of the propagation graph"));
    }
    if !derives(g, &Word(vec![crate::grammar::Char::Dia]), &path.word()) {
        return Err(format!("string {} of the path is not derivable from d", path.word()));
    }
    Ok(())
}

fn check_node(p: &NestedProof, a: &AxiomSet, g: &Grammar) -> Result<(), String> {
    if p.rule == NRule::D && !a.has_d {
        return Err("d is not a rule of this calculus".into());
    }
    if p.premises.len() != p.rule.arity() {
        return Err(format!("expected {} premises, found {}", p.rule.arity(), p.premises.len()));
    }
    if matches!(p.rule, NRule::PDia | NRule::PBox) {
        check_path(p, g)?;
    }
    let premises = apply_backward(&p.conclusion, p.rule, &p.params)?;
    for (i, (want, got)) in premises.iter().zip(&p.premises).enumerate() {
        if want.sequent != got.conclusion {
            return Err(format!("premise {} is {}, expected {}", i + 1, got.conclusion, want.sequent));
        }
    }
    Ok(())
}

/// Checks every node of a nested proof against its rule; the root must be a
/// full sequent.
pub fn check_nested(p: &NestedProof, a: &AxiomSet) -> Result<(), NCheckError> {
    if let Err(e) = p.conclusion.check_full() {
        return Err(NCheckError { node: vec![], rule: p.rule.to_string(), reason: e.to_string() });
    }
    let g = Grammar::from_axioms(a);
    let mut stack: Vec<(Vec<usize>, &NestedProof)> = vec![(Vec::new(), p)];
    while let Some((pos, q)) = stack.pop() {
        if let Err(reason) = check_node(q, a, &g) {
            return Err(NCheckError { node: pos, rule: q.rule.to_string(), reason });
        }
        for (i, sub) in q.premises.iter().enumerate().rev() {
            let mut child = pos.clone();
            child.push(i);
            stack.push((child, sub));
        }
    }
    Ok(())
}

/// Whether a sequent is a conclusion of `bot_in` or `id` somewhere.
pub fn is_initial(s: &NestedSequent) -> bool {
    s.preorder().iter().any(|(_, n)| {
        n.inputs().contains(&crate::syntax::Formula::Bot)
            || n.output().is_some_and(|o| o.is_atom() && n.inputs().contains(o))
    })
}

//! Propagation rules over labelled sequents, the refined calculus, and the
//! elimination of the structural rules `S(n,k)`.
//!
//! Elimination works on one topmost `S(n,k)` at a time. The instance is pushed
//! towards the leaves: it is copied into every premise, passes through
//! eigenvariable rules unchanged, rewrites the witness of every propagation
//! step that used the deleted atom `u R v`, and vanishes at initial sequents.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::grammar::{derives, Char, Grammar, PropGraph, PropPath, Word};
use crate::labelled::{check_labelled, LCheckError, LFormula, LParams, LRule, LabelledProof, LabelledSequent, Mode, RelAtom};
use crate::syntax::{AxiomSet, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropKind {
    Dia,
    Box,
}

impl PropKind {
    pub fn of(rule: LRule) -> Option<PropKind> {
        match rule {
            LRule::PDia => Some(PropKind::Dia),
            LRule::PBox => Some(PropKind::Box),
            _ => None,
        }
    }
}

/// `PG(ℛ)`: one node per label, `(w,◇,u)` and `(u,◆,w)` per atom `w R u`.
pub fn prop_graph_labelled(rel: &[RelAtom]) -> PropGraph {
    let mut g = PropGraph::new();
    for r in rel {
        g.relate(&r.from, &r.to);
    }
    g
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

/// Elements of `big` left over after removing one copy of each element of `small`.
fn multiset_minus<T: PartialEq + Clone>(big: &[T], small: &[T]) -> Option<Vec<T>> {
    let mut rest = big.to_vec();
    for x in small {
        let i = rest.iter().position(|y| y == x)?;
        rest.remove(i);
    }
    Some(rest)
}

/// Checks a `pDia` / `pBox` step from `premise` to `conclusion` along `path`.
pub fn check_prop_step(
    kind: PropKind,
    conclusion: &LabelledSequent,
    premise: &LabelledSequent,
    path: &PropPath,
    g: &Grammar,
) -> Result<(), String> {
    if sorted(&conclusion.rel) != sorted(&premise.rel) {
        return Err("premise and conclusion have different relational atoms".into());
    }
    let (w, u) = (path.start(), path.end());
    match kind {
        PropKind::Dia => {
            let Formula::Dia(a) = &conclusion.succ.formula else { return Err("consequent is not a diamond".into()) };
            if conclusion.succ.label != w {
                return Err(format!("path starts at {w}, not at {}", conclusion.succ.label));
            }
            if premise.succ != LFormula::new(u, (**a).clone()) {
                return Err(format!("premise consequent should be {u}: {a}"));
            }
            if sorted(&conclusion.ante) != sorted(&premise.ante) {
                return Err("premise and conclusion have different antecedents".into());
            }
        }
        PropKind::Box => {
            if conclusion.succ != premise.succ {
                return Err("premise and conclusion have different consequents".into());
            }
            let extra = multiset_minus(&premise.ante, &conclusion.ante)
                .ok_or_else(|| "premise antecedent does not extend the conclusion's".to_string())?;
            let [added] = extra.as_slice() else { return Err("premise must add exactly one labelled formula".into()) };
            if added.label != u {
                return Err(format!("added formula sits at {}, path ends at {u}", added.label));
            }
            let boxed = LFormula::new(w, Formula::boxed(added.formula.clone()));
            if !conclusion.has_ante(&boxed) {
                return Err(format!("conclusion lacks {boxed}"));
            }
        }
    }
    let mut pg = prop_graph_labelled(&conclusion.rel);
    pg.add_node(w);
    pg.add_node(u);
    if !path.is_path_in(&pg) {
        return Err(format!("{path} is not a path of the propagation graph"));
    }
    if !derives(g, &Word(vec![Char::Dia]), &path.word()) {
        return Err(format!("string {} of {path} is not derivable from d", path.word()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error("input proof does not check: {0}")]
    Input(LCheckError),
    #[error("fragment is not a propagation step directly above S(n,k): {0}")]
    Shape(String),
}

/// Rewrites `diaR` and `boxL` as the propagation steps along their single edge.
pub fn retag(p: &LabelledProof) -> LabelledProof {
    let premises: Vec<LabelledProof> = p.premises.iter().map(retag).collect();
    match p.rule {
        LRule::DiaR => {
            let pf = p.params.principal.clone().unwrap_or_else(|| p.conclusion.succ.clone());
            let u = p.params.label.clone().unwrap_or_else(|| p.premises[0].conclusion.succ.label.clone());
            let path = PropPath::empty(&pf.label).step(Char::Dia, &u);
            LabelledProof::new(LRule::PDia, p.conclusion.clone(), LParams::principal(pf).with_path(path), premises)
        }
        LRule::BoxL => {
            let pf = p.params.principal.clone().expect("boxL carries its principal");
            let u = p.params.label.clone().expect("boxL carries its successor");
            let path = PropPath::empty(&pf.label).step(Char::Dia, &u);
            LabelledProof::new(LRule::PBox, p.conclusion.clone(), LParams::principal(pf).with_path(path), premises)
        }
        _ => LabelledProof { premises, ..p.clone() },
    }
}

struct Chains {
    u: Vec<String>,
    v: Vec<String>,
}

impl Chains {
    fn of(p: &LabelledProof) -> Result<Chains, ElimError> {
        match (&p.params.chain_u, &p.params.chain_v) {
            (Some(u), Some(v)) if !u.is_empty() && !v.is_empty() => Ok(Chains { u: u.clone(), v: v.clone() }),
            _ => Err(ElimError::Shape("S(n,k) without chains".into())),
        }
    }

    fn end_u(&self) -> &str {
        self.u.last().unwrap()
    }

    fn end_v(&self) -> &str {
        self.v.last().unwrap()
    }

    /// `u, ◆, …, ◆, w, ◇, …, ◇, v` along the two chains.
    fn detour(&self) -> PropPath {
        let mut nodes: Vec<String> = self.u.iter().rev().cloned().collect();
        nodes.extend(self.v[1..].iter().cloned());
        let mut chars = vec![Char::BDia; self.u.len() - 1];
        chars.extend(vec![Char::Dia; self.v.len() - 1]);
        PropPath::from_parts(nodes, chars).expect("chains give matching lengths")
    }

    fn labels(&self) -> BTreeSet<&str> {
        self.u.iter().chain(self.v.iter()).map(String::as_str).collect()
    }
}

/// Replaces every `u,◇,v` step of `path` by the detour through the chains
/// and every `v,◆,u` step by its converse.
pub fn detour_path(path: &PropPath, chain_u: &[String], chain_v: &[String]) -> PropPath {
    let ch = Chains { u: chain_u.to_vec(), v: chain_v.to_vec() };
    replace_edge(path, &ch)
}

fn replace_edge(path: &PropPath, ch: &Chains) -> PropPath {
    let (u, v) = (ch.end_u(), ch.end_v());
    let forward = ch.detour();
    let backward = forward.converse();
    let mut out = PropPath::empty(path.start());
    for (x, c, y) in path.steps() {
        out = if x == u && c == Char::Dia && y == v {
            out.join(&forward)
        } else if x == v && c == Char::BDia && y == u {
            out.join(&backward)
        } else {
            out.step(c, y)
        };
    }
    out
}

fn without_atom(s: &LabelledSequent, ch: &Chains) -> LabelledSequent {
    let mut s = s.clone();
    s.remove_rel(ch.end_u(), ch.end_v());
    s
}

/// Moves one `S(n,k)` with chains `ch` onto the proof `q` of its premise.
fn sink(ch: &Chains, q: &LabelledProof) -> Result<LabelledProof, ElimError> {
    let conclusion = without_atom(&q.conclusion, ch);
    let mut params = q.params.clone();
    match q.rule {
        LRule::S { .. } => return Err(ElimError::Shape("S(n,k) above the one being eliminated".into())),
        LRule::PDia | LRule::PBox => {
            if !conclusion.has_rel(ch.end_u(), ch.end_v()) {
                let path = params.path.as_ref().ok_or_else(|| ElimError::Shape("propagation step without path".into()))?;
                params.path = Some(replace_edge(path, ch));
            }
        }
        LRule::DiaL | LRule::BoxR | LRule::D => {
            if let Some(u) = &params.label {
                assert!(!ch.labels().contains(u.as_str()), "eigenvariable {u} clashes with the chains of S(n,k)");
            }
        }
        _ => {}
    }
    let premises = q.premises.iter().map(|p| sink(ch, p)).collect::<Result<Vec<_>, _>>()?;
    Ok(LabelledProof::new(q.rule, conclusion, params, premises))
}

/// One permutation step: a propagation step directly above `S(n,k)` becomes
/// `S(n,k)` directly above the propagation step, with the witness rerouted
/// around the atom `S(n,k)` deletes.
pub fn permute_s_over_prop(fragment: &LabelledProof) -> Result<LabelledProof, ElimError> {
    if !fragment.rule.is_structural() {
        return Err(ElimError::Shape(format!("root is {}, not S(n,k)", fragment.rule)));
    }
    let ch = Chains::of(fragment)?;
    let [prop] = fragment.premises.as_slice() else { return Err(ElimError::Shape("S(n,k) needs one premise".into())) };
    if PropKind::of(prop.rule).is_none() {
        return Err(ElimError::Shape(format!("premise rule is {}, not a propagation rule", prop.rule)));
    }
    let [above] = prop.premises.as_slice() else { return Err(ElimError::Shape("propagation step needs one premise".into())) };
    let mut params = prop.params.clone();
    if !fragment.conclusion.has_rel(ch.end_u(), ch.end_v()) {
        let path = params.path.as_ref().ok_or_else(|| ElimError::Shape("propagation step without path".into()))?;
        params.path = Some(replace_edge(path, &ch));
    }
    let s = LabelledProof::new(fragment.rule, without_atom(&above.conclusion, &ch), fragment.params.clone(), vec![above.clone()]);
    Ok(LabelledProof::new(prop.rule, fragment.conclusion.clone(), params, vec![s]))
}

fn eliminate(p: &LabelledProof) -> Result<LabelledProof, ElimError> {
    let premises = p.premises.iter().map(eliminate).collect::<Result<Vec<_>, _>>()?;
    if p.rule.is_structural() {
        // everything above is S-free now, so this instance is topmost
        let ch = Chains::of(p)?;
        let above = premises.into_iter().next().ok_or_else(|| ElimError::Shape("S(n,k) needs one premise".into()))?;
        sink(&ch, &above)
    } else {
        Ok(LabelledProof { premises, ..p.clone() })
    }
}

/// Turns a proof in the base calculus (propagation steps are tolerated too)
/// into a proof of the same sequent in the refined calculus.
pub fn eliminate_structural(p: &LabelledProof, a: &AxiomSet) -> Result<LabelledProof, ElimError> {
    check_labelled(p, a, Mode::Either).map_err(ElimError::Input)?;
    eliminate(&retag(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> LabelledSequent {
        t.parse().unwrap()
    }

    fn path(t: &str) -> PropPath {
        t.parse().unwrap()
    }

    fn g(pairs: &[(u32, u32)]) -> Grammar {
        Grammar::from_axioms(&AxiomSet::from_pairs(pairs.iter().copied()))
    }

    #[test]
    fn graphs_of_relations() {
        assert_eq!(prop_graph_labelled(&[]), PropGraph::new());
        let pg = prop_graph_labelled(&s("w R u |- w: p").rel);
        assert_eq!(pg.nodes().len(), 2);
        assert!(pg.has_edge("w", Char::Dia, "u") && pg.has_edge("u", Char::BDia, "w"));
        let pg = prop_graph_labelled(&s("v R u, u R w |- w: p").rel);
        assert_eq!(pg.edges().len(), 4);
    }

    #[test]
    fn box_propagation_along_two_back_steps() {
        let concl = s("v R u, u R w ; w: []p |- v: p -> q");
        let prem = s("v R u, u R w ; w: []p, u: p |- v: p -> q");
        let pi = path("w, b, u, b, v, d, u");
        assert_eq!(check_prop_step(PropKind::Box, &concl, &prem, &pi, &g(&[(2, 1)])), Ok(()));
        assert!(check_prop_step(PropKind::Box, &concl, &prem, &pi, &g(&[])).is_err());
    }

    #[test]
    fn diamond_right_is_a_propagation_step() {
        let concl = s("w R u |- w: <>q");
        let prem = s("w R u |- u: q");
        for pairs in [&[][..], &[(1, 1)], &[(0, 0), (2, 1)]] {
            assert_eq!(check_prop_step(PropKind::Dia, &concl, &prem, &path("w, d, u"), &g(pairs)), Ok(()));
        }
        assert!(check_prop_step(PropKind::Dia, &concl, &prem, &path("u, d, w"), &g(&[])).is_err());
    }

    #[test]
    fn empty_path_needs_reflexivity() {
        let concl = s("w: p |- w: <>p");
        let prem = s("w: p |- w: p");
        assert!(check_prop_step(PropKind::Dia, &concl, &prem, &path("w"), &g(&[])).is_err());
        assert_eq!(check_prop_step(PropKind::Dia, &concl, &prem, &path("w"), &g(&[(0, 0)])), Ok(()));
    }

    #[test]
    fn detours() {
        let cu = vec!["w".to_string(), "u".to_string()];
        let cv = vec!["w".to_string(), "v".to_string()];
        assert_eq!(detour_path(&path("u, d, v"), &cu, &cv), path("u, b, w, d, v"));
        assert_eq!(detour_path(&path("v, b, u"), &cu, &cv), path("v, b, w, d, u"));
        assert_eq!(detour_path(&path("x, d, u, d, v, b, u"), &cu, &cv), path("x, d, u, b, w, d, v, b, w, d, u"));
        let w = vec!["w".to_string()];
        assert_eq!(detour_path(&path("x, b, w, d, w, d, y"), &w, &w), path("x, b, w, d, y"));
        let cv2 = vec!["w".to_string(), "a".to_string(), "v".to_string()];
        assert_eq!(detour_path(&path("w, d, v"), &w, &cv2), path("w, d, a, d, v"));
        assert_eq!(detour_path(&path("u, d, w"), &cu, &w), path("u, b, w"));
    }
}

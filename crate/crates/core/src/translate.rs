//! Translations between full nested sequents and labelled tree sequents, and
//! between proofs of the refined labelled calculus and nested proofs.
//!
//! Nested to labelled numbers the nodes `w0, w1, …` in canonical preorder.
//! Labelled to nested follows the relational atoms down from the root and
//! sorts children canonically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::PropPath;
use crate::labelled::{check_labelled, LCheckError, LFormula, LParams, LRule, LabelledProof, LabelledSequent, Mode, RelAtom};
use crate::nested::{apply_backward, check_nested, principal, Address, NCheckError, NParams, NRule, NestedError, NestedProof, NestedSequent, RawNode};
use crate::refine::retag;
use crate::syntax::{AxiomSet, Formula};

/// Witness that the relational atoms of a sequent form a tree containing
/// every label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCert {
    pub root: String,
    pub parent: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Nested(#[from] NestedError),
    #[error("not a labelled tree sequent: {0}")]
    NotTree(String),
    #[error("proof node {node:?} breaks the fixed root: {reason}")]
    FixedRoot { node: Vec<usize>, reason: String },
    #[error("proof node {node:?} ({rule}) has no counterpart: {reason}")]
    Rule { node: Vec<usize>, rule: String, reason: String },
    #[error("translated labelled proof does not check: {0}")]
    LabelledCheck(LCheckError),
    #[error("translated nested proof does not check: {0}")]
    NestedCheck(NCheckError),
}

/// Tree certificate, or `None` when some label has two parents, the atoms
/// contain a cycle or do not connect, or a formula label is off the tree.
pub fn is_labelled_tree(seq: &LabelledSequent) -> Option<TreeCert> {
    let formula_labels: BTreeSet<&str> =
        seq.ante.iter().chain(std::iter::once(&seq.succ)).map(|f| f.label.as_str()).collect();
    if seq.rel.is_empty() {
        return match formula_labels.len() {
            1 => Some(TreeCert { root: seq.succ.label.clone(), parent: BTreeMap::new() }),
            _ => None,
        };
    }
    let mut parent = BTreeMap::new();
    let mut labels = BTreeSet::new();
    for RelAtom { from, to } in &seq.rel {
        if parent.insert(to.clone(), from.clone()).is_some() {
            return None;
        }
        labels.insert(from.as_str());
        labels.insert(to.as_str());
    }
    let roots: Vec<&str> = labels.iter().copied().filter(|l| !parent.contains_key(*l)).collect();
    let [root] = roots[..] else { return None };
    // every label must reach the root without revisiting
    for l in &labels {
        let mut cur = *l;
        let mut steps = 0;
        while let Some(p) = parent.get(cur) {
            cur = p;
            steps += 1;
            if steps > labels.len() {
                return None;
            }
        }
        if cur != root {
            return None;
        }
    }
    if !formula_labels.iter().all(|l| labels.contains(l)) {
        return None;
    }
    Some(TreeCert { root: root.to_string(), parent })
}

/// Labelled sequent of a full nested sequent with the given node naming.
pub fn to_labelled_with(s: &NestedSequent, label: impl Fn(&Address) -> String) -> Result<LabelledSequent, TranslateError> {
    s.check_full()?;
    let mut rel = Vec::new();
    let mut ante = Vec::new();
    let mut succ = None;
    for (addr, node) in s.preorder() {
        let w = label(&addr);
        for i in 0..node.children().len() {
            let mut c = addr.clone();
            c.push(i);
            rel.push(RelAtom::new(&w, &label(&c)));
        }
        ante.extend(node.inputs().iter().map(|f| LFormula::new(&w, f.clone())));
        if let Some(o) = node.output() {
            succ = Some(LFormula::new(&w, o.clone()));
        }
    }
    Ok(LabelledSequent::new(rel, ante, succ.expect("full sequents have an output")))
}

pub(crate) fn preorder_labels(s: &NestedSequent) -> BTreeMap<Address, String> {
    s.preorder().into_iter().enumerate().map(|(i, (a, _))| (a, format!("w{i}"))).collect()
}

/// `𝔏`: labels `w0, w1, …` in canonical preorder.
pub fn to_labelled(s: &NestedSequent) -> Result<LabelledSequent, TranslateError> {
    let labels = preorder_labels(s);
    to_labelled_with(s, |a| labels[a].clone())
}

/// `𝔑` together with the address of every label.
pub fn to_nested_map(seq: &LabelledSequent) -> Result<(NestedSequent, BTreeMap<String, Address>), TranslateError> {
    let cert = is_labelled_tree(seq).ok_or_else(|| TranslateError::NotTree(seq.to_string()))?;
    fn build(seq: &LabelledSequent, w: &str) -> RawNode<String> {
        let mut node = RawNode::leaf(w.to_string());
        node.inputs = seq.ante.iter().filter(|f| f.label == w).map(|f| f.formula.clone()).collect();
        if seq.succ.label == w {
            node.output = Some(seq.succ.formula.clone());
        }
        node.children = seq.rel.iter().filter(|r| r.from == w).map(|r| build(seq, &r.to)).collect();
        node
    }
    let (s, map) = build(seq, &cert.root).finish();
    Ok((s, map.into_iter().map(|(a, l)| (l, a)).collect()))
}

/// `𝔑`.
pub fn to_nested(seq: &LabelledSequent) -> Result<NestedSequent, TranslateError> {
    Ok(to_nested_map(seq)?.0)
}

/// Renames a labelled tree sequent to `w0, w1, …` breadth-first from the
/// root, visiting children in canonical order.
pub fn canonical_relabel(seq: &LabelledSequent) -> Result<LabelledSequent, TranslateError> {
    let (_, map) = to_nested_map(seq)?;
    let mut by_addr: Vec<(&Address, &String)> = map.iter().map(|(l, a)| (a, l)).collect();
    by_addr.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(y.0)));
    let rename: BTreeMap<&str, String> =
        by_addr.iter().enumerate().map(|(i, (_, l))| (l.as_str(), format!("w{i}"))).collect();
    Ok(seq.rename(|l| rename[l].clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    ToNested,
    ToLabelled,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ToNested => "nested",
            Direction::ToLabelled => "labelled",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyProof {
    Labelled(LabelledProof),
    Nested(NestedProof),
}

/// Translates in the given direction and checks the result. Labelled input
/// may use `diaR` and `boxL`, which are read as one-edge propagation steps.
pub fn translate_proof(p: &AnyProof, dir: Direction, a: &AxiomSet) -> Result<AnyProof, TranslateError> {
    match (p, dir) {
        (AnyProof::Labelled(l), Direction::ToNested) => {
            let n = labelled_to_nested(l)?;
            check_nested(&n, a).map_err(TranslateError::NestedCheck)?;
            Ok(AnyProof::Nested(n))
        }
        (AnyProof::Nested(n), Direction::ToLabelled) => {
            let l = nested_to_labelled(n)?;
            check_labelled(&l, a, Mode::Refined).map_err(TranslateError::LabelledCheck)?;
            Ok(AnyProof::Labelled(l))
        }
        (AnyProof::Labelled(l), Direction::ToLabelled) => Ok(AnyProof::Labelled(l.clone())),
        (AnyProof::Nested(n), Direction::ToNested) => Ok(AnyProof::Nested(n.clone())),
    }
}

/// Nested image of a labelled tree proof. Does not check the result.
pub fn labelled_to_nested(p: &LabelledProof) -> Result<NestedProof, TranslateError> {
    let p = retag(p);
    let cert = is_labelled_tree(&p.conclusion).ok_or_else(|| TranslateError::NotTree(p.conclusion.to_string()))?;
    let mut pos = Vec::new();
    l2n(&p, &cert.root, &mut pos)
}

fn l2n(p: &LabelledProof, root: &str, pos: &mut Vec<usize>) -> Result<NestedProof, TranslateError> {
    let here = pos.clone();
    let fail = |reason: String| TranslateError::Rule { node: here.clone(), rule: p.rule.to_string(), reason };
    let c = &p.conclusion;
    match is_labelled_tree(c) {
        Some(cert) if cert.root == root => {}
        Some(cert) => {
            return Err(TranslateError::FixedRoot { node: pos.clone(), reason: format!("root {} instead of {root}", cert.root) })
        }
        None => return Err(TranslateError::FixedRoot { node: pos.clone(), reason: format!("{c} is not a tree") }),
    }
    let (ns, addr) = to_nested_map(c)?;
    let ids: BTreeMap<Address, String> = preorder_labels(&ns);
    let addr_of = |l: &str| addr.get(l).cloned().ok_or_else(|| fail(format!("label {l} is not in the sequent")));
    let principal = || p.params.principal.clone().ok_or_else(|| fail("missing principal".into()));
    let on_succ = || Ok::<_, TranslateError>(NParams::at(&addr_of(&c.succ.label)?));
    let prop = |pf: &LFormula, with_formula: bool| -> Result<NParams, TranslateError> {
        let path = p.params.path.as_ref().ok_or_else(|| fail("missing path".into()))?;
        let mut bad = None;
        let mapped: PropPath = path.map_nodes(|l| match addr.get(l) {
            Some(a) => ids[a].clone(),
            None => {
                bad = Some(l.to_string());
                l.to_string()
            }
        });
        if let Some(l) = bad {
            return Err(fail(format!("path label {l} is not in the sequent")));
        }
        let mut params = NParams::at(&addr_of(&pf.label)?).with_target(&addr_of(path.end())?, mapped);
        if with_formula {
            params.formula = Some(pf.formula.clone());
        }
        Ok(params)
    };
    let (rule, params) = match p.rule {
        LRule::Id => (NRule::Id, on_succ()?.with_formula(c.succ.formula.clone())),
        LRule::BotL => {
            let f = c.ante.iter().find(|f| f.formula == Formula::Bot).ok_or_else(|| fail("no false".into()))?;
            (NRule::BotIn, NParams::at(&addr_of(&f.label)?).with_formula(Formula::Bot))
        }
        LRule::AndL | LRule::OrL | LRule::ImpL | LRule::DiaL => {
            let pf = principal()?;
            let rule = match p.rule {
                LRule::AndL => NRule::AndIn,
                LRule::OrL => NRule::OrIn,
                LRule::ImpL => NRule::ImpIn,
                _ => NRule::DiaIn,
            };
            (rule, NParams::at(&addr_of(&pf.label)?).with_formula(pf.formula))
        }
        LRule::AndR => (NRule::AndOut, on_succ()?),
        LRule::OrR => {
            let b = p.params.branch.ok_or_else(|| fail("missing branch".into()))?;
            (NRule::OrOut, on_succ()?.with_branch(b))
        }
        LRule::ImpR => (NRule::ImpOut, on_succ()?),
        LRule::BoxR => (NRule::BoxOut, on_succ()?),
        LRule::D => {
            let w = p.params.source.as_deref().ok_or_else(|| fail("missing source".into()))?;
            (NRule::D, NParams::at(&addr_of(w)?))
        }
        LRule::PDia => {
            let pf = p.params.principal.clone().unwrap_or_else(|| c.succ.clone());
            (NRule::PDia, prop(&pf, false)?)
        }
        LRule::PBox => (NRule::PBox, prop(&principal()?, true)?),
        LRule::S { .. } => return Err(fail("structural rules have no nested counterpart; eliminate them first".into())),
        LRule::DiaR | LRule::BoxL => unreachable!("retagged as propagation steps"),
    };
    let mut premises = Vec::with_capacity(p.premises.len());
    for (i, q) in p.premises.iter().enumerate() {
        pos.push(i);
        premises.push(l2n(q, root, pos)?);
        pos.pop();
    }
    Ok(NestedProof::new(rule, ns, params, premises))
}

/// Labelled image of a nested proof; the conclusion is labelled by `𝔏` and
/// every new bracket gets the next unused `w<i>`. Does not check the result.
pub fn nested_to_labelled(p: &NestedProof) -> Result<LabelledProof, TranslateError> {
    let labels = preorder_labels(&p.conclusion);
    let mut counter = labels.len();
    n2l(p, &labels, &mut counter, &mut Vec::new())
}

fn n2l(p: &NestedProof, labels: &BTreeMap<Address, String>, counter: &mut usize, pos: &mut Vec<usize>) -> Result<LabelledProof, TranslateError> {
    let here = pos.clone();
    let fail = |reason: String| TranslateError::Rule { node: here.clone(), rule: p.rule.to_string(), reason };
    let c = &p.conclusion;
    let conclusion = to_labelled_with(c, |a| labels[a].clone())?;
    let premises = apply_backward(c, p.rule, &p.params).map_err(fail)?;
    if premises.len() != p.premises.len() {
        return Err(fail(format!("expected {} premises, found {}", premises.len(), p.premises.len())));
    }
    let makes_bracket = premises.iter().any(|q| q.origin.values().any(Option::is_none));
    let fresh = format!("w{counter}");
    if makes_bracket {
        *counter += 1;
    }
    let w = labels[&p.params.at].clone();
    let pf = || principal(c, p.rule, &p.params).map(|f| LFormula::new(&w, f)).map_err(fail);
    let path = || -> Result<PropPath, TranslateError> {
        let path = p.params.path.as_ref().ok_or_else(|| fail("missing path".into()))?;
        let mut bad = None;
        let mapped = path.map_nodes(|id| match c.address_of_id(id) {
            Some(a) => labels[&a].clone(),
            None => {
                bad = Some(id.to_string());
                id.to_string()
            }
        });
        match bad {
            Some(id) => Err(fail(format!("path node {id} is not in the sequent"))),
            None => Ok(mapped),
        }
    };
    let (rule, params) = match p.rule {
        NRule::BotIn => (LRule::BotL, LParams::default()),
        NRule::Id => (LRule::Id, LParams::default()),
        NRule::AndIn => (LRule::AndL, LParams::principal(pf()?)),
        NRule::AndOut => (LRule::AndR, LParams::default()),
        NRule::OrIn => (LRule::OrL, LParams::principal(pf()?)),
        NRule::OrOut => (LRule::OrR, LParams { branch: p.params.branch, ..LParams::principal(pf()?) }),
        NRule::ImpOut => (LRule::ImpR, LParams::principal(pf()?)),
        NRule::ImpIn => (LRule::ImpL, LParams::principal(pf()?)),
        NRule::BoxOut => (LRule::BoxR, LParams::principal(pf()?).with_label(&fresh)),
        NRule::DiaIn => (LRule::DiaL, LParams::principal(pf()?).with_label(&fresh)),
        NRule::D => (LRule::D, LParams { source: Some(w.clone()), ..LParams::default() }.with_label(&fresh)),
        NRule::PDia => (LRule::PDia, LParams::principal(pf()?).with_path(path()?)),
        NRule::PBox => (LRule::PBox, LParams::principal(pf()?).with_path(path()?)),
    };
    let mut subs = Vec::with_capacity(premises.len());
    for (i, (want, got)) in premises.iter().zip(&p.premises).enumerate() {
        if want.sequent != got.conclusion {
            return Err(fail(format!("premise {} is {}, expected {}", i + 1, got.conclusion, want.sequent)));
        }
        let sub_labels: BTreeMap<Address, String> = want
            .origin
            .iter()
            .map(|(a, o)| (a.clone(), o.as_ref().map_or_else(|| fresh.clone(), |o| labels[o].clone())))
            .collect();
        pos.push(i);
        subs.push(n2l(got, &sub_labels, counter, pos)?);
        pos.pop();
    }
    Ok(LabelledProof::new(rule, conclusion, params, subs))
}

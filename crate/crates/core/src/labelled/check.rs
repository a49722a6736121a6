use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::proof::{LParams, LRule, LabelledProof};
use super::sequent::{LFormula, LabelledSequent};
use crate::grammar::Grammar;
use crate::refine::{check_prop_step, PropKind};
use crate::syntax::{AxiomSet, Formula};

/// Which rule set a labelled proof is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The base calculus: logical rules, `diaR`, `boxL`, `d` and `S(n,k)`.
    Base,
    /// The refined calculus: `pDia` and `pBox` replace `diaR`, `boxL` and `S(n,k)`.
    Refined,
    /// The union of both.
    Either,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" | "labelled" => Ok(Mode::Base),
            "refined" => Ok(Mode::Refined),
            "either" => Ok(Mode::Either),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Base => "base",
            Mode::Refined => "refined",
            Mode::Either => "either",
        })
    }
}

/// A rule instance that does not match its scheme.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{rule}: {reason}")]
pub struct SchemeError {
    pub rule: String,
    pub reason: String,
}

fn bad<T>(rule: LRule, reason: impl Into<String>) -> Result<T, SchemeError> {
    Err(SchemeError { rule: rule.to_string(), reason: reason.into() })
}

/// First failing node of a proof; `node` lists premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("node {node:?} ({rule}): {reason}")]
pub struct LCheckError {
    pub node: Vec<usize>,
    pub rule: String,
    pub reason: String,
}

fn need<'a, T>(rule: LRule, v: &'a Option<T>, what: &str) -> Result<&'a T, SchemeError> {
    v.as_ref().ok_or_else(|| SchemeError { rule: rule.to_string(), reason: format!("missing parameter {what}") })
}

fn take_ante(rule: LRule, s: &mut LabelledSequent, f: &LFormula) -> Result<(), SchemeError> {
    if s.remove_ante(f) {
        Ok(())
    } else {
        bad(rule, format!("premise lacks {f}"))
    }
}

fn take_rel(rule: LRule, s: &mut LabelledSequent, from: &str, to: &str) -> Result<(), SchemeError> {
    if s.remove_rel(from, to) {
        Ok(())
    } else {
        bad(rule, format!("premise lacks {from} R {to}"))
    }
}

fn fresh(rule: LRule, concl: &LabelledSequent, u: &str) -> Result<(), SchemeError> {
    if concl.has_label(u) {
        bad(rule, format!("eigenvariable {u} occurs in the conclusion"))
    } else {
        Ok(())
    }
}

fn same_context(rule: LRule, a: &LabelledSequent, b: &LabelledSequent) -> Result<(), SchemeError> {
    let mut x = a.clone();
    x.succ = b.succ.clone();
    if x == *b {
        Ok(())
    } else {
        bad(rule, "premises have different contexts")
    }
}

fn expect_succ(rule: LRule, s: &LabelledSequent, f: &LFormula) -> Result<(), SchemeError> {
    if s.succ == *f {
        Ok(())
    } else {
        bad(rule, format!("premise consequent is {} but the scheme needs {f}", s.succ))
    }
}

/// The conclusion of `rule` applied to `premises`. Grammar side conditions of
/// `pDia`/`pBox` are not checked here, only the endpoints of the path.
pub fn apply_rule_forward(rule: LRule, params: &LParams, premises: &[LabelledSequent]) -> Result<LabelledSequent, SchemeError> {
    if premises.len() != rule.arity() {
        return bad(rule, format!("expected {} premises, got {}", rule.arity(), premises.len()));
    }
    let principal = || need(rule, &params.principal, "principal");
    let label = || need(rule, &params.label, "label");
    match rule {
        LRule::Id | LRule::BotL => bad(rule, "initial rules have no premises to build from"),
        LRule::AndL => {
            let pf = principal()?;
            let Formula::And(a, b) = &pf.formula else { return bad(rule, "principal is not a conjunction") };
            let mut c = premises[0].clone();
            take_ante(rule, &mut c, &LFormula { label: pf.label.clone(), formula: (**a).clone() })?;
            take_ante(rule, &mut c, &LFormula { label: pf.label.clone(), formula: (**b).clone() })?;
            c.ante.push(pf.clone());
            Ok(c)
        }
        LRule::OrL => {
            let pf = principal()?;
            let Formula::Or(a, b) = &pf.formula else { return bad(rule, "principal is not a disjunction") };
            let mut l = premises[0].clone();
            let mut r = premises[1].clone();
            take_ante(rule, &mut l, &LFormula { label: pf.label.clone(), formula: (**a).clone() })?;
            take_ante(rule, &mut r, &LFormula { label: pf.label.clone(), formula: (**b).clone() })?;
            if l != r {
                return bad(rule, "premises have different contexts");
            }
            l.ante.push(pf.clone());
            Ok(l)
        }
        LRule::OrR => {
            let pf = principal()?;
            let Formula::Or(a, b) = &pf.formula else { return bad(rule, "principal is not a disjunction") };
            let part = match params.branch {
                Some(1) => a,
                Some(2) => b,
                _ => return bad(rule, "branch must be 1 or 2"),
            };
            expect_succ(rule, &premises[0], &LFormula { label: pf.label.clone(), formula: (**part).clone() })?;
            let mut c = premises[0].clone();
            c.succ = pf.clone();
            Ok(c)
        }
        LRule::AndR => {
            let (l, r) = (&premises[0], &premises[1]);
            if l.succ.label != r.succ.label {
                return bad(rule, "premise consequents carry different labels");
            }
            same_context(rule, l, r)?;
            let mut c = l.clone();
            c.succ = LFormula { label: l.succ.label.clone(), formula: Formula::and(l.succ.formula.clone(), r.succ.formula.clone()) };
            Ok(c)
        }
        LRule::ImpL => {
            let pf = principal()?;
            let Formula::Imp(a, b) = &pf.formula else { return bad(rule, "principal is not an implication") };
            let (l, r) = (&premises[0], &premises[1]);
            expect_succ(rule, l, &LFormula { label: pf.label.clone(), formula: (**a).clone() })?;
            let mut l2 = l.clone();
            take_ante(rule, &mut l2, pf)?;
            let mut r2 = r.clone();
            take_ante(rule, &mut r2, &LFormula { label: pf.label.clone(), formula: (**b).clone() })?;
            same_context(rule, &l2, &r2)?;
            let mut c = l.clone();
            c.succ = r.succ.clone();
            Ok(c)
        }
        LRule::ImpR => {
            let pf = principal()?;
            let Formula::Imp(a, b) = &pf.formula else { return bad(rule, "principal is not an implication") };
            expect_succ(rule, &premises[0], &LFormula { label: pf.label.clone(), formula: (**b).clone() })?;
            let mut c = premises[0].clone();
            take_ante(rule, &mut c, &LFormula { label: pf.label.clone(), formula: (**a).clone() })?;
            c.succ = pf.clone();
            Ok(c)
        }
        LRule::DiaL => {
            let pf = principal()?;
            let u = label()?;
            let Formula::Dia(a) = &pf.formula else { return bad(rule, "principal is not a diamond") };
            let mut c = premises[0].clone();
            take_rel(rule, &mut c, &pf.label, u)?;
            take_ante(rule, &mut c, &LFormula { label: u.clone(), formula: (**a).clone() })?;
            c.ante.push(pf.clone());
            fresh(rule, &c, u)?;
            Ok(c)
        }
        LRule::DiaR => {
            let pf = principal()?;
            let Formula::Dia(a) = &pf.formula else { return bad(rule, "principal is not a diamond") };
            let u = params.label.clone().unwrap_or_else(|| premises[0].succ.label.clone());
            expect_succ(rule, &premises[0], &LFormula { label: u.clone(), formula: (**a).clone() })?;
            if !premises[0].has_rel(&pf.label, &u) {
                return bad(rule, format!("missing {} R {u}", pf.label));
            }
            let mut c = premises[0].clone();
            c.succ = pf.clone();
            Ok(c)
        }
        LRule::BoxR => {
            let pf = principal()?;
            let u = label()?;
            let Formula::Box(a) = &pf.formula else { return bad(rule, "principal is not a box") };
            expect_succ(rule, &premises[0], &LFormula { label: u.clone(), formula: (**a).clone() })?;
            let mut c = premises[0].clone();
            take_rel(rule, &mut c, &pf.label, u)?;
            c.succ = pf.clone();
            fresh(rule, &c, u)?;
            Ok(c)
        }
        LRule::BoxL => {
            let pf = principal()?;
            let u = label()?;
            let Formula::Box(a) = &pf.formula else { return bad(rule, "principal is not a box") };
            let mut c = premises[0].clone();
            if !c.has_ante(pf) {
                return bad(rule, format!("premise lacks {pf}"));
            }
            if !c.has_rel(&pf.label, u) {
                return bad(rule, format!("missing {} R {u}", pf.label));
            }
            take_ante(rule, &mut c, &LFormula { label: u.clone(), formula: (**a).clone() })?;
            Ok(c)
        }
        LRule::D => {
            let w = need(rule, &params.source, "source")?;
            let u = label()?;
            let mut c = premises[0].clone();
            take_rel(rule, &mut c, w, u)?;
            fresh(rule, &c, u)?;
            Ok(c)
        }
        LRule::S { n, k } => {
            let cu = need(rule, &params.chain_u, "chain_u")?;
            let cv = need(rule, &params.chain_v, "chain_v")?;
            if cu.len() != n as usize + 1 || cv.len() != k as usize + 1 {
                return bad(rule, format!("chains must have {} and {} labels", n + 1, k + 1));
            }
            if cu[0] != cv[0] {
                return bad(rule, "chains must start at the same label");
            }
            let (u, v) = (cu.last().unwrap(), cv.last().unwrap());
            let mut c = premises[0].clone();
            take_rel(rule, &mut c, u, v)?;
            for chain in [cu, cv] {
                for pair in chain.windows(2) {
                    if !c.has_rel(&pair[0], &pair[1]) {
                        return bad(rule, format!("conclusion lacks chain atom {} R {}", pair[0], pair[1]));
                    }
                }
            }
            Ok(c)
        }
        LRule::PDia => {
            let pf = principal()?;
            let path = need(rule, &params.path, "path")?;
            let Formula::Dia(a) = &pf.formula else { return bad(rule, "principal is not a diamond") };
            if path.start() != pf.label {
                return bad(rule, format!("path starts at {} instead of {}", path.start(), pf.label));
            }
            expect_succ(rule, &premises[0], &LFormula { label: path.end().to_string(), formula: (**a).clone() })?;
            let mut c = premises[0].clone();
            c.succ = pf.clone();
            Ok(c)
        }
        LRule::PBox => {
            let pf = principal()?;
            let path = need(rule, &params.path, "path")?;
            let Formula::Box(a) = &pf.formula else { return bad(rule, "principal is not a box") };
            if path.start() != pf.label {
                return bad(rule, format!("path starts at {} instead of {}", path.start(), pf.label));
            }
            let mut c = premises[0].clone();
            if !c.has_ante(pf) {
                return bad(rule, format!("premise lacks {pf}"));
            }
            take_ante(rule, &mut c, &LFormula { label: path.end().to_string(), formula: (**a).clone() })?;
            Ok(c)
        }
    }
}

fn rule_allowed(rule: LRule, a: &AxiomSet, mode: Mode) -> Result<(), String> {
    match rule {
        LRule::D if !a.has_d => Err("rule d needs axiom D".into()),
        LRule::S { n, k } if !a.contains_hsl(n, k) => Err(format!("rule S{n},{k} needs axiom ({n},{k})")),
        LRule::S { .. } | LRule::DiaR | LRule::BoxL if mode == Mode::Refined => {
            Err(format!("{rule} is not a rule of the refined calculus"))
        }
        LRule::PDia | LRule::PBox if mode == Mode::Base => Err(format!("{rule} is not a rule of the base calculus")),
        _ => Ok(()),
    }
}

/// Fills parameters that the conclusion determines (principal of right rules).
fn complete_params(rule: LRule, params: &LParams, concl: &LabelledSequent) -> LParams {
    let mut p = params.clone();
    if p.principal.is_none() && matches!(rule, LRule::OrR | LRule::ImpR | LRule::DiaR | LRule::BoxR | LRule::PDia) {
        p.principal = Some(concl.succ.clone());
    }
    p
}

fn check_node(p: &LabelledProof, a: &AxiomSet, g: &Grammar, mode: Mode) -> Result<(), String> {
    rule_allowed(p.rule, a, mode)?;
    if p.premises.len() != p.rule.arity() {
        return Err(format!("expected {} premises, got {}", p.rule.arity(), p.premises.len()));
    }
    let c = &p.conclusion;
    match p.rule {
        LRule::Id => {
            if !c.succ.formula.is_atom() {
                return Err("consequent is not atomic".into());
            }
            if !c.has_ante(&c.succ) {
                return Err(format!("{} is not in the antecedent", c.succ));
            }
            Ok(())
        }
        LRule::BotL => {
            if c.ante.iter().any(|f| f.formula == Formula::Bot) {
                Ok(())
            } else {
                Err("no false in the antecedent".into())
            }
        }
        rule => {
            let params = complete_params(rule, &p.params, c);
            let prem: Vec<LabelledSequent> = p.premises.iter().map(|q| q.conclusion.clone()).collect();
            let expected = apply_rule_forward(rule, &params, &prem).map_err(|e| e.reason)?;
            if expected != *c {
                return Err(format!("conclusion should be {expected}"));
            }
            if let Some(kind) = PropKind::of(rule) {
                let path = params.path.as_ref().expect("checked by apply_rule_forward");
                check_prop_step(kind, c, &prem[0], path, g)?;
            }
            Ok(())
        }
    }
}

/// Checks every node of `p` against the rules of the calculus for `a` in `mode`.
pub fn check_labelled(p: &LabelledProof, a: &AxiomSet, mode: Mode) -> Result<(), LCheckError> {
    let g = Grammar::from_axioms(a);
    let mut stack: Vec<(Vec<usize>, &LabelledProof)> = vec![(Vec::new(), p)];
    while let Some((node, q)) = stack.pop() {
        if let Err(reason) = check_node(q, a, &g, mode) {
            return Err(LCheckError { node, rule: q.rule.to_string(), reason });
        }
        for (i, prem) in q.premises.iter().enumerate().rev() {
            let mut n = node.clone();
            n.push(i);
            stack.push((n, prem));
        }
    }
    Ok(())
}

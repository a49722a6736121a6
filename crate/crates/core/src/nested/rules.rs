//! Backward application of the nested rules: from a conclusion and a rule
//! instance to the premises, together with where each premise node came from.

use std::collections::BTreeMap;

use super::proof::{NParams, NRule};
use super::sequent::{Address, NestedSequent, RawNode};
use crate::syntax::Formula;

/// One premise of a backward step. `origin` maps every premise address to the
/// conclusion address of the same node, or `None` for a freshly made bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct Premise {
    pub sequent: NestedSequent,
    pub origin: BTreeMap<Address, Option<Address>>,
}

type Raw = RawNode<Option<Address>>;

fn raw(s: &NestedSequent) -> Raw {
    RawNode::from_sequent(s, &mut |a| Some(a.clone()))
}

fn premise(r: Raw) -> Premise {
    let (sequent, origin) = r.finish();
    Premise { sequent, origin }
}

fn take_input(node: &mut Raw, f: &Formula) -> bool {
    match node.inputs.iter().position(|g| g == f) {
        Some(i) => {
            node.inputs.remove(i);
            true
        }
        None => false,
    }
}

/// The principal formula of a rule at `params.at`: taken from the parameters,
/// or for right rules from the output at that node.
pub fn principal(conclusion: &NestedSequent, rule: NRule, params: &NParams) -> Result<Formula, String> {
    let node = conclusion.node(&params.at).ok_or_else(|| format!("no node at address {:?}", params.at))?;
    let out_rule = matches!(rule, NRule::Id | NRule::AndOut | NRule::OrOut | NRule::ImpOut | NRule::BoxOut | NRule::PDia);
    match (&params.formula, out_rule) {
        (Some(f), _) => Ok(f.clone()),
        (None, true) => node.output().cloned().ok_or_else(|| format!("no output formula at {:?}", params.at)),
        (None, false) if rule == NRule::BotIn => Ok(Formula::Bot),
        (None, false) => Err(format!("{rule} needs a principal formula")),
    }
}

/// Premises of `rule` applied backward to `conclusion`. Leaves return no
/// premises. The propagation side condition is not checked here.
pub fn apply_backward(conclusion: &NestedSequent, rule: NRule, params: &NParams) -> Result<Vec<Premise>, String> {
    let at = &params.at;
    let node = conclusion.node(at).ok_or_else(|| format!("no node at address {at:?}"))?;
    let mut base = raw(conclusion);
    if rule == NRule::D {
        base.at_mut(at).expect("resolved").children.push(RawNode::leaf(None));
        return Ok(vec![premise(base)]);
    }
    let f = principal(conclusion, rule, params)?;
    let needs_input = |f: &Formula| {
        if node.inputs().contains(f) {
            Ok(())
        } else {
            Err(format!("{f}^i is not at {at:?}"))
        }
    };
    let needs_output = |f: &Formula| {
        if node.output() == Some(f) {
            Ok(())
        } else {
            Err(format!("{f}^o is not at {at:?}"))
        }
    };
    match (rule, &f) {
        (NRule::BotIn, Formula::Bot) => {
            needs_input(&f)?;
            Ok(Vec::new())
        }
        (NRule::Id, Formula::Atom(_)) => {
            needs_input(&f)?;
            needs_output(&f)?;
            Ok(Vec::new())
        }
        (NRule::AndIn, Formula::And(a, b)) => {
            needs_input(&f)?;
            let n = base.at_mut(at).expect("resolved");
            take_input(n, &f);
            n.inputs.push((**a).clone());
            n.inputs.push((**b).clone());
            Ok(vec![premise(base)])
        }
        (NRule::AndOut, Formula::And(a, b)) => {
            needs_output(&f)?;
            let mut left = base.clone();
            left.at_mut(at).expect("resolved").output = Some((**a).clone());
            base.at_mut(at).expect("resolved").output = Some((**b).clone());
            Ok(vec![premise(left), premise(base)])
        }
        (NRule::OrIn, Formula::Or(a, b)) => {
            needs_input(&f)?;
            let mut left = base.clone();
            for (r, g) in [(&mut left, a), (&mut base, b)] {
                let n = r.at_mut(at).expect("resolved");
                take_input(n, &f);
                n.inputs.push((**g).clone());
            }
            Ok(vec![premise(left), premise(base)])
        }
        (NRule::OrOut, Formula::Or(a, b)) => {
            needs_output(&f)?;
            let g = match params.branch {
                Some(1) => a,
                Some(2) => b,
                _ => return Err("or_out needs branch 1 or 2".into()),
            };
            base.at_mut(at).expect("resolved").output = Some((**g).clone());
            Ok(vec![premise(base)])
        }
        (NRule::ImpOut, Formula::Imp(a, b)) => {
            needs_output(&f)?;
            let n = base.at_mut(at).expect("resolved");
            n.inputs.push((**a).clone());
            n.output = Some((**b).clone());
            Ok(vec![premise(base)])
        }
        (NRule::ImpIn, Formula::Imp(a, b)) => {
            needs_input(&f)?;
            let mut left = base.clone();
            left.clear_output();
            left.at_mut(at).expect("resolved").output = Some((**a).clone());
            let n = base.at_mut(at).expect("resolved");
            take_input(n, &f);
            n.inputs.push((**b).clone());
            Ok(vec![premise(left), premise(base)])
        }
        (NRule::BoxOut, Formula::Box(a)) => {
            needs_output(&f)?;
            let n = base.at_mut(at).expect("resolved");
            n.output = None;
            let mut child = RawNode::leaf(None);
            child.output = Some((**a).clone());
            n.children.push(child);
            Ok(vec![premise(base)])
        }
        (NRule::DiaIn, Formula::Dia(a)) => {
            needs_input(&f)?;
            let n = base.at_mut(at).expect("resolved");
            take_input(n, &f);
            let mut child = RawNode::leaf(None);
            child.inputs.push((**a).clone());
            n.children.push(child);
            Ok(vec![premise(base)])
        }
        (NRule::PDia, Formula::Dia(a)) => {
            needs_output(&f)?;
            let target = params.target.as_ref().ok_or("pDia needs a target")?;
            conclusion.node(target).ok_or_else(|| format!("no node at target {target:?}"))?;
            base.at_mut(at).expect("resolved").output = None;
            base.at_mut(target).expect("resolved").output = Some((**a).clone());
            Ok(vec![premise(base)])
        }
        (NRule::PBox, Formula::Box(a)) => {
            needs_input(&f)?;
            let target = params.target.as_ref().ok_or("pBox needs a target")?;
            conclusion.node(target).ok_or_else(|| format!("no node at target {target:?}"))?;
            base.at_mut(target).expect("resolved").inputs.push((**a).clone());
            Ok(vec![premise(base)])
        }
        (r, f) => Err(format!("{f} is not a principal formula of {r}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(t: &str) -> NestedSequent {
        t.parse().unwrap()
    }

    fn back(c: &str, rule: NRule, params: NParams) -> Vec<NestedSequent> {
        apply_backward(&n(c), rule, &params).unwrap().into_iter().map(|p| p.sequent).collect()
    }

    #[test]
    fn propositional_rules() {
        let p = Formula::atom("p");
        assert!(back("p^i, p^o", NRule::Id, NParams::at(&[])).is_empty());
        assert!(back("[ false^i ], q^o", NRule::BotIn, NParams::at(&[0])).is_empty());
        assert_eq!(back("p & q^i, r^o", NRule::AndIn, NParams::at(&[]).with_formula("p & q".parse().unwrap())), vec![n("p^i, q^i, r^o")]);
        assert_eq!(back("p & q^o", NRule::AndOut, NParams::at(&[])), vec![n("p^o"), n("q^o")]);
        assert_eq!(back("p | q^o", NRule::OrOut, NParams::at(&[]).with_branch(2)), vec![n("q^o")]);
        assert_eq!(back("p -> q^o", NRule::ImpOut, NParams::at(&[])), vec![n("p^i, q^o")]);
        assert!(apply_backward(&n("p^i, q^o"), NRule::Id, &NParams::at(&[]).with_formula(p)).is_err());
    }

    #[test]
    fn imp_in_prunes_the_output_anywhere() {
        let f: Formula = "p -> q".parse().unwrap();
        let prem = back("[ r^o ], p -> q^i", NRule::ImpIn, NParams::at(&[]).with_formula(f));
        assert_eq!(prem, vec![n("[], p -> q^i, p^o"), n("[ r^o ], q^i")]);
        for s in &prem {
            assert!(s.is_full());
        }
    }

    #[test]
    fn modal_rules_make_brackets() {
        let ps = apply_backward(&n("[ q^i ], []p^o"), NRule::BoxOut, &NParams::at(&[])).unwrap();
        assert_eq!(ps[0].sequent, n("[ q^i ], [ p^o ]"));
        let fresh: Vec<_> = ps[0].origin.iter().filter(|(_, o)| o.is_none()).map(|(a, _)| a.clone()).collect();
        assert_eq!(fresh, vec![vec![0]]);
        assert_eq!(ps[0].origin[&vec![1]], Some(vec![0]));
        assert_eq!(back("<>p^i, q^o", NRule::DiaIn, NParams::at(&[]).with_formula("<>p".parse().unwrap())), vec![n("[ p^i ], q^o")]);
        assert_eq!(back("q^o", NRule::D, NParams::at(&[])), vec![n("q^o, []")]);
    }

    #[test]
    fn propagation_rules_move_formulas() {
        let pdia = NParams { target: Some(vec![0]), ..NParams::at(&[]) };
        assert_eq!(back("<>p^o, [ q^i ]", NRule::PDia, pdia), vec![n("[ q^i, p^o ]")]);
        let pbox = NParams { target: Some(vec![]), formula: Some("[]p".parse().unwrap()), ..NParams::at(&[0]) };
        assert_eq!(back("q^o, [ []p^i ]", NRule::PBox, pbox), vec![n("q^o, p^i, [ []p^i ]")]);
    }
}

//! Bounded backward proof search with iterative deepening.
//!
//! Order of attack on a sequent: initial sequents; the one-premise invertible
//! rules `and_in`, `dia_in`, `imp_out`, `box_out`; `pBox` saturation; the
//! branching invertible rules `and_out`, `or_in`; then the choice points
//! `or_out`, `imp_in`, `pDia` and `d`. `d` only fires at nodes without
//! children, since a fresh bracket next to an existing one adds nothing that
//! merging could not recover.

use std::collections::{HashMap, HashSet};

use super::proof::{NParams, NRule, NestedProof};
use super::rules::apply_backward;
use super::sequent::{prop_graph_nested, Address, NestedSequent};
use crate::grammar::{Char, Grammar, Reachability};
use crate::syntax::{AxiomSet, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximal proof height.
    pub depth: usize,
    /// Give up after this many sequent expansions.
    pub max_expansions: usize,
}

impl SearchLimits {
    pub fn depth(depth: usize) -> SearchLimits {
        SearchLimits { depth, max_expansions: 2_000_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expansions: usize,
    /// The last completed deepening round.
    pub rounds: usize,
    pub exhausted: bool,
}

struct Searcher<'a> {
    a: &'a AxiomSet,
    g: Grammar,
    limit: usize,
    expansions: usize,
    aborted: bool,
    branch: HashSet<NestedSequent>,
    failed: HashMap<NestedSequent, usize>,
}

/// Some proof of `goal` of height at most `depth`, or `None`.
pub fn prove_bounded(goal: &NestedSequent, a: &AxiomSet, depth: usize) -> Option<NestedProof> {
    prove_with_limits(goal, a, SearchLimits::depth(depth)).0
}

pub fn prove_with_limits(goal: &NestedSequent, a: &AxiomSet, limits: SearchLimits) -> (Option<NestedProof>, SearchStats) {
    let mut stats = SearchStats::default();
    if !goal.is_full() {
        return (None, stats);
    }
    let mut s = Searcher {
        a,
        g: Grammar::from_axioms(a),
        limit: limits.max_expansions,
        expansions: 0,
        aborted: false,
        branch: HashSet::new(),
        failed: HashMap::new(),
    };
    for budget in 1..=limits.depth {
        let found = s.prove(goal, budget);
        stats.expansions = s.expansions;
        if s.aborted {
            stats.exhausted = true;
            return (None, stats);
        }
        stats.rounds = budget;
        if found.is_some() {
            return (found, stats);
        }
    }
    (None, stats)
}

fn initial(s: &NestedSequent) -> Option<NestedProof> {
    for (addr, node) in s.preorder() {
        if node.inputs().contains(&Formula::Bot) {
            return Some(NestedProof::new(NRule::BotIn, s.clone(), NParams::at(&addr), vec![]));
        }
        if let Some(o) = node.output().filter(|o| o.is_atom() && node.inputs().contains(o)) {
            return Some(NestedProof::new(NRule::Id, s.clone(), NParams::at(&addr).with_formula(o.clone()), vec![]));
        }
    }
    None
}

impl Searcher<'_> {
    fn prove(&mut self, s: &NestedSequent, budget: usize) -> Option<NestedProof> {
        if budget == 0 || self.aborted {
            return None;
        }
        if let Some(p) = initial(s) {
            return Some(p);
        }
        if budget == 1 || self.branch.contains(s) || self.failed.get(s).is_some_and(|&b| b >= budget) {
            return None;
        }
        self.expansions += 1;
        if self.expansions > self.limit {
            self.aborted = true;
            return None;
        }
        self.branch.insert(s.clone());
        let found = self.expand(s, budget);
        self.branch.remove(s);
        if found.is_none() && !self.aborted {
            let b = self.failed.entry(s.clone()).or_insert(0);
            *b = (*b).max(budget);
        }
        found
    }

    fn apply(&mut self, s: &NestedSequent, rule: NRule, params: NParams, budget: usize) -> Option<NestedProof> {
        let premises = apply_backward(s, rule, &params).ok()?;
        let mut subs = Vec::with_capacity(premises.len());
        for prem in premises {
            subs.push(self.prove(&prem.sequent, budget - 1)?);
        }
        Some(NestedProof::new(rule, s.clone(), params, subs))
    }

    fn expand(&mut self, s: &NestedSequent, budget: usize) -> Option<NestedProof> {
        let nodes = s.preorder();

        for (addr, node) in &nodes {
            for f in node.inputs() {
                let rule = match f {
                    Formula::And(..) => NRule::AndIn,
                    Formula::Dia(_) => NRule::DiaIn,
                    _ => continue,
                };
                return self.apply(s, rule, NParams::at(addr).with_formula(f.clone()), budget);
            }
            match node.output() {
                Some(Formula::Imp(..)) => return self.apply(s, NRule::ImpOut, NParams::at(addr), budget),
                Some(Formula::Box(_)) => return self.apply(s, NRule::BoxOut, NParams::at(addr), budget),
                _ => {}
            }
        }

        let ids: Vec<String> = (0..nodes.len()).map(|i| format!("w{i}")).collect();
        let reach = Reachability::compute(&prop_graph_nested(s), &self.g);
        let targets = |from: usize| -> Vec<usize> {
            (0..nodes.len()).filter(|&u| reach.holds(Char::Dia, &ids[from], &ids[u]).unwrap_or(false)).collect()
        };

        for (w, (addr, node)) in nodes.iter().enumerate() {
            for f in node.inputs() {
                let Formula::Box(inner) = f else { continue };
                for u in targets(w) {
                    if nodes[u].1.inputs().contains(inner) {
                        continue;
                    }
                    let path = reach.path(&ids[w], &ids[u]).ok().flatten()?;
                    let params = NParams::at(addr).with_formula(f.clone()).with_target(&nodes[u].0, path);
                    return self.apply(s, NRule::PBox, params, budget);
                }
            }
        }

        for (addr, node) in &nodes {
            if let Some(Formula::And(..)) = node.output() {
                return self.apply(s, NRule::AndOut, NParams::at(addr), budget);
            }
            if let Some(f) = node.inputs().iter().find(|f| matches!(f, Formula::Or(..))) {
                return self.apply(s, NRule::OrIn, NParams::at(addr).with_formula(f.clone()), budget);
            }
        }

        let out = s.output_address().expect("search only sees full sequents");
        let w = nodes.iter().position(|(a, _)| *a == out).expect("output node is in the preorder");
        match nodes[w].1.output() {
            Some(Formula::Or(..)) => {
                for b in [1, 2] {
                    if let Some(p) = self.apply(s, NRule::OrOut, NParams::at(&out).with_branch(b), budget) {
                        return Some(p);
                    }
                }
            }
            Some(Formula::Dia(_)) => {
                for u in targets(w) {
                    let path = reach.path(&ids[w], &ids[u]).ok().flatten()?;
                    let params = NParams::at(&out).with_target(&nodes[u].0, path);
                    if let Some(p) = self.apply(s, NRule::PDia, params, budget) {
                        return Some(p);
                    }
                }
            }
            _ => {}
        }

        let mut tried: HashSet<(&Address, &Formula)> = HashSet::new();
        for (addr, node) in &nodes {
            for f in node.inputs() {
                if matches!(f, Formula::Imp(..)) && tried.insert((addr, f)) {
                    if let Some(p) = self.apply(s, NRule::ImpIn, NParams::at(addr).with_formula(f.clone()), budget) {
                        return Some(p);
                    }
                }
            }
        }

        if self.a.has_d {
            for (addr, node) in &nodes {
                if node.children().is_empty() {
                    if let Some(p) = self.apply(s, NRule::D, NParams::at(addr), budget) {
                        return Some(p);
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nested::check_nested;

    fn goal(f: &str) -> NestedSequent {
        NestedSequent::goal(f.parse().unwrap())
    }

    fn proves(f: &str, a: &AxiomSet, depth: usize) -> Option<NestedProof> {
        let p = prove_bounded(&goal(f), a, depth)?;
        check_nested(&p, a).unwrap();
        Some(p)
    }

    #[test]
    fn identity_in_one_step() {
        let s: NestedSequent = "p^o, p^i".parse().unwrap();
        let p = prove_bounded(&s, &AxiomSet::empty(), 3).unwrap();
        assert_eq!(p.height(), 1);
    }

    #[test]
    fn k_axiom() {
        assert!(proves("[](p -> q) -> ([]p -> []q)", &AxiomSet::empty(), 8).is_some());
    }

    #[test]
    fn t_needs_reflexivity() {
        let t = AxiomSet::from_pairs([(0, 0)]);
        let p = proves("p -> <>p", &t, 6).unwrap();
        assert_eq!(p.count(NRule::PDia), 1);
        assert!(proves("p -> <>p", &AxiomSet::empty(), 6).is_none());
        assert!(proves("[]p -> p", &t, 6).is_some());
    }

    #[test]
    fn seriality() {
        assert!(proves("[]p -> <>p", &AxiomSet::empty().with_d(), 8).is_some());
        assert!(proves("[]p -> <>p", &AxiomSet::empty(), 8).is_none());
    }

    #[test]
    fn not_full_goal_fails() {
        let s: NestedSequent = "p^i".parse().unwrap();
        assert!(prove_bounded(&s, &AxiomSet::empty(), 4).is_none());
    }

    #[test]
    fn excluded_middle_is_not_intuitionistic() {
        assert!(proves("p | ~p", &AxiomSet::empty(), 8).is_none());
        assert!(proves("~~(p | ~p)", &AxiomSet::empty(), 8).is_some());
    }
}

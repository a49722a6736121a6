//! Seeded generators for formulas, sequents, axiom sets and labelled proofs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::labelled::{apply_rule_forward, LFormula, LParams, LRule, LabelledProof, LabelledSequent, RelAtom};
use crate::models::{Interpretation, Model};
use crate::nested::NestedSequent;
use crate::syntax::{AxiomSet, Formula};

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// A formula of depth at most `depth` over `p`, `q`, `r`.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.08) { Formula::Bot } else { Formula::atom(ATOMS.choose(rng).unwrap()) };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::and(random_formula(rng, d), random_formula(rng, d)),
        1 => Formula::or(random_formula(rng, d), random_formula(rng, d)),
        2 => Formula::imp(random_formula(rng, d), random_formula(rng, d)),
        3 => Formula::dia(random_formula(rng, d)),
        _ => Formula::boxed(random_formula(rng, d)),
    }
}

/// Axiom set with up to `max_pairs` HSL pairs, components at most `max_nk`.
pub fn random_axioms<R: Rng>(rng: &mut R, max_pairs: usize, max_nk: u32) -> AxiomSet {
    let count = rng.gen_range(0..=max_pairs);
    let mut a = AxiomSet::from_pairs((0..count).map(|_| (rng.gen_range(0..=max_nk), rng.gen_range(0..=max_nk))));
    if rng.gen_bool(0.3) {
        a = a.with_d();
    }
    a
}

/// A tree shape of `nodes` nodes as a parent list; node 0 is the root.
fn random_tree<R: Rng>(rng: &mut R, nodes: usize, max_depth: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None];
    let mut depth = vec![0];
    while parent.len() < nodes {
        let candidates: Vec<usize> = (0..parent.len()).filter(|&i| depth[i] < max_depth).collect();
        let p = *candidates.choose(rng).unwrap();
        parent.push(Some(p));
        depth.push(depth[p] + 1);
    }
    parent
}

fn nested_from(parent: &[Option<usize>], inputs: &[Vec<Formula>], output: &(usize, Formula)) -> NestedSequent {
    fn build(i: usize, parent: &[Option<usize>], inputs: &[Vec<Formula>], output: &(usize, Formula)) -> NestedSequent {
        let children = (0..parent.len()).filter(|&c| parent[c] == Some(i)).map(|c| build(c, parent, inputs, output)).collect();
        let out = (output.0 == i).then(|| output.1.clone());
        NestedSequent::new(inputs[i].clone(), out, children)
    }
    build(0, parent, inputs, output)
}

/// A full nested sequent with bracket depth at most `max_depth` and at most
/// `max_formulas` formula occurrences.
pub fn random_nested<R: Rng>(rng: &mut R, max_depth: usize, max_formulas: usize) -> NestedSequent {
    let nodes = rng.gen_range(1..=6);
    let parent = random_tree(rng, nodes, max_depth);
    let mut inputs = vec![Vec::new(); nodes];
    for _ in 0..rng.gen_range(0..max_formulas) {
        inputs[rng.gen_range(0..nodes)].push(random_formula(rng, 2));
    }
    let output = (rng.gen_range(0..nodes), random_formula(rng, 2));
    nested_from(&parent, &inputs, &output)
}

/// A labelled tree sequent with arbitrary label names and atom order.
pub fn random_labelled_tree<R: Rng>(rng: &mut R, max_nodes: usize, max_formulas: usize) -> LabelledSequent {
    let nodes = rng.gen_range(1..=max_nodes);
    let parent = random_tree(rng, nodes, 4);
    let mut names: Vec<String> = (0..nodes * 3).map(|i| format!("{}{}", ["a", "b", "x", "y"][i % 4], i)).collect();
    names.shuffle(rng);
    let mut rel: Vec<RelAtom> =
        (1..nodes).map(|c| RelAtom::new(&names[parent[c].unwrap()], &names[c])).collect();
    rel.shuffle(rng);
    let ante = (0..rng.gen_range(0..max_formulas))
        .map(|_| LFormula::new(&names[rng.gen_range(0..nodes)], random_formula(rng, 2)))
        .collect();
    let succ = LFormula::new(&names[rng.gen_range(0..nodes)], random_formula(rng, 2));
    LabelledSequent::new(rel, ante, succ)
}

/// An interpretation of the labels of `seq` in `m` under which every
/// relational atom holds, found by randomised backtracking.
pub fn random_interpretation<R: Rng>(rng: &mut R, m: &Model, seq: &LabelledSequent) -> Option<Interpretation> {
    let labels: Vec<String> = seq.labels().into_iter().collect();
    let mut order: Vec<Vec<usize>> = labels
        .iter()
        .map(|_| {
            let mut ws: Vec<usize> = (0..m.len()).collect();
            ws.shuffle(rng);
            ws
        })
        .collect();
    fn go(i: usize, labels: &[String], order: &mut [Vec<usize>], m: &Model, seq: &LabelledSequent, cur: &mut Interpretation) -> bool {
        if i == labels.len() {
            return true;
        }
        for k in 0..order[i].len() {
            let w = order[i][k];
            cur.insert(labels[i].clone(), w);
            let consistent = seq.rel.iter().all(|r| match (cur.get(&r.from), cur.get(&r.to)) {
                (Some(&x), Some(&y)) => m.acc[x][y],
                _ => true,
            });
            if consistent && go(i + 1, labels, order, m, seq, cur) {
                return true;
            }
        }
        cur.remove(&labels[i]);
        false
    }
    let mut cur = Interpretation::new();
    go(0, &labels, &mut order, m, seq, &mut cur).then_some(cur)
}

struct ProofGen<'a, R: Rng> {
    rng: &'a mut R,
    a: &'a AxiomSet,
    next_label: usize,
    used_s: bool,
}

/// Backward step result: rule, parameters, premise sequents.
type Step = (LRule, LParams, Vec<LabelledSequent>);

impl<R: Rng> ProofGen<'_, R> {
    fn fresh(&mut self) -> String {
        self.next_label += 1;
        format!("u{}", self.next_label)
    }

    fn closes(s: &LabelledSequent) -> Option<LRule> {
        if s.ante.iter().any(|f| f.formula == Formula::Bot) {
            Some(LRule::BotL)
        } else if s.succ.formula.is_atom() && s.has_ante(&s.succ) {
            Some(LRule::Id)
        } else {
            None
        }
    }

    /// Chains for some `S(n,k)` of the axiom set in the relational atoms.
    fn s_step(&mut self, s: &LabelledSequent) -> Option<Step> {
        let pairs: Vec<(u32, u32)> = self.a.hsl.iter().copied().collect();
        let &(n, k) = pairs.choose(self.rng)?;
        let labels: Vec<String> = s.labels().into_iter().collect();
        for _ in 0..6 {
            let w = labels.choose(self.rng)?.clone();
            let walk = |len: u32, rng: &mut R| -> Option<Vec<String>> {
                let mut chain = vec![w.clone()];
                for _ in 0..len {
                    let last = chain.last().unwrap();
                    let next: Vec<&RelAtom> = s.rel.iter().filter(|r| &r.from == last).collect();
                    chain.push(next.choose(rng)?.to.clone());
                }
                Some(chain)
            };
            let (Some(cu), Some(cv)) = (walk(n, self.rng), walk(k, self.rng)) else { continue };
            let mut prem = s.clone();
            prem.rel.push(RelAtom::new(cu.last().unwrap(), cv.last().unwrap()));
            let params = LParams { chain_u: Some(cu), chain_v: Some(cv), ..LParams::default() };
            return Some((LRule::S { n, k }, params, vec![prem]));
        }
        None
    }

    fn logical_step(&mut self, s: &LabelledSequent) -> Option<Step> {
        let mut options: Vec<Step> = Vec::new();
        let succ = s.succ.clone();
        let w = succ.label.clone();
        let with_succ = |f: LFormula| {
            let mut p = s.clone();
            p.succ = f;
            p
        };
        match &succ.formula {
            Formula::And(a, b) => options.push((
                LRule::AndR,
                LParams::default(),
                vec![with_succ(LFormula::new(&w, (**a).clone())), with_succ(LFormula::new(&w, (**b).clone()))],
            )),
            Formula::Or(a, b) => {
                let (br, part) = if self.rng.gen_bool(0.5) { (1, a) } else { (2, b) };
                options.push((
                    LRule::OrR,
                    LParams { branch: Some(br), ..LParams::principal(succ.clone()) },
                    vec![with_succ(LFormula::new(&w, (**part).clone()))],
                ));
            }
            Formula::Imp(a, b) => {
                let mut p = with_succ(LFormula::new(&w, (**b).clone()));
                p.ante.push(LFormula::new(&w, (**a).clone()));
                options.push((LRule::ImpR, LParams::principal(succ.clone()), vec![p]));
            }
            Formula::Box(a) => {
                let u = self.fresh();
                let mut p = with_succ(LFormula::new(&u, (**a).clone()));
                p.rel.push(RelAtom::new(&w, &u));
                options.push((LRule::BoxR, LParams::principal(succ.clone()).with_label(&u), vec![p]));
            }
            Formula::Dia(a) => {
                for r in s.rel.iter().filter(|r| r.from == w) {
                    options.push((
                        LRule::DiaR,
                        LParams::principal(succ.clone()).with_label(&r.to),
                        vec![with_succ(LFormula::new(&r.to, (**a).clone()))],
                    ));
                }
            }
            _ => {}
        }
        for f in &s.ante {
            let l = &f.label;
            let mut without = s.clone();
            without.remove_ante(f);
            match &f.formula {
                Formula::And(a, b) => {
                    let mut p = without.clone();
                    p.ante.push(LFormula::new(l, (**a).clone()));
                    p.ante.push(LFormula::new(l, (**b).clone()));
                    options.push((LRule::AndL, LParams::principal(f.clone()), vec![p]));
                }
                Formula::Or(a, b) => {
                    let mut p1 = without.clone();
                    p1.ante.push(LFormula::new(l, (**a).clone()));
                    let mut p2 = without.clone();
                    p2.ante.push(LFormula::new(l, (**b).clone()));
                    options.push((LRule::OrL, LParams::principal(f.clone()), vec![p1, p2]));
                }
                Formula::Imp(a, b) => {
                    let mut p1 = s.clone();
                    p1.succ = LFormula::new(l, (**a).clone());
                    let mut p2 = without.clone();
                    p2.ante.push(LFormula::new(l, (**b).clone()));
                    options.push((LRule::ImpL, LParams::principal(f.clone()), vec![p1, p2]));
                }
                Formula::Dia(a) => {
                    let u = self.fresh();
                    let mut p = without.clone();
                    p.rel.push(RelAtom::new(l, &u));
                    p.ante.push(LFormula::new(&u, (**a).clone()));
                    options.push((LRule::DiaL, LParams::principal(f.clone()).with_label(&u), vec![p]));
                }
                Formula::Box(a) => {
                    for r in s.rel.iter().filter(|r| &r.from == l) {
                        let mut p = s.clone();
                        p.ante.push(LFormula::new(&r.to, (**a).clone()));
                        options.push((LRule::BoxL, LParams::principal(f.clone()).with_label(&r.to), vec![p]));
                    }
                }
                _ => {}
            }
        }
        if self.a.has_d && self.rng.gen_bool(0.2) {
            let labels: Vec<String> = s.labels().into_iter().collect();
            let w = labels.choose(self.rng)?.clone();
            let u = self.fresh();
            let mut p = s.clone();
            p.rel.push(RelAtom::new(&w, &u));
            options.push((LRule::D, LParams { source: Some(w), ..LParams::default() }.with_label(&u), vec![p]));
        }
        let i = self.rng.gen_range(0..options.len().max(1));
        (i < options.len()).then(|| options.swap_remove(i))
    }

    /// A base-mode proof of `s` of height at most `height`, closing leaves
    /// with `id`/`botL`; `None` when some leaf stays open.
    fn build(&mut self, s: &LabelledSequent, height: usize) -> Option<LabelledProof> {
        let close = Self::closes(s);
        if let Some(rule) = close {
            if height == 1 || self.rng.gen_bool(0.3) {
                return Some(LabelledProof::leaf(rule, s.clone()));
            }
        }
        if height == 1 {
            return None;
        }
        let step = if !self.a.hsl.is_empty() && self.rng.gen_bool(0.35) {
            self.s_step(s).or_else(|| self.logical_step(s))
        } else {
            self.logical_step(s).or_else(|| self.s_step(s))
        };
        let Some((rule, params, prems)) = step else {
            return close.map(|r| LabelledProof::leaf(r, s.clone()));
        };
        let mut subs = Vec::with_capacity(prems.len());
        for q in &prems {
            match self.build(q, height - 1) {
                Some(p) => subs.push(p),
                None => return close.map(|r| LabelledProof::leaf(r, s.clone())),
            }
        }
        let concl: Vec<LabelledSequent> = subs.iter().map(|p| p.conclusion.clone()).collect();
        let forward = apply_rule_forward(rule, &params, &concl).ok()?;
        debug_assert_eq!(forward, *s);
        if matches!(rule, LRule::S { .. }) {
            self.used_s = true;
        }
        Some(LabelledProof::new(rule, forward, params, subs))
    }
}

fn random_root<R: Rng>(rng: &mut R, tree: bool) -> LabelledSequent {
    let nodes = rng.gen_range(1..=3);
    let parent = random_tree(rng, nodes, 2);
    let names: Vec<String> = (0..nodes).map(|i| format!("w{i}")).collect();
    let mut rel: Vec<RelAtom> = (1..nodes).map(|c| RelAtom::new(&names[parent[c].unwrap()], &names[c])).collect();
    if !tree && rng.gen_bool(0.3) {
        rel.push(RelAtom::new(names.choose(rng).unwrap(), names.choose(rng).unwrap()));
    }
    let mut ante = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        ante.push(LFormula::new(names.choose(rng).unwrap(), random_formula(rng, 2)));
    }
    let succ = LFormula::new(names.choose(rng).unwrap(), random_formula(rng, 2));
    // seed the antecedent with the atoms of the goal so that leaves can close
    for atom in succ.formula.atoms() {
        if rng.gen_bool(0.7) {
            ante.push(LFormula::new(names.choose(rng).unwrap(), Formula::atom(&atom)));
        }
    }
    LabelledSequent::new(rel, ante, succ)
}

/// A base-mode labelled proof of height at most `height` generated by random
/// backward steps and assembled forward through the rule schemes. With
/// `tree` the root sequent is a labelled tree sequent. `require_s` retries
/// until the proof uses some `S(n,k)` (only possible with HSL axioms).
pub fn random_base_proof<R: Rng>(rng: &mut R, a: &AxiomSet, height: usize, tree: bool, require_s: bool) -> LabelledProof {
    let need_s = require_s && !a.hsl.is_empty();
    for attempt in 0.. {
        let mut root = random_root(rng, tree);
        if attempt > 200 {
            let w = root.succ.label.clone();
            root.ante.push(LFormula::new(&w, Formula::Bot));
        }
        let mut g = ProofGen { rng: &mut *rng, a, next_label: 0, used_s: false };
        if let Some(p) = g.build(&root, height) {
            if p.height() > 1 && (!need_s || g.used_s) {
                return p;
            }
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelled::{check_labelled, Mode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nested_sequents_are_full_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = random_nested(&mut rng, 4, 12);
            assert!(s.is_full());
            assert!(s.depth() <= 4);
            assert!(s.formula_count() <= 12);
        }
    }

    #[test]
    fn base_proofs_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for i in 0..60 {
            let a = random_axioms(&mut rng, 2, 2);
            let p = random_base_proof(&mut rng, &a, 6, i % 2 == 0, true);
            assert!(p.height() <= 6);
            check_labelled(&p, &a, Mode::Base).unwrap_or_else(|e| panic!("{e}\n{}", p.to_json()));
            if !a.hsl.is_empty() {
                assert!(p.structural_count() > 0);
            }
        }
    }

    #[test]
    fn interpretations_respect_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = AxiomSet::from_pairs([(0, 0)]);
        let m = crate::models::random_model(&a, 4, 9);
        let seq = random_labelled_tree(&mut rng, 4, 3);
        let i = random_interpretation(&mut rng, &m, &seq).expect("reflexive models interpret every tree");
        for r in &seq.rel {
            assert!(m.acc[i[&r.from]][i[&r.to]]);
        }
    }
}

//! One line per acceptance criterion. Exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hslnest::grammar::{derives, reachable, Char, Grammar, Production, PropPath, Word};
use hslnest::labelled::{check_labelled, LFormula, LParams, LRule, LabelledProof, LabelledSequent, Mode, RelAtom};
use hslnest::models::{globally_true, random_model, sat_sequent};
use hslnest::nested::{admit_structural, check_nested, prove_bounded, NestedProof, NestedSequent, StructuralStep};
use hslnest::random::{random_base_proof, random_formula, random_interpretation, random_labelled_tree, random_nested};
use hslnest::refine::{check_prop_step, eliminate_structural, permute_s_over_prop, prop_graph_labelled, PropKind};
use hslnest::syntax::{benchmark_formulas, AxiomSet, Formula};
use hslnest::translate::{canonical_relabel, labelled_to_nested, to_labelled, to_nested};

type Verdict = Result<String, String>;

/// Everything the suite proved or accepted, for the soundness sweep.
#[derive(Default)]
struct Corpus {
    formulas: Vec<(AxiomSet, Formula)>,
    sequents: Vec<(AxiomSet, LabelledSequent)>,
}

impl Corpus {
    fn labelled(&mut self, a: &AxiomSet, p: &LabelledProof) {
        for node in p.nodes() {
            self.sequents.push((a.clone(), node.conclusion.clone()));
        }
    }

    fn nested(&mut self, a: &AxiomSet, p: &NestedProof) -> Result<(), String> {
        let s = to_labelled(&p.conclusion).map_err(|e| e.to_string())?;
        self.sequents.push((a.clone(), s));
        Ok(())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn seq(t: &str) -> LabelledSequent {
    t.parse().unwrap()
}

fn lf(t: &str) -> LFormula {
    t.parse().unwrap()
}

fn path(t: &str) -> PropPath {
    t.parse().unwrap()
}

fn ac1(corpus: &mut Corpus) -> Verdict {
    let a = AxiomSet::from_pairs([(2, 1)]);
    let g = Grammar::from_axioms(&a);
    let want = Grammar::new([
        Production { lhs: Char::Dia, rhs: "bbd".parse().unwrap() },
        Production { lhs: Char::BDia, rhs: "bdd".parse().unwrap() },
    ]);
    ensure(g == want, || format!("grammar is {g}"))?;

    let rel = vec![RelAtom::new("v", "u"), RelAtom::new("u", "w")];
    let pg = prop_graph_labelled(&rel);
    let found = reachable(&pg, &g, "w", "u").map_err(|e| e.to_string())?.ok_or("no w to u path")?;
    let d = Word(vec![Char::Dia]);
    ensure(derives(&g, &d, &found.word()), || format!("witness {found} spells an underivable string"))?;
    let printed = path("w, b, u, b, v, d, u");
    ensure(printed.is_path_in(&pg) && derives(&g, &d, &printed.word()), || "the printed witness is rejected".into())?;

    let lambda = seq("v R u, u R w ; w: []p, u: p |- v: p -> q");
    let below = seq("v R u, u R w ; w: []p |- v: p -> q");
    check_prop_step(PropKind::Box, &below, &lambda, &printed, &g)?;
    check_prop_step(PropKind::Box, &below, &lambda, &found, &g)?;
    ensure(check_prop_step(PropKind::Box, &below, &lambda, &printed, &Grammar::default()).is_err(), || {
        "the step also checks without the axiom".into()
    })?;

    // the same step inside a closed proof
    let top = LabelledProof::leaf(LRule::Id, seq("v R u, u R w ; w: []p, u: p, v: p, u: q |- u: q"));
    let step = LabelledProof::new(
        LRule::PBox,
        seq("v R u, u R w ; w: []p, v: p, u: q |- u: q"),
        LParams::principal(lf("w: []p")).with_path(printed.clone()),
        vec![top],
    );
    check_labelled(&step, &a, Mode::Refined).map_err(|e| e.to_string())?;
    corpus.labelled(&a, &step);
    Ok(format!("grammar {g}, witness {found} ({})", found.word()))
}

/// An S(1,1) above and below a pDia step, over `{(1,1)}`.
fn permutation_pair() -> (LabelledProof, LabelledProof) {
    let s11 = LRule::S { n: 1, k: 1 };
    let chains = LParams { chain_u: Some(vec!["w".into(), "u".into()]), chain_v: Some(vec!["w".into(), "v".into()]), ..Default::default() };
    let witness = path("v, b, w, d, u");
    let leaf = LabelledProof::leaf(LRule::Id, seq("w R u, w R v, u R v ; u: p |- u: p"));
    let first = LabelledProof::new(
        s11,
        seq("w R u, w R v ; u: p |- v: <>p"),
        chains.clone(),
        vec![LabelledProof::new(
            LRule::PDia,
            seq("w R u, w R v, u R v ; u: p |- v: <>p"),
            LParams::principal(lf("v: <>p")).with_path(witness.clone()),
            vec![leaf.clone()],
        )],
    );
    let second = LabelledProof::new(
        LRule::PDia,
        seq("w R u, w R v ; u: p |- v: <>p"),
        LParams::principal(lf("v: <>p")).with_path(witness),
        vec![LabelledProof::new(s11, seq("w R u, w R v ; u: p |- u: p"), chains, vec![leaf])],
    );
    (first, second)
}

fn ac2(corpus: &mut Corpus) -> Verdict {
    let a = AxiomSet::from_pairs([(1, 1)]);
    let (first, second) = permutation_pair();
    check_labelled(&first, &a, Mode::Either).map_err(|e| format!("first derivation: {e}"))?;
    check_labelled(&second, &a, Mode::Either).map_err(|e| format!("second derivation: {e}"))?;
    ensure(check_labelled(&first, &AxiomSet::empty(), Mode::Either).is_err(), || "first derivation checks without (1,1)".into())?;

    let permuted = permute_s_over_prop(&first).map_err(|e| e.to_string())?;
    ensure(permuted == second, || format!("permutation gave\n{}", permuted.to_json()))?;

    let refined = eliminate_structural(&first, &a).map_err(|e| e.to_string())?;
    ensure(refined.conclusion == first.conclusion, || "conclusion changed".into())?;
    ensure(refined.structural_count() == 0, || "S(n,k) survived".into())?;
    check_labelled(&refined, &a, Mode::Refined).map_err(|e| format!("refined output: {e}"))?;
    for p in [&first, &second, &refined] {
        corpus.labelled(&a, p);
    }
    let rules: Vec<String> = refined.nodes().iter().map(|n| n.rule.to_string()).collect();
    Ok(format!("both derivations check; eliminated to [{}]", rules.join(", ")))
}

fn ac3() -> Verdict {
    let sigma: NestedSequent = "p -> q^o, [p^i, [[]p^i]]".parse().map_err(|e| format!("{e}"))?;
    let l = to_labelled(&sigma).map_err(|e| e.to_string())?;
    let expected = seq("w0 R w1, w1 R w2 ; w1: p, w2: []p |- w0: p -> q");
    ensure(l == expected, || format!("L gave {l}"))?;
    let printed = seq("w R v, v R u ; v: p, u: []p |- w: p -> q");
    let renamed = printed.rename(|x| match x {
        "w" => "w0".into(),
        "v" => "w1".into(),
        _ => "w2".into(),
    });
    ensure(renamed == l, || "labelling differs from the printed sequent by more than a renaming".into())?;
    let n = to_nested(&printed).map_err(|e| e.to_string())?;
    ensure(n == sigma, || format!("N gave {n}"))?;
    ensure(l.to_string() == "w0 R w1, w1 R w2 ; w1: p, w2: []p |- w0: p -> q", || format!("rendered as {l}"))?;
    ensure(n.to_string() == "p -> q^o, [ p^i, [ []p^i ] ]", || format!("rendered as {n}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..500 {
        let s = random_nested(&mut rng, 4, 12);
        ensure(s.depth() <= 4 && s.formula_count() <= 12, || format!("generator overshot on {s}"))?;
        let back = to_nested(&to_labelled(&s).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(back == s, || format!("nested sample {i}: {s} came back as {back}"))?;
    }
    for i in 0..500 {
        let l = random_labelled_tree(&mut rng, 6, 12);
        let back = to_labelled(&to_nested(&l).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let (x, y) = (canonical_relabel(&l).map_err(|e| e.to_string())?, canonical_relabel(&back).map_err(|e| e.to_string())?);
        ensure(x == y, || format!("labelled sample {i}: {l} came back as {back}"))?;
    }
    Ok("paired examples exact; 500 + 500 round trips".into())
}

fn ac4() -> Verdict {
    const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut positive, mut longest) = (0, 0);
    for i in 0..300 {
        let nodes = rng.gen_range(1..=6);
        let rel: Vec<RelAtom> = (0..rng.gen_range(0..=8))
            .map(|_| RelAtom::new(NAMES[rng.gen_range(0..nodes)], NAMES[rng.gen_range(0..nodes)]))
            .collect();
        let a = AxiomSet::from_pairs((0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(0..=3), rng.gen_range(0..=3))));
        let mut pg = prop_graph_labelled(&rel);
        for n in &NAMES[..nodes] {
            pg.add_node(n);
        }
        let (w, u) = (NAMES[rng.gen_range(0..nodes)], NAMES[rng.gen_range(0..nodes)]);
        let got = reachable(&pg, &Grammar::from_axioms(&a), w, u).map_err(|e| e.to_string())?;
        let oracle = common::brute_reach(&pg, &a, w, u);
        if got.is_some() != oracle {
            let shown = got.map_or("none".to_string(), |p| format!("{p} ({} edges)", p.len()));
            return Err(format!("instance {i}: {rel:?} under {a}, {w} to {u}: reachable gave {shown}, oracle {oracle}"));
        }
        if let Some(p) = got {
            positive += 1;
            longest = longest.max(p.len());
        }
    }
    Ok(format!("300 instances, {positive} reachable, longest witness {longest} edges"))
}

fn ac5(corpus: &mut Corpus) -> Verdict {
    let benchmarks = benchmark_formulas();
    let lookup = |name: &str| benchmarks.iter().find(|(n, _)| *n == name).map(|(_, f)| f.clone()).unwrap();
    let conjuncts = |f: Formula| match f {
        Formula::And(x, y) => vec![*x, *y],
        other => vec![other],
    };
    let mut goals: Vec<(String, AxiomSet, Formula)> = Vec::new();
    for name in ["A1", "A2", "A3", "A4", "A5"] {
        goals.push((name.into(), AxiomSet::empty(), lookup(name)));
    }
    for (name, pair) in [("T", (0, 0)), ("4", (0, 2)), ("B", (1, 0)), ("5", (1, 1))] {
        for (i, c) in conjuncts(lookup(name)).into_iter().enumerate() {
            goals.push((format!("{name}.{}", i + 1), AxiomSet::from_pairs([pair]), c));
        }
    }
    goals.push(("D".into(), AxiomSet::empty().with_d(), lookup("D")));

    let mut report = Vec::new();
    for (name, a, f) in goals {
        let start = Instant::now();
        let p = prove_bounded(&NestedSequent::goal(f.clone()), &a, 12).ok_or_else(|| format!("{name}: {f} not proved"))?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(60), || format!("{name} took {took:?}"))?;
        check_nested(&p, &a).map_err(|e| format!("{name}: {e}"))?;
        corpus.formulas.push((a.clone(), f));
        corpus.nested(&a, &p)?;
        report.push(format!("{name}:{}", p.height()));
    }
    Ok(format!("heights {}", report.join(" ")))
}

fn ac6(corpus: &Corpus) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0usize;
    for (a, f) in &corpus.formulas {
        for seed in 0..200 {
            ensure(globally_true(&random_model(a, 5, seed), f), || format!("{f} fails on model seed {seed} under {a}"))?;
            checks += 1;
        }
    }
    for (a, s) in &corpus.sequents {
        for seed in 0..200 {
            let m = random_model(a, 5, seed);
            let Some(i) = random_interpretation(&mut rng, &m, s) else { continue };
            let ok = sat_sequent(&m, &i, s).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{s} fails on model seed {seed} under {a}"))?;
            checks += 1;
        }
    }
    Ok(format!(
        "{} formulas and {} sequents, {checks} model checks, no counterexample",
        corpus.formulas.len(),
        corpus.sequents.len()
    ))
}

/// Random derivable nested sequents with their proofs, from refined tree proofs.
fn derivable_sources(rng: &mut ChaCha8Rng, count: usize) -> Vec<(AxiomSet, NestedProof)> {
    let mut out = Vec::new();
    while out.len() < count {
        let a = random_small_axioms(rng);
        let height = rng.gen_range(2..=6);
        let base = random_base_proof(rng, &a, height, true, false);
        let Ok(refined) = eliminate_structural(&base, &a) else { continue };
        let Ok(p) = labelled_to_nested(&refined) else { continue };
        out.push((a, p));
    }
    out
}

fn random_small_axioms(rng: &mut ChaCha8Rng) -> AxiomSet {
    let mut a = AxiomSet::from_pairs((0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(0..=2), rng.gen_range(0..=2))));
    if rng.gen_bool(0.3) {
        a = a.with_d();
    }
    a
}

fn find_subproof<'a>(p: &'a NestedProof, pred: &dyn Fn(&NestedSequent) -> bool) -> Option<&'a NestedProof> {
    if pred(&p.conclusion) {
        return Some(p);
    }
    p.premises.iter().find_map(|q| find_subproof(q, pred))
}

fn duplicate_input(s: &NestedSequent) -> Option<(Vec<usize>, Formula)> {
    s.preorder().into_iter().find_map(|(addr, n)| {
        let ins = n.inputs();
        ins.iter().enumerate().find(|(i, f)| ins[i + 1..].contains(f)).map(|(_, f)| (addr.clone(), f.clone()))
    })
}

fn sibling_pair(s: &NestedSequent) -> Option<Vec<usize>> {
    s.preorder().into_iter().find(|(_, n)| n.children().len() >= 2).map(|(a, _)| a)
}

fn ac7(corpus: &mut Corpus) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sources = derivable_sources(&mut rng, 100);
    let mut counts = [0usize; 4];
    let mut natural = [0usize; 2];
    let admit = |step: &StructuralStep, p: &NestedProof, a: &AxiomSet, corpus: &mut Corpus| -> Result<NestedProof, String> {
        let q = admit_structural(step, p, a).map_err(|e| format!("{step:?} on {}: {e}", p.conclusion))?;
        check_nested(&q, a).map_err(|e| e.to_string())?;
        ensure(q.height() <= p.height(), || format!("height {} > {}", q.height(), p.height()))?;
        corpus.nested(a, &q)?;
        Ok(q)
    };
    for (a, p) in &sources {
        admit(&StructuralStep::Necessitation, p, a, corpus)?;
        counts[0] += 1;

        let nodes = p.conclusion.preorder();
        let at = nodes[rng.gen_range(0..nodes.len())].0.clone();
        let delta = NestedSequent::new(
            (0..rng.gen_range(0..3)).map(|_| random_formula(&mut rng, 2)).collect(),
            None,
            if rng.gen_bool(0.5) { vec![NestedSequent::new(vec![random_formula(&mut rng, 1)], None, vec![])] } else { vec![] },
        );
        let weakened = admit(&StructuralStep::Weaken { at: at.clone(), delta }, p, a, corpus)?;
        counts[1] += 1;

        // contraction: a duplicate already inside the proof if there is one
        let (src, addr, f) = match find_subproof(p, &|s| duplicate_input(s).is_some()) {
            Some(sub) => {
                natural[0] += 1;
                let (addr, f) = duplicate_input(&sub.conclusion).unwrap();
                (sub.clone(), addr, f)
            }
            None => {
                let (addr, node) = &nodes[rng.gen_range(0..nodes.len())];
                let f = node.inputs().first().cloned().unwrap_or_else(|| random_formula(&mut rng, 1));
                let delta = NestedSequent::new(vec![f.clone(), f.clone()], None, vec![]);
                let twice = admit(&StructuralStep::Weaken { at: addr.clone(), delta }, p, a, corpus)?;
                (twice, addr.clone(), f)
            }
        };
        admit(&StructuralStep::Contract { at: addr, formula: f }, &src, a, corpus)?;
        counts[2] += 1;

        // merge: two sibling brackets inside the proof if there are any
        let (src, at) = match find_subproof(p, &|s| sibling_pair(s).is_some()) {
            Some(sub) => {
                natural[1] += 1;
                (sub.clone(), sibling_pair(&sub.conclusion).unwrap())
            }
            None => {
                let delta = NestedSequent::new(vec![], None, vec![NestedSequent::new(vec![random_formula(&mut rng, 1)], None, vec![])]);
                let extra = NestedSequent::new(vec![], None, vec![NestedSequent::new(vec![], None, vec![])]);
                let once = admit(&StructuralStep::Weaken { at: vec![], delta }, &weakened, a, corpus)?;
                let src = admit(&StructuralStep::Weaken { at: vec![], delta: extra }, &once, a, corpus)?;
                let at = sibling_pair(&src.conclusion).unwrap();
                (src, at)
            }
        };
        admit(&StructuralStep::Merge { at, left: 0, right: 1 }, &src, a, corpus)?;
        counts[3] += 1;
    }
    Ok(format!(
        "{} sources; (n) {} (w) {} (c) {} (m) {}; duplicates found in-proof {}, sibling brackets in-proof {}; no height increase",
        sources.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        natural[0],
        natural[1]
    ))
}

fn ac8(corpus: &mut Corpus) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let degenerate = [(0, 1), (2, 0), (0, 0), (0, 2), (1, 0)];
    let mut seen = std::collections::BTreeMap::<String, usize>::new();
    for i in 0..100 {
        let mut a = random_small_axioms(&mut rng);
        if i % 3 == 0 {
            let (n, k) = degenerate[(i / 3) % degenerate.len()];
            a = a.with_hsl(n, k);
        }
        let height = rng.gen_range(2..=6);
        let base = random_base_proof(&mut rng, &a, height, false, true);
        ensure(base.height() <= 6, || format!("proof {i} has height {}", base.height()))?;
        check_labelled(&base, &a, Mode::Base).map_err(|e| format!("proof {i}: generated proof rejected: {e}"))?;
        for node in base.nodes() {
            if let LRule::S { n, k } = node.rule {
                let kind = match (n, k) {
                    (0, 0) => "S0,0",
                    (0, _) => "S0,k",
                    (_, 0) => "Sn,0",
                    _ => "Sn,k",
                };
                *seen.entry(kind.into()).or_default() += 1;
            }
        }
        let refined = eliminate_structural(&base, &a).map_err(|e| format!("proof {i}: {e}"))?;
        ensure(refined.conclusion == base.conclusion, || format!("proof {i}: conclusion changed"))?;
        ensure(refined.structural_count() == 0, || format!("proof {i}: S(n,k) survived"))?;
        check_labelled(&refined, &a, Mode::Refined).map_err(|e| format!("proof {i}: output rejected: {e}"))?;
        corpus.labelled(&a, &base);
        corpus.labelled(&a, &refined);
    }
    for kind in ["S0,0", "S0,k", "Sn,0", "Sn,k"] {
        ensure(seen.contains_key(kind), || format!("no {kind} instance among the inputs"))?;
    }
    let mix: Vec<String> = seen.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    Ok(format!("100 proofs eliminated; S instances {}", mix.join(" ")))
}

fn main() -> ExitCode {
    let mut corpus = Corpus::default();
    let mut lines: Vec<(usize, Verdict, Duration, Duration)> = Vec::new();
    let mut run = |id: usize, limit: u64, f: &mut dyn FnMut(&mut Corpus) -> Verdict, corpus: &mut Corpus| {
        let start = Instant::now();
        let v = f(corpus);
        lines.push((id, v, start.elapsed(), Duration::from_secs(limit)));
    };
    run(1, 1, &mut ac1, &mut corpus);
    run(2, 1, &mut ac2, &mut corpus);
    run(3, 10, &mut |_| ac3(), &mut corpus);
    run(4, 60, &mut |_| ac4(), &mut corpus);
    // the per-goal bound of 60 s is checked inside
    run(5, 60 * 20, &mut ac5, &mut corpus);
    run(7, 600, &mut ac7, &mut corpus);
    run(8, 60, &mut ac8, &mut corpus);
    let start = Instant::now();
    let v6 = ac6(&corpus);
    lines.push((6, v6, start.elapsed(), Duration::from_secs(120)));
    lines.sort_by_key(|l| l.0);

    let mut failed = 0;
    for (id, verdict, took, limit) in lines {
        let verdict = match verdict {
            Ok(msg) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}; {msg}")),
            v => v,
        };
        match verdict {
            Ok(msg) => println!("AC{id} PASS ({took:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("AC{id} FAIL ({took:.2?}) {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

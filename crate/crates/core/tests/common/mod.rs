//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own decision procedures.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use hslnest::grammar::{Char, PropGraph};
use hslnest::models::Model;
use hslnest::syntax::{AxiomSet, Formula};

pub const BOUND: usize = 8;

/// Rewriting rules read straight off the axiom pairs: d -> b^n d^k and
/// b -> b^k d^n, as byte strings.
fn rules(a: &AxiomSet) -> Vec<(u8, Vec<u8>)> {
    let mut out = Vec::new();
    for &(n, k) in &a.hsl {
        let mut d = vec![b'b'; n as usize];
        d.extend(std::iter::repeat_n(b'd', k as usize));
        let mut b = vec![b'b'; k as usize];
        b.extend(std::iter::repeat_n(b'd', n as usize));
        out.push((b'd', d));
        out.push((b'b', b));
    }
    out
}

/// All strings of length at most `BOUND` reachable from `d` by rewriting,
/// never leaving the bound.
pub fn language_from_d(a: &AxiomSet) -> HashSet<Vec<u8>> {
    let rules = rules(a);
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::from([b"d".to_vec()]);
    seen.insert(b"d".to_vec());
    while let Some(s) = queue.pop_front() {
        for i in 0..s.len() {
            for (lhs, rhs) in &rules {
                if s[i] != *lhs || s.len() - 1 + rhs.len() > BOUND {
                    continue;
                }
                let mut t = s[..i].to_vec();
                t.extend_from_slice(rhs);
                t.extend_from_slice(&s[i + 1..]);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    seen
}

/// Every string spelled by a walk of at most `BOUND` edges from `w` to `u`.
pub fn walk_strings(pg: &PropGraph, w: &str, u: &str) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(w.to_string(), Vec::new())];
    while let Some((at, s)) = stack.pop() {
        if at == u {
            out.insert(s.clone());
        }
        if s.len() == BOUND {
            continue;
        }
        for (x, c, y) in pg.edges() {
            if *x == at {
                let mut t = s.clone();
                t.push(if *c == Char::Dia { b'd' } else { b'b' });
                stack.push((y.clone(), t));
            }
        }
    }
    out
}

/// Whether some walk of at most `BOUND` edges from `w` to `u` spells a
/// string derivable from `d`.
pub fn brute_reach(pg: &PropGraph, a: &AxiomSet, w: &str, u: &str) -> bool {
    if !pg.contains_node(w) || !pg.contains_node(u) {
        return false;
    }
    let lang = language_from_d(a);
    walk_strings(pg, w, u).iter().any(|s| lang.contains(s))
}

/// Kripke evaluation with every quantifier spelled out.
pub fn naive_eval(m: &Model, w: usize, f: &Formula) -> bool {
    let n = m.worlds.len();
    match f {
        Formula::Atom(p) => m.val[w].contains(p),
        Formula::Bot => false,
        Formula::And(a, b) => naive_eval(m, w, a) && naive_eval(m, w, b),
        Formula::Or(a, b) => naive_eval(m, w, a) || naive_eval(m, w, b),
        Formula::Imp(a, b) => {
            for w2 in 0..n {
                if m.leq[w][w2] && naive_eval(m, w2, a) && !naive_eval(m, w2, b) {
                    return false;
                }
            }
            true
        }
        Formula::Dia(a) => {
            for v in 0..n {
                if m.acc[w][v] && naive_eval(m, v, a) {
                    return true;
                }
            }
            false
        }
        Formula::Box(a) => {
            for w2 in 0..n {
                for v in 0..n {
                    if m.leq[w][w2] && m.acc[w2][v] && !naive_eval(m, v, a) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Frame condition of an HSL pair: w R^n u and w R^k v imply u R v.
pub fn naive_hsl_holds(m: &Model, n: u32, k: u32) -> bool {
    let size = m.worlds.len();
    let step = |from: &BTreeSet<usize>| -> BTreeSet<usize> {
        from.iter().flat_map(|&x| (0..size).filter(move |&y| m.acc[x][y])).collect()
    };
    for w in 0..size {
        let mut after_n = BTreeSet::from([w]);
        for _ in 0..n {
            after_n = step(&after_n);
        }
        let mut after_k = BTreeSet::from([w]);
        for _ in 0..k {
            after_k = step(&after_k);
        }
        for &u in &after_n {
            for &v in &after_k {
                if !m.acc[u][v] {
                    return false;
                }
            }
        }
    }
    true
}

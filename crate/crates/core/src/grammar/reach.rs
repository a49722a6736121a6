//! CFL-reachability: the least relation `Reach(X, x, y)` such that some path
//! from `x` to `y` spells a string derivable from the letter `X`.
//!
//! Productions are handled through dotted items `(p, r, x, y)`: the first `r`
//! letters of production `p` derive the string of some path `x → y`. Every
//! fact keeps the justification it was first derived with, which is enough to
//! rebuild a witness path.

use std::collections::{HashMap, VecDeque};

use super::{Char, Grammar, GrammarError, PropGraph, PropPath};

#[derive(Clone, Copy, Debug)]
enum ReachWhy {
    Edge,
    Complete(usize),
}

#[derive(Clone, Copy, Debug)]
enum ItemWhy {
    Start,
    Extend { prev: usize, via: usize },
}

#[derive(Clone, Copy, Debug)]
enum Fact {
    Reach(usize),
    Item(usize),
}

/// All `Reach` facts of one graph under one grammar.
pub struct Reachability {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    prods: Vec<(Char, Vec<Char>)>,
    item_offset: Vec<usize>,
    reach: Vec<Option<ReachWhy>>,
    items: Vec<Option<ItemWhy>>,
}

impl Reachability {
    pub fn compute(pg: &PropGraph, g: &Grammar) -> Reachability {
        let nodes: Vec<String> = pg.nodes().iter().cloned().collect();
        let index: HashMap<String, usize> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = nodes.len();
        let nn = n * n;
        let prods: Vec<(Char, Vec<Char>)> = g.productions().map(|p| (p.lhs, p.rhs.chars().to_vec())).collect();
        let mut item_offset = Vec::with_capacity(prods.len());
        let mut total = 0;
        for (_, rhs) in &prods {
            item_offset.push(total);
            total += (rhs.len() + 1) * nn;
        }
        let mut st = Reachability {
            nodes,
            index,
            prods,
            item_offset,
            reach: vec![None; 2 * nn],
            items: vec![None; total],
        };

        // FIFO order tends to give short witnesses
        let mut work: VecDeque<Fact> = VecDeque::new();
        // reach_out[c * n + x] = targets y with Reach(c, x, y)
        let mut reach_out: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
        // waiting[c * n + y] = items ending at y whose next letter is c
        let mut waiting: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];

        for (x, c, y) in pg.edges() {
            let (x, y) = (st.index[x], st.index[y]);
            let key = st.reach_key(*c, x, y);
            if st.reach[key].is_none() {
                st.reach[key] = Some(ReachWhy::Edge);
                reach_out[c.index() * n + x].push(y);
                work.push_back(Fact::Reach(key));
            }
        }
        for p in 0..st.prods.len() {
            for x in 0..n {
                let key = st.item_key(p, 0, x, x);
                st.items[key] = Some(ItemWhy::Start);
                work.push_back(Fact::Item(key));
            }
        }

        while let Some(fact) = work.pop_front() {
            match fact {
                Fact::Reach(key) => {
                    let (c, mid, y) = st.decode_reach(key);
                    let pending = waiting[c.index() * n + mid].clone();
                    for item in pending {
                        let (p, r, x, _) = st.decode_item(item);
                        st.add_item(p, r + 1, x, y, ItemWhy::Extend { prev: item, via: key }, &mut work);
                    }
                }
                Fact::Item(key) => {
                    let (p, r, x, y) = st.decode_item(key);
                    let (lhs, ref rhs) = st.prods[p];
                    if r == rhs.len() {
                        let rk = st.reach_key(lhs, x, y);
                        if st.reach[rk].is_none() {
                            st.reach[rk] = Some(ReachWhy::Complete(key));
                            reach_out[lhs.index() * n + x].push(y);
                            work.push_back(Fact::Reach(rk));
                        }
                    } else {
                        let next = rhs[r];
                        waiting[next.index() * n + y].push(key);
                        let targets = reach_out[next.index() * n + y].clone();
                        for z in targets {
                            let via = st.reach_key(next, y, z);
                            st.add_item(p, r + 1, x, z, ItemWhy::Extend { prev: key, via }, &mut work);
                        }
                    }
                }
            }
        }
        st
    }

    fn n(&self) -> usize {
        self.nodes.len()
    }

    fn reach_key(&self, c: Char, x: usize, y: usize) -> usize {
        let n = self.n();
        c.index() * n * n + x * n + y
    }

    fn decode_reach(&self, key: usize) -> (Char, usize, usize) {
        let n = self.n();
        let c = if key / (n * n) == 0 { Char::Dia } else { Char::BDia };
        let rest = key % (n * n);
        (c, rest / n, rest % n)
    }

    fn item_key(&self, p: usize, r: usize, x: usize, y: usize) -> usize {
        let n = self.n();
        self.item_offset[p] + r * n * n + x * n + y
    }

    fn decode_item(&self, key: usize) -> (usize, usize, usize, usize) {
        let n = self.n();
        // offsets are strictly increasing whenever the graph has a node
        let p = match self.item_offset.binary_search(&key) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let rest = key - self.item_offset[p];
        (p, rest / (n * n), (rest % (n * n)) / n, rest % n)
    }

    fn add_item(&mut self, p: usize, r: usize, x: usize, y: usize, why: ItemWhy, work: &mut VecDeque<Fact>) {
        let key = self.item_key(p, r, x, y);
        if self.items[key].is_none() {
            self.items[key] = Some(why);
            work.push_back(Fact::Item(key));
        }
    }

    fn lookup(&self, node: &str) -> Result<usize, GrammarError> {
        self.index.get(node).copied().ok_or_else(|| GrammarError::UnknownNode(node.to_string()))
    }

    /// Whether some path from `w` to `u` spells a string derivable from `c`.
    pub fn holds(&self, c: Char, w: &str, u: &str) -> Result<bool, GrammarError> {
        let (x, y) = (self.lookup(w)?, self.lookup(u)?);
        Ok(self.reach[self.reach_key(c, x, y)].is_some())
    }

    /// A witness path from `w` to `u` whose string lies in `L(c)`.
    pub fn path_for(&self, c: Char, w: &str, u: &str) -> Result<Option<PropPath>, GrammarError> {
        let (x, y) = (self.lookup(w)?, self.lookup(u)?);
        let key = self.reach_key(c, x, y);
        Ok(self.reach[key].map(|_| self.rebuild_reach(key)))
    }

    pub fn path(&self, w: &str, u: &str) -> Result<Option<PropPath>, GrammarError> {
        self.path_for(Char::Dia, w, u)
    }

    /// Every ordered pair `(w, u)` with `Reach(◇, w, u)`.
    pub fn pairs(&self) -> Vec<(&str, &str)> {
        let n = self.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.reach[self.reach_key(Char::Dia, x, y)].is_some() {
                    out.push((self.nodes[x].as_str(), self.nodes[y].as_str()));
                }
            }
        }
        out
    }

    fn rebuild_reach(&self, key: usize) -> PropPath {
        let (c, x, y) = self.decode_reach(key);
        match self.reach[key].expect("rebuilding a derived fact") {
            ReachWhy::Edge => PropPath::empty(&self.nodes[x]).step(c, &self.nodes[y]),
            ReachWhy::Complete(item) => self.rebuild_item(item),
        }
    }

    fn rebuild_item(&self, key: usize) -> PropPath {
        let (_, _, x, _) = self.decode_item(key);
        match self.items[key].expect("rebuilding a derived item") {
            ItemWhy::Start => PropPath::empty(&self.nodes[x]),
            ItemWhy::Extend { prev, via } => self.rebuild_item(prev).join(&self.rebuild_reach(via)),
        }
    }
}

/// Some path from `w` to `u` in `pg` whose string is in `L(◇)`, if any.
pub fn reachable(pg: &PropGraph, g: &Grammar, w: &str, u: &str) -> Result<Option<PropPath>, GrammarError> {
    Reachability::compute(pg, g).path(w, u)
}

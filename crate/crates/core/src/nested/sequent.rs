use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::PropGraph;
use crate::syntax::{parse_formula, Formula, Polarity};

/// Position of a node: child indices from the root, in canonical order.
pub type Address = Vec<usize>;

/// A tree of multisets of formulas. Inputs are `A^i`, the optional output is
/// `A^o`, children are bracketed. Values are kept canonical (sorted inputs,
/// children sorted by their own canonical form), so the derived equality is
/// multiset equality and child indices are stable addresses.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NestedSequent {
    inputs: Vec<Formula>,
    output: Option<Formula>,
    children: Vec<NestedSequent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NestedError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("no node at address {0:?}")]
    BadAddress(Address),
    #[error("sequent has no output formula")]
    NoOutput,
    #[error("sequent has {0} output formulas, a full sequent has exactly one")]
    NotFull(usize),
}

impl NestedSequent {
    pub fn new(inputs: Vec<Formula>, output: Option<Formula>, children: Vec<NestedSequent>) -> NestedSequent {
        let mut inputs = inputs;
        inputs.sort();
        let mut children = children;
        children.sort();
        NestedSequent { inputs, output, children }
    }

    pub fn empty() -> NestedSequent {
        NestedSequent::default()
    }

    /// `A^o` alone.
    pub fn goal(f: Formula) -> NestedSequent {
        NestedSequent::new(Vec::new(), Some(f), Vec::new())
    }

    pub fn inputs(&self) -> &[Formula] {
        &self.inputs
    }

    pub fn output(&self) -> Option<&Formula> {
        self.output.as_ref()
    }

    pub fn children(&self) -> &[NestedSequent] {
        &self.children
    }

    pub fn node(&self, addr: &[usize]) -> Option<&NestedSequent> {
        let mut cur = self;
        for &i in addr {
            cur = cur.children.get(i)?;
        }
        Some(cur)
    }

    pub fn get(&self, addr: &[usize]) -> Result<&NestedSequent, NestedError> {
        self.node(addr).ok_or_else(|| NestedError::BadAddress(addr.to_vec()))
    }

    /// All nodes in preorder with their addresses; the index in this list is
    /// the node's id `w<i>`.
    pub fn preorder(&self) -> Vec<(Address, &NestedSequent)> {
        let mut out = Vec::new();
        fn go<'a>(s: &'a NestedSequent, addr: &mut Address, out: &mut Vec<(Address, &'a NestedSequent)>) {
            out.push((addr.clone(), s));
            for (i, c) in s.children.iter().enumerate() {
                addr.push(i);
                go(c, addr, out);
                addr.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn formula_count(&self) -> usize {
        self.inputs.len() + usize::from(self.output.is_some()) + self.children.iter().map(|c| c.formula_count()).sum::<usize>()
    }

    /// Bracket nesting depth; a single node has depth 0.
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn output_count(&self) -> usize {
        usize::from(self.output.is_some()) + self.children.iter().map(|c| c.output_count()).sum::<usize>()
    }

    pub fn is_full(&self) -> bool {
        self.output_count() == 1
    }

    pub fn is_lhs(&self) -> bool {
        self.output_count() == 0
    }

    pub fn check_full(&self) -> Result<(), NestedError> {
        match self.output_count() {
            1 => Ok(()),
            n => Err(NestedError::NotFull(n)),
        }
    }

    /// Address of the node holding the output formula.
    pub fn output_address(&self) -> Option<Address> {
        self.preorder().into_iter().find(|(_, n)| n.output.is_some()).map(|(a, _)| a)
    }

    /// Canonical node id `w<i>` of the node at `addr`.
    pub fn node_id(&self, addr: &[usize]) -> Option<String> {
        self.preorder().iter().position(|(a, _)| a == addr).map(|i| format!("w{i}"))
    }

    pub fn address_of_id(&self, id: &str) -> Option<Address> {
        let i: usize = id.strip_prefix('w')?.parse().ok()?;
        self.preorder().into_iter().nth(i).map(|(a, _)| a)
    }
}

/// `Σ↓`: the same sequent with its output formula deleted.
pub fn output_pruning(s: &NestedSequent) -> Result<NestedSequent, NestedError> {
    let addr = s.output_address().ok_or(NestedError::NoOutput)?;
    let mut raw = RawNode::from_sequent(s, &mut |_| ());
    raw.at_mut(&addr).expect("address from preorder").output = None;
    Ok(raw.finish().0)
}

/// `PG(Σ)`: node ids `w0, w1, …` in canonical preorder (the root is always
/// present), an edge pair per bracket, and the polarised formulas per node.
pub fn prop_graph_nested(s: &NestedSequent) -> PropGraph {
    let mut g = PropGraph::new();
    let order = s.preorder();
    let ids: BTreeMap<&Address, String> = order.iter().enumerate().map(|(i, (a, _))| (a, format!("w{i}"))).collect();
    for (addr, node) in &order {
        let id = &ids[addr];
        g.add_node(id);
        for (i, _) in node.children.iter().enumerate() {
            let mut c = addr.clone();
            c.push(i);
            g.relate(id, &ids[&c]);
        }
        for f in &node.inputs {
            g.labels.push((id.clone(), Polarity::Input, f.clone()));
        }
        if let Some(f) = &node.output {
            g.labels.push((id.clone(), Polarity::Output, f.clone()));
        }
    }
    g
}

/// Mutable, unsorted tree used while applying rules. Every node carries a tag
/// that survives re-sorting, which is how node identities are tracked from a
/// conclusion to its premises.
#[derive(Clone, Debug)]
pub(crate) struct RawNode<T> {
    pub inputs: Vec<Formula>,
    pub output: Option<Formula>,
    pub children: Vec<RawNode<T>>,
    pub tag: T,
}

impl<T: Clone> RawNode<T> {
    pub fn leaf(tag: T) -> RawNode<T> {
        RawNode { inputs: Vec::new(), output: None, children: Vec::new(), tag }
    }

    pub fn from_sequent(s: &NestedSequent, tag: &mut impl FnMut(&Address) -> T) -> RawNode<T> {
        fn go<T>(s: &NestedSequent, addr: &mut Address, tag: &mut impl FnMut(&Address) -> T) -> RawNode<T> {
            let t = tag(addr);
            let mut children = Vec::with_capacity(s.children.len());
            for (i, c) in s.children.iter().enumerate() {
                addr.push(i);
                children.push(go(c, addr, tag));
                addr.pop();
            }
            RawNode { inputs: s.inputs.clone(), output: s.output.clone(), children, tag: t }
        }
        go(s, &mut Vec::new(), tag)
    }

    pub fn at_mut(&mut self, addr: &[usize]) -> Option<&mut RawNode<T>> {
        let mut cur = self;
        for &i in addr {
            cur = cur.children.get_mut(i)?;
        }
        Some(cur)
    }

    /// Removes the output formula wherever it is.
    pub fn clear_output(&mut self) {
        self.output = None;
        for c in &mut self.children {
            c.clear_output();
        }
    }

    /// Sorts into canonical form; returns the tag of every canonical address.
    pub fn finish(self) -> (NestedSequent, BTreeMap<Address, T>) {
        fn go<T>(n: RawNode<T>) -> (NestedSequent, Vec<(Address, T)>) {
            let mut kids: Vec<(NestedSequent, Vec<(Address, T)>)> = n.children.into_iter().map(go).collect();
            kids.sort_by(|a, b| a.0.cmp(&b.0));
            let mut map = vec![(Vec::new(), n.tag)];
            let mut children = Vec::with_capacity(kids.len());
            for (i, (seq, sub)) in kids.into_iter().enumerate() {
                children.push(seq);
                for (mut a, t) in sub {
                    a.insert(0, i);
                    map.push((a, t));
                }
            }
            let mut inputs = n.inputs;
            inputs.sort();
            (NestedSequent { inputs, output: n.output, children }, map)
        }
        let (s, map) = go(self);
        (s, map.into_iter().collect())
    }
}

fn render_items(s: &NestedSequent) -> Vec<String> {
    let mut items = Vec::new();
    if let Some(f) = &s.output {
        items.push(format!("{f}^o"));
    }
    for f in &s.inputs {
        items.push(format!("{f}^i"));
    }
    for c in &s.children {
        let inner = render_items(c);
        if inner.is_empty() {
            items.push("[]".into());
        } else {
            items.push(format!("[ {} ]", inner.join(", ")));
        }
    }
    items
}

impl fmt::Display for NestedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_items(self).join(", "))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn starts_formula(c: char) -> bool {
    c.is_ascii_alphabetic() || "(<[~¬∼◇□⊥".contains(c)
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, NestedError> {
        Err(NestedError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    /// Items up to a closing bracket (if `nested`) or the end of input.
    fn items(&mut self, nested: bool) -> Result<NestedSequent, NestedError> {
        let mut inputs = Vec::new();
        let mut output = None;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None if nested => return self.err("unclosed bracket"),
                None => break,
                Some(']') if nested => break,
                Some(']') => return self.err("unbalanced ]"),
                _ => {}
            }
            if self.is_bracket() {
                self.pos += 1;
                let child = self.items(true)?;
                self.pos += 1;
                children.push(child);
            } else {
                let (f, pol) = self.formula()?;
                match pol {
                    Polarity::Input => inputs.push(f),
                    Polarity::Output if output.is_none() => output = Some(f),
                    Polarity::Output => return self.err("two output formulas in one node"),
                }
            }
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') if nested => break,
                None if !nested => break,
                _ => return self.err("expected , between items"),
            }
        }
        Ok(NestedSequent::new(inputs, output, children))
    }

    /// `[` opens a bracket unless it is the box `[]` in front of a formula.
    fn is_bracket(&self) -> bool {
        let r = self.rest();
        if !r.starts_with('[') {
            return false;
        }
        match r.strip_prefix("[]") {
            Some(after) => !after.trim_start().chars().next().is_some_and(starts_formula),
            None => true,
        }
    }

    fn formula(&mut self) -> Result<(Formula, Polarity), NestedError> {
        let start = self.pos;
        let Some(end) = self.rest().find(['^', '•', '°']) else { return self.err("formula without ^i or ^o") };
        let text = &self.src[start..start + end];
        let f = parse_formula(text).map_err(|e| NestedError::Syntax { pos: start + e.pos, msg: e.msg })?;
        self.pos = start + end;
        let pol = if let Some(r) = self.rest().strip_prefix('^') {
            let pol = match r.chars().next() {
                Some('i') => Polarity::Input,
                Some('o') => Polarity::Output,
                _ => {
                    self.pos += 1;
                    return self.err("expected i or o after ^");
                }
            };
            self.pos += 2;
            pol
        } else if self.rest().starts_with('•') {
            self.pos += '•'.len_utf8();
            Polarity::Input
        } else {
            self.pos += '°'.len_utf8();
            Polarity::Output
        };
        Ok((f, pol))
    }
}

impl FromStr for NestedSequent {
    type Err = NestedError;

    /// `p -> q^o, [ p^i, [ []p^i ] ]`; `•` and `°` may replace `^i` and `^o`,
    /// and `[]` followed by `,`, `]` or the end is an empty bracket.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed == "∅" {
            return Ok(NestedSequent::empty());
        }
        Parser { src: s, pos: 0 }.items(false)
    }
}

impl Serialize for NestedSequent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NestedSequent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(t: &str) -> NestedSequent {
        t.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let s = n("p -> q^o, [ p^i, [ []p^i ] ]");
        assert_eq!(s.to_string(), "p -> q^o, [ p^i, [ []p^i ] ]");
        assert!(s.is_full());
        assert_eq!(s.node_count(), 3);
        assert_eq!(n("p⊃q°, [p•, [□p•]]"), s);
        let e = n("[], [ [] ]");
        assert_eq!(e.children().len(), 2);
        assert_eq!(e.to_string(), "[], [ [] ]");
        assert_eq!(n("[][]p^i, [[]]").inputs().len(), 1);
        assert_eq!(n(""), NestedSequent::empty());
        assert_eq!(n("∅"), NestedSequent::empty());
    }

    #[test]
    fn parse_errors() {
        for bad in ["p", "p^x", "p^o, q^o", "[ p^i", "p^i ]", "p^i q^i", "p &^i"] {
            assert!(bad.parse::<NestedSequent>().is_err(), "{bad}");
        }
        // two outputs in different nodes parse but are not full
        assert!(!n("p^o, [ q^o ]").is_full());
    }

    #[test]
    fn comma_commutes() {
        assert_eq!(n("q^i, p^i, [ r^i ], [ s^o ]"), n("[ s^o ], p^i, [ r^i ], q^i"));
        assert_ne!(n("p^i, p^i, q^o"), n("p^i, q^o"));
    }

    #[test]
    fn pruning() {
        assert_eq!(output_pruning(&n("p^o, [ q^i ]")).unwrap(), n("[ q^i ]"));
        assert_eq!(output_pruning(&n("false^i, [ q -> r^o ]")).unwrap(), n("false^i, []"));
        assert_eq!(output_pruning(&n("[ q^i ]")), Err(NestedError::NoOutput));
    }

    #[test]
    fn propagation_graph() {
        let g = prop_graph_nested(&NestedSequent::empty());
        assert_eq!(g.nodes().len(), 1);
        assert!(g.edges().is_empty());
        let s = n("p -> q^o, [ p^i, [ []p^i ] ]");
        let g = prop_graph_nested(&s);
        assert_eq!(g.nodes().len(), 3);
        assert_eq!(g.edges().len(), 4);
        assert!(g.has_edge("w0", crate::grammar::Char::Dia, "w1"));
        assert!(g.has_edge("w2", crate::grammar::Char::BDia, "w1"));
        assert_eq!(g.labels.len(), 3);
        let g = prop_graph_nested(&n("[], []"));
        assert_eq!(g.nodes().len(), 3);
    }

    #[test]
    fn ids_and_addresses() {
        let s = n("a^i, [ b^i, [ c^i ] ], [ d^i ]");
        assert_eq!(s.node_id(&[]), Some("w0".into()));
        let order: Vec<Address> = s.preorder().into_iter().map(|(a, _)| a).collect();
        assert_eq!(order, vec![vec![], vec![0], vec![0, 0], vec![1]]);
        assert_eq!(s.address_of_id("w2"), Some(vec![0, 0]));
        assert_eq!(s.address_of_id("w9"), None);
    }
}

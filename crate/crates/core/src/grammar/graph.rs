use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Char, Word};
use crate::syntax::{Formula, Polarity};

/// Edge-labelled graph read off a sequent. Edges only enter through
/// [`PropGraph::relate`], which keeps the edge set converse-closed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropGraph {
    nodes: BTreeSet<String>,
    edges: BTreeSet<(String, Char, String)>,
    /// Formula occurrences per node; only the nested graph fills this in.
    pub labels: Vec<(String, Polarity, Formula)>,
}

impl PropGraph {
    pub fn new() -> PropGraph {
        PropGraph::default()
    }

    pub fn add_node(&mut self, n: &str) {
        if !self.nodes.contains(n) {
            self.nodes.insert(n.to_string());
        }
    }

    /// Records `x R y`: the edges `(x, ◇, y)` and `(y, ◆, x)`.
    pub fn relate(&mut self, x: &str, y: &str) {
        self.add_node(x);
        self.add_node(y);
        self.edges.insert((x.to_string(), Char::Dia, y.to_string()));
        self.edges.insert((y.to_string(), Char::BDia, x.to_string()));
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<(String, Char, String)> {
        &self.edges
    }

    pub fn contains_node(&self, n: &str) -> bool {
        self.nodes.contains(n)
    }

    pub fn has_edge(&self, x: &str, c: Char, y: &str) -> bool {
        // BTreeSet<(String, ..)> cannot be probed with &str without allocating
        self.edges.contains(&(x.to_string(), c, y.to_string()))
    }
}

/// Alternating sequence `w₁, c₁, w₂, …, wₙ`; a single node is the empty path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PropPath {
    nodes: Vec<String>,
    chars: Vec<Char>,
}

impl PropPath {
    pub fn empty(at: &str) -> PropPath {
        PropPath { nodes: vec![at.to_string()], chars: Vec::new() }
    }

    pub fn from_parts(nodes: Vec<String>, chars: Vec<Char>) -> Option<PropPath> {
        (nodes.len() == chars.len() + 1).then_some(PropPath { nodes, chars })
    }

    pub fn step(mut self, c: Char, to: &str) -> PropPath {
        self.chars.push(c);
        self.nodes.push(to.to_string());
        self
    }

    pub fn start(&self) -> &str {
        &self.nodes[0]
    }

    pub fn end(&self) -> &str {
        self.nodes.last().expect("paths have at least one node")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn chars(&self) -> &[Char] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// The triples `(wᵢ, cᵢ, wᵢ₊₁)`.
    pub fn steps(&self) -> impl Iterator<Item = (&str, Char, &str)> + '_ {
        self.chars.iter().enumerate().map(|(i, &c)| (self.nodes[i].as_str(), c, self.nodes[i + 1].as_str()))
    }

    pub fn word(&self) -> Word {
        Word(self.chars.clone())
    }

    pub fn converse(&self) -> PropPath {
        PropPath {
            nodes: self.nodes.iter().rev().cloned().collect(),
            chars: self.chars.iter().rev().map(|c| c.converse()).collect(),
        }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn join(mut self, other: &PropPath) -> PropPath {
        assert_eq!(self.end(), other.start(), "joined paths must meet");
        self.chars.extend_from_slice(&other.chars);
        self.nodes.extend_from_slice(&other.nodes[1..]);
        self
    }

    pub fn is_path_in(&self, g: &PropGraph) -> bool {
        self.nodes.iter().all(|n| g.contains_node(n)) && self.steps().all(|(x, c, y)| g.has_edge(x, c, y))
    }

    /// Renames every node.
    pub fn map_nodes(&self, mut f: impl FnMut(&str) -> String) -> PropPath {
        PropPath { nodes: self.nodes.iter().map(|n| f(n)).collect(), chars: self.chars.clone() }
    }

    fn to_tokens(&self) -> Vec<String> {
        let mut out = vec![self.nodes[0].clone()];
        for (i, c) in self.chars.iter().enumerate() {
            out.push(c.as_char().to_string());
            out.push(self.nodes[i + 1].clone());
        }
        out
    }

    fn from_tokens(toks: &[String]) -> Result<PropPath, PathParseError> {
        if toks.len().is_multiple_of(2) {
            return Err(PathParseError("a path alternates node, letter, node, ... and has odd length".into()));
        }
        let mut nodes = Vec::new();
        let mut chars = Vec::new();
        for (i, t) in toks.iter().enumerate() {
            if i % 2 == 0 {
                if t.is_empty() {
                    return Err(PathParseError("empty node name".into()));
                }
                nodes.push(t.clone());
            } else {
                let mut it = t.chars();
                match (it.next().and_then(Char::from_char), it.next()) {
                    (Some(c), None) => chars.push(c),
                    _ => return Err(PathParseError(format!("bad letter {t:?}"))),
                }
            }
        }
        Ok(PropPath { nodes, chars })
    }
}

impl fmt::Display for PropPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tokens().join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad path: {0}")]
pub struct PathParseError(pub String);

impl FromStr for PropPath {
    type Err = PathParseError;

    /// `w, b, u, d, v` (commas and/or whitespace).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks: Vec<String> =
            s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(String::from).collect();
        PropPath::from_tokens(&toks)
    }
}

impl Serialize for PropPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_tokens().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PropPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let toks = Vec::<String>::deserialize(d)?;
        PropPath::from_tokens(&toks).map_err(serde::de::Error::custom)
    }
}

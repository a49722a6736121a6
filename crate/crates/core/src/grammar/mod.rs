//! Semi-Thue grammars over the two-letter alphabet `{◇, ◆}`, string
//! derivability, and grammar-constrained reachability over propagation graphs.
//!
//! Letters print as `d` (◇, forward along the accessibility relation) and `b`
//! (◆, backward).

mod cyk;
mod graph;
mod reach;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::AxiomSet;

pub use cyk::derives;
pub use graph::{PropGraph, PropPath};
pub use reach::{reachable, Reachability};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Char {
    /// ◇
    Dia,
    /// ◆
    BDia,
}

impl Char {
    pub fn converse(self) -> Char {
        match self {
            Char::Dia => Char::BDia,
            Char::BDia => Char::Dia,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Char::Dia => 0,
            Char::BDia => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Char::Dia => 'd',
            Char::BDia => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Char> {
        match c {
            'd' | '◇' => Some(Char::Dia),
            'b' | '◆' => Some(Char::BDia),
            _ => None,
        }
    }
}

impl fmt::Display for Char {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A string over `{◇, ◆}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Char>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn repeat(c: Char, n: u32) -> Word {
        Word(vec![c; n as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn chars(&self) -> &[Char] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reversal with every letter flipped; an involution.
    pub fn converse(&self) -> Word {
        Word(self.0.iter().rev().map(|c| c.converse()).collect())
    }
}

impl From<Vec<Char>> for Word {
    fn from(v: Vec<Char>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad letter {0:?} in word (expected d or b)")]
pub struct WordParseError(pub char);

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" || s == "e" {
            return Ok(Word::empty());
        }
        s.chars().map(|c| Char::from_char(c).ok_or(WordParseError(c))).collect::<Result<Vec<_>, _>>().map(Word)
    }
}

/// String converse, free-function form.
pub fn converse_string(s: &Word) -> Word {
    s.converse()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Production {
    pub lhs: Char,
    pub rhs: Word,
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// A set of productions. [`Grammar::from_axioms`] builds the grammar of an
/// axiom set; [`Grammar::new`] accepts arbitrary productions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grammar {
    productions: BTreeSet<Production>,
}

impl Grammar {
    pub fn new(productions: impl IntoIterator<Item = Production>) -> Grammar {
        Grammar { productions: productions.into_iter().collect() }
    }

    /// `◇ ⟶ ◆ⁿ◇ᵏ` and `◆ ⟶ ◆ᵏ◇ⁿ` for every HSL pair `(n, k)`; seriality adds nothing.
    pub fn from_axioms(a: &AxiomSet) -> Grammar {
        let mut productions = BTreeSet::new();
        for &(n, k) in &a.hsl {
            productions.insert(Production {
                lhs: Char::Dia,
                rhs: Word::repeat(Char::BDia, n).concat(&Word::repeat(Char::Dia, k)),
            });
            productions.insert(Production {
                lhs: Char::BDia,
                rhs: Word::repeat(Char::BDia, k).concat(&Word::repeat(Char::Dia, n)),
            });
        }
        Grammar { productions }
    }

    pub fn productions(&self) -> impl Iterator<Item = &Production> {
        self.productions.iter()
    }

    pub fn len(&self) -> usize {
        self.productions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.productions.is_empty()
    }

    pub fn contains(&self, p: &Production) -> bool {
        self.productions.contains(p)
    }

    /// Letters that derive the empty string.
    pub fn nullable(&self) -> [bool; 2] {
        let mut null = [false; 2];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if !null[p.lhs.index()] && p.rhs.chars().iter().all(|c| null[c.index()]) {
                    null[p.lhs.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                return null;
            }
        }
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.productions.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All strings reachable from `s` by rewriting one letter with one production.
pub fn one_step(g: &Grammar, s: &Word) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for (i, c) in s.chars().iter().enumerate() {
        for p in g.productions().filter(|p| p.lhs == *c) {
            let mut v = s.chars()[..i].to_vec();
            v.extend_from_slice(p.rhs.chars());
            v.extend_from_slice(&s.chars()[i + 1..]);
            out.insert(Word(v));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("node {0:?} is not in the propagation graph")]
    UnknownNode(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn converse_of_strings() {
        assert_eq!(converse_string(&Word::empty()), Word::empty());
        assert_eq!(converse_string(&w("bbd")), w("bdd"));
        assert_eq!(converse_string(&w("d")), w("b"));
    }

    #[test]
    fn grammar_of_axioms() {
        let g = Grammar::from_axioms(&AxiomSet::empty().with_hsl(2, 1));
        assert_eq!(g, Grammar::new([
            Production { lhs: Char::Dia, rhs: w("bbd") },
            Production { lhs: Char::BDia, rhs: w("bdd") },
        ]));
        let g = Grammar::from_axioms(&AxiomSet::empty().with_hsl(1, 1));
        assert_eq!(g, Grammar::new([
            Production { lhs: Char::Dia, rhs: w("bd") },
            Production { lhs: Char::BDia, rhs: w("bd") },
        ]));
        assert!(Grammar::from_axioms(&AxiomSet::empty().with_d()).is_empty());
        let g = Grammar::from_axioms(&AxiomSet::empty().with_hsl(0, 0));
        assert_eq!(g, Grammar::new([
            Production { lhs: Char::Dia, rhs: Word::empty() },
            Production { lhs: Char::BDia, rhs: Word::empty() },
        ]));
        assert_eq!(g.nullable(), [true, true]);
    }

    #[test]
    fn one_step_rewrites() {
        let g11 = Grammar::from_axioms(&AxiomSet::empty().with_hsl(1, 1));
        assert_eq!(one_step(&g11, &w("d")), [w("bd")].into_iter().collect());
        assert!(one_step(&g11, &Word::empty()).is_empty());
        let g21 = Grammar::from_axioms(&AxiomSet::empty().with_hsl(2, 1));
        assert_eq!(one_step(&g21, &w("dd")), [w("bbdd"), w("dbbd")].into_iter().collect());
    }

    #[test]
    fn pair_closure_of_axiom_grammars() {
        let a = AxiomSet::from_pairs([(0, 0), (1, 2), (3, 0)]);
        let g = Grammar::from_axioms(&a);
        for &(n, k) in &a.hsl {
            let dia = Production { lhs: Char::Dia, rhs: Word::repeat(Char::BDia, n).concat(&Word::repeat(Char::Dia, k)) };
            let bdia = Production { lhs: Char::BDia, rhs: Word::repeat(Char::BDia, k).concat(&Word::repeat(Char::Dia, n)) };
            assert!(g.contains(&dia) && g.contains(&bdia));
            assert_eq!(dia.rhs.len(), (n + k) as usize);
        }
    }
}

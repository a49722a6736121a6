//! Derivability by dynamic programming over spans of the target string.
//!
//! Every production has a single letter on its left, so `s ⇒* t` holds iff
//! `t` splits into consecutive pieces derived by the letters of `s`. The table
//! records, for every span `t[i..j]` and letter `X`, whether `X ⇒* t[i..j]`.
//! Spans are filled by increasing length; within one length the entries are
//! iterated to a fixpoint because productions whose other letters are
//! nullable let a letter derive a span through another letter deriving the
//! very same span.

use super::{Char, Grammar, Word};

pub(crate) struct SpanTable {
    n: usize,
    // cells[i * (n + 1) + j][x]
    cells: Vec<[bool; 2]>,
}

impl SpanTable {
    pub(crate) fn build(g: &Grammar, t: &Word) -> SpanTable {
        let n = t.len();
        let mut table = SpanTable { n, cells: vec![[false; 2]; (n + 1) * (n + 1)] };
        let nullable = g.nullable();
        for i in 0..=n {
            table.cells[i * (n + 1) + i] = nullable;
        }
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                if len == 1 {
                    table.set(t.chars()[i], i, j);
                }
                loop {
                    let mut changed = false;
                    for p in g.productions() {
                        if !table.get(p.lhs, i, j) && table.sequence_derives(p.rhs.chars(), i, j) {
                            table.set(p.lhs, i, j);
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }
        table
    }

    fn get(&self, c: Char, i: usize, j: usize) -> bool {
        self.cells[i * (self.n + 1) + j][c.index()]
    }

    fn set(&mut self, c: Char, i: usize, j: usize) {
        self.cells[i * (self.n + 1) + j][c.index()] = true;
    }

    /// Whether the letters of `seq` derive `t[i..j]` piece by piece.
    pub(crate) fn sequence_derives(&self, seq: &[Char], i: usize, j: usize) -> bool {
        let mut reach = vec![false; j - i + 1];
        reach[0] = true;
        for &y in seq {
            let mut next = vec![false; j - i + 1];
            for k in i..=j {
                if !reach[k - i] {
                    continue;
                }
                for k2 in k..=j {
                    if self.get(y, k, k2) {
                        next[k2 - i] = true;
                    }
                }
            }
            reach = next;
        }
        reach[j - i]
    }
}

/// `s ⇒* t` in `g`.
pub fn derives(g: &Grammar, s: &Word, t: &Word) -> bool {
    SpanTable::build(g, t).sequence_derives(s.chars(), 0, t.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Production;
    use crate::syntax::AxiomSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn g(pairs: &[(u32, u32)]) -> Grammar {
        Grammar::from_axioms(&AxiomSet::from_pairs(pairs.iter().copied()))
    }

    #[test]
    fn example_strings() {
        assert!(derives(&g(&[(2, 1)]), &w("d"), &w("bbd")));
        assert!(derives(&Grammar::default(), &w("d"), &w("d")));
        assert!(!derives(&g(&[(1, 1)]), &w("d"), &w("b")));
        assert!(derives(&g(&[(1, 1)]), &w("d"), &w("bd")));
        assert!(derives(&g(&[(1, 1)]), &w("d"), &w("bdd")));
    }

    #[test]
    fn empty_productions() {
        let t = g(&[(0, 0)]);
        assert!(derives(&t, &w("d"), &Word::empty()));
        assert!(derives(&t, &w("db"), &Word::empty()));
        assert!(!derives(&g(&[(1, 1)]), &w("d"), &Word::empty()));
        assert!(derives(&Grammar::default(), &Word::empty(), &Word::empty()));
        assert!(!derives(&Grammar::default(), &Word::empty(), &w("d")));
    }

    #[test]
    fn unit_productions_chain() {
        // B: ◇ -> ◆ and ◆ -> ◇
        let b = g(&[(1, 0)]);
        assert!(derives(&b, &w("d"), &w("b")));
        assert!(derives(&b, &w("b"), &w("d")));
        assert!(derives(&b, &w("dd"), &w("bd")));
        // 4 with T: ◇ -> ◇◇ | ε
        let s4 = g(&[(0, 2), (0, 0)]);
        assert!(derives(&s4, &w("d"), &w("dddd")));
        assert!(!derives(&s4, &w("d"), &w("b")));
    }

    #[test]
    fn generic_grammar() {
        let gr = Grammar::new([Production { lhs: Char::Dia, rhs: w("db") }]);
        assert!(derives(&gr, &w("d"), &w("dbb")));
        assert!(!derives(&gr, &w("d"), &w("bd")));
    }
}

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_formula, Formula};

/// `from R to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelAtom {
    pub from: String,
    pub to: String,
}

impl RelAtom {
    pub fn new(from: &str, to: &str) -> RelAtom {
        RelAtom { from: from.to_string(), to: to.to_string() }
    }
}

impl fmt::Display for RelAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} R {}", self.from, self.to)
    }
}

/// `label: formula`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LFormula {
    pub label: String,
    pub formula: Formula,
}

impl LFormula {
    pub fn new(label: &str, formula: Formula) -> LFormula {
        LFormula { label: label.to_string(), formula }
    }
}

impl fmt::Display for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.formula)
    }
}

impl FromStr for LFormula {
    type Err = SequentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (label, body) = s.split_once(':').ok_or_else(|| SequentParseError(format!("expected label: formula in {s:?}")))?;
        let label = label.trim();
        check_label(label)?;
        let formula = parse_formula(body).map_err(|e| SequentParseError(format!("in {s:?}: {e}")))?;
        Ok(LFormula { label: label.to_string(), formula })
    }
}

impl Serialize for LFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LFormula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `ℛ, Γ ⊢ w : A`. The components keep the order they were written in so
/// printing round-trips, while equality treats them as multisets.
#[derive(Clone, Debug, Eq)]
pub struct LabelledSequent {
    pub rel: Vec<RelAtom>,
    pub ante: Vec<LFormula>,
    pub succ: LFormula,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad labelled sequent: {0}")]
pub struct SequentParseError(pub String);

fn check_label(l: &str) -> Result<(), SequentParseError> {
    let mut cs = l.chars();
    let ok = matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    if ok && l != "R" {
        Ok(())
    } else {
        Err(SequentParseError(format!("bad label {l:?}")))
    }
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

impl PartialEq for LabelledSequent {
    fn eq(&self, other: &Self) -> bool {
        self.succ == other.succ && sorted(&self.rel) == sorted(&other.rel) && sorted(&self.ante) == sorted(&other.ante)
    }
}

impl std::hash::Hash for LabelledSequent {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        sorted(&self.rel).hash(state);
        sorted(&self.ante).hash(state);
        self.succ.hash(state);
    }
}

impl LabelledSequent {
    pub fn new(rel: Vec<RelAtom>, ante: Vec<LFormula>, succ: LFormula) -> LabelledSequent {
        LabelledSequent { rel, ante, succ }
    }

    /// Every label occurring anywhere in the sequent.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for r in &self.rel {
            out.insert(r.from.clone());
            out.insert(r.to.clone());
        }
        for f in &self.ante {
            out.insert(f.label.clone());
        }
        out.insert(self.succ.label.clone());
        out
    }

    pub fn has_label(&self, l: &str) -> bool {
        self.rel.iter().any(|r| r.from == l || r.to == l)
            || self.ante.iter().any(|f| f.label == l)
            || self.succ.label == l
    }

    pub fn has_rel(&self, from: &str, to: &str) -> bool {
        self.rel.iter().any(|r| r.from == from && r.to == to)
    }

    pub fn count_rel(&self, from: &str, to: &str) -> usize {
        self.rel.iter().filter(|r| r.from == from && r.to == to).count()
    }

    pub fn has_ante(&self, f: &LFormula) -> bool {
        self.ante.contains(f)
    }

    /// Removes one occurrence; false if there was none.
    pub fn remove_rel(&mut self, from: &str, to: &str) -> bool {
        match self.rel.iter().position(|r| r.from == from && r.to == to) {
            Some(i) => {
                self.rel.remove(i);
                true
            }
            None => false,
        }
    }

    /// Removes one occurrence; false if there was none.
    pub fn remove_ante(&mut self, f: &LFormula) -> bool {
        match self.ante.iter().position(|g| g == f) {
            Some(i) => {
                self.ante.remove(i);
                true
            }
            None => false,
        }
    }

    /// Applies `f` to every label.
    pub fn rename(&self, mut f: impl FnMut(&str) -> String) -> LabelledSequent {
        LabelledSequent {
            rel: self.rel.iter().map(|r| RelAtom { from: f(&r.from), to: f(&r.to) }).collect(),
            ante: self.ante.iter().map(|a| LFormula { label: f(&a.label), formula: a.formula.clone() }).collect(),
            succ: LFormula { label: f(&self.succ.label), formula: self.succ.formula.clone() },
        }
    }
}

impl fmt::Display for LabelledSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<String> = self.rel.iter().map(|r| r.to_string()).collect();
        let ante: Vec<String> = self.ante.iter().map(|a| a.to_string()).collect();
        let left = match (rel.is_empty(), ante.is_empty()) {
            (true, _) => ante.join(", "),
            (false, true) => rel.join(", "),
            (false, false) => format!("{} ; {}", rel.join(", "), ante.join(", ")),
        };
        if left.is_empty() {
            write!(f, "|- {}", self.succ)
        } else {
            write!(f, "{left} |- {}", self.succ)
        }
    }
}

impl FromStr for LabelledSequent {
    type Err = SequentParseError;

    /// `w R u, u R v ; w: <>p, u: p |- v: q`. The `;` is optional; `⊢` may
    /// replace `|-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (left, right) = s
            .split_once("|-")
            .or_else(|| s.split_once('⊢'))
            .ok_or_else(|| SequentParseError("missing |-".into()))?;
        let succ: LFormula = right.trim().parse()?;
        let mut rel = Vec::new();
        let mut ante = Vec::new();
        for item in left.split([',', ';']).map(str::trim).filter(|i| !i.is_empty()) {
            if item.contains(':') {
                ante.push(item.parse()?);
            } else {
                let toks: Vec<&str> = item.split_whitespace().collect();
                match toks.as_slice() {
                    [x, "R", y] => {
                        check_label(x)?;
                        check_label(y)?;
                        rel.push(RelAtom::new(x, y));
                    }
                    _ => return Err(SequentParseError(format!("expected `x R y` or `x: A`, got {item:?}"))),
                }
            }
        }
        Ok(LabelledSequent { rel, ante, succ })
    }
}

impl Serialize for LabelledSequent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LabelledSequent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Componentwise multiset union `Λ₁ ⊗ Λ₂` of sequent parts. The consequent
/// side is a list since the parts of a translation may have none or several.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequentParts {
    pub rel: Vec<RelAtom>,
    pub ante: Vec<LFormula>,
    pub succ: Vec<LFormula>,
}

impl SequentParts {
    pub fn compose(mut self, other: SequentParts) -> SequentParts {
        self.rel.extend(other.rel);
        self.ante.extend(other.ante);
        self.succ.extend(other.succ);
        self
    }

    /// A sequent when there is exactly one consequent formula.
    pub fn into_sequent(self) -> Option<LabelledSequent> {
        let mut succ = self.succ;
        if succ.len() != 1 {
            return None;
        }
        Some(LabelledSequent { rel: self.rel, ante: self.ante, succ: succ.pop()? })
    }
}

pub fn seq_compose(a: SequentParts, b: SequentParts) -> SequentParts {
    a.compose(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        for s in [
            "w R u, u R v ; w: <>p, u: p |- v: q",
            "w R u |- u: p",
            "w: p |- w: p",
            "|- w: [](p -> q) -> []p -> []q",
            "v R u, u R w ; w: []p, u: p |- v: p -> q",
        ] {
            let seq: LabelledSequent = s.parse().unwrap();
            assert_eq!(seq.to_string(), s);
        }
    }

    #[test]
    fn separator_is_optional_and_equality_is_multiset() {
        let a: LabelledSequent = "w R u, w: p, u: q |- u: q".parse().unwrap();
        let b: LabelledSequent = "u: q ; w: p, w R u |- u: q".parse().unwrap();
        assert_eq!(a, b);
        let c: LabelledSequent = "w R u, w R u, w: p, u: q |- u: q".parse().unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bad_input() {
        assert!("w R u".parse::<LabelledSequent>().is_err());
        assert!("w S u |- w: p".parse::<LabelledSequent>().is_err());
        assert!("|- 1w: p".parse::<LabelledSequent>().is_err());
        assert!("|- w: p &".parse::<LabelledSequent>().is_err());
    }

    #[test]
    fn compose_is_union() {
        let a = SequentParts { rel: vec![RelAtom::new("w", "u")], ..Default::default() };
        let b = SequentParts { succ: vec![LFormula::new("u", Formula::atom("p"))], ..Default::default() };
        assert_eq!(seq_compose(SequentParts::default(), b.clone()), b);
        let ab = seq_compose(a.clone(), b.clone()).into_sequent().unwrap();
        let ba = seq_compose(b, a).into_sequent().unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.to_string(), "w R u |- u: p");
    }
}

//! Formulas of the intuitionistic modal language, their concrete text syntax,
//! and axiom-set descriptors.
//!
//! The text syntax is ASCII first:
//!
//! | connective | syntax        |
//! |------------|---------------|
//! | falsum     | `false`       |
//! | and        | `A & B`       |
//! | or         | `A \| B`      |
//! | implies    | `A -> B`      |
//! | diamond    | `<>A`         |
//! | box        | `[]A`         |
//! | negation   | `~A` (sugar for `A -> false`) |
//! | equivalence| `A <-> B` (sugar for `(A -> B) & (B -> A)`) |
//!
//! Precedence from loosest to tightest is `<->`, `->`, `|`, `&`, prefix operators.
//! `->` and `<->` associate to the right, `&` and `|` to the left. The unicode
//! glyphs `⊥ ∧ ∨ ⊃ → ◇ □ ∼ ¬ ≡ ↔` are accepted as well.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Box::new(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `a` under `n` diamonds.
    pub fn dia_n(n: u32, a: Formula) -> Formula {
        (0..n).fold(a, |acc, _| Formula::dia(acc))
    }

    /// `a` under `n` boxes.
    pub fn box_n(n: u32, a: Formula) -> Formula {
        (0..n).fold(a, |acc, _| Formula::boxed(acc))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of connectives and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Dia(a) | Formula::Box(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Dia(a) | Formula::Box(a) => 1 + a.depth(),
        }
    }

    pub fn modal_count(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.modal_count() + b.modal_count(),
            Formula::Dia(a) | Formula::Box(a) => 1 + a.modal_count(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Dia(a) | Formula::Box(a) => a.collect_atoms(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(p) => f.write_str(p)?,
            Formula::Bot => f.write_str("false")?,
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" & ")?;
                b.write_at(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" | ")?;
                b.write_at(f, 3)?;
            }
            Formula::Imp(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)?;
            }
            Formula::Dia(a) => {
                f.write_str("<>")?;
                a.write_at(f, 4)?;
            }
            Formula::Box(a) => {
                f.write_str("[]")?;
                a.write_at(f, 4)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

/// Role of a formula occurrence in a nested sequent: `A^i` (input) or `A^o` (output).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Input,
    Output,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Input => "i",
            Polarity::Output => "o",
        })
    }
}

/// Syntax error with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Atom(String),
    False,
    And,
    Or,
    Imp,
    Iff,
    Not,
    Dia,
    Box,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let rest = &text[pos..];
        let fixed: &[(&str, Tok)] = &[
            ("<->", Tok::Iff),
            ("->", Tok::Imp),
            ("<>", Tok::Dia),
            ("[]", Tok::Box),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("~", Tok::Not),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("∧", Tok::And),
            ("∨", Tok::Or),
            ("⊃", Tok::Imp),
            ("→", Tok::Imp),
            ("≡", Tok::Iff),
            ("↔", Tok::Iff),
            ("◇", Tok::Dia),
            ("□", Tok::Box),
            ("∼", Tok::Not),
            ("¬", Tok::Not),
            ("⊥", Tok::False),
        ];
        if let Some((lit, tok)) = fixed.iter().find(|(lit, _)| rest.starts_with(lit)) {
            toks.push((pos, tok.clone()));
            for _ in 0..lit.chars().count() {
                it.next();
            }
            continue;
        }
        if c.is_ascii_lowercase() {
            let end = rest
                .char_indices()
                .find(|(_, ch)| !(ch.is_ascii_alphanumeric() || *ch == '_'))
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let word = &rest[..end];
            toks.push((pos, if word == "false" { Tok::False } else { Tok::Atom(word.to_string()) }));
            for _ in 0..word.chars().count() {
                it.next();
            }
            continue;
        }
        return Err(ParseError::new(pos, format!("unexpected character {c:?}")));
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::new(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Dia => Ok(Formula::dia(self.unary()?)),
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::Atom(p) => Ok(Formula::Atom(p)),
            Tok::False => Ok(Formula::Bot),
            Tok::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::new(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            other => Err(ParseError::new(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a formula; `~A` and `A <-> B` are expanded on the fly.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let f = p.iff()?;
    if p.at != p.toks.len() {
        return Err(ParseError::new(p.pos(), "trailing input"));
    }
    Ok(f)
}

/// Inverse of [`parse_formula`] with minimal parenthesisation.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

/// The Horn-Scott-Lemmon instance `(<>^n []A -> []^k A) & (<>^k A -> []^n <>A)`.
pub fn hsl_formula(n: u32, k: u32, a: &Formula) -> Formula {
    Formula::and(
        Formula::imp(Formula::dia_n(n, Formula::boxed(a.clone())), Formula::box_n(k, a.clone())),
        Formula::imp(Formula::dia_n(k, a.clone()), Formula::box_n(n, Formula::dia(a.clone()))),
    )
}

/// A set of extra axioms: optional seriality plus HSL pairs `(n, k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AxiomSet {
    pub has_d: bool,
    pub hsl: BTreeSet<(u32, u32)>,
}

impl AxiomSet {
    pub fn empty() -> Self {
        AxiomSet::default()
    }

    pub fn with_d(mut self) -> Self {
        self.has_d = true;
        self
    }

    pub fn with_hsl(mut self, n: u32, k: u32) -> Self {
        self.hsl.insert((n, k));
        self
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        AxiomSet { has_d: false, hsl: pairs.into_iter().collect() }
    }

    pub fn contains_hsl(&self, n: u32, k: u32) -> bool {
        self.hsl.contains(&(n, k))
    }

    pub fn is_empty(&self) -> bool {
        !self.has_d && self.hsl.is_empty()
    }
}

/// Named HSL instances: T, B, 4 and 5.
pub fn named_hsl(name: &str) -> Option<(u32, u32)> {
    match name {
        "T" | "t" => Some((0, 0)),
        "B" | "b" => Some((1, 0)),
        "4" => Some((0, 2)),
        "5" => Some((1, 1)),
        _ => None,
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.has_d {
            parts.push("D".into());
        }
        parts.extend(self.hsl.iter().map(|(n, k)| format!("{n},{k}")));
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// Error for malformed axiom-set descriptors.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad axiom descriptor {0:?}")]
pub struct AxiomSpecError(pub String);

/// Parses a single `n,k` pair, optionally wrapped as `(n,k)` or `hsl(n,k)`.
pub fn parse_hsl_pair(text: &str) -> Result<(u32, u32), AxiomSpecError> {
    let t = text.trim();
    let t = t.strip_prefix("hsl").unwrap_or(t);
    let t = t.trim().trim_start_matches('(').trim_end_matches(')');
    let (n, k) = t.split_once(',').ok_or_else(|| AxiomSpecError(text.to_string()))?;
    let n = n.trim().parse().map_err(|_| AxiomSpecError(text.to_string()))?;
    let k = k.trim().parse().map_err(|_| AxiomSpecError(text.to_string()))?;
    Ok((n, k))
}

impl FromStr for AxiomSet {
    type Err = AxiomSpecError;

    /// Items separated by `;`, `+` or whitespace: `D`, `T`, `B`, `4`, `5`,
    /// `n,k`, `(n,k)`, `hsl(n,k)`. `none`, `K` and the empty string give the
    /// empty set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = AxiomSet::empty();
        for item in s.split(|c: char| c == ';' || c == '+' || c.is_whitespace()) {
            let item = item.trim();
            match item {
                "" | "none" | "K" => {}
                "D" | "d" => set.has_d = true,
                other => {
                    if let Some(pair) = named_hsl(other) {
                        set.hsl.insert(pair);
                    } else {
                        set.hsl.insert(parse_hsl_pair(other)?);
                    }
                }
            }
        }
        Ok(set)
    }
}

/// The benchmark formulas A1 to A5, D, T, B, 4 and 5 over atoms `p` and `q`.
pub fn benchmark_formulas() -> Vec<(&'static str, Formula)> {
    let p = Formula::atom("p");
    let q = Formula::atom("q");
    let pq = Formula::imp(p.clone(), q.clone());
    vec![
        (
            "A1",
            Formula::imp(
                Formula::boxed(pq.clone()),
                Formula::imp(Formula::boxed(p.clone()), Formula::boxed(q.clone())),
            ),
        ),
        (
            "A2",
            Formula::imp(Formula::boxed(pq.clone()), Formula::imp(Formula::dia(p.clone()), Formula::dia(q.clone()))),
        ),
        ("A3", Formula::not(Formula::dia(Formula::Bot))),
        (
            "A4",
            Formula::imp(
                Formula::dia(Formula::or(p.clone(), q.clone())),
                Formula::or(Formula::dia(p.clone()), Formula::dia(q.clone())),
            ),
        ),
        (
            "A5",
            Formula::imp(
                Formula::imp(Formula::dia(p.clone()), Formula::boxed(q.clone())),
                Formula::boxed(pq),
            ),
        ),
        ("D", Formula::imp(Formula::boxed(p.clone()), Formula::dia(p.clone()))),
        ("T", hsl_formula(0, 0, &p)),
        ("B", hsl_formula(1, 0, &p)),
        ("4", hsl_formula(0, 2, &p)),
        ("5", hsl_formula(1, 1, &p)),
    ]
}

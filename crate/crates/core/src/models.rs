//! Finite bi-relational models: well-formedness and frame conditions, formula
//! evaluation, labelled sequent satisfaction and a seeded random generator.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! worlds w u v
//! leq w u        # w ≤ u, taken literally (add reflexive pairs yourself)
//! acc w v        # w R v
//! val u p q      # p, q true at u
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::labelled::LabelledSequent;
use crate::syntax::{AxiomSet, Formula};

type Rel = Vec<Vec<bool>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub worlds: Vec<String>,
    /// `leq[w][u]` iff w ≤ u.
    pub leq: Rel,
    /// `acc[w][u]` iff w R u.
    pub acc: Rel,
    pub val: Vec<BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown world {0:?}")]
    UnknownWorld(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("label {0:?} is not interpreted")]
    Uninterpreted(String),
}

/// A failed well-formedness or frame condition, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Reflexivity { w: String },
    Transitivity { w: String, u: String, v: String },
    F1 { w: String, v: String, v2: String },
    F2 { w: String, w2: String, v: String },
    Monotonicity { w: String, u: String, atom: String },
    Seriality { w: String },
    Hsl { n: u32, k: u32, w: String, u: String, v: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexivity { w } => write!(f, "reflexivity: not {w} <= {w}"),
            Violation::Transitivity { w, u, v } => write!(f, "transitivity: {w} <= {u} <= {v} but not {w} <= {v}"),
            Violation::F1 { w, v, v2 } => write!(f, "F1: {w} R {v}, {v} <= {v2}, no w' >= {w} with w' R {v2}"),
            Violation::F2 { w, w2, v } => write!(f, "F2: {w} <= {w2}, {w} R {v}, no v' >= {v} with {w2} R v'"),
            Violation::Monotonicity { w, u, atom } => write!(f, "monotonicity: {w} <= {u}, {atom} true at {w} only"),
            Violation::Seriality { w } => write!(f, "seriality: {w} has no successor"),
            Violation::Hsl { n, k, w, u, v } => write!(f, "({n},{k}): {w} R^{n} {u}, {w} R^{k} {v} but not {u} R {v}"),
        }
    }
}

fn compose(a: &Rel, b: &Rel) -> Rel {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            if a[x][y] {
                for z in 0..n {
                    out[x][z] |= b[y][z];
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> Rel {
    (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()
}

fn power(r: &Rel, n: u32) -> Rel {
    let mut out = identity(r.len());
    for _ in 0..n {
        out = compose(&out, r);
    }
    out
}

impl Model {
    /// Worlds with no relations and empty valuation.
    pub fn new(worlds: &[&str]) -> Model {
        let n = worlds.len();
        Model {
            worlds: worlds.iter().map(|w| w.to_string()).collect(),
            leq: vec![vec![false; n]; n],
            acc: vec![vec![false; n]; n],
            val: vec![BTreeSet::new(); n],
        }
    }

    /// Worlds with reflexive ≤, empty R and empty valuation.
    pub fn discrete(worlds: &[&str]) -> Model {
        let mut m = Model::new(worlds);
        m.leq = identity(worlds.len());
        m
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn world(&self, name: &str) -> Result<usize, ModelError> {
        self.worlds.iter().position(|w| w == name).ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    pub fn set_leq(&mut self, w: &str, u: &str) -> Result<(), ModelError> {
        let (w, u) = (self.world(w)?, self.world(u)?);
        self.leq[w][u] = true;
        Ok(())
    }

    pub fn set_acc(&mut self, w: &str, u: &str) -> Result<(), ModelError> {
        let (w, u) = (self.world(w)?, self.world(u)?);
        self.acc[w][u] = true;
        Ok(())
    }

    pub fn set_val(&mut self, w: &str, atom: &str) -> Result<(), ModelError> {
        let w = self.world(w)?;
        self.val[w].insert(atom.to_string());
        Ok(())
    }

    fn name(&self, i: usize) -> String {
        self.worlds[i].clone()
    }
}

/// Reflexivity and transitivity of ≤, F1, F2 and monotonicity.
pub fn check_model(m: &Model) -> Vec<Violation> {
    let n = m.len();
    let mut out = Vec::new();
    for w in 0..n {
        if !m.leq[w][w] {
            out.push(Violation::Reflexivity { w: m.name(w) });
        }
    }
    for w in 0..n {
        for u in 0..n {
            for v in 0..n {
                if m.leq[w][u] && m.leq[u][v] && !m.leq[w][v] {
                    out.push(Violation::Transitivity { w: m.name(w), u: m.name(u), v: m.name(v) });
                }
            }
        }
    }
    for w in 0..n {
        for v in 0..n {
            if !m.acc[w][v] {
                continue;
            }
            for v2 in 0..n {
                if m.leq[v][v2] && !(0..n).any(|w2| m.leq[w][w2] && m.acc[w2][v2]) {
                    out.push(Violation::F1 { w: m.name(w), v: m.name(v), v2: m.name(v2) });
                }
            }
            for w2 in 0..n {
                if m.leq[w][w2] && !(0..n).any(|v2| m.acc[w2][v2] && m.leq[v][v2]) {
                    out.push(Violation::F2 { w: m.name(w), w2: m.name(w2), v: m.name(v) });
                }
            }
        }
    }
    for w in 0..n {
        for u in 0..n {
            if m.leq[w][u] {
                for atom in m.val[w].difference(&m.val[u]) {
                    out.push(Violation::Monotonicity { w: m.name(w), u: m.name(u), atom: atom.clone() });
                }
            }
        }
    }
    out
}

/// Seriality (if D is in `a`) and `w Rⁿ u ∧ w Rᵏ v ⊃ u R v` per HSL pair.
pub fn check_frame_conditions(m: &Model, a: &AxiomSet) -> Vec<Violation> {
    let n = m.len();
    let mut out = Vec::new();
    if a.has_d {
        for w in 0..n {
            if !m.acc[w].iter().any(|&b| b) {
                out.push(Violation::Seriality { w: m.name(w) });
            }
        }
    }
    for &(hn, hk) in &a.hsl {
        let rn = power(&m.acc, hn);
        let rk = power(&m.acc, hk);
        for w in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if rn[w][u] && rk[w][v] && !m.acc[u][v] {
                        out.push(Violation::Hsl { n: hn, k: hk, w: m.name(w), u: m.name(u), v: m.name(v) });
                    }
                }
            }
        }
    }
    out
}

/// The set of worlds where `f` holds, computed bottom-up.
pub fn extension(m: &Model, f: &Formula) -> Vec<bool> {
    let n = m.len();
    match f {
        Formula::Atom(p) => m.val.iter().map(|v| v.contains(p)).collect(),
        Formula::Bot => vec![false; n],
        Formula::And(a, b) => {
            let (a, b) = (extension(m, a), extension(m, b));
            (0..n).map(|w| a[w] && b[w]).collect()
        }
        Formula::Or(a, b) => {
            let (a, b) = (extension(m, a), extension(m, b));
            (0..n).map(|w| a[w] || b[w]).collect()
        }
        Formula::Imp(a, b) => {
            let (a, b) = (extension(m, a), extension(m, b));
            (0..n).map(|w| (0..n).all(|w2| !m.leq[w][w2] || !a[w2] || b[w2])).collect()
        }
        Formula::Dia(a) => {
            let a = extension(m, a);
            (0..n).map(|w| (0..n).any(|v| m.acc[w][v] && a[v])).collect()
        }
        Formula::Box(a) => {
            let a = extension(m, a);
            (0..n).map(|w| (0..n).all(|w2| !m.leq[w][w2] || (0..n).all(|v| !m.acc[w2][v] || a[v]))).collect()
        }
    }
}

/// `M, w ⊩ f`.
pub fn eval(m: &Model, w: &str, f: &Formula) -> Result<bool, ModelError> {
    let i = m.world(w)?;
    Ok(extension(m, f)[i])
}

/// Whether `f` holds at every world.
pub fn globally_true(m: &Model, f: &Formula) -> bool {
    extension(m, f).into_iter().all(|b| b)
}

/// Label-to-world assignment, by world index.
pub type Interpretation = HashMap<String, usize>;

/// `M, I ⊨ Λ`: if every atom and antecedent formula holds, so does the consequent.
pub fn sat_sequent(m: &Model, i: &Interpretation, seq: &LabelledSequent) -> Result<bool, ModelError> {
    let get = |l: &str| i.get(l).copied().ok_or_else(|| ModelError::Uninterpreted(l.to_string()));
    for r in &seq.rel {
        if !m.acc[get(&r.from)?][get(&r.to)?] {
            return Ok(true);
        }
    }
    for a in &seq.ante {
        if !extension(m, &a.formula)[get(&a.label)?] {
            return Ok(true);
        }
    }
    Ok(extension(m, &seq.succ.formula)[get(&seq.succ.label)?])
}

/// Adds the acc edges demanded by F1, F2, the HSL conditions and seriality
/// until nothing changes. The world set never grows.
pub fn close_frame(m: &mut Model, a: &AxiomSet) {
    let n = m.len();
    loop {
        let mut changed = false;
        for w in 0..n {
            for v in 0..n {
                if !m.acc[w][v] {
                    continue;
                }
                for v2 in 0..n {
                    if m.leq[v][v2] && !(0..n).any(|w2| m.leq[w][w2] && m.acc[w2][v2]) {
                        m.acc[w][v2] = true;
                        changed = true;
                    }
                }
                for w2 in 0..n {
                    if m.leq[w][w2] && !(0..n).any(|v2| m.acc[w2][v2] && m.leq[v][v2]) {
                        m.acc[w2][v] = true;
                        changed = true;
                    }
                }
            }
        }
        for &(hn, hk) in &a.hsl {
            let rn = power(&m.acc, hn);
            let rk = power(&m.acc, hk);
            for w in 0..n {
                for u in 0..n {
                    for v in 0..n {
                        if rn[w][u] && rk[w][v] && !m.acc[u][v] {
                            m.acc[u][v] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if a.has_d {
            for w in 0..n {
                if !m.acc[w].iter().any(|&b| b) {
                    m.acc[w][w] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// Atoms the random generator draws valuations from.
pub const RANDOM_ATOMS: [&str; 3] = ["p", "q", "r"];

/// A model with between 1 and `max_worlds` worlds that satisfies the frame
/// conditions of `a`. Deterministic per seed.
pub fn random_model(a: &AxiomSet, max_worlds: usize, seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_worlds.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut m = Model::discrete(&refs);
    let p_leq = rng.gen_range(0.0..0.5);
    let p_acc = rng.gen_range(0.0..0.6);
    for w in 0..n {
        for u in 0..n {
            if w != u && rng.gen_bool(p_leq) {
                m.leq[w][u] = true;
            }
            if rng.gen_bool(p_acc) {
                m.acc[w][u] = true;
            }
        }
    }
    // transitive closure of ≤
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m.leq[i][k] && m.leq[k][j] {
                    m.leq[i][j] = true;
                }
            }
        }
    }
    for w in 0..n {
        for atom in RANDOM_ATOMS {
            if rng.gen_bool(0.4) {
                m.val[w].insert(atom.to_string());
            }
        }
    }
    // close valuations upward
    for w in 0..n {
        for u in 0..n {
            if m.leq[w][u] {
                let vw = m.val[w].clone();
                m.val[u].extend(vw);
            }
        }
    }
    close_frame(&mut m, a);
    m
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds {}", self.worlds.join(" "))?;
        let n = self.len();
        for w in 0..n {
            for u in 0..n {
                if self.leq[w][u] {
                    writeln!(f, "leq {} {}", self.worlds[w], self.worlds[u])?;
                }
            }
        }
        for w in 0..n {
            for u in 0..n {
                if self.acc[w][u] {
                    writeln!(f, "acc {} {}", self.worlds[w], self.worlds[u])?;
                }
            }
        }
        for w in 0..n {
            if !self.val[w].is_empty() {
                let atoms: Vec<&str> = self.val[w].iter().map(String::as_str).collect();
                writeln!(f, "val {} {}", self.worlds[w], atoms.join(" "))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Model {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m: Option<Model> = None;
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| ModelError::Syntax { line: i + 1, msg: msg.to_string() };
            match toks[0] {
                "worlds" => {
                    if m.is_some() {
                        return Err(err("worlds declared twice"));
                    }
                    if toks.len() < 2 {
                        return Err(err("a model needs at least one world"));
                    }
                    m = Some(Model::new(&toks[1..]));
                }
                kw @ ("leq" | "acc") => {
                    let model = m.as_mut().ok_or_else(|| err("worlds must come first"))?;
                    let [_, w, u] = toks.as_slice() else { return Err(err("expected two worlds")) };
                    if kw == "leq" {
                        model.set_leq(w, u)?;
                    } else {
                        model.set_acc(w, u)?;
                    }
                }
                "val" => {
                    let model = m.as_mut().ok_or_else(|| err("worlds must come first"))?;
                    if toks.len() < 2 {
                        return Err(err("expected a world"));
                    }
                    model.world(toks[1])?;
                    for atom in &toks[2..] {
                        model.set_val(toks[1], atom)?;
                    }
                }
                other => return Err(err(&format!("unknown directive {other:?}"))),
            }
        }
        m.ok_or(ModelError::Syntax { line: 0, msg: "no worlds line".into() })
    }
}

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sequent::{LFormula, LabelledSequent};
use crate::grammar::PropPath;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LRule {
    Id,
    BotL,
    OrL,
    OrR,
    AndL,
    AndR,
    ImpL,
    ImpR,
    DiaL,
    DiaR,
    BoxR,
    BoxL,
    D,
    /// `S(n,k)`, including the degenerate `n = 0` / `k = 0` schemes.
    S { n: u32, k: u32 },
    PDia,
    PBox,
}

impl LRule {
    pub fn arity(self) -> usize {
        match self {
            LRule::Id | LRule::BotL => 0,
            LRule::OrL | LRule::AndR | LRule::ImpL => 2,
            _ => 1,
        }
    }

    pub fn is_structural(self) -> bool {
        matches!(self, LRule::S { .. })
    }
}

impl fmt::Display for LRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LRule::Id => "id",
            LRule::BotL => "botL",
            LRule::OrL => "orL",
            LRule::OrR => "orR",
            LRule::AndL => "andL",
            LRule::AndR => "andR",
            LRule::ImpL => "impL",
            LRule::ImpR => "impR",
            LRule::DiaL => "diaL",
            LRule::DiaR => "diaR",
            LRule::BoxR => "boxR",
            LRule::BoxL => "boxL",
            LRule::D => "d",
            LRule::S { n, k } => return write!(f, "S{n},{k}"),
            LRule::PDia => "pDia",
            LRule::PBox => "pBox",
        };
        f.write_str(s)
    }
}

impl FromStr for LRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "id" => LRule::Id,
            "botL" => LRule::BotL,
            "orL" => LRule::OrL,
            "orR" => LRule::OrR,
            "andL" => LRule::AndL,
            "andR" => LRule::AndR,
            "impL" => LRule::ImpL,
            "impR" => LRule::ImpR,
            "diaL" => LRule::DiaL,
            "diaR" => LRule::DiaR,
            "boxR" => LRule::BoxR,
            "boxL" => LRule::BoxL,
            "d" => LRule::D,
            "pDia" => LRule::PDia,
            "pBox" => LRule::PBox,
            _ => {
                let body = s.strip_prefix('S').ok_or_else(|| format!("unknown rule {s:?}"))?;
                let (n, k) = body.split_once(',').ok_or_else(|| format!("unknown rule {s:?}"))?;
                let n = n.parse().map_err(|_| format!("unknown rule {s:?}"))?;
                let k = k.parse().map_err(|_| format!("unknown rule {s:?}"))?;
                LRule::S { n, k }
            }
        })
    }
}

impl Serialize for LRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Rule parameters. Which fields a rule reads:
///
/// - `principal`: the principal labelled formula of left rules, `diaR`, `pDia` and `pBox`
/// - `label`: the eigenvariable of `diaL`, `boxR`, `d`; the successor `u` of `diaR`, `boxL`
/// - `source`: the label `w` of the new atom `w R u` of `d`
/// - `branch`: 1 or 2 for `orR`
/// - `chain_u`, `chain_v`: the chains `w … u` and `w … v` of `S(n,k)`
/// - `path`: the propagation path of `pDia` and `pBox`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<LFormula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_u: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_v: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PropPath>,
}

impl LParams {
    pub fn principal(f: LFormula) -> LParams {
        LParams { principal: Some(f), ..LParams::default() }
    }

    pub fn with_label(mut self, l: &str) -> LParams {
        self.label = Some(l.to_string());
        self
    }

    pub fn with_path(mut self, p: PropPath) -> LParams {
        self.path = Some(p);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledProof {
    pub rule: LRule,
    pub conclusion: LabelledSequent,
    #[serde(default)]
    pub params: LParams,
    #[serde(default)]
    pub premises: Vec<LabelledProof>,
}

impl LabelledProof {
    pub fn new(rule: LRule, conclusion: LabelledSequent, params: LParams, premises: Vec<LabelledProof>) -> Self {
        LabelledProof { rule, conclusion, params, premises }
    }

    pub fn leaf(rule: LRule, conclusion: LabelledSequent) -> Self {
        LabelledProof::new(rule, conclusion, LParams::default(), Vec::new())
    }

    /// Longest branch counted in rule applications.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(|p| p.height()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    pub fn count(&self, pred: &dyn Fn(LRule) -> bool) -> usize {
        usize::from(pred(self.rule)) + self.premises.iter().map(|p| p.count(pred)).sum::<usize>()
    }

    pub fn structural_count(&self) -> usize {
        self.count(&|r| r.is_structural())
    }

    /// Preorder walk over all nodes.
    pub fn nodes(&self) -> Vec<&LabelledProof> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            out.push(p);
            stack.extend(p.premises.iter().rev());
        }
        out
    }

    /// Applies a label renaming to every sequent and parameter.
    pub fn rename_labels(&self, f: &dyn Fn(&str) -> String) -> LabelledProof {
        let p = &self.params;
        let params = LParams {
            principal: p.principal.as_ref().map(|pf| LFormula { label: f(&pf.label), formula: pf.formula.clone() }),
            label: p.label.as_deref().map(f),
            source: p.source.as_deref().map(f),
            branch: p.branch,
            chain_u: p.chain_u.as_ref().map(|c| c.iter().map(|l| f(l)).collect()),
            chain_v: p.chain_v.as_ref().map(|c| c.iter().map(|l| f(l)).collect()),
            path: p.path.as_ref().map(|path| path.map_nodes(f)),
        };
        LabelledProof {
            rule: self.rule,
            conclusion: self.conclusion.rename(f),
            params,
            premises: self.premises.iter().map(|q| q.rename_labels(f)).collect(),
        }
    }

    /// Every label in any sequent or parameter of the proof.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for q in self.nodes() {
            out.extend(q.conclusion.labels());
            let p = &q.params;
            out.extend(p.principal.iter().map(|pf| pf.label.clone()));
            out.extend(p.label.iter().chain(p.source.iter()).cloned());
            out.extend(p.chain_u.iter().chain(p.chain_v.iter()).flatten().cloned());
            out.extend(p.path.iter().flat_map(|path| path.nodes().iter().cloned()));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proofs always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

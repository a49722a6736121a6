use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sequent::{Address, NestedSequent};
use crate::grammar::PropPath;
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NRule {
    BotIn,
    Id,
    AndIn,
    AndOut,
    OrIn,
    OrOut,
    ImpOut,
    ImpIn,
    BoxOut,
    DiaIn,
    D,
    PDia,
    PBox,
}

impl NRule {
    pub const ALL: [NRule; 13] = [
        NRule::BotIn,
        NRule::Id,
        NRule::AndIn,
        NRule::AndOut,
        NRule::OrIn,
        NRule::OrOut,
        NRule::ImpOut,
        NRule::ImpIn,
        NRule::BoxOut,
        NRule::DiaIn,
        NRule::D,
        NRule::PDia,
        NRule::PBox,
    ];

    pub fn arity(self) -> usize {
        match self {
            NRule::BotIn | NRule::Id => 0,
            NRule::AndOut | NRule::OrIn | NRule::ImpIn => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NRule::BotIn => "bot_in",
            NRule::Id => "id",
            NRule::AndIn => "and_in",
            NRule::AndOut => "and_out",
            NRule::OrIn => "or_in",
            NRule::OrOut => "or_out",
            NRule::ImpOut => "imp_out",
            NRule::ImpIn => "imp_in",
            NRule::BoxOut => "box_out",
            NRule::DiaIn => "dia_in",
            NRule::D => "d",
            NRule::PDia => "pDia",
            NRule::PBox => "pBox",
        }
    }
}

impl fmt::Display for NRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NRule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| format!("unknown nested rule {s:?}"))
    }
}

impl Serialize for NRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for NRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Rule parameters. `at` is the address of the node holding the principal
/// formula (for `d`, the node receiving the new bracket). `formula` is the
/// principal formula; it may be left out when the node's output determines
/// it. `target` and `path` belong to `pDia` and `pBox`; path nodes are the
/// ids `w<i>` of the conclusion. `branch` is 1 or 2 for `or_out`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NParams {
    #[serde(default)]
    pub at: Address,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Address>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PropPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<u8>,
}

impl NParams {
    pub fn at(addr: &[usize]) -> NParams {
        NParams { at: addr.to_vec(), ..NParams::default() }
    }

    pub fn with_formula(mut self, f: Formula) -> NParams {
        self.formula = Some(f);
        self
    }

    pub fn with_target(mut self, t: &[usize], path: PropPath) -> NParams {
        self.target = Some(t.to_vec());
        self.path = Some(path);
        self
    }

    pub fn with_branch(mut self, b: u8) -> NParams {
        self.branch = Some(b);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedProof {
    pub rule: NRule,
    pub conclusion: NestedSequent,
    #[serde(default)]
    pub params: NParams,
    #[serde(default)]
    pub premises: Vec<NestedProof>,
}

impl NestedProof {
    pub fn new(rule: NRule, conclusion: NestedSequent, params: NParams, premises: Vec<NestedProof>) -> NestedProof {
        NestedProof { rule, conclusion, params, premises }
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(|p| p.height()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    pub fn count(&self, rule: NRule) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count(rule)).sum::<usize>()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proofs always serialize")
    }

    pub fn from_json(text: &str) -> Result<NestedProof, serde_json::Error> {
        serde_json::from_str(text)
    }
}

//! Structured verification reports shared by the identity checks and the
//! theorem orchestration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    ThmA,
    ThmB,
    ThmC,
    ThmE,
    SupportE,
    EqRemark,
    Eq65,
    Prop21,
    Diffexp,
    Oracle,
    TaylorChain,
}

impl Claim {
    pub const ALL: [Claim; 11] = [
        Claim::ThmA,
        Claim::ThmB,
        Claim::ThmC,
        Claim::ThmE,
        Claim::SupportE,
        Claim::EqRemark,
        Claim::Eq65,
        Claim::Prop21,
        Claim::Diffexp,
        Claim::Oracle,
        Claim::TaylorChain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Claim::ThmA => "thm-a",
            Claim::ThmB => "thm-b",
            Claim::ThmC => "thm-c",
            Claim::ThmE => "thm-e",
            Claim::SupportE => "support-e",
            Claim::EqRemark => "eq-remark",
            Claim::Eq65 => "eq65",
            Claim::Prop21 => "prop21",
            Claim::Diffexp => "diffexp",
            Claim::Oracle => "oracle",
            Claim::TaylorChain => "taylor-chain",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Claim::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::OutOfContract(format!("unknown claim '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// First disagreement found by a check. `exponent` is on the report's
/// exponent grid; scalar checks such as filtration leave it empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub exponent: Option<i64>,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn at(exponent: i64, lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness { exponent: Some(exponent), lhs: lhs.to_string(), rhs: rhs.to_string() }
    }

    pub fn scalar(lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness { exponent: None, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub parameters: BTreeMap<String, i64>,
    /// 1 for integral q-powers, 24 for the `q^(1/24)` grid.
    pub exponent_unit: u32,
    pub truncation: i64,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub notes: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(claim: Claim, exponent_unit: u32) -> Self {
        VerificationReport {
            claim,
            parameters: BTreeMap::new(),
            exponent_unit,
            truncation: 0,
            verdict: Verdict::NotApplicable,
            witness: None,
            notes: BTreeMap::new(),
            elapsed_ms: None,
        }
    }

    pub fn param(mut self, name: &str, value: impl Into<i64>) -> Self {
        self.parameters.insert(name.to_string(), value.into());
        self
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.insert(key.to_string(), value.to_string());
    }

    /// Pass when no witness was found, fail otherwise.
    pub fn conclude(mut self, truncation: i64, witness: Option<Witness>) -> Self {
        self.truncation = truncation;
        self.verdict = if witness.is_some() { Verdict::Fail } else { Verdict::Pass };
        self.witness = witness;
        self
    }

    pub fn not_applicable(mut self, reason: &str) -> Self {
        self.verdict = Verdict::NotApplicable;
        self.witness = None;
        self.note("reason", reason);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Fail carries a witness; pass records a positive truncation.
    pub fn is_consistent(&self) -> bool {
        match self.verdict {
            Verdict::Fail => self.witness.is_some(),
            Verdict::Pass => self.truncation > 0 && self.witness.is_none(),
            Verdict::NotApplicable => self.witness.is_none(),
        }
    }

    /// Sort key used to merge concurrently produced reports.
    pub fn sort_key(&self) -> (Claim, Vec<(String, i64)>) {
        (self.claim, self.parameters.iter().map(|(k, v)| (k.clone(), *v)).collect())
    }
}

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Relative rounding slack added to every side, so that two closed forms
/// agreeing up to floating point count as equal.
pub const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatementId {
    Polya,
    Main,
    Multiplicity,
    Roundness,
    Carleman,
    Isoperimetric,
    PullbackLemma,
    CapacityPullback,
    IntegratedCarleman,
    ThresholdBound,
}

impl StatementId {
    pub const ALL: [StatementId; 10] = [
        StatementId::Polya,
        StatementId::Main,
        StatementId::Multiplicity,
        StatementId::Roundness,
        StatementId::Carleman,
        StatementId::Isoperimetric,
        StatementId::PullbackLemma,
        StatementId::CapacityPullback,
        StatementId::IntegratedCarleman,
        StatementId::ThresholdBound,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StatementId::Polya => "polya",
            StatementId::Main => "main",
            StatementId::Multiplicity => "multiplicity",
            StatementId::Roundness => "roundness",
            StatementId::Carleman => "carleman",
            StatementId::Isoperimetric => "isoperimetric",
            StatementId::PullbackLemma => "pullback_lemma",
            StatementId::CapacityPullback => "capacity_pullback",
            StatementId::IntegratedCarleman => "integrated_carleman",
            StatementId::ThresholdBound => "threshold_bound",
        }
    }

    /// Identities are judged on `|margin|` alone.
    pub fn is_identity(&self) -> bool {
        matches!(self, StatementId::PullbackLemma | StatementId::CapacityPullback)
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatementId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatementId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::parse("statement_id", format!("unknown statement `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Equality,
    Inconclusive,
    Violated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Equality => "EQUALITY",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Violated => "VIOLATED",
        }
    }

    /// Inequalities: `margin < -budget` is a violation, `margin > budget`
    /// holds, and the band in between is equality only when the structural
    /// equality case is present. Identities: within the budget is equality,
    /// within twice the budget inconclusive, beyond that a violation.
    pub fn judge(id: StatementId, margin: f64, budget: f64, equality_case: bool) -> Verdict {
        if margin.is_nan() || budget.is_nan() {
            return Verdict::Inconclusive;
        }
        if id.is_identity() {
            return if margin.abs() <= budget {
                Verdict::Equality
            } else if margin.abs() <= 2.0 * budget {
                Verdict::Inconclusive
            } else {
                Verdict::Violated
            };
        }
        if margin < -budget {
            Verdict::Violated
        } else if margin > budget {
            Verdict::Holds
        } else if equality_case {
            Verdict::Equality
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of checking one statement: both sides with error bars, oriented
/// so that `margin = rhs - lhs >= 0` means the statement is satisfied.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub statement_id: StatementId,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_err: f64,
    pub rhs_err: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub seed: u64,
    pub inputs_digest: String,
    pub note: Option<String>,
}

impl Report {
    pub fn new(
        statement_id: StatementId,
        (lhs, lhs_err): (f64, f64),
        (rhs, rhs_err): (f64, f64),
        equality_case: bool,
        seed: u64,
        inputs_digest: String,
    ) -> Report {
        let lhs_err = lhs_err.max(ROUNDING * lhs.abs());
        let rhs_err = rhs_err.max(ROUNDING * rhs.abs());
        let margin = rhs - lhs;
        Report {
            statement_id,
            lhs,
            rhs,
            lhs_err,
            rhs_err,
            margin,
            verdict: Verdict::judge(statement_id, margin, lhs_err + rhs_err, equality_case),
            seed,
            inputs_digest,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Report {
        self.note = Some(note.into());
        self
    }

    pub fn budget(&self) -> f64 {
        self.lhs_err + self.rhs_err
    }

    /// `key=value` lines in a fixed order.
    pub fn to_record(&self) -> String {
        let mut out = format!(
            "statement_id={}\nlhs={}\nrhs={}\nlhs_err={}\nrhs_err={}\nmargin={}\nverdict={}\nseed={}\ninputs_digest={}\n",
            self.statement_id,
            self.lhs,
            self.rhs,
            self.lhs_err,
            self.rhs_err,
            self.margin,
            self.verdict,
            self.seed,
            self.inputs_digest
        );
        if let Some(note) = &self.note {
            out.push_str(&format!("note={note}\n"));
        }
        out
    }

    /// Single-line form used in sweep output.
    pub fn to_line(&self) -> String {
        self.to_record().trim_end().replace('\n', " ")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "statement_id": self.statement_id.as_str(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_err": self.lhs_err,
            "rhs_err": self.rhs_err,
            "margin": self.margin,
            "verdict": self.verdict.as_str(),
            "seed": self.seed,
            "inputs_digest": self.inputs_digest,
            "note": self.note,
        })
    }
}

/// First 16 hex digits of the SHA-256 of the given parts, `|`-separated.
pub fn inputs_digest(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for (k, part) in parts.iter().enumerate() {
        if k > 0 {
            hasher.update(b"|");
        }
        hasher.update(part.as_bytes());
    }
    hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

//! Rule engine for completed (or partial) datasheets.
//!
//! [`validate`] runs every rule of the fixed [`rule_catalogue`] and
//! returns the findings as data. Rules never fail: a datasheet that parses
//! can always be validated.

pub mod languages;
mod rules;

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::document::Datasheet;
use crate::schema::{QuestionId, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    Required,
    Integer,
    ScaleSize,
    ScaleValues,
    InstrumentGate,
    EvaluatorPairs,
    CriterionCount,
    Language,
    TaskInputOutput,
    OtherText,
    Link,
    Preregistration,
}

impl RuleId {
    pub const ALL: [RuleId; 12] = [
        RuleId::Required,
        RuleId::Integer,
        RuleId::ScaleSize,
        RuleId::ScaleValues,
        RuleId::InstrumentGate,
        RuleId::EvaluatorPairs,
        RuleId::CriterionCount,
        RuleId::Language,
        RuleId::TaskInputOutput,
        RuleId::OtherText,
        RuleId::Link,
        RuleId::Preregistration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Required => "R-REQ",
            RuleId::Integer => "R-INT",
            RuleId::ScaleSize => "R-SCALE-SIZE",
            RuleId::ScaleValues => "R-SCALE-VALUES",
            RuleId::InstrumentGate => "R-INSTRUMENT-GATE",
            RuleId::EvaluatorPairs => "R-EVAL-PAIRS",
            RuleId::CriterionCount => "R-CRIT-COUNT",
            RuleId::Language => "R-LANG",
            RuleId::TaskInputOutput => "R-TASK-IO",
            RuleId::OtherText => "R-OTHER-TEXT",
            RuleId::Link => "R-LINK",
            RuleId::Preregistration => "R-PREREG",
        }
    }

    pub fn from_str_id(s: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.as_str() == s)
    }

    pub fn info(self) -> &'static RuleInfo {
        rule_catalogue()
            .iter()
            .find(|r| r.id == self)
            .expect("every rule is catalogued")
    }
}

impl Ord for RuleId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for RuleId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleInfo {
    pub id: RuleId,
    pub description: &'static str,
    /// Default severity. R-EVAL-PAIRS drops to info when the author explains
    /// the deviation.
    pub severity: Severity,
}

static CATALOGUE: [RuleInfo; 12] = [
    RuleInfo {
        id: RuleId::Required,
        description: "Every question has an answer; N/A counts where the question accepts it.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::Integer,
        description: "Q3.1.1 and Q3.2.1 are positive integers.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::ScaleSize,
        description: "Q4.3.3 is an integer of at least 2, 'continuous', or 'N/A'.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::ScaleValues,
        description: "Q4.3.4 lists (or gives a range of) exactly as many values as Q4.3.3 states; N/A when Q4.3.3 is N/A.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::InstrumentGate,
        description: "Q4.3.3 to Q4.3.5 are N/A exactly when there is no rating instrument, and Q4.3.6 is described exactly then.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::EvaluatorPairs,
        description: "Q3.2.2 ticks one option from each opposing pair, or explains under 'Other'.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::CriterionCount,
        description: "A datasheet documents between 1 and 10 quality criteria.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::Language,
        description: "Q2.4 and Q2.5 are full ISO 639-1 English language names, or N/A.",
        severity: Severity::Warning,
    },
    RuleInfo {
        id: RuleId::TaskInputOutput,
        description: "The task in Q2.3 agrees with the input (Q2.1) and output (Q2.2) types it implies.",
        severity: Severity::Warning,
    },
    RuleInfo {
        id: RuleId::OtherText,
        description: "A ticked 'Other' option comes with details; details only appear where 'Other' is ticked or always requested.",
        severity: Severity::Error,
    },
    RuleInfo {
        id: RuleId::Link,
        description: "Q1.1 and Q1.2 contain links, or their permitted tokens.",
        severity: Severity::Warning,
    },
    RuleInfo {
        id: RuleId::Preregistration,
        description: "Sheets completed for preregistration have their result questions (Q4.3.9 to Q4.3.11) flagged for review.",
        severity: Severity::Info,
    },
];

pub fn rule_catalogue() -> &'static [RuleInfo] {
    &CATALOGUE
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub rule: RuleId,
    pub severity: Severity,
    /// Sorted, never empty.
    pub at: Vec<QuestionId>,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(rule: RuleId, at: Vec<QuestionId>, message: impl Into<String>) -> Self {
        Diagnostic::with_severity(rule, rule.info().severity, at, message)
    }

    pub(crate) fn with_severity(
        rule: RuleId,
        severity: Severity,
        mut at: Vec<QuestionId>,
        message: impl Into<String>,
    ) -> Self {
        debug_assert!(!at.is_empty());
        at.sort();
        at.dedup();
        Diagnostic { rule, severity, at, message: message.into() }
    }

    fn sort_key(&self) -> (&QuestionId, RuleId, &[QuestionId], &str) {
        (&self.at[0], self.rule, &self.at[1..], &self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paths: Vec<String> = self.at.iter().map(ToString::to_string).collect();
        write!(f, "{} {} {}: {}", self.severity, self.rule, paths.join(","), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub error_count: usize,
    pub warning_count: usize,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    diagnostics: &'a [Diagnostic],
    errors: usize,
    warnings: usize,
}

impl ValidationReport {
    fn from_diagnostics(mut diagnostics: Vec<Diagnostic>) -> Self {
        diagnostics.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let count = |s| diagnostics.iter().filter(|d| d.severity == s).count();
        let error_count = count(Severity::Error);
        let warning_count = count(Severity::Warning);
        ValidationReport { diagnostics, error_count, warning_count }
    }

    pub fn info_count(&self) -> usize {
        self.diagnostics.len() - self.error_count - self.warning_count
    }

    pub fn has_errors(&self) -> bool {
        self.error_count > 0
    }

    pub fn by_rule(&self, rule: RuleId) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(move |d| d.rule == rule)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&ReportJson {
            diagnostics: &self.diagnostics,
            errors: self.error_count,
            warnings: self.warning_count,
        })
        .expect("report serializes");
        out.push('\n');
        out
    }

    /// One `<severity> <rule> <paths>: <message>` line per diagnostic.
    pub fn to_text(&self) -> String {
        self.diagnostics.iter().map(|d| format!("{d}\n")).collect()
    }
}

/// Runs the whole rule catalogue over `d`.
pub fn validate(d: &Datasheet, s: &Schema) -> ValidationReport {
    ValidationReport::from_diagnostics(rules::run_all(d, s))
}

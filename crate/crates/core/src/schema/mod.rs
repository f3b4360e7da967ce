//! The HEDS 1.0 question tree.
//!
//! A [`Schema`] is four fixed parts (1, 2, 3 and 5) plus the repeatable
//! quality-criterion block (part 4), which a datasheet instantiates between
//! one and [`Schema::max_criteria`] times. The built-in schema is obtained
//! from [`builtin_schema`] and never changes after construction.

mod heds_v1;
mod id;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use id::{QuestionId, QuestionPath};

/// The only schema version this crate understands.
pub const SCHEMA_VERSION: &str = "1.0";

/// Part number of the repeatable criterion block.
pub const CRITERION_PART: u16 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown question `{0}`")]
    UnknownQuestion(String),
    #[error("question `{0}` is not a choice question")]
    NotAChoiceQuestion(String),
    #[error("invalid question id `{0}`")]
    InvalidQuestionId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuestionKind {
    FreeText,
    IntegerText,
    SingleChoice,
    MultiChoice,
}

impl QuestionKind {
    pub fn is_choice(self) -> bool {
        matches!(self, QuestionKind::SingleChoice | QuestionKind::MultiChoice)
    }
}

impl fmt::Display for QuestionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuestionKind::FreeText => "free text",
            QuestionKind::IntegerText => "integer",
            QuestionKind::SingleChoice => "single choice",
            QuestionKind::MultiChoice => "multiple choice",
        })
    }
}

/// Fixed tokens a text box may hold in place of a real answer.
///
/// Tokens are case-sensitive: `N/A` is a sentinel, `n/a` is ordinary text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sentinel {
    #[serde(rename = "N/A")]
    NotApplicable,
    #[serde(rename = "continuous")]
    Continuous,
    #[serde(rename = "for preregistration")]
    ForPreregistration,
    #[serde(rename = "None")]
    None,
}

impl Sentinel {
    pub const ALL: [Sentinel; 4] = [
        Sentinel::NotApplicable,
        Sentinel::Continuous,
        Sentinel::ForPreregistration,
        Sentinel::None,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Sentinel::NotApplicable => "N/A",
            Sentinel::Continuous => "continuous",
            Sentinel::ForPreregistration => "for preregistration",
            Sentinel::None => "None",
        }
    }

    pub fn from_token(token: &str) -> Option<Sentinel> {
        Sentinel::ALL.into_iter().find(|s| s.token() == token)
    }
}

impl fmt::Display for Sentinel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionDef {
    /// Stable lowercase, hyphenated identifier.
    pub key: String,
    pub label: String,
    /// Selecting this option obliges the author to fill the question's
    /// `other_text`.
    pub requires_text: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: QuestionPath,
    pub prompt: String,
    pub kind: QuestionKind,
    pub options: Vec<OptionDef>,
    pub allows_na: bool,
    /// Every sentinel the text box accepts; contains `N/A` iff `allows_na`.
    pub sentinels: Vec<Sentinel>,
    /// The form asks for details under `Other` even when `Other` is not
    /// ticked, so `other_text` is always welcome here.
    pub details_in_other: bool,
    pub help: String,
}

impl Question {
    pub fn option(&self, key: &str) -> Option<&OptionDef> {
        self.options.iter().find(|o| o.key == key)
    }

    pub fn option_by_label(&self, label: &str) -> Option<&OptionDef> {
        self.options.iter().find(|o| o.label == label)
    }

    pub fn option_position(&self, key: &str) -> Option<usize> {
        self.options.iter().position(|o| o.key == key)
    }

    pub fn accepts_sentinel(&self, sentinel: Sentinel) -> bool {
        self.sentinels.contains(&sentinel)
    }

    pub fn has_text_option(&self) -> bool {
        self.options.iter().any(|o| o.requires_text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub id: u16,
    pub title: String,
    pub questions: Vec<Question>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    #[serde(rename = "schema_version")]
    pub version: String,
    pub parts: Vec<Part>,
    pub criterion_block: Part,
    pub max_criteria: usize,
}

/// The complete HEDS 1.0 schema.
pub fn builtin_schema() -> &'static Schema {
    static SCHEMA: OnceLock<Schema> = OnceLock::new();
    SCHEMA.get_or_init(heds_v1::build)
}

impl Schema {
    /// Looks a question up by id, ignoring the criterion index.
    pub fn question(&self, id: &QuestionId) -> Result<&Question, SchemaError> {
        self.question_by_path(id.path())
    }

    pub fn question_by_path(&self, path: &QuestionPath) -> Result<&Question, SchemaError> {
        let part = if path.part() == CRITERION_PART {
            Some(&self.criterion_block)
        } else {
            self.parts.iter().find(|p| p.id == path.part())
        };
        part.and_then(|p| p.questions.iter().find(|q| &q.id == path))
            .ok_or_else(|| SchemaError::UnknownQuestion(path.to_string()))
    }

    /// Convenience lookup from a dotted path such as `"4.3.3"`.
    pub fn lookup(&self, path: &str) -> Result<&Question, SchemaError> {
        let path = QuestionPath::from_str(path)?;
        self.question_by_path(&path)
    }

    pub fn options_of(&self, id: &QuestionId) -> Result<&[OptionDef], SchemaError> {
        let q = self.question(id)?;
        if q.kind.is_choice() {
            Ok(&q.options)
        } else {
            Err(SchemaError::NotAChoiceQuestion(id.path().to_string()))
        }
    }

    /// Questions of the fixed parts, in form order.
    pub fn fixed_questions(&self) -> impl Iterator<Item = &Question> {
        self.parts.iter().flat_map(|p| p.questions.iter())
    }

    pub fn criterion_questions(&self) -> &[Question] {
        &self.criterion_block.questions
    }

    /// Parts in form order, with the criterion block slotted in as part 4.
    pub fn parts_in_order(&self) -> Vec<&Part> {
        let mut parts: Vec<&Part> = self.parts.iter().collect();
        parts.push(&self.criterion_block);
        parts.sort_by_key(|p| p.id);
        parts
    }

    /// JSON export consumed by the authoring UI.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("schema serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn keys(path: &str) -> Vec<String> {
        builtin_schema()
            .lookup(path)
            .unwrap()
            .options
            .iter()
            .map(|o| o.key.clone())
            .collect()
    }

    #[test]
    fn question_counts() {
        let s = builtin_schema();
        let per_part: Vec<(u16, usize)> = s.parts.iter().map(|p| (p.id, p.questions.len())).collect();
        assert_eq!(per_part, vec![(1, 3), (2, 5), (3, 16), (5, 4)]);
        assert_eq!(s.fixed_questions().count(), 28);
        assert_eq!(s.criterion_questions().len(), 17);
        assert_eq!(s.criterion_block.id, 4);
        assert_eq!(s.max_criteria, 10);
        assert_eq!(s.version, "1.0");
    }

    #[test]
    fn option_counts() {
        let s = builtin_schema();
        let count = |p: &str| s.lookup(p).unwrap().options.len();
        assert_eq!(count("2.1"), 15);
        assert_eq!(count("2.2"), 14);
        assert_eq!(count("2.3"), 20);
        assert_eq!(count("4.3.8"), 11);
        for p in ["4.1.1", "4.1.2", "4.1.3"] {
            assert_eq!(count(p), 3, "{p}");
        }
        for p in ["4.2.1", "4.2.2", "4.2.3"] {
            assert_eq!(count(p), 2, "{p}");
        }
    }

    #[test]
    fn ids_unique_and_prefixed() {
        let s = builtin_schema();
        let mut seen = HashSet::new();
        for part in s.parts_in_order() {
            for q in &part.questions {
                assert!(seen.insert(q.id.clone()), "duplicate {}", q.id);
                assert_eq!(q.id.part(), part.id, "{} in part {}", q.id, part.id);
                let depth = q.id.segments().len();
                assert!((2..=3).contains(&depth));
            }
        }
        assert_eq!(seen.len(), 45);
    }

    #[test]
    fn kinds_and_options_consistent() {
        let slug = regex::Regex::new(r"^[a-z0-9]+(-[a-z0-9]+)*$").unwrap();
        for part in builtin_schema().parts_in_order() {
            for q in &part.questions {
                if q.kind.is_choice() {
                    assert!(q.options.len() >= 2, "{}", q.id);
                } else {
                    assert!(q.options.is_empty(), "{}", q.id);
                }
                let mut keys = HashSet::new();
                let mut labels = HashSet::new();
                for o in &q.options {
                    assert!(slug.is_match(&o.key), "{}: bad key {}", q.id, o.key);
                    assert!(keys.insert(&o.key), "{}: duplicate key {}", q.id, o.key);
                    assert!(labels.insert(&o.label), "{}: duplicate label", q.id);
                    if o.label.to_lowercase().contains("please specify") {
                        assert!(o.requires_text, "{}: {}", q.id, o.key);
                    }
                }
                assert_eq!(q.allows_na, q.accepts_sentinel(Sentinel::NotApplicable), "{}", q.id);
                assert!(!q.prompt.is_empty());
            }
        }
    }

    #[test]
    fn key_label_key_round_trips() {
        for part in builtin_schema().parts_in_order() {
            for q in &part.questions {
                for o in &q.options {
                    let label = &q.option(&o.key).unwrap().label;
                    assert_eq!(q.option_by_label(label).unwrap().key, o.key);
                }
            }
        }
    }

    #[test]
    fn output_types_derive_from_input_types() {
        let mut inputs: HashSet<String> = keys("2.1").into_iter().collect();
        inputs.remove("control-feature");
        inputs.remove("no-input-human-generation");
        inputs.insert("human-generated-outputs".into());
        let outputs: HashSet<String> = keys("2.2").into_iter().collect();
        assert_eq!(inputs, outputs);
    }

    #[test]
    fn lookups() {
        let s = builtin_schema();
        let q = s.question(&QuestionId::fixed("3.1.1".parse().unwrap())).unwrap();
        assert_eq!(q.kind, QuestionKind::IntegerText);
        let q = s.question(&"4.1.1@3".parse().unwrap()).unwrap();
        assert_eq!(q.kind, QuestionKind::SingleChoice);
        assert_eq!(keys("4.1.1"), ["correctness", "goodness", "features"]);
        assert_eq!(
            s.question(&"9.9.9".parse().unwrap()),
            Err(SchemaError::UnknownQuestion("9.9.9".into()))
        );
        assert_eq!(keys("4.2.2"), ["absolute", "relative"]);
        assert_eq!(keys("4.2.3"), ["intrinsic", "extrinsic"]);
        assert_eq!(
            s.options_of(&"1.1".parse().unwrap()),
            Err(SchemaError::NotAChoiceQuestion("1.1".into()))
        );
        assert!(matches!(
            s.options_of(&"7.1".parse().unwrap()),
            Err(SchemaError::UnknownQuestion(_))
        ));
    }

    #[test]
    fn scale_size_accepts_its_sentinels() {
        let q = builtin_schema().lookup("4.3.3").unwrap();
        assert_eq!(q.kind, QuestionKind::IntegerText);
        assert!(q.accepts_sentinel(Sentinel::NotApplicable));
        assert!(q.accepts_sentinel(Sentinel::Continuous));
        assert!(!q.accepts_sentinel(Sentinel::None));
        let q = builtin_schema().lookup("1.1").unwrap();
        assert_eq!(q.sentinels, vec![Sentinel::ForPreregistration]);
    }

    #[test]
    fn schema_is_stable() {
        assert_eq!(heds_v1::build(), heds_v1::build());
        assert!(std::ptr::eq(builtin_schema(), builtin_schema()));
        let json = builtin_schema().to_json();
        assert!(json.contains("\"schema_version\": \"1.0\""));
        let back: Schema = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, builtin_schema());
    }

    #[test]
    fn sentinel_tokens() {
        for s in Sentinel::ALL {
            assert_eq!(Sentinel::from_token(s.token()), Some(s));
        }
        assert_eq!(Sentinel::from_token("n/a"), None);
    }
}

//! Datasheet instances.
//!
//! A [`Datasheet`] holds the answers for one evaluation experiment: answers
//! to the fixed parts keyed by question path, plus one [`CriterionBlock`]
//! per quality criterion. Values are immutable; every edit returns a new
//! datasheet. Edits are checked structurally (the path exists, the value
//! fits the question kind) but never semantically; see [`crate::validate`].

mod canonical;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::schema::{
    QuestionId, QuestionKind, QuestionPath, Schema, SchemaError, Sentinel, SCHEMA_VERSION,
};

pub use canonical::{parse_canonical, serialize_canonical, CANONICAL_EXTENSION};
pub(crate) use canonical::integer_text;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema version `{0}` (expected `{SCHEMA_VERSION}`)")]
    UnsupportedSchemaVersion(String),
    #[error("unknown question `{0}`")]
    UnknownQuestion(String),
    #[error("{path}: expected a {expected} answer, {detail}")]
    KindMismatch {
        path: String,
        expected: QuestionKind,
        detail: String,
    },
    #[error("{path}: unknown option `{key}`")]
    UnknownOption { path: String, key: String },
    #[error("{path}: option `{key}` selected more than once")]
    DuplicateOption { path: String, key: String },
    #[error("{path}: empty answer (leave the question out instead)")]
    EmptyAnswer { path: String },
    #[error("criterion {index} does not exist (the sheet has {count})")]
    CriterionOutOfRange { index: u8, count: usize },
    #[error("a datasheet holds at most {max} quality criteria")]
    CriterionLimitExceeded { max: usize },
    #[error("malformed document: {0}")]
    Structure(String),
}

impl From<SchemaError> for DocumentError {
    fn from(e: SchemaError) -> Self {
        match e {
            SchemaError::UnknownQuestion(p) | SchemaError::InvalidQuestionId(p) => {
                DocumentError::UnknownQuestion(p)
            }
            SchemaError::NotAChoiceQuestion(p) => DocumentError::KindMismatch {
                path: p,
                expected: QuestionKind::FreeText,
                detail: "got a choice".into(),
            },
        }
    }
}

/// Typed payload of one answer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnswerValue {
    Text(String),
    Integer(u64),
    SingleChoice {
        option: String,
        other_text: Option<String>,
    },
    /// Option keys are kept in schema order.
    MultiChoice {
        options: Vec<String>,
        other_text: Option<String>,
    },
    Sentinel(Sentinel),
}

impl AnswerValue {
    pub fn text(s: impl Into<String>) -> Self {
        AnswerValue::Text(s.into())
    }

    pub fn choice(option: impl Into<String>) -> Self {
        AnswerValue::SingleChoice {
            option: option.into(),
            other_text: None,
        }
    }

    pub fn choices<I, S>(options: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AnswerValue::MultiChoice {
            options: options.into_iter().map(Into::into).collect(),
            other_text: None,
        }
    }

    /// Attaches `other_text` to a choice answer; no-op for other variants.
    pub fn with_other_text(mut self, text: impl Into<String>) -> Self {
        match &mut self {
            AnswerValue::SingleChoice { other_text, .. }
            | AnswerValue::MultiChoice { other_text, .. } => *other_text = Some(text.into()),
            _ => {}
        }
        self
    }

    pub fn is_sentinel(&self, sentinel: Sentinel) -> bool {
        matches!(self, AnswerValue::Sentinel(s) if *s == sentinel)
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            AnswerValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<u64> {
        match self {
            AnswerValue::Integer(n) => Some(*n),
            _ => None,
        }
    }

    /// Selected option keys of a choice answer (empty otherwise).
    pub fn selected(&self) -> &[String] {
        match self {
            AnswerValue::SingleChoice { option, .. } => std::slice::from_ref(option),
            AnswerValue::MultiChoice { options, .. } => options,
            _ => &[],
        }
    }

    pub fn is_selected(&self, key: &str) -> bool {
        self.selected().iter().any(|k| k == key)
    }

    pub fn other_text(&self) -> Option<&str> {
        match self {
            AnswerValue::SingleChoice { other_text, .. }
            | AnswerValue::MultiChoice { other_text, .. } => other_text.as_deref(),
            _ => None,
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            AnswerValue::Text(_) => "text",
            AnswerValue::Integer(_) => "an integer",
            AnswerValue::SingleChoice { .. } => "a single choice",
            AnswerValue::MultiChoice { .. } => "a multiple choice",
            AnswerValue::Sentinel(_) => "a sentinel",
        }
    }

    /// Checks `self` against the question's kind and returns its canonical
    /// form: free text spelling an accepted sentinel becomes that sentinel,
    /// and multiple-choice keys are put in schema order.
    pub fn conform(self, schema: &Schema, id: &QuestionId) -> Result<AnswerValue, DocumentError> {
        let question = schema.question(id)?;
        let path = || id.to_string();
        let mismatch = |detail: String| DocumentError::KindMismatch {
            path: path(),
            expected: question.kind,
            detail,
        };
        let check_other = |other: &Option<String>| match other {
            Some(t) if t.is_empty() => Err(DocumentError::EmptyAnswer { path: path() }),
            _ => Ok(()),
        };
        match (question.kind, self) {
            (_, AnswerValue::Sentinel(s)) if !question.kind.is_choice() => {
                if question.accepts_sentinel(s) {
                    Ok(AnswerValue::Sentinel(s))
                } else {
                    Err(mismatch(format!("`{s}` is not accepted here")))
                }
            }
            (QuestionKind::FreeText, AnswerValue::Text(s)) => {
                if s.is_empty() {
                    return Err(DocumentError::EmptyAnswer { path: path() });
                }
                match Sentinel::from_token(&s) {
                    Some(sentinel) if question.accepts_sentinel(sentinel) => {
                        Ok(AnswerValue::Sentinel(sentinel))
                    }
                    _ => Ok(AnswerValue::Text(s)),
                }
            }
            (QuestionKind::IntegerText, AnswerValue::Integer(n)) => Ok(AnswerValue::Integer(n)),
            (QuestionKind::SingleChoice, AnswerValue::SingleChoice { option, other_text }) => {
                if question.option(&option).is_none() {
                    return Err(DocumentError::UnknownOption { path: path(), key: option });
                }
                check_other(&other_text)?;
                Ok(AnswerValue::SingleChoice { option, other_text })
            }
            (QuestionKind::MultiChoice, AnswerValue::MultiChoice { options, other_text }) => {
                if options.is_empty() {
                    return Err(DocumentError::EmptyAnswer { path: path() });
                }
                let mut positions = Vec::with_capacity(options.len());
                for key in &options {
                    let pos = question.option_position(key).ok_or_else(|| {
                        DocumentError::UnknownOption { path: path(), key: key.clone() }
                    })?;
                    if positions.contains(&pos) {
                        return Err(DocumentError::DuplicateOption { path: path(), key: key.clone() });
                    }
                    positions.push(pos);
                }
                check_other(&other_text)?;
                positions.sort_unstable();
                let options = positions
                    .into_iter()
                    .map(|p| question.options[p].key.clone())
                    .collect();
                Ok(AnswerValue::MultiChoice { options, other_text })
            }
            (_, other) => Err(mismatch(format!("got {}", other.describe()))),
        }
    }
}

/// Answers for one quality criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionBlock {
    index: u8,
    answers: BTreeMap<QuestionPath, AnswerValue>,
}

impl CriterionBlock {
    pub fn new(index: u8) -> Self {
        CriterionBlock { index, answers: BTreeMap::new() }
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn answers(&self) -> &BTreeMap<QuestionPath, AnswerValue> {
        &self.answers
    }

    pub fn answer(&self, path: &str) -> Option<&AnswerValue> {
        let path: QuestionPath = path.parse().ok()?;
        self.answers.get(&path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Datasheet {
    schema_version: String,
    fixed_answers: BTreeMap<QuestionPath, AnswerValue>,
    criteria: Vec<CriterionBlock>,
    provenance: Option<String>,
}

impl Datasheet {
    /// No answers, one empty criterion block.
    pub fn new_empty(schema: &Schema) -> Self {
        Datasheet {
            schema_version: schema.version.clone(),
            fixed_answers: BTreeMap::new(),
            criteria: vec![CriterionBlock::new(1)],
            provenance: None,
        }
    }

    pub(crate) fn from_parts(
        schema_version: String,
        fixed_answers: BTreeMap<QuestionPath, AnswerValue>,
        criteria: Vec<BTreeMap<QuestionPath, AnswerValue>>,
        provenance: Option<String>,
    ) -> Self {
        let criteria = criteria
            .into_iter()
            .enumerate()
            .map(|(i, answers)| CriterionBlock { index: (i + 1) as u8, answers })
            .collect();
        Datasheet { schema_version, fixed_answers, criteria, provenance }
    }

    pub fn schema_version(&self) -> &str {
        &self.schema_version
    }

    pub fn fixed_answers(&self) -> &BTreeMap<QuestionPath, AnswerValue> {
        &self.fixed_answers
    }

    pub fn criteria(&self) -> &[CriterionBlock] {
        &self.criteria
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn with_provenance(&self, provenance: Option<String>) -> Datasheet {
        Datasheet { provenance, ..self.clone() }
    }

    pub fn answer(&self, id: &QuestionId) -> Option<&AnswerValue> {
        match id.criterion_index() {
            None => self.fixed_answers.get(id.path()),
            Some(i) => self.criteria.get(usize::from(i).checked_sub(1)?)?.answers.get(id.path()),
        }
    }

    /// Every answer with its id, in form order.
    pub fn answers(&self) -> Vec<(QuestionId, &AnswerValue)> {
        let mut out: Vec<(QuestionId, &AnswerValue)> = self
            .fixed_answers
            .iter()
            .map(|(p, v)| (QuestionId::fixed(p.clone()), v))
            .chain(self.criteria.iter().flat_map(|c| {
                c.answers.iter().map(|(p, v)| (QuestionId::criterion(p.clone(), c.index), v))
            }))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn check_criterion(&self, id: &QuestionId) -> Result<(), DocumentError> {
        if let Some(index) = id.criterion_index() {
            if index == 0 || usize::from(index) > self.criteria.len() {
                return Err(DocumentError::CriterionOutOfRange {
                    index,
                    count: self.criteria.len(),
                });
            }
        }
        Ok(())
    }

    fn slot(&mut self, id: &QuestionId) -> &mut BTreeMap<QuestionPath, AnswerValue> {
        match id.criterion_index() {
            None => &mut self.fixed_answers,
            Some(i) => &mut self.criteria[usize::from(i) - 1].answers,
        }
    }

    pub fn set_answer(
        &self,
        schema: &Schema,
        id: &QuestionId,
        value: AnswerValue,
    ) -> Result<Datasheet, DocumentError> {
        schema.question(id)?;
        self.check_criterion(id)?;
        let value = value.conform(schema, id)?;
        let mut next = self.clone();
        next.slot(id).insert(id.path().clone(), value);
        Ok(next)
    }

    /// Removes an answer, leaving the question unanswered.
    pub fn clear_answer(&self, id: &QuestionId) -> Result<Datasheet, DocumentError> {
        self.check_criterion(id)?;
        let mut next = self.clone();
        next.slot(id).remove(id.path());
        Ok(next)
    }

    /// Appends an empty criterion block.
    pub fn add_criterion(&self, schema: &Schema) -> Result<Datasheet, DocumentError> {
        if self.criteria.len() >= schema.max_criteria {
            return Err(DocumentError::CriterionLimitExceeded { max: schema.max_criteria });
        }
        let mut next = self.clone();
        next.criteria.push(CriterionBlock::new((self.criteria.len() + 1) as u8));
        Ok(next)
    }

    /// Drops criterion block `index` and renumbers the rest.
    pub fn remove_criterion(&self, index: u8) -> Result<Datasheet, DocumentError> {
        if index == 0 || usize::from(index) > self.criteria.len() {
            return Err(DocumentError::CriterionOutOfRange { index, count: self.criteria.len() });
        }
        let mut next = self.clone();
        next.criteria.remove(usize::from(index) - 1);
        for (i, block) in next.criteria.iter_mut().enumerate() {
            block.index = (i + 1) as u8;
        }
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::builtin_schema;

    fn id(s: &str) -> QuestionId {
        s.parse().unwrap()
    }

    #[test]
    fn empty_sheet() {
        let d = Datasheet::new_empty(builtin_schema());
        assert_eq!(d.criteria().len(), 1);
        assert!(d.fixed_answers().is_empty());
        assert_eq!(d.schema_version(), "1.0");
    }

    #[test]
    fn set_answer_checks_kind() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s);
        let d = d.set_answer(s, &id("3.2.1"), AnswerValue::Integer(10)).unwrap();
        assert_eq!(d.answer(&id("3.2.1")), Some(&AnswerValue::Integer(10)));
        let d = d.set_answer(s, &id("4.1.1@1"), AnswerValue::choice("goodness")).unwrap();
        assert!(d.answer(&id("4.1.1@1")).unwrap().is_selected("goodness"));
        assert!(matches!(
            d.set_answer(s, &id("3.1.1"), AnswerValue::text("many")),
            Err(DocumentError::KindMismatch { .. })
        ));
        assert!(matches!(
            d.set_answer(s, &id("9.9"), AnswerValue::text("x")),
            Err(DocumentError::UnknownQuestion(_))
        ));
        assert!(matches!(
            d.set_answer(s, &id("4.1.1@2"), AnswerValue::choice("goodness")),
            Err(DocumentError::CriterionOutOfRange { index: 2, count: 1 })
        ));
        assert!(matches!(
            d.set_answer(s, &id("4.1.1"), AnswerValue::choice("nonsense")),
            Err(DocumentError::UnknownOption { .. })
        ));
    }

    #[test]
    fn sentinels_are_normalized() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s);
        let d = d.set_answer(s, &id("1.2"), AnswerValue::text("N/A")).unwrap();
        assert_eq!(d.answer(&id("1.2")), Some(&AnswerValue::Sentinel(Sentinel::NotApplicable)));
        // 1.3 accepts no sentinel, so the literal text stays text.
        let d = d.set_answer(s, &id("1.3"), AnswerValue::text("N/A")).unwrap();
        assert_eq!(d.answer(&id("1.3")), Some(&AnswerValue::text("N/A")));
        let d = d
            .set_answer(s, &id("4.3.3"), AnswerValue::Sentinel(Sentinel::Continuous))
            .unwrap();
        assert!(d.answer(&id("4.3.3")).unwrap().is_sentinel(Sentinel::Continuous));
        assert!(d
            .set_answer(s, &id("3.1.1"), AnswerValue::Sentinel(Sentinel::NotApplicable))
            .is_err());
        assert!(d.set_answer(s, &id("1.3"), AnswerValue::text("")).is_err());
    }

    #[test]
    fn multi_choice_in_schema_order() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s)
            .set_answer(s, &id("3.2.2"), AnswerValue::choices(["not-paid", "experts"]))
            .unwrap();
        assert_eq!(d.answer(&id("3.2.2")).unwrap().selected(), ["experts", "not-paid"]);
        let dup = Datasheet::new_empty(s)
            .set_answer(s, &id("3.2.2"), AnswerValue::choices(["experts", "experts"]));
        assert!(matches!(dup, Err(DocumentError::DuplicateOption { .. })));
        let empty = Datasheet::new_empty(s)
            .set_answer(s, &id("3.2.2"), AnswerValue::choices(Vec::<String>::new()));
        assert!(matches!(empty, Err(DocumentError::EmptyAnswer { .. })));
        let wrong = Datasheet::new_empty(s).set_answer(s, &id("4.1.1"), AnswerValue::choices(["goodness"]));
        assert!(matches!(wrong, Err(DocumentError::KindMismatch { .. })));
    }

    #[test]
    fn criterion_cap() {
        let s = builtin_schema();
        let mut d = Datasheet::new_empty(s);
        d = d.add_criterion(s).unwrap().add_criterion(s).unwrap();
        let idx: Vec<u8> = d.criteria().iter().map(|c| c.index()).collect();
        assert_eq!(idx, [1, 2, 3]);
        while d.criteria().len() < 10 {
            d = d.add_criterion(s).unwrap();
        }
        assert_eq!(
            d.add_criterion(s),
            Err(DocumentError::CriterionLimitExceeded { max: 10 })
        );
        let d = d.remove_criterion(4).unwrap();
        let idx: Vec<u8> = d.criteria().iter().map(|c| c.index()).collect();
        assert_eq!(idx, (1..=9).collect::<Vec<u8>>());
    }

    #[test]
    fn edits_do_not_touch_the_original() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s);
        let e = d.set_answer(s, &id("1.3"), AnswerValue::text("me")).unwrap();
        assert!(d.fixed_answers().is_empty());
        let f = e.clear_answer(&id("1.3")).unwrap();
        assert_eq!(f, d);
    }
}

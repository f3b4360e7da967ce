//! The canonical `.heds.json` format.
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "answers": { "1.1": "https://...", "3.1.1": 120, "3.1.2": { "option": "random" } },
//!   "criteria": [ { "4.1.1": { "option": "goodness" }, "4.3.3": "N/A" } ],
//!   "provenance": null
//! }
//! ```
//!
//! Answer encodings by question kind:
//! - free text: a string; sentinels are their exact tokens (`"N/A"`);
//! - integer: a number (a string of digits or a sentinel token is also read);
//! - single choice: `{"option": key, "other_text"?: string}`;
//! - multiple choice: `{"options": [keys...], "other_text"?: string}`.
//!
//! Output is pretty-printed with two-space indentation, keys in question
//! order, multiple-choice keys in schema order and a trailing newline.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::{AnswerValue, Datasheet, DocumentError};
use crate::schema::{QuestionId, QuestionKind, QuestionPath, Schema, Sentinel, SCHEMA_VERSION};

pub const CANONICAL_EXTENSION: &str = ".heds.json";

const TOP_LEVEL_KEYS: [&str; 4] = ["schema_version", "answers", "criteria", "provenance"];

pub fn serialize_canonical(d: &Datasheet) -> Vec<u8> {
    let mut root = Map::new();
    root.insert("schema_version".into(), Value::String(d.schema_version.clone()));
    root.insert("answers".into(), Value::Object(answers_to_json(&d.fixed_answers)));
    root.insert(
        "criteria".into(),
        Value::Array(
            d.criteria
                .iter()
                .map(|c| Value::Object(answers_to_json(&c.answers)))
                .collect(),
        ),
    );
    root.insert(
        "provenance".into(),
        d.provenance.clone().map(Value::String).unwrap_or(Value::Null),
    );
    let mut out = serde_json::to_vec_pretty(&Value::Object(root)).expect("JSON values serialize");
    out.push(b'\n');
    out
}

fn answers_to_json(answers: &BTreeMap<QuestionPath, AnswerValue>) -> Map<String, Value> {
    answers
        .iter()
        .map(|(path, value)| (path.to_string(), answer_to_json(value)))
        .collect()
}

impl AnswerValue {
    /// The answer's canonical JSON form.
    pub fn to_json(&self) -> Value {
        answer_to_json(self)
    }
}

fn answer_to_json(value: &AnswerValue) -> Value {
    let with_other = |mut m: Map<String, Value>, other: &Option<String>| {
        if let Some(t) = other {
            m.insert("other_text".into(), Value::String(t.clone()));
        }
        Value::Object(m)
    };
    match value {
        AnswerValue::Text(s) => Value::String(s.clone()),
        AnswerValue::Integer(n) => Value::from(*n),
        AnswerValue::Sentinel(s) => Value::String(s.token().to_string()),
        AnswerValue::SingleChoice { option, other_text } => {
            let mut m = Map::new();
            m.insert("option".into(), Value::String(option.clone()));
            with_other(m, other_text)
        }
        AnswerValue::MultiChoice { options, other_text } => {
            let mut m = Map::new();
            m.insert(
                "options".into(),
                Value::Array(options.iter().cloned().map(Value::String).collect()),
            );
            with_other(m, other_text)
        }
    }
}

/// Parses a canonical document, checking paths and answer kinds against
/// `schema`. Cross-question rules are left to validation.
pub fn parse_canonical(input: &[u8], schema: &Schema) -> Result<Datasheet, DocumentError> {
    let root: Value = serde_json::from_slice(input).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(mut root) = root else {
        return Err(DocumentError::Structure("top level must be an object".into()));
    };
    if let Some(unknown) = root.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
        return Err(DocumentError::Structure(format!("unknown top-level key `{unknown}`")));
    }
    let version = match root.remove("schema_version") {
        Some(Value::String(v)) => v,
        Some(_) => return Err(DocumentError::Structure("`schema_version` must be a string".into())),
        None => return Err(DocumentError::Structure("missing `schema_version`".into())),
    };
    if version != SCHEMA_VERSION || version != schema.version {
        return Err(DocumentError::UnsupportedSchemaVersion(version));
    }

    let answers = match root.remove("answers") {
        Some(Value::Object(m)) => m,
        Some(_) => return Err(DocumentError::Structure("`answers` must be an object".into())),
        None => return Err(DocumentError::Structure("missing `answers`".into())),
    };
    let fixed = parse_answer_map(answers, schema, None)?;

    let blocks = match root.remove("criteria") {
        Some(Value::Array(a)) => a,
        Some(_) => return Err(DocumentError::Structure("`criteria` must be an array".into())),
        None => return Err(DocumentError::Structure("missing `criteria`".into())),
    };
    if blocks.len() > schema.max_criteria {
        return Err(DocumentError::CriterionLimitExceeded { max: schema.max_criteria });
    }
    let criteria = blocks
        .into_iter()
        .enumerate()
        .map(|(i, block)| match block {
            Value::Object(m) => parse_answer_map(m, schema, Some((i + 1) as u8)),
            _ => Err(DocumentError::Structure(format!("criterion {} must be an object", i + 1))),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let provenance = match root.remove("provenance") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err(DocumentError::Structure("`provenance` must be a string or null".into())),
    };

    Ok(Datasheet::from_parts(version, fixed, criteria, provenance))
}

fn parse_answer_map(
    map: Map<String, Value>,
    schema: &Schema,
    criterion: Option<u8>,
) -> Result<BTreeMap<QuestionPath, AnswerValue>, DocumentError> {
    let mut out = BTreeMap::new();
    for (key, raw) in map {
        let path: QuestionPath = key
            .parse()
            .map_err(|_| DocumentError::UnknownQuestion(key.clone()))?;
        schema.question_by_path(&path)?;
        let id = match (path.is_criterion_scoped(), criterion) {
            (true, Some(i)) => QuestionId::criterion(path.clone(), i),
            (false, None) => QuestionId::fixed(path.clone()),
            (true, None) => {
                return Err(DocumentError::UnknownQuestion(format!(
                    "{key} (criterion questions belong in `criteria`)"
                )))
            }
            (false, Some(_)) => {
                return Err(DocumentError::UnknownQuestion(format!(
                    "{key} (not a criterion question)"
                )))
            }
        };
        let value = answer_from_json(raw, schema, &id)?.conform(schema, &id)?;
        out.insert(path, value);
    }
    Ok(out)
}

fn answer_from_json(raw: Value, schema: &Schema, id: &QuestionId) -> Result<AnswerValue, DocumentError> {
    let question = schema.question(id)?;
    let mismatch = |detail: &str| DocumentError::KindMismatch {
        path: id.to_string(),
        expected: question.kind,
        detail: detail.to_string(),
    };
    match question.kind {
        QuestionKind::FreeText => match raw {
            Value::String(s) => Ok(AnswerValue::Text(s)),
            _ => Err(mismatch("expected a string")),
        },
        QuestionKind::IntegerText => match raw {
            Value::Number(n) => n
                .as_u64()
                .map(AnswerValue::Integer)
                .ok_or_else(|| mismatch("expected a non-negative integer")),
            Value::String(s) => integer_text(&s)
                .ok_or_else(|| mismatch(&format!("`{s}` is not an integer or accepted token"))),
            _ => Err(mismatch("expected an integer")),
        },
        QuestionKind::SingleChoice | QuestionKind::MultiChoice => {
            let Value::Object(mut m) = raw else {
                return Err(mismatch("expected an object"));
            };
            let other_text = match m.remove("other_text") {
                None => None,
                Some(Value::String(s)) => Some(s),
                Some(_) => return Err(mismatch("`other_text` must be a string")),
            };
            let selection_key = if question.kind == QuestionKind::SingleChoice { "option" } else { "options" };
            let selection = m
                .remove(selection_key)
                .ok_or_else(|| mismatch(&format!("missing `{selection_key}`")))?;
            if let Some(extra) = m.keys().next() {
                return Err(mismatch(&format!("unexpected key `{extra}`")));
            }
            match (question.kind, selection) {
                (QuestionKind::SingleChoice, Value::String(option)) => {
                    Ok(AnswerValue::SingleChoice { option, other_text })
                }
                (QuestionKind::MultiChoice, Value::Array(items)) => {
                    let options = items
                        .into_iter()
                        .map(|v| match v {
                            Value::String(s) => Ok(s),
                            _ => Err(mismatch("option keys must be strings")),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(AnswerValue::MultiChoice { options, other_text })
                }
                _ => Err(mismatch(&format!("malformed `{selection_key}`"))),
            }
        }
    }
}

/// Reads an integer text box: digits, or a sentinel token.
pub(crate) fn integer_text(s: &str) -> Option<AnswerValue> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        return s.parse().ok().map(AnswerValue::Integer);
    }
    Sentinel::from_token(s).map(AnswerValue::Sentinel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::builtin_schema;

    fn parse(s: &str) -> Result<Datasheet, DocumentError> {
        parse_canonical(s.as_bytes(), builtin_schema())
    }

    #[test]
    fn empty_round_trip() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s);
        let bytes = serialize_canonical(&d);
        assert_eq!(
            std::str::from_utf8(&bytes).unwrap(),
            "{\n  \"schema_version\": \"1.0\",\n  \"answers\": {},\n  \"criteria\": [\n    {}\n  ],\n  \"provenance\": null\n}\n"
        );
        assert_eq!(parse_canonical(&bytes, s).unwrap(), d);
    }

    #[test]
    fn version_and_keys() {
        let err = parse(r#"{"schema_version":"2.0","answers":{},"criteria":[]}"#).unwrap_err();
        assert_eq!(err, DocumentError::UnsupportedSchemaVersion("2.0".into()));
        let err = parse(r#"{"schema_version":"1.0","answers":{},"criteria":[],"extra":1}"#).unwrap_err();
        assert!(matches!(err, DocumentError::Structure(_)));
        let d = parse(r#"{"schema_version":"1.0","answers":{},"criteria":[]}"#).unwrap();
        assert!(d.criteria().is_empty());
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse("{\n  \"schema_version\": \"1.0\",\n  \"answers\": {,\n}").unwrap_err();
        match err {
            DocumentError::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scale_size_from_string() {
        let d = parse(r#"{"schema_version":"1.0","answers":{},"criteria":[{"4.3.3":"5"}]}"#).unwrap();
        assert_eq!(d.criteria()[0].answer("4.3.3"), Some(&AnswerValue::Integer(5)));
        let d = parse(r#"{"schema_version":"1.0","answers":{},"criteria":[{"4.3.3":"continuous"}]}"#).unwrap();
        assert_eq!(
            d.criteria()[0].answer("4.3.3"),
            Some(&AnswerValue::Sentinel(Sentinel::Continuous))
        );
        let err = parse(r#"{"schema_version":"1.0","answers":{},"criteria":[{"4.3.3":"five"}]}"#).unwrap_err();
        assert!(matches!(err, DocumentError::KindMismatch { .. }));
        let err = parse(r#"{"schema_version":"1.0","answers":{"3.1.1":-4},"criteria":[]}"#).unwrap_err();
        assert!(matches!(err, DocumentError::KindMismatch { .. }));
    }

    #[test]
    fn path_scope_is_enforced() {
        let err = parse(r#"{"schema_version":"1.0","answers":{"4.1.1":{"option":"goodness"}},"criteria":[]}"#)
            .unwrap_err();
        assert!(matches!(err, DocumentError::UnknownQuestion(_)));
        let err = parse(r#"{"schema_version":"1.0","answers":{},"criteria":[{"1.1":"x"}]}"#).unwrap_err();
        assert!(matches!(err, DocumentError::UnknownQuestion(_)));
        let err = parse(r#"{"schema_version":"1.0","answers":{"3.9.9":"x"},"criteria":[]}"#).unwrap_err();
        assert!(matches!(err, DocumentError::UnknownQuestion(_)));
    }

    #[test]
    fn empty_text_is_rejected() {
        let err = parse(r#"{"schema_version":"1.0","answers":{"1.3":""},"criteria":[]}"#).unwrap_err();
        assert!(matches!(err, DocumentError::EmptyAnswer { .. }));
    }

    #[test]
    fn too_many_criteria() {
        let blocks = ["{}"; 11].join(",");
        let err = parse(&format!(r#"{{"schema_version":"1.0","answers":{{}},"criteria":[{blocks}]}}"#)).unwrap_err();
        assert_eq!(err, DocumentError::CriterionLimitExceeded { max: 10 });
    }

    #[test]
    fn na_serializes_as_token_and_choices_canonicalize() {
        let input = r#"{"schema_version":"1.0","answers":{"1.2":"N/A","2.1":{"options":["visual","raw-structured-data"]}},"criteria":[],"provenance":"heds 0.1"}"#;
        let d = parse(input).unwrap();
        let out = String::from_utf8(serialize_canonical(&d)).unwrap();
        assert!(out.contains("\"1.2\": \"N/A\""));
        let raw = out.find("raw-structured-data").unwrap();
        let visual = out.find("\"visual\"").unwrap();
        assert!(raw < visual);
        assert_eq!(serialize_canonical(&parse(&out).unwrap()), out.as_bytes());
    }

    #[test]
    fn keys_in_numeric_order() {
        let input = r#"{"schema_version":"1.0","answers":{},"criteria":[{"4.3.10":"None","4.3.2":"N/A","4.3.11":"kappa"}]}"#;
        let out = String::from_utf8(serialize_canonical(&parse(input).unwrap())).unwrap();
        let a = out.find("4.3.2").unwrap();
        let b = out.find("4.3.10").unwrap();
        let c = out.find("4.3.11").unwrap();
        assert!(a < b && b < c);
    }
}

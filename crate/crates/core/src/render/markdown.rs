//! Markdown layout:
//!
//! ````markdown
//! # Human Evaluation Datasheet (HEDS 1.0)
//!
//! schema_version: 1.0
//!
//! ## Part 1: Paper and Resources
//!
//! ### Q1.1: Link to paper reporting the evaluation experiment. ...
//!
//! > guidance text
//!
//! ```
//! https://example.org/paper.pdf
//! ```
//!
//! ## Part 4: Quality Criterion 1
//!
//! ### Q4.2.1: Does an individual assessment involve ...
//!
//! - [ ] Objective
//! - [x] Subjective
//! ````
//!
//! Text answers sit in a fenced block whose fence is longer than any
//! backtick run in the answer; an empty block means unanswered. Choice
//! questions list every option as a task-list item, followed by an
//! `Other details:` block where details may be given. Headings carry the
//! question id, so import never depends on prompt wording.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{part_heading, DOCUMENT_TITLE};
use crate::document::{integer_text, AnswerValue, Datasheet, DocumentError};
use crate::schema::{Question, QuestionId, QuestionKind, QuestionPath, Schema, CRITERION_PART};

const OTHER_MARKER: &str = "Other details:";
const VERSION_PREFIX: &str = "schema_version: ";
const PROVENANCE_HEADING: &str = "## Provenance";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkdownError {
    #[error("malformed template (line {line}{}): {reason}", .question.as_ref().map(|q| format!(", Q{q}")).unwrap_or_default())]
    MalformedTemplate {
        line: usize,
        question: Option<String>,
        reason: String,
    },
    #[error(transparent)]
    Document(#[from] DocumentError),
}

impl MarkdownError {
    /// The question the error is about, if any.
    pub fn question(&self) -> Option<&str> {
        match self {
            MarkdownError::MalformedTemplate { question, .. } => question.as_deref(),
            MarkdownError::Document(_) => None,
        }
    }
}

fn fence_for(content: &str) -> String {
    let mut longest = 0;
    let mut run = 0;
    for c in content.chars() {
        if c == '`' {
            run += 1;
            longest = longest.max(run);
        } else {
            run = 0;
        }
    }
    "`".repeat((longest + 1).max(3))
}

fn push_fenced(out: &mut String, content: Option<&str>) {
    match content {
        Some(text) => {
            let fence = fence_for(text);
            out.push_str(&format!("{fence}\n{text}\n{fence}\n\n"));
        }
        None => out.push_str("```\n```\n\n"),
    }
}

fn answer_text(value: &AnswerValue) -> String {
    match value {
        AnswerValue::Text(s) => s.clone(),
        AnswerValue::Integer(n) => n.to_string(),
        AnswerValue::Sentinel(s) => s.token().to_string(),
        AnswerValue::SingleChoice { .. } | AnswerValue::MultiChoice { .. } => {
            unreachable!("choice answers render as checkboxes")
        }
    }
}

fn render_question(out: &mut String, q: &Question, answer: Option<&AnswerValue>) {
    out.push_str(&format!("### Q{}: {}\n\n", q.id, q.prompt));
    if !q.help.is_empty() {
        out.push_str(&format!("> {}\n\n", q.help));
    }
    if !q.kind.is_choice() {
        push_fenced(out, answer.map(answer_text).as_deref());
        return;
    }
    for o in &q.options {
        let mark = if answer.is_some_and(|a| a.is_selected(&o.key)) { 'x' } else { ' ' };
        out.push_str(&format!("- [{mark}] {}\n", o.label));
    }
    out.push('\n');
    let other = answer.and_then(AnswerValue::other_text);
    if q.has_text_option() || q.details_in_other || other.is_some() {
        out.push_str(OTHER_MARKER);
        out.push_str("\n\n");
        push_fenced(out, other);
    }
}

pub fn render_markdown(d: &Datasheet, s: &Schema) -> String {
    let mut out = format!("# {DOCUMENT_TITLE}\n\n{VERSION_PREFIX}{}\n\n", d.schema_version());
    if let Some(p) = d.provenance() {
        out.push_str(PROVENANCE_HEADING);
        out.push_str("\n\n");
        push_fenced(&mut out, Some(p));
    }
    for part in s.parts_in_order() {
        if part.id == CRITERION_PART {
            for block in d.criteria() {
                out.push_str(&format!("## {}\n\n", part_heading(part.id, &part.title, Some(block.index()))));
                for q in &part.questions {
                    render_question(&mut out, q, block.answers().get(&q.id));
                }
            }
        } else {
            out.push_str(&format!("## {}\n\n", part_heading(part.id, &part.title, None)));
            for q in &part.questions {
                render_question(&mut out, q, d.fixed_answers().get(&q.id));
            }
        }
    }
    // One trailing newline.
    while out.ends_with("\n\n") {
        out.pop();
    }
    out
}

#[derive(Default)]
struct Slot {
    line: usize,
    answer: Option<String>,
    checked: Vec<String>,
    saw_options: bool,
    other_marker: bool,
    other: Option<String>,
}

enum Section {
    Preamble,
    Provenance,
    Part(u16),
}

struct Parser<'s> {
    schema: &'s Schema,
    section: Section,
    version: Option<String>,
    provenance: Option<String>,
    saw_provenance_fence: bool,
    fixed: BTreeMap<QuestionPath, Slot>,
    blocks: Vec<BTreeMap<QuestionPath, Slot>>,
    current: Option<QuestionId>,
}

fn malformed(line: usize, question: Option<&QuestionId>, reason: impl Into<String>) -> MarkdownError {
    MarkdownError::MalformedTemplate {
        line,
        question: question.map(|q| q.path().to_string()),
        reason: reason.into(),
    }
}

fn opening_fence(line: &str) -> Option<&str> {
    let ticks = line.len() - line.trim_start_matches('`').len();
    (ticks >= 3).then(|| &line[..ticks])
}

impl<'s> Parser<'s> {
    fn slot(&mut self, id: &QuestionId) -> &mut Slot {
        match id.criterion_index() {
            None => self.fixed.get_mut(id.path()),
            Some(i) => self.blocks[usize::from(i) - 1].get_mut(id.path()),
        }
        .expect("current question has a slot")
    }

    fn part_heading(&mut self, line_no: usize, rest: &str) -> Result<(), MarkdownError> {
        let bad = || malformed(line_no, None, format!("unrecognised part heading `## {rest}`"));
        let (number, title) = rest
            .strip_prefix("Part ")
            .and_then(|r| r.split_once(": "))
            .ok_or_else(bad)?;
        let id: u16 = number.parse().map_err(|_| bad())?;
        self.current = None;
        if id == CRITERION_PART {
            let expected = self.blocks.len() + 1;
            let index: usize = title
                .rsplit(' ')
                .next()
                .and_then(|n| n.parse().ok())
                .ok_or_else(bad)?;
            if index != expected {
                return Err(malformed(
                    line_no,
                    None,
                    format!("quality criterion {index} found where {expected} was expected"),
                ));
            }
            if index > self.schema.max_criteria {
                return Err(DocumentError::CriterionLimitExceeded { max: self.schema.max_criteria }.into());
            }
            self.blocks.push(BTreeMap::new());
        } else if !self.schema.parts.iter().any(|p| p.id == id) {
            return Err(bad());
        }
        self.section = Section::Part(id);
        Ok(())
    }

    fn question_heading(&mut self, line_no: usize, rest: &str) -> Result<(), MarkdownError> {
        let bad = || malformed(line_no, None, format!("unrecognised question heading `### {rest}`"));
        let (path, _) = rest.split_once(':').ok_or_else(bad)?;
        let path: QuestionPath = path.parse().map_err(|_| bad())?;
        let Section::Part(part) = self.section else {
            return Err(malformed(line_no, None, format!("Q{path} appears outside any part")));
        };
        let id = QuestionId::scoped(path.clone(), self.blocks.len().max(1) as u8);
        if self.schema.question_by_path(&path).is_err() || path.part() != part {
            return Err(malformed(line_no, Some(&id), format!("no question {path} in part {part}")));
        }
        let map = match id.criterion_index() {
            None => &mut self.fixed,
            Some(i) => &mut self.blocks[usize::from(i) - 1],
        };
        if map.contains_key(&path) {
            return Err(malformed(line_no, Some(&id), "duplicated question heading"));
        }
        map.insert(path, Slot { line: line_no, ..Slot::default() });
        self.current = Some(id);
        Ok(())
    }

    fn fenced(&mut self, line_no: usize, content: String) -> Result<(), MarkdownError> {
        let content = (!content.is_empty()).then_some(content);
        match (&self.section, self.current.clone()) {
            (Section::Provenance, _) => {
                if std::mem::replace(&mut self.saw_provenance_fence, true) {
                    return Err(malformed(line_no, None, "more than one provenance block"));
                }
                self.provenance = content;
            }
            (Section::Part(_), Some(id)) => {
                let slot = self.slot(&id);
                let target = if slot.other_marker { &mut slot.other } else { &mut slot.answer };
                if target.is_some() {
                    return Err(malformed(line_no, Some(&id), "more than one answer block"));
                }
                *target = content;
            }
            _ => return Err(malformed(line_no, None, "answer block outside any question")),
        }
        Ok(())
    }

    fn checkbox(&mut self, line_no: usize, checked: bool, label: &str) -> Result<(), MarkdownError> {
        let Some(id) = self.current.clone() else {
            return Err(malformed(line_no, None, "checkbox outside any question"));
        };
        let question = self.schema.question(&id).map_err(DocumentError::from)?;
        if !question.kind.is_choice() {
            return Err(malformed(line_no, Some(&id), "checkbox under a text question"));
        }
        let Some(option) = question.option_by_label(label) else {
            return Err(malformed(line_no, Some(&id), format!("unknown option `{label}`")));
        };
        let key = option.key.clone();
        let slot = self.slot(&id);
        slot.saw_options = true;
        if checked {
            slot.checked.push(key);
        }
        Ok(())
    }

    fn line(&mut self, line_no: usize, line: &str) -> Result<(), MarkdownError> {
        let trimmed = line.trim_end();
        if trimmed == PROVENANCE_HEADING {
            self.section = Section::Provenance;
            self.current = None;
        } else if let Some(rest) = trimmed.strip_prefix("### Q") {
            self.question_heading(line_no, rest)?;
        } else if let Some(rest) = trimmed.strip_prefix("## ") {
            self.part_heading(line_no, rest)?;
        } else if let Some(version) = trimmed.strip_prefix(VERSION_PREFIX) {
            if !matches!(self.section, Section::Preamble) || self.version.is_some() {
                return Err(malformed(line_no, None, "misplaced schema_version line"));
            }
            self.version = Some(version.trim().to_string());
        } else if let Some(label) = trimmed.strip_prefix("- [x] ").or_else(|| trimmed.strip_prefix("- [X] ")) {
            self.checkbox(line_no, true, label.trim())?;
        } else if let Some(label) = trimmed.strip_prefix("- [ ] ") {
            self.checkbox(line_no, false, label.trim())?;
        } else if trimmed == OTHER_MARKER {
            let Some(id) = self.current.clone() else {
                return Err(malformed(line_no, None, "`Other details:` outside any question"));
            };
            let slot = self.slot(&id);
            if slot.other_marker {
                return Err(malformed(line_no, Some(&id), "repeated `Other details:`"));
            }
            slot.other_marker = true;
        }
        // Titles, guidance quotes and free prose are ignored.
        Ok(())
    }

    fn finish(self, last_line: usize) -> Result<Datasheet, MarkdownError> {
        let schema = self.schema;
        let version = self
            .version
            .ok_or_else(|| malformed(1, None, "missing `schema_version:` line"))?;
        if version != schema.version {
            return Err(DocumentError::UnsupportedSchemaVersion(version).into());
        }
        let mut fixed = BTreeMap::new();
        for q in schema.fixed_questions() {
            let id = QuestionId::fixed(q.id.clone());
            if let Some(v) = conform_slot(schema, q, &id, self.fixed.get(&q.id), last_line)? {
                fixed.insert(q.id.clone(), v);
            }
        }
        let mut criteria = Vec::with_capacity(self.blocks.len());
        for (i, block) in self.blocks.iter().enumerate() {
            let mut answers = BTreeMap::new();
            for q in schema.criterion_questions() {
                let id = QuestionId::criterion(q.id.clone(), (i + 1) as u8);
                if let Some(v) = conform_slot(schema, q, &id, block.get(&q.id), last_line)? {
                    answers.insert(q.id.clone(), v);
                }
            }
            criteria.push(answers);
        }
        Ok(Datasheet::from_parts(version, fixed, criteria, self.provenance))
    }
}

fn conform_slot(
    schema: &Schema,
    q: &Question,
    id: &QuestionId,
    slot: Option<&Slot>,
    last_line: usize,
) -> Result<Option<AnswerValue>, MarkdownError> {
    let Some(slot) = slot else {
        return Err(malformed(last_line, Some(id), "missing question heading"));
    };
    let value = match q.kind {
        QuestionKind::FreeText => slot.answer.clone().map(AnswerValue::Text),
        QuestionKind::IntegerText => match &slot.answer {
            None => None,
            Some(text) => Some(integer_text(text.trim()).ok_or_else(|| {
                DocumentError::KindMismatch {
                    path: id.to_string(),
                    expected: q.kind,
                    detail: format!("`{text}` is not an integer or accepted token"),
                }
            })?),
        },
        QuestionKind::SingleChoice | QuestionKind::MultiChoice => {
            if slot.answer.is_some() {
                return Err(malformed(slot.line, Some(id), "answer block under a choice question"));
            }
            if !slot.saw_options {
                return Err(malformed(slot.line, Some(id), "option list missing"));
            }
            match (q.kind, slot.checked.len()) {
                (_, 0) => {
                    if slot.other.is_some() {
                        return Err(malformed(slot.line, Some(id), "details given but no option ticked"));
                    }
                    None
                }
                (QuestionKind::SingleChoice, 1) => Some(AnswerValue::SingleChoice {
                    option: slot.checked[0].clone(),
                    other_text: slot.other.clone(),
                }),
                (QuestionKind::SingleChoice, _) => {
                    return Err(DocumentError::KindMismatch {
                        path: id.to_string(),
                        expected: q.kind,
                        detail: "more than one option ticked".into(),
                    }
                    .into())
                }
                _ => Some(AnswerValue::MultiChoice {
                    options: slot.checked.clone(),
                    other_text: slot.other.clone(),
                }),
            }
        }
    };
    value.map(|v| v.conform(schema, id)).transpose().map_err(Into::into)
}

/// Reads a Markdown datasheet produced by [`render_markdown`], possibly
/// with edited answers.
pub fn parse_markdown(text: &str, s: &Schema) -> Result<Datasheet, MarkdownError> {
    let mut parser = Parser {
        schema: s,
        section: Section::Preamble,
        version: None,
        provenance: None,
        saw_provenance_fence: false,
        fixed: BTreeMap::new(),
        blocks: Vec::new(),
        current: None,
    };
    let lines: Vec<&str> = text.split('\n').collect();
    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let line = lines[i];
        if let Some(fence) = opening_fence(line) {
            let close = lines[i + 1..]
                .iter()
                .position(|l| l.trim_end_matches('\r') == fence)
                .ok_or_else(|| malformed(line_no, parser.current.as_ref(), "unterminated code fence"))?;
            let content = lines[i + 1..i + 1 + close].join("\n");
            parser.fenced(line_no, content)?;
            i += close + 2;
            continue;
        }
        parser.line(line_no, line)?;
        i += 1;
    }
    parser.finish(lines.len())
}

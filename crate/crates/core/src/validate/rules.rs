use std::sync::LazyLock;

use regex::Regex;
use url::Url;

use super::languages::is_language_name;
use super::{Diagnostic, RuleId, Severity};
use crate::document::{AnswerValue, CriterionBlock, Datasheet};
use crate::schema::{QuestionId, Schema, Sentinel};

struct Ctx<'a> {
    sheet: &'a Datasheet,
    schema: &'a Schema,
    out: Vec<Diagnostic>,
}

impl<'a> Ctx<'a> {
    fn fixed(&self, path: &str) -> Option<&'a AnswerValue> {
        self.sheet.fixed_answers().get(&path.parse().expect("built-in path"))
    }

    fn push(&mut self, rule: RuleId, at: Vec<QuestionId>, message: impl Into<String>) {
        self.out.push(Diagnostic::new(rule, at, message));
    }
}

fn fid(path: &str) -> QuestionId {
    QuestionId::fixed(path.parse().expect("built-in path"))
}

fn cid(path: &str, block: &CriterionBlock) -> QuestionId {
    QuestionId::criterion(path.parse().expect("built-in path"), block.index())
}

fn has_text(s: Option<&str>) -> bool {
    s.is_some_and(|t| !t.trim().is_empty())
}

pub(super) fn run_all(sheet: &Datasheet, schema: &Schema) -> Vec<Diagnostic> {
    let mut ctx = Ctx { sheet, schema, out: Vec::new() };
    required(&mut ctx);
    positive_integers(&mut ctx);
    criterion_count(&mut ctx);
    evaluator_pairs(&mut ctx);
    languages(&mut ctx);
    task_io(&mut ctx);
    other_text(&mut ctx);
    links(&mut ctx);
    preregistration(&mut ctx);
    for block in sheet.criteria() {
        scale_size(&mut ctx, block);
        scale_values(&mut ctx, block);
        instrument_gate(&mut ctx, block);
    }
    ctx.out
}

fn required(ctx: &mut Ctx) {
    let schema = ctx.schema;
    for q in schema.fixed_questions() {
        if !ctx.sheet.fixed_answers().contains_key(&q.id) {
            let id = QuestionId::fixed(q.id.clone());
            ctx.push(RuleId::Required, vec![id], format!("Q{} is unanswered", q.id));
        }
    }
    for block in ctx.sheet.criteria() {
        for q in schema.criterion_questions() {
            if !block.answers().contains_key(&q.id) {
                let id = QuestionId::criterion(q.id.clone(), block.index());
                let message = format!("Q{} is unanswered for quality criterion {}", q.id, block.index());
                ctx.push(RuleId::Required, vec![id], message);
            }
        }
    }
}

fn positive_integers(ctx: &mut Ctx) {
    for path in ["3.1.1", "3.2.1"] {
        if let Some(AnswerValue::Integer(0)) = ctx.fixed(path) {
            ctx.push(RuleId::Integer, vec![fid(path)], format!("Q{path} should be a positive integer, got 0"));
        }
    }
}

fn criterion_count(ctx: &mut Ctx) {
    let n = ctx.sheet.criteria().len();
    let max = ctx.schema.max_criteria;
    if n == 0 || n > max {
        let at = QuestionId::criterion("4.1.1".parse().expect("built-in path"), 1);
        ctx.push(
            RuleId::CriterionCount,
            vec![at],
            format!("a datasheet documents between 1 and {max} quality criteria, found {n}"),
        );
    }
}

fn scale_size(ctx: &mut Ctx, block: &CriterionBlock) {
    if let Some(AnswerValue::Integer(n)) = block.answer("4.3.3") {
        if *n < 2 {
            ctx.push(
                RuleId::ScaleSize,
                vec![cid("4.3.3", block)],
                format!("a rating instrument needs at least 2 possible values, got {n}"),
            );
        }
    }
}

static RANGE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(-?\d+)\s*(?:--|\x{2013}|\x{2014}|-|\.\.|to)\s*(-?\d+)$").expect("valid regex"));

/// Number of values described by a Q4.3.4 answer: an explicit
/// comma-separated list, or an inclusive integer range such as `1--100`.
pub(crate) fn scale_cardinality(text: &str) -> u64 {
    let text = text.trim();
    if let Some(caps) = RANGE.captures(text) {
        let lo: i64 = caps[1].parse().unwrap_or(0);
        let hi: i64 = caps[2].parse().unwrap_or(0);
        if hi >= lo {
            return (hi - lo + 1) as u64;
        }
    }
    text.split(',').filter(|item| !item.trim().is_empty()).count() as u64
}

fn scale_values(ctx: &mut Ctx, block: &CriterionBlock) {
    let (Some(size), Some(values)) = (block.answer("4.3.3"), block.answer("4.3.4")) else {
        return;
    };
    let at = vec![cid("4.3.3", block), cid("4.3.4", block)];
    match (size, values) {
        (AnswerValue::Integer(n), AnswerValue::Text(t)) => {
            let found = scale_cardinality(t);
            if found != *n {
                ctx.push(
                    RuleId::ScaleValues,
                    at,
                    format!("Q4.3.4 describes {found} value(s) but Q4.3.3 gives a scale of size {n}; the list or range should be of the size specified in Q4.3.3"),
                );
            }
        }
        (AnswerValue::Integer(n), AnswerValue::Sentinel(_)) => ctx.push(
            RuleId::ScaleValues,
            at,
            format!("Q4.3.4 is N/A but Q4.3.3 gives a scale of size {n}"),
        ),
        (AnswerValue::Sentinel(Sentinel::NotApplicable), AnswerValue::Text(_)) => ctx.push(
            RuleId::ScaleValues,
            at,
            "Q4.3.3 is N/A (no rating instrument), so Q4.3.4 should be N/A too",
        ),
        _ => {}
    }
}

fn instrument_gate(ctx: &mut Ctx, block: &CriterionBlock) {
    let Some(size) = block.answer("4.3.3") else {
        return;
    };
    let no_instrument = size.is_sentinel(Sentinel::NotApplicable);
    let size_id = cid("4.3.3", block);

    if let Some(presentation) = block.answer("4.3.5") {
        if presentation.is_selected("na-no-instrument") != no_instrument {
            let message = if no_instrument {
                "Q4.3.3 says there is no rating instrument, but Q4.3.5 describes how one is presented"
            } else {
                "Q4.3.5 says there is no rating instrument, but Q4.3.3 gives its size"
            };
            ctx.push(RuleId::InstrumentGate, vec![size_id.clone(), cid("4.3.5", block)], message);
        }
    }

    if let Some(task) = block.answer("4.3.6") {
        let described = task.as_text().is_some();
        if described != no_instrument {
            let message = if no_instrument {
                "with no rating instrument, Q4.3.6 should describe the task evaluators perform"
            } else {
                "Q4.3.6 is answered only if there is no rating instrument; enter N/A when there is one"
            };
            ctx.push(RuleId::InstrumentGate, vec![size_id.clone(), cid("4.3.6", block)], message);
        }
    }

    // The integer and N/A cases of Q4.3.3/Q4.3.4 belong to R-SCALE-VALUES.
    if size.is_sentinel(Sentinel::Continuous) {
        if let Some(values) = block.answer("4.3.4") {
            if values.is_sentinel(Sentinel::NotApplicable) {
                ctx.push(
                    RuleId::InstrumentGate,
                    vec![size_id, cid("4.3.4", block)],
                    "a continuous rating instrument is present, so Q4.3.4 should give its range rather than N/A",
                );
            }
        }
    }
}

const EVALUATOR_PAIRS: [(&str, &str); 4] = [
    ("experts", "non-experts"),
    ("paid", "not-paid"),
    ("previously-known", "not-previously-known"),
    ("includes-authors", "excludes-authors"),
];

fn evaluator_pairs(ctx: &mut Ctx) {
    let Some(answer) = ctx.fixed("3.2.2") else {
        return;
    };
    let broken: Vec<String> = EVALUATOR_PAIRS
        .iter()
        .filter(|(a, b)| answer.is_selected(a) == answer.is_selected(b))
        .map(|(a, b)| format!("{a}/{b}"))
        .collect();
    if broken.is_empty() {
        return;
    }
    let explained = has_text(answer.other_text());
    let (severity, message) = if explained {
        (
            Severity::Info,
            format!("Q3.2.2 does not tick exactly one of {}; explained under 'Other'", broken.join(", ")),
        )
    } else {
        (
            Severity::Error,
            format!(
                "Q3.2.2 should tick exactly one of each pair ({}), or explain under 'Other' why fewer than 4 options apply",
                broken.join(", ")
            ),
        )
    };
    ctx.out.push(Diagnostic::with_severity(RuleId::EvaluatorPairs, severity, vec![fid("3.2.2")], message));
}

static LANGUAGE_SEPARATOR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\s*(?:,|;|\band\b)\s*").expect("valid regex"));

fn languages(ctx: &mut Ctx) {
    for path in ["2.4", "2.5"] {
        let Some(AnswerValue::Text(text)) = ctx.fixed(path) else {
            continue;
        };
        let unknown: Vec<&str> = LANGUAGE_SEPARATOR
            .split(text.trim())
            .map(str::trim)
            .filter(|name| !name.is_empty() && !is_language_name(name))
            .collect();
        let empty = LANGUAGE_SEPARATOR.split(text.trim()).all(|n| n.trim().is_empty());
        if !unknown.is_empty() || empty {
            let listed = if empty { text.clone() } else { unknown.join(", ") };
            ctx.push(
                RuleId::Language,
                vec![fid(path)],
                format!("Q{path}: `{listed}` is not a full ISO 639-1 language name (e.g. English, Herero, Hindi) or N/A"),
            );
        }
    }
}

fn is_text_type(key: &str) -> bool {
    key.starts_with("text-")
}

fn task_io(ctx: &mut Ctx) {
    let Some(tasks) = ctx.fixed("2.3") else {
        return;
    };
    let inputs = ctx.fixed("2.1");
    let outputs = ctx.fixed("2.2");

    for task in ["content-selection", "content-ordering"] {
        if let Some(out) = outputs.filter(|_| tasks.is_selected(task)) {
            if out.selected().iter().any(|k| is_text_type(k)) {
                ctx.push(
                    RuleId::TaskInputOutput,
                    vec![fid("2.2"), fid("2.3")],
                    format!("task `{task}` produces non-text output, but Q2.2 selects a text type"),
                );
            }
        }
    }

    let input_needs: [(&str, &[&str], &str); 5] = [
        ("surface-realisation", &["slr"], "shallow linguistic representation input"),
        ("deep-generation", &["raw-structured-data", "dlr"], "raw/structured data or deep linguistic representation input"),
        ("data-to-text", &["raw-structured-data"], "raw/structured data input"),
        ("feature-controlled", &["control-feature"], "a control feature in the input"),
        ("image-video-description", &["visual"], "visual input"),
    ];
    let Some(inputs) = inputs else {
        return;
    };
    for (task, needed, what) in input_needs {
        if tasks.is_selected(task) && !needed.iter().any(|k| inputs.is_selected(k)) {
            ctx.push(
                RuleId::TaskInputOutput,
                vec![fid("2.1"), fid("2.3")],
                format!("task `{task}` implies {what}, which Q2.1 does not select"),
            );
        }
    }
}

fn other_text(ctx: &mut Ctx) {
    let schema = ctx.schema;
    let mut found = Vec::new();
    for (id, answer) in ctx.sheet.answers() {
        let question = schema.question(&id).expect("parsed sheets only hold schema paths");
        if !question.kind.is_choice() {
            continue;
        }
        let needs_text: Vec<&str> = answer
            .selected()
            .iter()
            .filter_map(|k| question.option(k))
            .filter(|o| o.requires_text)
            .map(|o| o.label.as_str())
            .collect();
        if !needs_text.is_empty() && !has_text(answer.other_text()) {
            found.push((id, format!("`{}` is ticked, so describe it in the text box", needs_text.join("`, `"))));
        } else if needs_text.is_empty() && answer.other_text().is_some() && !question.details_in_other {
            found.push((id, "details are given under 'Other' but 'Other' is not ticked".to_string()));
        }
    }
    for (id, message) in found {
        let message = format!("Q{}: {message}", id.path());
        ctx.push(RuleId::OtherText, vec![id], message);
    }
}

fn contains_link(text: &str) -> bool {
    text.split_whitespace()
        .map(|tok| tok.trim_matches(|c: char| matches!(c, '(' | ')' | '<' | '>' | '[' | ']' | ',' | ';' | '.' | '"' | '\'')))
        .filter_map(|tok| Url::parse(tok).ok())
        .any(|u| matches!(u.scheme(), "http" | "https") && u.host().is_some())
}

fn links(ctx: &mut Ctx) {
    for path in ["1.1", "1.2"] {
        if let Some(AnswerValue::Text(text)) = ctx.fixed(path) {
            if !contains_link(text) {
                let allowed = if path == "1.1" { "'for preregistration'" } else { "'N/A'" };
                ctx.push(
                    RuleId::Link,
                    vec![fid(path)],
                    format!("Q{path} should contain a link (http or https), or {allowed}"),
                );
            }
        }
    }
}

fn preregistration(ctx: &mut Ctx) {
    let prereg = ctx.fixed("1.1").is_some_and(|a| a.is_sentinel(Sentinel::ForPreregistration));
    if !prereg {
        return;
    }
    for block in ctx.sheet.criteria() {
        for path in ["4.3.9", "4.3.10", "4.3.11"] {
            if block.answer(path).is_some() {
                ctx.push(
                    RuleId::Preregistration,
                    vec![cid(path, block)],
                    format!("sheet is completed for preregistration; check that Q{path} describes planned rather than obtained results"),
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_of_lists_and_ranges() {
        assert_eq!(scale_cardinality("1, 2, 3, 4, 5"), 5);
        assert_eq!(scale_cardinality("A better, B better"), 2);
        assert_eq!(scale_cardinality("A better, B better, neither"), 3);
        assert_eq!(scale_cardinality("1--100"), 100);
        assert_eq!(scale_cardinality("1-100"), 100);
        assert_eq!(scale_cardinality(" 0 -- 6 "), 7);
        assert_eq!(scale_cardinality("-3--3"), 7);
        assert_eq!(scale_cardinality("1 to 7"), 7);
        assert_eq!(scale_cardinality("1\u{2013}7"), 7);
        assert_eq!(scale_cardinality("strongly agree"), 1);
        assert_eq!(scale_cardinality("a,,b,"), 2);
        // A descending range is not a range.
        assert_eq!(scale_cardinality("5-1"), 1);
    }

    #[test]
    fn link_detection() {
        assert!(contains_link("https://aclanthology.org/2021.inlg-1.6"));
        assert!(contains_link("Experiment 2 in (https://example.org/paper.pdf)."));
        assert!(!contains_link("see our paper"));
        assert!(!contains_link("ftp://example.org/x"));
        assert!(!contains_link("N/A"));
    }
}

#![allow(dead_code)]

use heds_core::compare::ComparabilityKey;
use heds_core::document::parse_canonical;
use heds_core::schema::{Question, QuestionKind};
use heds_core::{builtin_schema, AnswerValue, Datasheet, QuestionId, RuleId, Schema, Sentinel, Severity, ValidationReport};
use proptest::prelude::*;

pub const GOLDEN: &str = include_str!("../fixtures/golden.heds.json");

pub fn schema() -> &'static Schema {
    builtin_schema()
}

pub fn golden() -> Datasheet {
    parse_canonical(GOLDEN.as_bytes(), schema()).expect("golden fixture parses")
}

pub fn id(s: &str) -> QuestionId {
    s.parse().expect("valid question id")
}

pub fn set(d: &Datasheet, path: &str, value: AnswerValue) -> Datasheet {
    d.set_answer(schema(), &id(path), value).expect("answer fits question")
}

pub fn clear(d: &Datasheet, path: &str) -> Datasheet {
    d.clear_answer(&id(path)).expect("question exists")
}

/// Writes `key` into criterion block `index`.
pub fn with_key(d: &Datasheet, index: u8, key: &ComparabilityKey) -> Datasheet {
    let mut d = d.clone();
    for (path, option) in ComparabilityKey::KEY_PATHS.iter().zip(key.option_keys()) {
        d = set(&d, &format!("{path}@{index}"), AnswerValue::choice(option));
    }
    d
}

/// Text that stresses the Markdown fences and JSON escaping.
pub fn adversarial_text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zA-Z0-9 ,.]{1,30}",
        "[a-z `\n#>*_|\\[\\]x\\-]{1,40}",
        "\\PC{1,20}",
        Just("```".to_string()),
        Just("line one\n```\nstill text\n````".to_string()),
        Just("- [x] Other\n### Q1.1: fake heading\n## Part 9: fake".to_string()),
        Just("\n\nleading and trailing\n\n".to_string()),
        Just("  ".to_string()),
        Just("N/A".to_string()),
        Just("None".to_string()),
    ]
}

fn sentinel_strategy(q: &Question) -> Option<BoxedStrategy<AnswerValue>> {
    let allowed: Vec<Sentinel> = q.sentinels.clone();
    (!allowed.is_empty()).then(|| proptest::sample::select(allowed).prop_map(AnswerValue::Sentinel).boxed())
}

fn other_text() -> impl Strategy<Value = Option<String>> {
    proptest::option::weighted(0.3, adversarial_text())
}

/// Any structurally valid answer to `q`.
pub fn answer_for(q: &Question) -> BoxedStrategy<AnswerValue> {
    let base: BoxedStrategy<AnswerValue> = match q.kind {
        QuestionKind::FreeText => adversarial_text().prop_map(AnswerValue::Text).boxed(),
        QuestionKind::IntegerText => (0u64..2000).prop_map(AnswerValue::Integer).boxed(),
        QuestionKind::SingleChoice => {
            let keys: Vec<String> = q.options.iter().map(|o| o.key.clone()).collect();
            (proptest::sample::select(keys), other_text())
                .prop_map(|(option, other_text)| AnswerValue::SingleChoice { option, other_text })
                .boxed()
        }
        QuestionKind::MultiChoice => {
            let keys: Vec<String> = q.options.iter().map(|o| o.key.clone()).collect();
            let n = keys.len();
            (proptest::sample::subsequence(keys, 1..=n).prop_shuffle(), other_text())
                .prop_map(|(options, other_text)| AnswerValue::MultiChoice { options, other_text })
                .boxed()
        }
    };
    match sentinel_strategy(q) {
        Some(s) => prop_oneof![4 => base, 1 => s].boxed(),
        None => base,
    }
}

fn answers_for<'a>(questions: impl Iterator<Item = &'a Question>) -> Vec<BoxedStrategy<Option<(String, AnswerValue)>>> {
    questions
        .map(|q| {
            let path = q.id.to_string();
            proptest::option::weighted(0.75, answer_for(q).prop_map(move |a| (path.clone(), a))).boxed()
        })
        .collect()
}

/// Random well-formed datasheets with 0 to 10 criteria. Answers are
/// conformed on insertion, so the result is already canonical.
pub fn arb_datasheet() -> impl Strategy<Value = Datasheet> {
    let s = schema();
    let fixed = answers_for(s.fixed_questions());
    let block = answers_for(s.criterion_questions().iter());
    let provenance = proptest::option::of(adversarial_text().prop_filter("non-empty", |t| !t.is_empty()));
    (fixed, prop::collection::vec(block, 0..=10), provenance).prop_map(|(fixed, blocks, provenance)| {
        let s = schema();
        let mut d = Datasheet::new_empty(s).remove_criterion(1).expect("one block");
        for a in fixed.into_iter().flatten() {
            d = set(&d, &a.0, a.1);
        }
        for (i, block) in blocks.into_iter().enumerate() {
            d = d.add_criterion(s).expect("at most 10 blocks");
            for (path, value) in block.into_iter().flatten() {
                d = set(&d, &format!("{path}@{}", i + 1), value);
            }
        }
        d.with_provenance(provenance)
    })
}

pub fn arb_key() -> impl Strategy<Value = ComparabilityKey> {
    proptest::sample::select(ComparabilityKey::all())
}

/// One mutation of the golden sheet per rule, each meant to trip that rule
/// alone.
pub fn rule_fixtures() -> Vec<(RuleId, Datasheet)> {
    let g = golden();
    let no_criteria = g.remove_criterion(2).and_then(|d| d.remove_criterion(1)).expect("two blocks");
    vec![
        (RuleId::Required, clear(&g, "3.1.3")),
        (RuleId::Integer, set(&g, "3.2.1", AnswerValue::Integer(0))),
        (RuleId::ScaleSize, set(&set(&g, "4.3.3@1", AnswerValue::Integer(1)), "4.3.4@1", AnswerValue::text("1"))),
        (RuleId::ScaleValues, set(&g, "4.3.4@1", AnswerValue::text("1, 2, 3"))),
        (RuleId::InstrumentGate, set(&g, "4.3.5@1", AnswerValue::choice("na-no-instrument"))),
        (
            RuleId::EvaluatorPairs,
            set(&g, "3.2.2", AnswerValue::choices(["experts", "non-experts", "paid", "not-previously-known", "excludes-authors"])),
        ),
        (RuleId::CriterionCount, no_criteria),
        (RuleId::Language, set(&g, "2.4", AnswerValue::text("Klingon"))),
        (RuleId::TaskInputOutput, set(&g, "2.3", AnswerValue::choices(["surface-realisation"]))),
        (RuleId::OtherText, set(&g, "3.1.2", AnswerValue::choice("other"))),
        (RuleId::Link, set(&g, "1.1", AnswerValue::text("see our paper"))),
        (RuleId::Preregistration, set(&g, "1.1", AnswerValue::Sentinel(Sentinel::ForPreregistration))),
    ]
}

/// Diagnostics other than `rule` with error or warning severity.
pub fn foreign_findings(report: &ValidationReport, rule: RuleId) -> Vec<String> {
    report
        .diagnostics
        .iter()
        .filter(|d| d.rule != rule && d.severity != Severity::Info)
        .map(ToString::to_string)
        .collect()
}

/// A sheet that is the golden one with `size`/`values` as criterion 1's
/// rating scale.
pub fn with_scale(size: u64, values: &str) -> Datasheet {
    set(&set(&golden(), "4.3.3@1", AnswerValue::Integer(size)), "4.3.4@1", AnswerValue::text(values))
}

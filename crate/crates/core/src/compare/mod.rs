//! Diffs, comparability keys and the directory registry.
//!
//! Comparability works on the six taxonomy questions of a criterion block
//! (Q4.1.1 to Q4.2.3). Two criteria are classified at one of four levels:
//!
//! | level             | condition                                    |
//! |-------------------|----------------------------------------------|
//! | `same-criterion`  | all six fields equal                         |
//! | `same-aspect`     | Q4.1.* equal, some Q4.2.* field differs      |
//! | `mode-match-only` | Q4.2.* equal, some Q4.1.* field differs      |
//! | `unrelated`       | both halves differ                           |
//!
//! Criteria are paired across sheets by key and name, never by block index.
//! [`diff`] is the exception: it aligns blocks by index.

mod registry;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::document::{AnswerValue, CriterionBlock, Datasheet};
use crate::schema::{QuestionId, QuestionPath, Schema, CRITERION_PART};

pub use registry::{build_index, IndexEntry, IndexFailure, KeyQuery, RegistryIndex};

macro_rules! key_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $key:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            /// The schema option key.
            pub fn key(self) -> &'static str {
                match self {
                    $($name::$variant => $key),+
                }
            }
        }

        impl FromStr for $name {
            type Err = ();

            fn from_str(s: &str) -> Result<Self, ()> {
                match s {
                    $($key => Ok($name::$variant),)+
                    _ => Err(()),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.key())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.key())
            }
        }
    };
}

key_enum!(
    /// Q4.1.1
    QualityType { Correctness => "correctness", Goodness => "goodness", Features => "features" }
);
key_enum!(
    /// Q4.1.2
    Aspect { Form => "form", Content => "content", Both => "both" }
);
key_enum!(
    /// Q4.1.3
    Frame { OwnRight => "own-right", RelativeToInput => "relative-to-input", ExternalFrame => "external-frame" }
);
key_enum!(
    /// Q4.2.1
    Judgment { Objective => "objective", Subjective => "subjective" }
);
key_enum!(
    /// Q4.2.2
    Presentation { Absolute => "absolute", Relative => "relative" }
);
key_enum!(
    /// Q4.2.3
    Scope { Intrinsic => "intrinsic", Extrinsic => "extrinsic" }
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ComparabilityKey {
    pub quality_type: QualityType,
    pub aspect: Aspect,
    pub frame: Frame,
    pub judgment: Judgment,
    pub presentation: Presentation,
    pub scope: Scope,
}

impl ComparabilityKey {
    pub const KEY_PATHS: [&'static str; 6] = ["4.1.1", "4.1.2", "4.1.3", "4.2.1", "4.2.2", "4.2.3"];

    /// Every possible key, in field order.
    pub fn all() -> Vec<ComparabilityKey> {
        let mut out = Vec::with_capacity(216);
        for &quality_type in QualityType::ALL {
            for &aspect in Aspect::ALL {
                for &frame in Frame::ALL {
                    for &judgment in Judgment::ALL {
                        for &presentation in Presentation::ALL {
                            for &scope in Scope::ALL {
                                out.push(ComparabilityKey { quality_type, aspect, frame, judgment, presentation, scope });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn criterion_half(&self) -> (QualityType, Aspect, Frame) {
        (self.quality_type, self.aspect, self.frame)
    }

    pub fn mode_half(&self) -> (Judgment, Presentation, Scope) {
        (self.judgment, self.presentation, self.scope)
    }

    /// The option keys in question order.
    pub fn option_keys(&self) -> [&'static str; 6] {
        [
            self.quality_type.key(),
            self.aspect.key(),
            self.frame.key(),
            self.judgment.key(),
            self.presentation.key(),
            self.scope.key(),
        ]
    }
}

impl fmt::Display for ComparabilityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.option_keys().join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("criterion {index} is incomplete; unanswered: {}", .missing.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
pub struct IncompleteCriterion {
    pub index: u8,
    pub missing: Vec<QuestionPath>,
}

fn field<T: FromStr>(c: &CriterionBlock, path: &str, missing: &mut Vec<QuestionPath>) -> Option<T> {
    let value = c
        .answer(path)
        .and_then(|a| match a {
            AnswerValue::SingleChoice { option, .. } => option.parse().ok(),
            _ => None,
        });
    if value.is_none() {
        missing.push(path.parse().expect("static path"));
    }
    value
}

/// Reads the six taxonomy answers of `c`.
pub fn criterion_key(c: &CriterionBlock) -> Result<ComparabilityKey, IncompleteCriterion> {
    let [p1, p2, p3, p4, p5, p6] = ComparabilityKey::KEY_PATHS;
    let mut missing = Vec::new();
    let quality_type = field(c, p1, &mut missing);
    let aspect = field(c, p2, &mut missing);
    let frame = field(c, p3, &mut missing);
    let judgment = field(c, p4, &mut missing);
    let presentation = field(c, p5, &mut missing);
    let scope = field(c, p6, &mut missing);
    match (quality_type, aspect, frame, judgment, presentation, scope) {
        (Some(quality_type), Some(aspect), Some(frame), Some(judgment), Some(presentation), Some(scope)) => {
            Ok(ComparabilityKey { quality_type, aspect, frame, judgment, presentation, scope })
        }
        _ => Err(IncompleteCriterion { index: c.index(), missing }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    SameCriterion,
    SameAspect,
    ModeMatchOnly,
    Unrelated,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::SameCriterion => "same-criterion",
            Level::SameAspect => "same-aspect",
            Level::ModeMatchOnly => "mode-match-only",
            Level::Unrelated => "unrelated",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify(a: &ComparabilityKey, b: &ComparabilityKey) -> Level {
    match (a.criterion_half() == b.criterion_half(), a.mode_half() == b.mode_half()) {
        (true, true) => Level::SameCriterion,
        (true, false) => Level::SameAspect,
        (false, true) => Level::ModeMatchOnly,
        (false, false) => Level::Unrelated,
    }
}

fn criterion_name(c: &CriterionBlock) -> Option<String> {
    c.answer("4.3.1")
        .and_then(AnswerValue::as_text)
        .map(|n| n.trim().to_lowercase())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionPair {
    pub a: u8,
    pub b: u8,
    pub level: Level,
    pub name_match: bool,
    pub key_a: ComparabilityKey,
    pub key_b: ComparabilityKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparabilityReport {
    /// Every block of `a` against every block of `b`, row-major.
    pub pairs: Vec<CriterionPair>,
}

impl ComparabilityReport {
    /// For each block of `a`, its closest counterpart in `b`: best level
    /// first, then a name match, then lowest index.
    pub fn best_matches(&self) -> Vec<&CriterionPair> {
        let mut best: Vec<&CriterionPair> = Vec::new();
        for p in &self.pairs {
            let rank = |p: &CriterionPair| (p.level, !p.name_match, p.b);
            match best.last_mut() {
                Some(cur) if cur.a == p.a => {
                    if rank(p) < rank(cur) {
                        *cur = p;
                    }
                }
                _ => best.push(p),
            }
        }
        best
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// One line per pair.
    pub fn to_text(&self) -> String {
        self.pairs
            .iter()
            .map(|p| {
                format!(
                    "A{} B{} {}{} {} {}\n",
                    p.a,
                    p.b,
                    p.level,
                    if p.name_match { " name-match" } else { "" },
                    p.key_a,
                    p.key_b,
                )
            })
            .collect()
    }
}

/// Classifies every pair of criterion blocks across `a` and `b`.
pub fn comparability(a: &Datasheet, b: &Datasheet) -> Result<ComparabilityReport, IncompleteCriterion> {
    let keyed = |d: &Datasheet| -> Result<Vec<(u8, ComparabilityKey, Option<String>)>, IncompleteCriterion> {
        d.criteria()
            .iter()
            .map(|c| Ok((c.index(), criterion_key(c)?, criterion_name(c))))
            .collect()
    };
    let ka = keyed(a)?;
    let kb = keyed(b)?;
    let mut pairs = Vec::with_capacity(ka.len() * kb.len());
    for (ia, key_a, name_a) in &ka {
        for (ib, key_b, name_b) in &kb {
            pairs.push(CriterionPair {
                a: *ia,
                b: *ib,
                level: classify(key_a, key_b),
                name_match: name_a.is_some() && name_a == name_b,
                key_a: *key_a,
                key_b: *key_b,
            });
        }
    }
    Ok(ComparabilityReport { pairs })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema versions differ: `{a}` vs `{b}`")]
pub struct VersionMismatch {
    pub a: String,
    pub b: String,
}

/// One side of a diff entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    Answered(AnswerValue),
    Unanswered,
    /// The criterion block does not exist on this side.
    NoBlock,
}

impl Side {
    fn of(value: Option<&AnswerValue>) -> Side {
        value.cloned().map_or(Side::Unanswered, Side::Answered)
    }

    pub fn answer(&self) -> Option<&AnswerValue> {
        match self {
            Side::Answered(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Answered(v) => write!(f, "{}", v.to_json()),
            Side::Unanswered => f.write_str("(unanswered)"),
            Side::NoBlock => f.write_str("(no such criterion)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub id: QuestionId,
    pub a: Side,
    pub b: Side,
}

impl DiffEntry {
    pub fn swapped(&self) -> DiffEntry {
        DiffEntry { id: self.id.clone(), a: self.b.clone(), b: self.a.clone() }
    }
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} | {}", self.id, self.a, self.b)
    }
}

/// Questions whose answers differ, in path order. Criterion blocks are
/// aligned by index; a block present on one side only contributes all its
/// questions.
pub fn diff(a: &Datasheet, b: &Datasheet, s: &Schema) -> Result<Vec<DiffEntry>, VersionMismatch> {
    if a.schema_version() != b.schema_version() {
        return Err(VersionMismatch { a: a.schema_version().into(), b: b.schema_version().into() });
    }
    let mut out = Vec::new();
    for part in s.parts_in_order() {
        if part.id == CRITERION_PART {
            let blocks = a.criteria().len().max(b.criteria().len());
            for i in 0..blocks {
                let (ca, cb) = (a.criteria().get(i), b.criteria().get(i));
                for q in &part.questions {
                    let side = |c: Option<&CriterionBlock>| {
                        c.map_or(Side::NoBlock, |c| Side::of(c.answers().get(&q.id)))
                    };
                    let (sa, sb) = (side(ca), side(cb));
                    if sa != sb {
                        out.push(DiffEntry { id: QuestionId::criterion(q.id.clone(), (i + 1) as u8), a: sa, b: sb });
                    }
                }
            }
        } else {
            for q in &part.questions {
                let sa = Side::of(a.fixed_answers().get(&q.id));
                let sb = Side::of(b.fixed_answers().get(&q.id));
                if sa != sb {
                    out.push(DiffEntry { id: QuestionId::fixed(q.id.clone()), a: sa, b: sb });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::builtin_schema;

    fn sheet_with(keys: &[[&str; 6]]) -> Datasheet {
        let s = builtin_schema();
        let mut d = Datasheet::new_empty(s);
        for (i, key) in keys.iter().enumerate() {
            if i > 0 {
                d = d.add_criterion(s).unwrap();
            }
            for (path, option) in ComparabilityKey::KEY_PATHS.iter().zip(key) {
                let id = QuestionId::criterion(path.parse().unwrap(), (i + 1) as u8);
                d = d.set_answer(s, &id, AnswerValue::choice(*option)).unwrap();
            }
        }
        d
    }

    #[test]
    fn grammaticality_key() {
        let d = sheet_with(&[["correctness", "form", "own-right", "subjective", "absolute", "intrinsic"]]);
        let key = criterion_key(&d.criteria()[0]).unwrap();
        assert_eq!(
            key,
            ComparabilityKey {
                quality_type: QualityType::Correctness,
                aspect: Aspect::Form,
                frame: Frame::OwnRight,
                judgment: Judgment::Subjective,
                presentation: Presentation::Absolute,
                scope: Scope::Intrinsic,
            }
        );
        assert_eq!(key.to_string(), "(correctness, form, own-right, subjective, absolute, intrinsic)");
    }

    #[test]
    fn incomplete_lists_missing() {
        let s = builtin_schema();
        let d = sheet_with(&[["goodness", "both", "own-right", "subjective", "absolute", "intrinsic"]]);
        let d = d.clear_answer(&"4.2.3@1".parse().unwrap()).unwrap();
        let err = criterion_key(&d.criteria()[0]).unwrap_err();
        assert_eq!(err.missing, vec!["4.2.3".parse::<QuestionPath>().unwrap()]);
        let empty = criterion_key(&Datasheet::new_empty(s).criteria()[0]).unwrap_err();
        assert_eq!(empty.missing.len(), 6);
    }

    #[test]
    fn presentation_change_is_same_aspect() {
        let a = sheet_with(&[["goodness", "both", "own-right", "subjective", "absolute", "intrinsic"]]);
        let b = sheet_with(&[["goodness", "both", "own-right", "subjective", "relative", "intrinsic"]]);
        let r = comparability(&a, &b).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.pairs[0].level, Level::SameAspect);
        assert_eq!(comparability(&a, &a).unwrap().pairs[0].level, Level::SameCriterion);
    }

    #[test]
    fn names_match_regardless_of_level() {
        let s = builtin_schema();
        let a = sheet_with(&[["goodness", "form", "own-right", "subjective", "absolute", "intrinsic"]])
            .set_answer(s, &"4.3.1@1".parse().unwrap(), AnswerValue::text("Fluency"))
            .unwrap();
        let b = sheet_with(&[["correctness", "content", "external-frame", "objective", "relative", "extrinsic"]])
            .set_answer(s, &"4.3.1@1".parse().unwrap(), AnswerValue::text("  fluency "))
            .unwrap();
        let pair = &comparability(&a, &b).unwrap().pairs[0];
        assert_eq!(pair.level, Level::Unrelated);
        assert!(pair.name_match);
    }

    #[test]
    fn best_matches_ignore_block_order() {
        let x = ["goodness", "form", "own-right", "subjective", "absolute", "intrinsic"];
        let y = ["features", "content", "external-frame", "objective", "relative", "extrinsic"];
        let a = sheet_with(&[x, y]);
        let b = sheet_with(&[y, x]);
        let r = comparability(&a, &b).unwrap();
        assert_eq!(r.pairs.len(), 4);
        let best: Vec<(u8, u8, Level)> = r.best_matches().iter().map(|p| (p.a, p.b, p.level)).collect();
        assert_eq!(best, [(1, 2, Level::SameCriterion), (2, 1, Level::SameCriterion)]);
    }

    #[test]
    fn all_keys() {
        let all = ComparabilityKey::all();
        assert_eq!(all.len(), 216);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 216);
    }

    #[test]
    fn diff_examples() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s);
        assert!(diff(&d, &d, s).unwrap().is_empty());
        let id: QuestionId = "3.2.1".parse().unwrap();
        let a = d.set_answer(s, &id, AnswerValue::Integer(10)).unwrap();
        let b = d.set_answer(s, &id, AnswerValue::Integer(12)).unwrap();
        let entries = diff(&a, &b, s).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].id, id);
        assert_eq!(entries[0].to_string(), "3.2.1: 10 | 12");

        let two = a.add_criterion(s).unwrap();
        let entries = diff(&two, &a, s).unwrap();
        assert_eq!(entries.len(), 17);
        assert!(entries.iter().all(|e| e.id.criterion_index() == Some(2) && e.b == Side::NoBlock));
        let back = diff(&a, &two, s).unwrap();
        assert_eq!(back, entries.iter().map(DiffEntry::swapped).collect::<Vec<_>>());
    }

    #[test]
    fn diff_version_mismatch() {
        let s = builtin_schema();
        let d = Datasheet::new_empty(s);
        let other = Datasheet::from_parts("2.0".into(), Default::default(), vec![], None);
        assert!(diff(&d, &other, s).is_err());
    }
}

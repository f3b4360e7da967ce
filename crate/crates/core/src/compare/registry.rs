//! A registry is a plain directory of `*.heds.json` files.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use super::{criterion_key, Aspect, ComparabilityKey, Frame, Judgment, Presentation, QualityType, Scope};
use crate::document::{parse_canonical, AnswerValue, Datasheet, CANONICAL_EXTENSION};
use crate::schema::Schema;
use crate::validate::validate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexEntry {
    /// File name within the registry directory.
    pub file: String,
    pub paper_link: Option<String>,
    /// Q4.3.1 per criterion block.
    pub criteria: Vec<Option<String>>,
    /// Comparability key per criterion block; `None` for incomplete blocks.
    pub keys: Vec<Option<ComparabilityKey>>,
    pub error_count: usize,
    pub warning_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexFailure {
    pub file: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RegistryIndex {
    pub entries: Vec<IndexEntry>,
    pub failures: Vec<IndexFailure>,
}

impl IndexEntry {
    fn from_sheet(file: String, d: &Datasheet, s: &Schema) -> IndexEntry {
        let report = validate(d, s);
        let paper_link = d
            .answer(&"1.1".parse().expect("static id"))
            .map(|a| match a {
                AnswerValue::Sentinel(t) => t.token().to_string(),
                other => other.as_text().unwrap_or_default().to_string(),
            });
        IndexEntry {
            file,
            paper_link,
            criteria: d
                .criteria()
                .iter()
                .map(|c| c.answer("4.3.1").and_then(AnswerValue::as_text).map(str::to_string))
                .collect(),
            keys: d.criteria().iter().map(|c| criterion_key(c).ok()).collect(),
            error_count: report.error_count,
            warning_count: report.warning_count,
        }
    }
}

/// Indexes every `*.heds.json` directly inside `dir`, sorted by file name.
/// Files that cannot be read or parsed are listed as failures.
pub fn build_index(dir: &Path, s: &Schema) -> io::Result<RegistryIndex> {
    let mut files: Vec<String> = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.ends_with(CANONICAL_EXTENSION) && name.len() > CANONICAL_EXTENSION.len() {
            files.push(name);
        }
    }
    files.sort();
    let mut index = RegistryIndex::default();
    for file in files {
        match fs::read(dir.join(&file)) {
            Err(e) => index.failures.push(IndexFailure { file, error: e.to_string() }),
            Ok(bytes) => match parse_canonical(&bytes, s) {
                Ok(d) => index.entries.push(IndexEntry::from_sheet(file, &d, s)),
                Err(e) => index.failures.push(IndexFailure { file, error: e.to_string() }),
            },
        }
    }
    Ok(index)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid query term `{0}` (expected field=value, e.g. scope=extrinsic)")]
pub struct QueryError(pub String);

/// A partial key: unset fields match anything.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KeyQuery {
    pub quality_type: Option<QualityType>,
    pub aspect: Option<Aspect>,
    pub frame: Option<Frame>,
    pub judgment: Option<Judgment>,
    pub presentation: Option<Presentation>,
    pub scope: Option<Scope>,
}

impl KeyQuery {
    pub fn matches(&self, k: &ComparabilityKey) -> bool {
        fn ok<T: PartialEq>(want: Option<T>, got: T) -> bool {
            want.is_none_or(|w| w == got)
        }
        ok(self.quality_type, k.quality_type)
            && ok(self.aspect, k.aspect)
            && ok(self.frame, k.frame)
            && ok(self.judgment, k.judgment)
            && ok(self.presentation, k.presentation)
            && ok(self.scope, k.scope)
    }

    /// Parses `field=value` terms separated by commas, for example
    /// `scope=extrinsic,aspect=form`.
    pub fn parse(s: &str) -> Result<KeyQuery, QueryError> {
        let mut q = KeyQuery::default();
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || QueryError(term.to_string());
            let (field, value) = term.split_once('=').ok_or_else(bad)?;
            let value = value.trim();
            match field.trim().replace('-', "_").as_str() {
                "quality_type" => q.quality_type = Some(value.parse().map_err(|_| bad())?),
                "aspect" => q.aspect = Some(value.parse().map_err(|_| bad())?),
                "frame" => q.frame = Some(value.parse().map_err(|_| bad())?),
                "judgment" => q.judgment = Some(value.parse().map_err(|_| bad())?),
                "presentation" => q.presentation = Some(value.parse().map_err(|_| bad())?),
                "scope" => q.scope = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        Ok(q)
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

impl RegistryIndex {
    /// Entries with at least one criterion whose key matches `q`.
    pub fn query(&self, q: &KeyQuery) -> Vec<&IndexEntry> {
        self.entries
            .iter()
            .filter(|e| e.keys.iter().flatten().any(|k| q.matches(k)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("index serializes");
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| File | Paper | Criteria | Keys | Errors |\n|---|---|---|---|---|\n");
        for e in &self.entries {
            let names: Vec<String> = e.criteria.iter().map(|n| n.as_deref().unwrap_or("?").to_string()).collect();
            let keys: Vec<String> = e
                .keys
                .iter()
                .map(|k| k.map_or_else(|| "(incomplete)".to_string(), |k| k.to_string()))
                .collect();
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                cell(&e.file),
                cell(e.paper_link.as_deref().unwrap_or("")),
                cell(&names.join("; ")),
                cell(&keys.join("; ")),
                e.error_count,
            ));
        }
        if !self.failures.is_empty() {
            out.push_str("\n| Unreadable file | Error |\n|---|---|\n");
            for f in &self.failures {
                out.push_str(&format!("| {} | {} |\n", cell(&f.file), cell(&f.error)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::serialize_canonical;
    use crate::schema::builtin_schema;

    #[test]
    fn empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        let index = build_index(dir.path(), builtin_schema()).unwrap();
        assert_eq!(index, RegistryIndex::default());
    }

    #[test]
    fn valid_and_broken() {
        let s = builtin_schema();
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("b.heds.json"), serialize_canonical(&Datasheet::new_empty(s))).unwrap();
        fs::write(dir.path().join("a.heds.json"), b"{ not json").unwrap();
        fs::write(dir.path().join("notes.txt"), b"ignored").unwrap();
        let index = build_index(dir.path(), s).unwrap();
        assert_eq!(index.entries.len(), 1);
        assert_eq!(index.entries[0].file, "b.heds.json");
        assert_eq!(index.entries[0].error_count, 45);
        assert_eq!(index.entries[0].keys, vec![None]);
        assert_eq!(index.failures.len(), 1);
        assert_eq!(index.failures[0].file, "a.heds.json");
        let md = index.to_markdown();
        assert!(md.contains("| b.heds.json |  | ? | (incomplete) | 45 |"), "{md}");
        assert!(md.contains("| a.heds.json | syntax error"), "{md}");
    }

    #[test]
    fn query_parsing() {
        let q = KeyQuery::parse("scope=extrinsic, quality-type=goodness").unwrap();
        assert_eq!(q.scope, Some(Scope::Extrinsic));
        assert_eq!(q.quality_type, Some(QualityType::Goodness));
        assert!(KeyQuery::parse("scope=sideways").is_err());
        assert!(KeyQuery::parse("colour=red").is_err());
        assert_eq!(KeyQuery::parse("").unwrap(), KeyQuery::default());
        let n = ComparabilityKey::all().iter().filter(|k| q.matches(k)).count();
        assert_eq!(n, 216 / 6);
    }
}

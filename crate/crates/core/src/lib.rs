//! Machine-readable Human Evaluation Datasheets (HEDS 1.0).
//!
//! - [`schema`]: the built-in question tree.
//! - [`document`]: datasheet values and the canonical `.heds.json` format.
//! - [`validate`]: the rule engine.
//! - [`render`]: Markdown and LaTeX output, Markdown import.
//! - [`compare`]: diffs, comparability keys and the directory registry.

pub mod compare;
pub mod document;
pub mod render;
pub mod schema;
pub mod validate;

pub use document::{AnswerValue, CriterionBlock, Datasheet, DocumentError};
pub use schema::{builtin_schema, QuestionId, QuestionKind, QuestionPath, Schema, Sentinel};
pub use validate::{validate, Diagnostic, RuleId, Severity, ValidationReport};

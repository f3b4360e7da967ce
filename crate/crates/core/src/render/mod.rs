//! Markdown and LaTeX renderings of datasheets.
//!
//! Markdown is the editable format: [`parse_markdown`] reads back what
//! [`render_markdown`] writes, including hand edits to answers and
//! checkboxes. LaTeX is export only.

mod latex;
mod markdown;

use serde::{Deserialize, Serialize};

use crate::document::Datasheet;
use crate::schema::Schema;

pub use latex::render_latex;
pub use markdown::{parse_markdown, render_markdown, MarkdownError};

pub const MARKDOWN_EXTENSION: &str = ".heds.md";
pub const LATEX_EXTENSION: &str = ".heds.tex";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Markdown,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    BlankTemplate,
    Completed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderTarget {
    pub format: Format,
    pub mode: Mode,
}

impl RenderTarget {
    pub fn completed(format: Format) -> Self {
        RenderTarget { format, mode: Mode::Completed }
    }

    pub fn blank(format: Format) -> Self {
        RenderTarget { format, mode: Mode::BlankTemplate }
    }
}

/// Renders `d` (or, for a blank template, an empty sheet with one
/// criterion block). A completed rendering without a sheet falls back to
/// the blank template.
pub fn render(d: Option<&Datasheet>, s: &Schema, t: RenderTarget) -> String {
    let blank;
    let sheet = match (t.mode, d) {
        (Mode::Completed, Some(d)) => d,
        _ => {
            blank = Datasheet::new_empty(s);
            &blank
        }
    };
    match t.format {
        Format::Markdown => render_markdown(sheet, s),
        Format::Latex => render_latex(sheet, s),
    }
}

pub(crate) const DOCUMENT_TITLE: &str = "Human Evaluation Datasheet (HEDS 1.0)";

pub(crate) fn part_heading(part_id: u16, title: &str, criterion: Option<u8>) -> String {
    match criterion {
        Some(i) => format!("Part {part_id}: {title} {i}"),
        None => format!("Part {part_id}: {title}"),
    }
}

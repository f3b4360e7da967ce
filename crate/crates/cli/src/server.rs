//! HTTP API for the authoring wizard.
//!
//! | method | path                | body            | response                          |
//! |--------|---------------------|-----------------|-----------------------------------|
//! | GET    | `/schema`           |                 | schema JSON                       |
//! | POST   | `/validate`         | canonical sheet | validation report                 |
//! | POST   | `/render?target=..` | canonical sheet | Markdown or LaTeX text            |
//! | GET    | `/registry`         |                 | registry index JSON               |
//! | GET    | `/registry/{name}`  |                 | stored canonical sheet            |
//! | PUT    | `/registry/{name}`  | canonical sheet | report; 422 if it has errors      |
//!
//! Unparseable sheets get 400 with `{"error": .., "kind": "parse"}`.
//! `/render` also takes `mode=blank` for an empty template, in which case
//! the body is ignored. `/registry` accepts key filters such as
//! `?scope=extrinsic`.

// Handlers bail out early with a ready `Response`.
#![allow(clippy::result_large_err)]

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use heds_core::compare::{build_index, KeyQuery};
use heds_core::document::{parse_canonical, serialize_canonical, CANONICAL_EXTENSION};
use heds_core::render::{render, Format, Mode, RenderTarget};
use heds_core::{builtin_schema, validate, Datasheet, DocumentError};
use serde_json::json;

#[derive(Debug, Clone)]
struct AppState {
    registry: Option<Arc<PathBuf>>,
}

pub fn router(registry: Option<PathBuf>) -> Router {
    let state = AppState { registry: registry.map(Arc::new) };
    Router::new()
        .route("/schema", get(schema))
        .route("/validate", post(validate_sheet))
        .route("/render", post(render_sheet))
        .route("/registry", get(registry_index))
        .route("/registry/{name}", get(registry_get).put(registry_put))
        .with_state(state)
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, kind: &str, message: impl std::fmt::Display) -> Response {
    let body = json!({ "error": message.to_string(), "kind": kind });
    json_response(status, format!("{body:#}\n"))
}

fn parse_error(e: &DocumentError) -> Response {
    let mut body = json!({ "error": e.to_string(), "kind": "parse" });
    if let DocumentError::Syntax { line, column, .. } = e {
        body["line"] = json!(line);
        body["column"] = json!(column);
    }
    json_response(StatusCode::BAD_REQUEST, format!("{body:#}\n"))
}

fn parse_body(body: &[u8]) -> Result<Datasheet, Response> {
    parse_canonical(body, builtin_schema()).map_err(|e| parse_error(&e))
}

async fn schema() -> Response {
    json_response(StatusCode::OK, builtin_schema().to_json())
}

async fn validate_sheet(body: Bytes) -> Response {
    match parse_body(&body) {
        Ok(d) => json_response(StatusCode::OK, validate(&d, builtin_schema()).to_json()),
        Err(r) => r,
    }
}

async fn render_sheet(Query(params): Query<BTreeMap<String, String>>, body: Bytes) -> Response {
    let (format, content_type) = match params.get("target").map(String::as_str) {
        Some("markdown") => (Format::Markdown, "text/markdown; charset=utf-8"),
        Some("latex") => (Format::Latex, "application/x-latex; charset=utf-8"),
        _ => return error(StatusCode::BAD_REQUEST, "usage", "target must be `markdown` or `latex`"),
    };
    let mode = match params.get("mode").map(String::as_str) {
        None | Some("completed") => Mode::Completed,
        Some("blank") => Mode::BlankTemplate,
        Some(other) => return error(StatusCode::BAD_REQUEST, "usage", format!("unknown mode `{other}`")),
    };
    let sheet = match mode {
        Mode::BlankTemplate => None,
        Mode::Completed => match parse_body(&body) {
            Ok(d) => Some(d),
            Err(r) => return r,
        },
    };
    let text = render(sheet.as_ref(), builtin_schema(), RenderTarget { format, mode });
    (StatusCode::OK, [(header::CONTENT_TYPE, content_type)], text).into_response()
}

fn registry_dir(state: &AppState) -> Result<&Path, Response> {
    state
        .registry
        .as_deref()
        .map(PathBuf::as_path)
        .ok_or_else(|| error(StatusCode::NOT_FOUND, "registry", "no registry directory configured"))
}

async fn registry_index(State(state): State<AppState>, Query(params): Query<BTreeMap<String, String>>) -> Response {
    let dir = match registry_dir(&state) {
        Ok(d) => d,
        Err(r) => return r,
    };
    let terms: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let query = match KeyQuery::parse(&terms.join(",")) {
        Ok(q) => q,
        Err(e) => return error(StatusCode::BAD_REQUEST, "usage", e),
    };
    match build_index(dir, builtin_schema()) {
        Ok(mut index) => {
            if query != KeyQuery::default() {
                let keep: Vec<String> = index.query(&query).iter().map(|e| e.file.clone()).collect();
                index.entries.retain(|e| keep.contains(&e.file));
            }
            json_response(StatusCode::OK, index.to_json())
        }
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "io", e),
    }
}

/// Maps a URL segment to a file name in the registry, or `None` if it
/// could escape the directory.
pub fn registry_file_name(name: &str) -> Option<String> {
    let stem = name.strip_suffix(CANONICAL_EXTENSION).unwrap_or(name);
    let ok = !stem.is_empty()
        && stem.len() <= 200
        && !stem.starts_with('.')
        && stem.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    ok.then(|| format!("{stem}{CANONICAL_EXTENSION}"))
}

async fn registry_get(State(state): State<AppState>, UrlPath(name): UrlPath<String>) -> Response {
    let dir = match registry_dir(&state) {
        Ok(d) => d,
        Err(r) => return r,
    };
    let Some(file) = registry_file_name(&name) else {
        return error(StatusCode::BAD_REQUEST, "usage", format!("invalid sheet name `{name}`"));
    };
    match std::fs::read(dir.join(&file)) {
        Ok(bytes) => (StatusCode::OK, [(header::CONTENT_TYPE, "application/json")], bytes).into_response(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            error(StatusCode::NOT_FOUND, "registry", format!("no sheet `{file}`"))
        }
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "io", e),
    }
}

fn write_atomically(dir: &Path, file: &str, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(file)).map_err(|e| e.error)?;
    Ok(())
}

async fn registry_put(State(state): State<AppState>, UrlPath(name): UrlPath<String>, body: Bytes) -> Response {
    let dir = match registry_dir(&state) {
        Ok(d) => d.to_path_buf(),
        Err(r) => return r,
    };
    let Some(file) = registry_file_name(&name) else {
        return error(StatusCode::BAD_REQUEST, "usage", format!("invalid sheet name `{name}`"));
    };
    let sheet = match parse_body(&body) {
        Ok(d) => d,
        Err(r) => return r,
    };
    let report = validate(&sheet, builtin_schema());
    if report.has_errors() {
        return json_response(StatusCode::UNPROCESSABLE_ENTITY, report.to_json());
    }
    let existed = dir.join(&file).exists();
    let bytes = serialize_canonical(&sheet);
    let written = tokio::task::spawn_blocking(move || write_atomically(&dir, &file, &bytes)).await;
    match written {
        Ok(Ok(())) => {
            let status = if existed { StatusCode::OK } else { StatusCode::CREATED };
            json_response(status, report.to_json())
        }
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, "io", e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "io", e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names() {
        assert_eq!(registry_file_name("exp1").as_deref(), Some("exp1.heds.json"));
        assert_eq!(registry_file_name("exp1.heds.json").as_deref(), Some("exp1.heds.json"));
        assert_eq!(registry_file_name("v1.2_b-c").as_deref(), Some("v1.2_b-c.heds.json"));
        for bad in ["", "..", ".hidden", "../etc", "a/b", "a\\b", "a b", ".heds.json"] {
            assert_eq!(registry_file_name(bad), None, "{bad}");
        }
    }
}

//! The `heds` command line: create, validate, convert, diff and compare
//! datasheets, index a registry directory, and serve the local HTTP API.

pub mod server;

use std::fs;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use heds_core::compare::{build_index, comparability, diff, KeyQuery};
use heds_core::document::{parse_canonical, serialize_canonical};
use heds_core::render::{
    parse_markdown, render_latex, render_markdown, MarkdownError, LATEX_EXTENSION, MARKDOWN_EXTENSION,
};
use heds_core::{builtin_schema, validate, Datasheet, DocumentError};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Invalid = 1,
    Usage = 2,
    Parse = 3,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Parser)]
#[command(name = "heds", version, about = "Human Evaluation Datasheet (HEDS 1.0) toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertTarget {
    Markdown,
    Latex,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndexFormat {
    Json,
    Markdown,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an empty datasheet.
    New {
        /// Number of quality-criterion blocks.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=10))]
        criteria: u8,
        /// Output file; stdout if omitted.
        output: Option<PathBuf>,
    },
    /// Check a datasheet against every rule.
    Validate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Convert between canonical JSON, Markdown and LaTeX.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the answers that differ between two datasheets.
    Diff { a: PathBuf, b: PathBuf },
    /// Classify every pair of quality criteria across two datasheets.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Index the datasheets in a registry directory.
    Index {
        #[arg(env = "HEDS_REGISTRY")]
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = IndexFormat::Json)]
        format: IndexFormat,
        /// Only sheets with a criterion matching, e.g. `scope=extrinsic,aspect=form`.
        #[arg(long)]
        query: Option<String>,
    },
    /// Serve the HTTP API used by the authoring wizard.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Registry directory for /registry.
        #[arg(long, env = "HEDS_REGISTRY")]
        registry: Option<PathBuf>,
    },
}

/// A failed command: the exit code and what to print on stderr.
#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { exit: Exit::Usage, message: message.into() }
    }

    fn parse(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { exit: Exit::Parse, message: format!("{}: {e}", path.display()) }
    }

    /// Parse failure, except that an unsupported schema version is a
    /// usage error.
    fn document(path: &Path, e: DocumentError) -> Self {
        match e {
            DocumentError::UnsupportedSchemaVersion(_) => Failure::usage(format!("{}: {e}", path.display())),
            e => Failure::parse(path, e),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure::usage(format!("{}: {e}", path.display()))
    }
}

type CmdResult = Result<Exit, Failure>;

/// Reads a canonical or Markdown datasheet, choosing by file name.
pub fn load(path: &Path) -> Result<Datasheet, Failure> {
    let name = path.to_string_lossy();
    if name.ends_with(LATEX_EXTENSION) {
        return Err(Failure::usage(format!("{name}: LaTeX is an export format and cannot be read")));
    }
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    if name.ends_with(MARKDOWN_EXTENSION) {
        let text = String::from_utf8(bytes).map_err(|e| Failure::parse(path, e))?;
        parse_markdown(&text, builtin_schema()).map_err(|e| match e {
            MarkdownError::Document(e) => Failure::document(path, e),
            e => Failure::parse(path, e),
        })
    } else {
        parse_canonical(&bytes, builtin_schema()).map_err(|e| Failure::document(path, e))
    }
}

fn emit(output: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::io(path, e)),
        None => out.write_all(bytes).map_err(|e| Failure::usage(e.to_string())),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_new(criteria: u8, output: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let s = builtin_schema();
    let mut d = Datasheet::new_empty(s);
    for _ in 1..criteria {
        d = d.add_criterion(s).map_err(|e| Failure::usage(e.to_string()))?;
    }
    emit(output, &serialize_canonical(&d), out)?;
    Ok(Exit::Ok)
}

fn cmd_validate(input: &Path, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    let d = load(input)?;
    let report = validate(&d, builtin_schema());
    let text = match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    write_out(out, &text)?;
    Ok(if report.has_errors() { Exit::Invalid } else { Exit::Ok })
}

fn cmd_convert(input: &Path, to: ConvertTarget, output: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let d = load(input)?;
    let s = builtin_schema();
    let bytes = match to {
        ConvertTarget::Canonical => serialize_canonical(&d),
        ConvertTarget::Markdown => render_markdown(&d, s).into_bytes(),
        ConvertTarget::Latex => render_latex(&d, s).into_bytes(),
    };
    emit(output, &bytes, out)?;
    Ok(Exit::Ok)
}

fn cmd_diff(a: &Path, b: &Path, out: &mut dyn Write) -> CmdResult {
    let (da, db) = (load(a)?, load(b)?);
    let entries = diff(&da, &db, builtin_schema()).map_err(|e| Failure::usage(e.to_string()))?;
    let text: String = entries.iter().map(|e| format!("{e}\n")).collect();
    write_out(out, &text)?;
    Ok(Exit::Ok)
}

fn cmd_compare(a: &Path, b: &Path, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    let (da, db) = (load(a)?, load(b)?);
    let report = comparability(&da, &db).map_err(|e| Failure { exit: Exit::Invalid, message: e.to_string() })?;
    let text = match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => report.to_json(),
    };
    write_out(out, &text)?;
    Ok(Exit::Ok)
}

fn cmd_index(dir: &Path, format: IndexFormat, query: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let mut index = build_index(dir, builtin_schema()).map_err(|e| Failure::io(dir, e))?;
    if let Some(q) = query {
        let q = KeyQuery::parse(q).map_err(|e| Failure::usage(e.to_string()))?;
        let keep: Vec<String> = index.query(&q).iter().map(|e| e.file.clone()).collect();
        index.entries.retain(|e| keep.contains(&e.file));
    }
    let text = match format {
        IndexFormat::Json => index.to_json(),
        IndexFormat::Markdown => index.to_markdown(),
    };
    write_out(out, &text)?;
    Ok(Exit::Ok)
}

fn cmd_serve(host: std::net::IpAddr, port: u16, registry: Option<PathBuf>, err: &mut dyn Write) -> CmdResult {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::usage(e.to_string()))?;
    let addr = SocketAddr::new(host, port);
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure::usage(format!("cannot bind {addr}: {e}")))?;
        let _ = writeln!(err, "listening on http://{}", listener.local_addr().unwrap_or(addr));
        axum::serve(listener, server::router(registry))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| Failure::usage(e.to_string()))
    })?;
    Ok(Exit::Ok)
}

/// Runs one command, writing results to `out` and problems to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let result = match cli.command {
        Command::New { criteria, output } => cmd_new(criteria, output.as_deref(), out),
        Command::Validate { input, format } => cmd_validate(&input, format, out),
        Command::Convert { input, to, output } => cmd_convert(&input, to, output.as_deref(), out),
        Command::Diff { a, b } => cmd_diff(&a, &b, out),
        Command::Compare { a, b, format } => cmd_compare(&a, &b, format, out),
        Command::Index { dir, format, query } => cmd_index(&dir, format, query.as_deref(), out),
        Command::Serve { port, host, registry } => cmd_serve(host, port, registry, err),
    };
    match result {
        Ok(exit) => exit,
        Err(f) => {
            let _ = writeln!(err, "heds: {}", f.message);
            f.exit
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Argument errors print clap's message and return [`Exit::Usage`].
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            Exit::Usage
        }
        Err(e) => {
            // --help and --version.
            let _ = write!(out, "{}", e.render());
            Exit::Ok
        }
    }
}

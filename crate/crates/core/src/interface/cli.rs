//! The `upo` command line.
//!
//! Exit status is 0 when every requested check passes, 1 when a check
//! fails, and 2 when the input or the invocation is unusable.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use tempfile::NamedTempFile;

use crate::axioms::{check_admissible, check_q, check_u, CheckReport, Definition, Witness};
use crate::compose::{compose, ComposeError, Factor};
use crate::interface::dot::export_dot;
use crate::interface::layers_format::parse_layers;
use crate::interface::upg::{parse_upg, serialize_upg, SourceSpans, UpgDocument};
use crate::layers::{pipeline, LayerError};
use crate::oracle::{enumerate_upos, EnumerateOptions};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_UNUSABLE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "upo", version, about = "Check, compose and enumerate upward planar orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a UPG document's order against the axioms.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Q)]
        definition: Which,
        /// Also check admissibility.
        #[arg(long)]
        admissible: bool,
    },
    /// Compose two UPG documents, the first on top of the second.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Build a UPG document from a layer file.
    Pipeline {
        file: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// List the upward planar orders of a small graph.
    Enumerate {
        file: PathBuf,
        /// Only admissible orders.
        #[arg(long)]
        admissible: bool,
        /// Print the number of orders instead of the orders.
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = Which::Q)]
        definition: Which,
        /// Lift the edge cap.
        #[arg(long)]
        force: bool,
    },
    /// Write a Graphviz rendering of a UPG document.
    ExportDot {
        file: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    U,
    Q,
    Both,
}

/// A failure that ends the command with the given status.
struct Exit {
    code: u8,
    message: String,
}

fn unusable(message: impl Into<String>) -> Exit {
    Exit {
        code: EXIT_UNUSABLE,
        message: message.into(),
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &Path) -> Result<String, Exit> {
        if path == Path::new("-") {
            if self.stdin_used {
                return Err(unusable("standard input can be read only once"));
            }
            self.stdin_used = true;
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| unusable(format!("reading standard input: {e}")))?;
            return Ok(text);
        }
        fs::read_to_string(path).map_err(|e| unusable(format!("{}: {e}", path.display())))
    }

    fn write(&mut self, path: &Path, text: &str) -> Result<(), Exit> {
        let io_err = |e: io::Error| unusable(format!("{}: {e}", path.display()));
        if path == Path::new("-") {
            return self.stdout.write_all(text.as_bytes()).map_err(io_err);
        }
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
        tmp.write_all(text.as_bytes()).map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }

    fn document(&mut self, path: &Path) -> Result<UpgDocument, Exit> {
        let text = self.read(path)?;
        parse_upg(&text).map_err(|e| unusable(format!("{}: {e}", path.display())))
    }
}

fn located(w: &Witness, spans: &SourceSpans) -> String {
    let line = match w {
        Witness::Edge(e) => spans.edge(e),
        Witness::Vertex(v) => spans.vertex(v),
    };
    match line {
        Some(l) => format!("{w} (line {l})"),
        None => w.to_string(),
    }
}

fn render_diagnostics(report: &CheckReport, spans: &SourceSpans, out: &mut String) {
    for d in report.diagnostics() {
        let at: Vec<String> = d.witness.iter().map(|w| located(w, spans)).collect();
        out.push_str(&format!("  {d} [{}]\n", at.join(", ")));
    }
    if report.truncated() {
        out.push_str("  further diagnostics omitted\n");
    }
}

fn verdict(report: &CheckReport) -> &'static str {
    if report.passed() {
        "pass"
    } else {
        "fail"
    }
}

fn run_check(io: &mut Io, file: &Path, which: Which, admissible: bool) -> Result<u8, Exit> {
    let doc = io.document(file)?;
    let Some(order) = &doc.order else {
        return Err(unusable(format!("{}: document has no order", file.display())));
    };
    let mut reports = Vec::new();
    if matches!(which, Which::U | Which::Both) {
        reports.push(("U", check_u(&doc.graph, order)));
    }
    if matches!(which, Which::Q | Which::Both) {
        reports.push(("Q", check_q(&doc.graph, order)));
    }
    if admissible {
        reports.push(("ADM", check_admissible(&doc.graph, order)));
    }
    let reports: Vec<(&str, CheckReport)> = reports
        .into_iter()
        .map(|(name, r)| r.map(|r| (name, r)))
        .collect::<Result<_, _>>()
        .map_err(|e| unusable(e.to_string()))?;

    let summary: Vec<String> = reports.iter().map(|(name, r)| format!("{name}: {}", verdict(r))).collect();
    let mut text = summary.join(", ");
    text.push('\n');
    for (_, r) in &reports {
        render_diagnostics(r, &doc.spans, &mut text);
    }
    io.write(Path::new("-"), &text)?;
    Ok(if reports.iter().all(|(_, r)| r.passed()) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn run_compose(io: &mut Io, first: &Path, second: &Path, output: &Path) -> Result<u8, Exit> {
    let docs = [io.document(first)?, io.document(second)?];
    let upos = docs
        .iter()
        .zip([first, second])
        .map(|(doc, path)| match &doc.order {
            Some(order) => Ok(crate::compose::UpoGraph::new(doc.graph.clone(), order.clone())),
            None => Err(unusable(format!("{}: document has no order", path.display()))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    match compose(&upos[0], &upos[1]) {
        Ok(c) => {
            io.write(output, &serialize_upg(&UpgDocument::new(c.graph, Some(c.order))))?;
            Ok(EXIT_PASS)
        }
        Err(ComposeError::NotAdmissibleUpo { factor, report }) => {
            let (doc, path) = match factor {
                Factor::First => (&docs[0], first),
                Factor::Second => (&docs[1], second),
            };
            let mut message = format!("{}: not an admissible upward planar order\n", path.display());
            render_diagnostics(&report, &doc.spans, &mut message);
            Err(Exit {
                code: EXIT_FAIL,
                message: message.trim_end().to_owned(),
            })
        }
        Err(e) => Err(unusable(e.to_string())),
    }
}

fn run_pipeline(io: &mut Io, file: &Path, output: &Path) -> Result<u8, Exit> {
    let text = io.read(file)?;
    let parsed = parse_layers(&text).map_err(|e| unusable(format!("{}: {e}", file.display())))?;
    let composed = pipeline(&parsed.stack).map_err(|e| {
        let line = match &e {
            LayerError::InvalidCell { layer, cell, .. } => parsed.cell_lines.get(*layer).and_then(|c| c.get(*cell)),
            LayerError::WidthMismatch { layer, .. } => parsed.layer_lines.get(*layer + 1),
            LayerError::Graph { layer, .. } => parsed.layer_lines.get(*layer),
            LayerError::Compose(_) => None,
        };
        match line {
            Some(l) => unusable(format!("{}: line {l}: {e}", file.display())),
            None => unusable(format!("{}: {e}", file.display())),
        }
    })?;
    io.write(output, &serialize_upg(&UpgDocument::new(composed.graph, Some(composed.order))))?;
    Ok(EXIT_PASS)
}

fn run_enumerate(io: &mut Io, file: &Path, options: EnumerateOptions, count_only: bool) -> Result<u8, Exit> {
    let doc = io.document(file)?;
    let result = enumerate_upos(&doc.graph, options).map_err(|e| unusable(e.to_string()))?;
    let mut text = String::new();
    if count_only {
        text.push_str(&format!("{}\n", result.orders.len()));
    } else {
        for order in &result.orders {
            let names: Vec<&str> = order.sequence().iter().map(|e| e.as_str()).collect();
            text.push_str(&names.join(" "));
            text.push('\n');
        }
    }
    if !result.exhausted {
        text.push_str("# stopped at limit\n");
    }
    io.write(Path::new("-"), &text)?;
    Ok(EXIT_PASS)
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_UNUSABLE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_PASS
            };
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stdin_used: false,
    };
    let outcome = match cli.command {
        Command::Check {
            file,
            definition,
            admissible,
        } => run_check(&mut io, &file, definition, admissible),
        Command::Compose { first, second, output } => run_compose(&mut io, &first, &second, &output),
        Command::Pipeline { file, output } => run_pipeline(&mut io, &file, &output),
        Command::Enumerate {
            file,
            admissible,
            count_only,
            limit,
            definition,
            force,
        } => {
            let definition = match definition {
                Which::U => Definition::U,
                Which::Q => Definition::Q,
                Which::Both => {
                    let _ = writeln!(stderr, "error: enumerate takes --definition u or q");
                    return EXIT_UNUSABLE;
                }
            };
            let options = EnumerateOptions {
                require_admissible: admissible,
                definition,
                limit,
                force,
            };
            run_enumerate(&mut io, &file, options, count_only)
        }
        Command::ExportDot { file, output } => io
            .document(&file)
            .and_then(|doc| io.write(&output, &export_dot(&doc)))
            .map(|()| EXIT_PASS),
    };
    match outcome {
        Ok(code) => code,
        Err(Exit { code, message }) => {
            let _ = writeln!(stderr, "error: {message}");
            code
        }
    }
}

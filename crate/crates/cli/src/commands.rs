use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vison_core::catalog::{
    current_year, ingest, CatalogError, Schema, Stopwords, SEED_CATALOG, SEED_SCHEMA, SEED_STOPWORDS,
};
use vison_core::discovery::{snapshot_to_json, ApiError, ToolSummary};
use vison_core::Discovery;

use crate::server::{serve, AppState};
use crate::{exit, load_snapshot, DEFAULT_BIND, DEFAULT_SNAPSHOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "vison", version, about = "Software visualization tool knowledge base")]
pub struct Cli {
    /// Snapshot file written by `ingest` and read by every other command.
    #[arg(long, global = true, env = "VISON_SNAPSHOT", default_value = DEFAULT_SNAPSHOT)]
    pub snapshot: PathBuf,

    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a catalog CSV, compile it and write the snapshot.
    Ingest {
        /// Catalog CSV; the bundled seed catalog when omitted.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Schema CSV; the bundled schema when omitted.
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Stopword list for concern keywords.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        /// Upper bound for last-update years (defaults to this year).
        #[arg(long)]
        current_year: Option<i64>,
    },
    /// Evaluate a class expression against the snapshot.
    Query { text: String },
    /// Distinct facet values with tool counts.
    Facets,
    /// Axiom and entity counts.
    Metrics,
    /// Run the consistency checker; exits 1 on any violation.
    Check,
    /// Breadth-limited concept graph as JSON.
    ExportGraph {
        #[arg(long, default_value = vison_core::ontology::ROOT)]
        root: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Year, aspect, evaluation and tool flows as JSON.
    ExportSankey,
    /// Serve the HTTP JSON API. SIGHUP reloads the snapshot file.
    Serve {
        #[arg(long, env = "VISON_BIND", default_value = DEFAULT_BIND)]
        bind: String,
    },
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn read_or_bundled(path: Option<&Path>, bundled: &str) -> Result<String, String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(bundled.to_string()),
    }
}

fn open(cli: &Cli) -> Result<Discovery, i32> {
    load_snapshot(&cli.snapshot).map(Discovery::new).map_err(|e| {
        eprintln!("error: cannot read snapshot {e}");
        exit::IO
    })
}

/// Text table with left-aligned columns.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(headers.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn tool_rows(tools: &[ToolSummary]) -> Vec<Vec<String>> {
    tools
        .iter()
        .map(|t| {
            vec![
                t.name.clone(),
                t.year.map(|y| y.to_string()).unwrap_or_default(),
                t.aspect.clone().unwrap_or_default(),
                t.media.join("; "),
                t.url.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

fn report_query_error(format: Format, text: &str, e: &ApiError) {
    match format {
        Format::Json => print_json(&e.body()),
        Format::Table => {
            eprintln!("error[{}]: {}", e.code, e.message);
            if let Some(pos) = e.position {
                eprintln!("  {text}");
                eprintln!("  {}^", " ".repeat(pos));
            }
        }
    }
}

fn cmd_ingest(
    cli: &Cli,
    catalog: Option<&Path>,
    schema: Option<&Path>,
    stopwords: Option<&Path>,
    year: Option<i64>,
) -> i32 {
    let inputs = (|| {
        Ok::<_, String>((
            read_or_bundled(catalog, SEED_CATALOG)?,
            read_or_bundled(schema, SEED_SCHEMA)?,
            read_or_bundled(stopwords, SEED_STOPWORDS)?,
        ))
    })();
    let (catalog_text, schema_text, stopword_text) = match inputs {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::IO;
        }
    };
    let schema = match Schema::parse(&schema_text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::INVALID;
        }
    };
    let result = ingest(
        catalog_text.as_bytes(),
        &schema,
        &Stopwords::parse(&stopword_text),
        year.unwrap_or_else(current_year),
    );
    let ingested = match result {
        Ok(i) => i,
        Err(CatalogError::Invalid(issues)) => {
            for issue in &issues {
                eprintln!("{issue}");
            }
            let errors = issues.iter().filter(|i| i.is_error()).count();
            eprintln!("error: catalog rejected with {errors} error(s)");
            return exit::INVALID;
        }
        Err(CatalogError::Inconsistent(report)) => {
            for v in &report.violations {
                eprintln!("{}: {}", v.kind, v.message);
            }
            eprintln!("error: compiled ontology is inconsistent");
            return exit::INVALID;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return exit::INVALID;
        }
    };
    for issue in &ingested.issues {
        eprintln!("{issue}");
    }
    if let Err(e) = std::fs::write(&cli.snapshot, snapshot_to_json(&ingested.ontology)) {
        eprintln!("error: {}: {e}", cli.snapshot.display());
        return exit::IO;
    }
    let m = ingested.ontology.compute_metrics();
    println!("tools: {}", ingested.records.len());
    println!("individuals: {}", m.individual_count);
    println!("classes: {}", m.class_count);
    println!("axioms: {} (logical {}, declaration {})", m.axiom_count, m.logical_axiom_count, m.declaration_axiom_count);
    println!("warnings: {}", ingested.issues.len());
    println!("snapshot: {}", cli.snapshot.display());
    exit::OK
}

pub fn run(cli: Cli) -> i32 {
    match &cli.command {
        Command::Ingest { catalog, schema, stopwords, current_year } => cmd_ingest(
            &cli,
            catalog.as_deref(),
            schema.as_deref(),
            stopwords.as_deref(),
            *current_year,
        ),
        Command::Query { text } => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            match d.query(text) {
                Ok(r) => {
                    match cli.format {
                        Format::Json => print_json(&r),
                        Format::Table => {
                            print!("{}", table(&["name", "year", "aspect", "media", "url"], &tool_rows(&r.results)));
                            println!("{} match(es) for `{}`", r.count, r.expression);
                        }
                    }
                    exit::OK
                }
                Err(e) => {
                    report_query_error(cli.format, text, &e);
                    exit::INVALID
                }
            }
        }
        Command::Facets => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let inv = d.facets();
            match cli.format {
                Format::Json => print_json(&inv),
                Format::Table => {
                    for dim in &inv.dimensions {
                        println!("{}", dim.name);
                        for v in &dim.values {
                            println!("  {:>3}  {}", v.count, v.value);
                        }
                    }
                }
            }
            exit::OK
        }
        Command::Metrics => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let m = d.metrics();
            match cli.format {
                Format::Json => print_json(&m),
                Format::Table => {
                    let value = serde_json::to_value(m).expect("serializable");
                    let rows: Vec<Vec<String>> = value
                        .as_object()
                        .expect("struct")
                        .iter()
                        .map(|(k, v)| vec![k.clone(), v.to_string()])
                        .collect();
                    print!("{}", table(&["metric", "count"], &rows));
                }
            }
            exit::OK
        }
        Command::Check => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let report = d.consistency();
            match cli.format {
                Format::Json => print_json(&report),
                Format::Table => {
                    for v in &report.violations {
                        println!("{}: {}", v.kind, v.message);
                    }
                    println!("{} violation(s)", report.violations.len());
                }
            }
            if report.is_consistent() {
                exit::OK
            } else {
                exit::INVALID
            }
        }
        Command::ExportGraph { root, depth } => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            match d.graph(root, *depth) {
                Ok(g) => {
                    print_json(&g);
                    exit::OK
                }
                Err(e) => {
                    eprintln!("error[{}]: {}", e.code, e.message);
                    exit::INVALID
                }
            }
        }
        Command::ExportSankey => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            print_json(&d.sankey());
            exit::OK
        }
        Command::Serve { bind } => {
            let d = match open(&cli) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let state = AppState::new(d, Some(cli.snapshot.clone()));
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::IO;
                }
            };
            match runtime.block_on(serve(state, bind)) {
                Ok(()) => exit::OK,
                Err(e) => {
                    eprintln!("error: cannot serve on {bind}: {e}");
                    exit::IO
                }
            }
        }
    }
}

//! `etd`: ingest catalog records into a temporal quad store, query it,
//! report on it, export it and serve entity descriptions.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.
//! Data goes to standard output, diagnostics to standard error.

pub mod config;
pub mod report;
pub mod server;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use etd_core::ingest::{mint_iri, parse_records, records_to_graph, IngestError, IngestOptions};
use etd_core::io::{describe_entity, export_dot, export_quads, import_quads};
use etd_core::query::{
    eval_query, gender_tally, institution_cooperation, interdisciplinary_works, mobility_by_gender, parse_query,
    supervision_gender_matrix, supervisor_gender_rate, QueryError, TallyRole, WorkFilter,
};
use etd_core::reason::structure_timeline;
use etd_core::{EntityKind, Execution, Iri, Namespaces, Store, TimeInterval, TimePoint};

pub use config::CliConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "etd", version, about = "Temporal knowledge graph for theses and dissertations")]
struct Cli {
    /// Base IRI under which entities are minted.
    #[arg(long, global = true, env = "ETD_BASE_IRI", default_value = config::DEFAULT_BASE)]
    base: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest record files into a new store (all or nothing).
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Authority asserting the statements; defaults to the base.
        #[arg(long)]
        authority: Option<String>,
        /// Assertion date recorded on every statement; defaults to today.
        #[arg(long, value_parser = parse_point)]
        batch_date: Option<TimePoint>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a triple-pattern query.
    Query {
        #[arg(long)]
        store: PathBuf,
        query: String,
    },
    /// Run one of the canned analytics.
    Report {
        #[arg(value_enum)]
        report: ReportKind,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, value_parser = parse_point, conflicts_with = "during")]
        at: Option<TimePoint>,
        #[arg(long, value_parser = parse_interval)]
        during: Option<TimeInterval>,
        /// Corporate body the report is about.
        #[arg(long)]
        scope: Option<String>,
        #[arg(long, value_enum)]
        kind: Option<WorkKindArg>,
        /// student, professor, advisor, committee or dissertant.
        #[arg(long, default_value = "student")]
        role: String,
        /// Count the scope only, not its subdivisions.
        #[arg(long)]
        direct: bool,
    },
    /// Write the store as quads or as a DOT graph.
    Export {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        focus: Option<String>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Print every statement about an entity as quads.
    Describe {
        #[arg(long)]
        store: PathBuf,
        id: String,
    },
    /// Entity and statement counts.
    Stats {
        #[arg(long)]
        store: PathBuf,
    },
    /// Serve entity descriptions over HTTP.
    Serve {
        #[arg(long)]
        store: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportKind {
    Gender,
    Supervision,
    Matrix,
    Interdisciplinary,
    Mobility,
    Cooperation,
    Structure,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WorkKindArg {
    Master,
    Phd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportFormat {
    Tnq,
    Dot,
}

fn parse_point(text: &str) -> Result<TimePoint, String> {
    text.parse().map_err(|e| format!("{e}"))
}

fn parse_interval(text: &str) -> Result<TimeInterval, String> {
    text.parse().map_err(|e| format!("{e}"))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn load_store(path: &Path) -> Result<Store, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    import_quads(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("standard output: {e}")))
}

/// Accepts `<iri>`, an absolute IRI, `kind/localId`, or a bare local id
/// (of `default` kind, or of whichever kind has an entity with that id).
fn resolve_id(store: &Store, base: &Iri, text: &str, default: Option<EntityKind>) -> Result<Iri, CliError> {
    let bad = |e: String| CliError::Usage(format!("{text}: {e}"));
    let inner = text.strip_prefix('<').and_then(|t| t.strip_suffix('>'));
    if let Some(iri) = inner {
        return Iri::parse(iri).map_err(|e| bad(e.to_string()));
    }
    if text.contains("://") {
        return Iri::parse(text).map_err(|e| bad(e.to_string()));
    }
    if let Some((segment, local)) = text.split_once('/') {
        return match EntityKind::from_segment(segment) {
            Some(kind) => mint_iri(base, kind, local).map_err(|e| bad(e.to_string())),
            None => base.join(text).map_err(|e| bad(e.to_string())),
        };
    }
    if let Some(kind) = default {
        return mint_iri(base, kind, text).map_err(|e| bad(e.to_string()));
    }
    let found: Vec<Iri> = EntityKind::ALL
        .into_iter()
        .filter_map(|kind| {
            let iri = mint_iri(base, kind, text).ok()?;
            (store.kind_of(&iri) == Some(kind)).then_some(iri)
        })
        .collect();
    match found.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(CliError::Data(format!("no entity with id {text}"))),
        _ => Err(CliError::Usage(format!("{text} is ambiguous; write it as kind/{text}"))),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let data = |e: &dyn std::fmt::Display| CliError::Data(e.to_string());
    match cli.command {
        Command::Ingest {
            files,
            authority,
            batch_date,
            out: store_path,
        } => {
            let mut cfg = CliConfig::new(&cli.base, authority.as_deref())?;
            cfg.store_path = Some(store_path.clone());
            let mut records = Vec::new();
            for path in &files {
                let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
                let parsed =
                    parse_records(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                records.extend(parsed);
            }
            let mut opts = IngestOptions::new(cfg.base.clone(), cfg.authority.clone());
            if let Some(date) = batch_date {
                opts = opts.with_batch_date(date);
            }
            let (store, report) = match records_to_graph(&records, &opts) {
                Ok(done) => done,
                Err(IngestError::Rejected(report)) => {
                    let _ = write!(err, "{report}");
                    return Err(CliError::Data("batch rejected; nothing written".into()));
                }
                Err(e) => return Err(data(&e)),
            };
            let text = export_quads(&store, &cfg.base).to_string();
            fs::write(&store_path, text).map_err(|e| io_error(&store_path, e))?;
            emit(out, &report.to_string())
        }
        Command::Query { store, query } => {
            let cfg = CliConfig::new(&cli.base, None)?;
            let store = load_store(&store)?;
            let query_error = |e: QueryError| CliError::Data(format!("{}: {e}", e.kind()));
            let ast = parse_query(&query).map_err(query_error)?;
            let table = eval_query(&store, &ast, &cfg.base).map_err(query_error)?;
            let ns = Namespaces::new(cfg.base, store.vocab());
            emit(out, &table.to_tsv(&ns))
        }
        Command::Report {
            report,
            store,
            at,
            during,
            scope,
            kind,
            role,
            direct,
        } => {
            let cfg = CliConfig::new(&cli.base, None)?;
            let store = load_store(&store)?;
            let ns = Namespaces::new(cfg.base.clone(), store.vocab());
            let exec = Execution::default();
            let span = during.unwrap_or_else(TimeInterval::unbounded);
            let filter = match kind {
                Some(WorkKindArg::Master) => WorkFilter::Master,
                Some(WorkKindArg::Phd) => WorkFilter::Phd,
                None => WorkFilter::Any,
            };
            let scope = |what: &str| -> Result<Iri, CliError> {
                let text = scope
                    .as_deref()
                    .ok_or_else(|| CliError::Usage(format!("report {what} needs --scope")))?;
                resolve_id(&store, &cfg.base, text, Some(EntityKind::CorporateBody))
            };
            let text = match report {
                ReportKind::Gender => {
                    let body = scope("gender")?;
                    let t = at.ok_or_else(|| CliError::Usage("report gender needs --at".into()))?;
                    let role = TallyRole::from_keyword(&role)
                        .ok_or_else(|| CliError::Usage(format!("unknown role {role}")))?;
                    let tally = gender_tally(&store, &body, role, t, !direct).map_err(|e| data(&e))?;
                    report::tally(&ns, &tally)
                }
                ReportKind::Supervision => report::rates(&ns, &supervisor_gender_rate(&store, &span, filter, exec)),
                ReportKind::Matrix => report::matrix(&ns, &supervision_gender_matrix(&store, &span, filter, exec)),
                ReportKind::Interdisciplinary => {
                    report::works(&ns, &interdisciplinary_works(&store, &span, exec).map_err(|e| data(&e))?)
                }
                ReportKind::Mobility => {
                    report::mobility(&ns, &mobility_by_gender(&store, &span, exec).map_err(|e| data(&e))?)
                }
                ReportKind::Cooperation => {
                    report::cooperation(&ns, &institution_cooperation(&store, &span, exec).map_err(|e| data(&e))?)
                }
                ReportKind::Structure => {
                    let body = scope("structure")?;
                    report::structure(&ns, &structure_timeline(&store, &body).map_err(|e| data(&e))?)
                }
            };
            emit(out, &text)
        }
        Command::Export {
            store,
            format,
            focus,
            radius,
        } => {
            let cfg = CliConfig::new(&cli.base, None)?;
            let store = load_store(&store)?;
            let text = match format {
                ExportFormat::Tnq => {
                    if focus.is_some() {
                        return Err(CliError::Usage("--focus applies to --format dot only".into()));
                    }
                    export_quads(&store, &cfg.base).to_string()
                }
                ExportFormat::Dot => {
                    let ns = Namespaces::new(cfg.base.clone(), store.vocab());
                    let focus = focus
                        .as_deref()
                        .map(|f| resolve_id(&store, &cfg.base, f, None))
                        .transpose()?;
                    export_dot(&store, focus.as_ref(), radius, &ns).map_err(|e| data(&e))?
                }
            };
            emit(out, &text)
        }
        Command::Describe { store, id } => {
            let cfg = CliConfig::new(&cli.base, None)?;
            let store = load_store(&store)?;
            let iri = resolve_id(&store, &cfg.base, &id, None)?;
            let description = describe_entity(&store, &iri).map_err(|e| data(&e))?;
            emit(out, &description.to_quads(&store, &cfg.base).to_string())
        }
        Command::Stats { store } => {
            let store = load_store(&store)?;
            let mut text = String::new();
            for (name, kind) in [
                ("persons", EntityKind::Person),
                ("bodies", EntityKind::CorporateBody),
                ("works", EntityKind::Work),
                ("genders", EntityKind::Gender),
                ("places", EntityKind::Place),
                ("external", EntityKind::ExternalResource),
            ] {
                text.push_str(&format!("{name}\t{}\n", store.entities_of_kind(kind).len()));
            }
            text.push_str(&format!("triples\t{}\n", store.len()));
            emit(out, &text)
        }
        Command::Serve { store, port, host } => {
            let mut cfg = CliConfig::new(&cli.base, None)?;
            cfg.store_path = Some(store.clone());
            cfg.port = Some(port);
            let store = Arc::new(load_store(&store)?);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
            runtime.block_on(async {
                let listener = server::bind(host, port).await.map_err(|e| CliError::Io(e.to_string()))?;
                let _ = writeln!(err, "serving on http://{}", listener.local_addr().map_err(|e| CliError::Io(e.to_string()))?);
                server::serve(listener, store, cfg.base)
                    .await
                    .map_err(|e| CliError::Io(e.to_string()))
            })
        }
    }
}

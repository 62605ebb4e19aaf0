use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphic_gorenstein::base::{weight_function, Status};
use graphic_gorenstein::construct::{self, ConstructionCert};
use graphic_gorenstein::graph::{parse_graph, DEFAULT_ENUMERATION_GUARD};
use graphic_gorenstein::oracle::{PolytopeKind, DEFAULT_NODE_GUARD};
use graphic_gorenstein::report::{self, OracleOptions, VerdictReport};
use graphic_gorenstein::sweep::{run_sweep, SweepConfig, SweepKind};
use graphic_gorenstein::{EdgeId, Error, Multigraph};

/// Exit codes.
const EXIT_PARSE: u8 = 1;
const EXIT_GUARD: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(name = "gorenstein", version, about = "Gorenstein classification of graphic matroid polytopes")]
struct Cli {
    /// Also write a DOT drawing of the input (edges coloured by weight).
    #[arg(long, global = true, value_name = "FILE")]
    dot: Option<PathBuf>,
    /// Node budget for lattice point enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_GUARD)]
    guard_nodes: u64,
    /// Target δ (check: test the equalities at this δ; generate: the
    /// construction's δ).
    #[arg(long, global = true)]
    delta: Option<u32>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Base,
    Indep,
}

impl From<Kind> for PolytopeKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Base => PolytopeKind::Base,
            Kind::Indep => PolytopeKind::Independence,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Base,
    Indep,
    IndepEquivalence,
    SpadeHeart,
    Facets,
}

#[derive(Subcommand)]
enum Cmd {
    /// Combinatorial verdict as JSON.
    Check { kind: Kind, file: PathBuf },
    /// Verdict from the lattice polytope itself.
    Oracle {
        kind: Kind,
        file: PathBuf,
        /// Also search δ = 1..=N directly over lattice points.
        #[arg(long)]
        max_delta: Option<u32>,
        /// Compute the h*-vector.
        #[arg(long)]
        hstar: bool,
        /// Probe normality up to this dilation.
        #[arg(long, num_args = 0..=1, default_missing_value = "3")]
        normality: Option<u32>,
    },
    /// Construction certificate for a positive instance.
    Certify { kind: Kind, file: PathBuf },
    /// Build a graph by one construction step.
    Generate {
        #[command(subcommand)]
        op: GenOp,
        /// Output edge-list file; without it the graph goes to stdout.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Replay a certificate (or every certificate in a report).
    Replay {
        file: PathBuf,
        /// Write the first replayed graph here as an edge list.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive cross-check over all small 2-connected graphs.
    Sweep {
        /// Largest vertex count (7, or 6 with --cross-validate)
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, value_enum, default_value = "base")]
        kind: SweepArg,
        /// Compare with the lattice oracle.
        #[arg(long)]
        cross_validate: bool,
        /// Worker threads; results do not depend on it
        #[arg(long)]
        jobs: Option<usize>,
        /// Skip instances with more edges (after blow-up).
        #[arg(long)]
        max_edges: Option<usize>,
        /// Largest blow-up multiplicity for the indep sweep.
        #[arg(long, default_value_t = 3)]
        max_multiplicity: usize,
    },
}

#[derive(Subcommand)]
enum GenOp {
    /// A seed graph.
    Seed(SeedArgs),
    /// Glue δ-1 graphs along one edge each.
    Glue {
        files: Vec<PathBuf>,
        /// Edge index per input; defaults to the first edge of weight δ-1.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<usize>,
    },
    /// (δ-1)-subdivide an edge.
    Subdivide {
        file: PathBuf,
        /// Edge index; defaults to the first edge of weight 1.
        #[arg(long)]
        edge: Option<usize>,
    },
    /// Collide two graphs along an edge each.
    Collide {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,0")]
        edges: Vec<usize>,
    },
    /// Attach a new (δ+1)-cycle to an edge.
    Attach {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        edge: usize,
    },
    /// Replace every edge by m parallel edges.
    Blowup {
        file: PathBuf,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SeedArgs {
    #[arg(long, value_name = "N")]
    cycle: Option<usize>,
    #[arg(long)]
    k4: bool,
    #[arg(long)]
    k2: bool,
}

enum Failure {
    Lib(Error),
    Io(String),
    Negative(VerdictReport),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = Result<T, Failure>;

/// Prints to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Outcome<Multigraph> {
    Ok(parse_graph(&read(path)?)?)
}

fn source(path: &Path) -> Option<String> {
    Some(path.display().to_string())
}

fn edge_at(g: &Multigraph, i: usize) -> Outcome<EdgeId> {
    g.edges()
        .get(i)
        .map(|e| e.id)
        .ok_or_else(|| Failure::Lib(Error::Precondition(format!("edge index {i} out of range ({} edges)", g.edge_count()))))
}

/// First edge whose forced weight at `δ` is `target`, if the graph has a
/// weighting at all.
fn edge_with_weight(g: &Multigraph, delta: u32, target: u32) -> Option<EdgeId> {
    let w = weight_function(g, delta).ok()?.ok()?;
    g.edges().iter().map(|e| e.id).find(|&e| w.weight(e) == target)
}

fn need_delta(cli_delta: Option<u32>) -> Outcome<u32> {
    cli_delta.ok_or_else(|| Failure::Lib(Error::Precondition("this operation needs --delta".into())))
}

fn emit(report: &VerdictReport, g: Option<&Multigraph>, dot: &Option<PathBuf>) -> Outcome<()> {
    out(&format!("{}\n", report.to_json()));
    if let (Some(path), Some(g)) = (dot, g) {
        write(path, &report.to_dot(g))?;
    }
    Ok(())
}

fn generate(op: &GenOp, output: &Option<PathBuf>, cli: &Cli) -> Outcome<()> {
    let (g, kind) = match op {
        GenOp::Seed(s) => {
            let g = match (s.cycle, s.k4, s.k2) {
                (Some(n), _, _) if n >= 3 => Multigraph::cycle(n),
                (Some(n), _, _) => return Err(Error::Precondition(format!("cycle length must be >= 3, got {n}")).into()),
                (_, true, _) => Multigraph::complete(4),
                _ => Multigraph::complete(2),
            };
            (g, PolytopeKind::Base)
        }
        GenOp::Glue { files, edges } => {
            let delta = need_delta(cli.delta)?;
            let mut parts = Vec::new();
            for (i, f) in files.iter().enumerate() {
                let g = load(f)?;
                let e = match edges.get(i) {
                    Some(&k) => edge_at(&g, k)?,
                    None => match edge_with_weight(&g, delta, delta.saturating_sub(1)) {
                        Some(e) => e,
                        None => edge_at(&g, 0)?,
                    },
                };
                parts.push((g, e));
            }
            (construct::glue(&parts, delta)?, PolytopeKind::Base)
        }
        GenOp::Subdivide { file, edge } => {
            let delta = need_delta(cli.delta)?;
            let g = load(file)?;
            let e = match edge {
                Some(k) => edge_at(&g, *k)?,
                None => match edge_with_weight(&g, delta, 1) {
                    Some(e) => e,
                    None => edge_at(&g, 0)?,
                },
            };
            (construct::subdivide(&g, e, delta)?, PolytopeKind::Base)
        }
        GenOp::Collide { left, right, edges } => {
            let (a, b) = (load(left)?, load(right)?);
            let (i, j) = (edges.first().copied().unwrap_or(0), edges.get(1).copied().unwrap_or(0));
            (construct::collide(&a, edge_at(&a, i)?, &b, edge_at(&b, j)?)?, PolytopeKind::Base)
        }
        GenOp::Attach { file, edge } => {
            let delta = need_delta(cli.delta)?;
            let g = load(file)?;
            (construct::attach_cycle(&g, edge_at(&g, *edge)?, delta)?, PolytopeKind::Independence)
        }
        GenOp::Blowup { file, m } => (construct::blow_up(&load(file)?, *m)?, PolytopeKind::Independence),
    };
    let mut r = report::check(&g, kind, None, None)?;
    r.command = report::Command::Generate;
    match output {
        Some(path) => {
            write(path, &g.to_edge_list())?;
            r.input.source = source(path);
            emit(&r, Some(&g), &cli.dot)?;
        }
        None => {
            out(&g.to_edge_list());
            eprintln!("{}", report::status_line(&r));
            if let Some(path) = &cli.dot {
                write(path, &r.to_dot(&g))?;
            }
        }
    }
    Ok(())
}

fn replay_file(file: &Path, output: &Option<PathBuf>, cli: &Cli) -> Outcome<()> {
    let text = read(file)?;
    let certs = match ConstructionCert::from_json(&text) {
        Ok(c) => vec![c],
        Err(cert_err) => match VerdictReport::from_json(&text) {
            Ok(r) => report::certificates_of(&r),
            Err(_) => return Err(cert_err.into()),
        },
    };
    let (r, graphs) = report::replay_certificates(&certs)?;
    if let Some(path) = output {
        write(path, &graphs[0].to_edge_list())?;
    }
    emit(&r, graphs.first(), &cli.dot)?;
    if r.status == Status::NotGorenstein {
        return Err(Failure::Mismatch("a replayed graph does not reproduce its certificate's δ".into()));
    }
    Ok(())
}

fn sweep(args: (&usize, &SweepArg, &bool, &Option<usize>, &Option<usize>, &usize)) -> Outcome<()> {
    let (&max_vertices, kind, &cross_validate, jobs, max_edges, &max_multiplicity) = args;
    let limit = if cross_validate { 6 } else { 7 };
    if max_vertices > limit {
        return Err(Error::GuardExceeded { what: "sweep vertex count", limit: limit as u64 }.into());
    }
    let kind = match kind {
        SweepArg::Base => SweepKind::Base,
        SweepArg::Indep => SweepKind::Indep,
        SweepArg::IndepEquivalence => SweepKind::IndepEquivalence,
        SweepArg::SpadeHeart => SweepKind::SpadeHeart,
        SweepArg::Facets => SweepKind::Facets,
    };
    let mut cfg = SweepConfig::new(kind, max_vertices);
    cfg.cross_validate = cross_validate;
    cfg.jobs = *jobs;
    cfg.max_edges = *max_edges;
    cfg.max_multiplicity = max_multiplicity;
    let summary = run_sweep(&cfg)?;
    let summary_json = serde_json::json!({ "config": cfg, "summary": summary });
    out(&format!("{}\n", serde_json::to_string_pretty(&summary_json).expect("summary serializes")));
    if !summary.mismatches.is_empty() {
        return Err(Failure::Mismatch(format!("{} mismatches", summary.mismatches.len())));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome<()> {
    match &cli.command {
        Cmd::Check { kind, file } => {
            let g = load(file)?;
            let r = report::check(&g, (*kind).into(), cli.delta, source(file))?;
            emit(&r, Some(&g), &cli.dot)
        }
        Cmd::Oracle { kind, file, max_delta, hstar, normality } => {
            let g = load(file)?;
            let opts = OracleOptions {
                max_delta: *max_delta,
                hstar: *hstar,
                normality: *normality,
                node_guard: cli.guard_nodes,
                enumeration_guard: DEFAULT_ENUMERATION_GUARD,
            };
            let r = report::oracle(&g, (*kind).into(), &opts, source(file))?;
            emit(&r, Some(&g), &cli.dot)
        }
        Cmd::Certify { kind, file } => {
            let g = load(file)?;
            let r = report::certify(&g, (*kind).into(), source(file))?;
            if r.status == Status::NotGorenstein {
                return Err(Failure::Negative(r));
            }
            emit(&r, Some(&g), &cli.dot)
        }
        Cmd::Generate { op, output } => generate(op, output, cli),
        Cmd::Replay { file, output } => replay_file(file, output, cli),
        Cmd::Sweep { max_vertices, kind, cross_validate, jobs, max_edges, max_multiplicity } => {
            sweep((max_vertices, kind, cross_validate, jobs, max_edges, max_multiplicity))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(r)) => {
            out(&format!("{}\n", r.to_json()));
            eprintln!("error: input is not Gorenstein; no certificate");
            ExitCode::from(EXIT_NEGATIVE)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::UnknownVertex(_) => EXIT_PARSE,
                Error::GuardExceeded { .. } | Error::Overflow(_) => EXIT_GUARD,
                _ => EXIT_PRECONDITION,
            })
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use minor_probe::exact::{
    check_expansion, exact_distance_to_cycle_free, exact_distance_to_minor_free, exact_find_cycle, exact_has_minor,
    exact_spots, ExactError,
};
use minor_probe::experiment::{
    run_experiment, run_sweep, write_sweep_csv, write_trials_csv, ExperimentConfig, ExperimentError, SweepAxis,
};
use minor_probe::generators::{generate, Family, GenError, InstanceSpec};
use minor_probe::{verify_certificate, Certificate, Graph, GraphError, Pattern, QueryError, QueryOracle, RootedTree, Vertex};

#[derive(Parser)]
#[command(name = "minor-probe", version, about = "Property testers for graph minors in the incidence-list model")]
struct Cli {
    /// JSON config: an instance spec for `gen`, an experiment config for `test` and `sweep`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed of the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Query budget per tester run or oracle session.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output file (`gen`) or directory (`test`, `sweep`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance and its ground-truth sidecar.
    Gen(GenArgs),
    /// Run a tester for a number of trials.
    Test(TestArgs),
    /// Run `test` over a grid of `n` or `eps` values.
    Sweep(SweepArgs),
    /// Re-verify a certificate against a graph file.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Query a graph file directly.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Family name, used when no config is given.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Spider legs, comma separated.
    #[arg(long, value_delimiter = ',')]
    legs: Option<Vec<usize>>,
    #[arg(long)]
    block: Option<usize>,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    trials: Option<usize>,
    /// Add a wall-time column to the trial CSV.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Grid values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    N,
    Eps,
}

#[derive(Subcommand)]
enum OracleQuery {
    /// The `i`-th neighbor of `v`, 0 for an empty slot.
    Neighbor { v: Vertex, i: usize },
    Degree { v: Vertex },
    /// Some cycle, or null for a forest.
    FindCycle,
    /// Edge deletions needed to reach a forest.
    CycleDistance,
    /// Pattern as `cycle:K`, `path:K`, `star:K`, `complete:K`, `paw` or `spider:L1,L2,..`.
    HasMinor { pattern: String },
    MinorDistance { pattern: String },
    /// All `k`-spots.
    Spots { k: usize },
    /// First non-expanding connected set within `radius` of `s`.
    Expansion { s: Vertex, radius: usize, eps: f64 },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Experiment(ExperimentError),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Precondition(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Verification(_) => 4,
            _ => 1,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Precondition(m) => CliError::Precondition(m),
            ExperimentError::Gen(g) => g.into(),
            ExperimentError::Unverified { .. } => CliError::Verification(e.to_string()),
            other => CliError::Experiment(other),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<QueryError> for CliError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Gen(args) => cmd_gen(&cli, args),
        Cmd::Test(args) => cmd_test(&cli, args),
        Cmd::Sweep(args) => cmd_sweep(&cli, args),
        Cmd::Verify { graph, cert } => cmd_verify(graph, cert),
        Cmd::Oracle { graph, query } => cmd_oracle(&cli, graph, query),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn print_json(v: &impl serde::Serialize) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Sidecar path `<graph>.meta.json`.
fn sidecar_path(graph: &Path) -> PathBuf {
    let mut s = graph.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> Result<(), CliError> {
    let mut spec = match (&cli.config, &a.family) {
        (Some(path), _) => read_json::<InstanceSpec>(path)?,
        (None, Some(name)) => {
            let family = Family::from_name(name).ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                CliError::Usage(format!("unknown family `{name}`; expected one of {}", names.join(", ")))
            })?;
            let n = a.n.ok_or_else(|| CliError::Usage("--n is required with --family".into()))?;
            InstanceSpec::new(family, n)
        }
        (None, None) => return Err(CliError::Usage("gen needs --config or --family".into())),
    };
    if let Some(n) = a.n {
        spec.n = n;
    }
    if let Some(d) = a.d {
        spec.d = d;
    }
    if let Some(k) = a.k {
        spec.k = k;
    }
    if let Some(eps) = a.eps {
        spec.eps = eps;
    }
    if let Some(legs) = &a.legs {
        spec.legs = legs.clone();
    }
    if let Some(block) = a.block {
        spec.block = block;
    }
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    let inst = generate(&spec)?;
    let meta = serde_json::to_string_pretty(&inst.truth)?;
    match &cli.out {
        Some(path) => {
            inst.graph.save(path)?;
            fs::write(sidecar_path(path), meta + "\n")?;
        }
        None => print!("{}", inst.graph.to_text()),
    }
    Ok(())
}

fn load_experiment(cli: &Cli, trials: Option<usize>) -> Result<ExperimentConfig, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let mut cfg: ExperimentConfig = read_json(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.budget.is_some() {
        cfg.budget = cli.budget;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    Ok(cfg)
}

fn out_dir(cli: &Cli) -> Result<PathBuf, CliError> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn cmd_test(cli: &Cli, a: &TestArgs) -> Result<(), CliError> {
    let cfg = load_experiment(cli, a.trials)?;
    let res = run_experiment(&cfg, a.timings)?;
    let dir = out_dir(cli)?;
    write_trials_csv(fs::File::create(dir.join("trials.csv"))?, &res.records, a.timings)?;
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&res.summary)? + "\n")?;
    if !res.certificates.is_empty() {
        let certs = dir.join("certs");
        fs::create_dir_all(&certs)?;
        for (t, c) in &res.certificates {
            fs::write(certs.join(format!("trial_{t}.json")), c.to_json() + "\n")?;
        }
    }
    print_json(&res.summary)?;
    let s = &res.summary;
    if !s.all_verified {
        return Err(CliError::Verification("a rejection certificate did not verify".into()));
    }
    if s.budget_exhausted > 0 {
        return Err(CliError::Budget(format!("{} of {} trials exhausted the query budget", s.budget_exhausted, s.trials)));
    }
    Ok(())
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<(), CliError> {
    let cfg = load_experiment(cli, a.trials)?;
    let axis = match a.axis {
        AxisArg::N => SweepAxis::N,
        AxisArg::Eps => SweepAxis::Eps,
    };
    let sweep = run_sweep(&cfg, axis, &a.values)?;
    let dir = out_dir(cli)?;
    write_sweep_csv(fs::File::create(dir.join("sweep.csv"))?, &sweep)?;
    fs::write(dir.join("sweep.json"), serde_json::to_string_pretty(&sweep)? + "\n")?;
    print_json(&sweep)
}

fn cmd_verify(graph: &Path, cert: &Path) -> Result<(), CliError> {
    let g = Graph::load(graph)?;
    let text = fs::read_to_string(cert)?;
    let cert = Certificate::from_json(&text).map_err(|e| CliError::Verification(format!("unreadable certificate: {e}")))?;
    match verify_certificate(&g, &cert) {
        Ok(()) => {
            println!("valid {} of size {}", cert.kind(), cert.size());
            Ok(())
        }
        Err(fault) => Err(CliError::Verification(fault.to_string())),
    }
}

/// Parses `cycle:K`, `path:K`, `star:K`, `complete:K`, `paw`, `spider:L1,L2,..`.
fn parse_pattern(s: &str) -> Result<Pattern, CliError> {
    let bad = || CliError::Usage(format!("bad pattern `{s}`"));
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let num = || arg.parse::<usize>().map_err(|_| bad());
    Ok(match name {
        "cycle" => Pattern::cycle(num()?),
        "path" => Pattern::path(num()?),
        "star" => Pattern::star(num()?),
        "complete" => Pattern::complete(num()?),
        "paw" => Pattern::triangle_plus_edge(),
        "spider" => {
            let legs = arg.split(',').map(|x| x.parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
            RootedTree::spider(&legs).to_pattern()
        }
        _ => return Err(bad()),
    })
}

fn cmd_oracle(cli: &Cli, graph: &Path, q: &OracleQuery) -> Result<(), CliError> {
    let g = Graph::load(graph)?;
    let mut oracle = QueryOracle::with_budget(&g, cli.budget);
    let out = match q {
        OracleQuery::Neighbor { v, i } => json!({ "neighbor": oracle.neighbor(*v, *i)?, "queries": oracle.counts() }),
        OracleQuery::Degree { v } => json!({ "degree": oracle.degree(*v)?, "queries": oracle.counts() }),
        OracleQuery::FindCycle => json!({ "cycle": exact_find_cycle(&g).map(|c| c.vertices) }),
        OracleQuery::CycleDistance => json!({ "distance": exact_distance_to_cycle_free(&g) }),
        OracleQuery::HasMinor { pattern } => {
            let w = exact_has_minor(&g, &parse_pattern(pattern)?)?;
            json!({ "present": w.is_some(), "witness": w })
        }
        OracleQuery::MinorDistance { pattern } => {
            json!({ "distance": exact_distance_to_minor_free(&g, &parse_pattern(pattern)?)? })
        }
        OracleQuery::Spots { k } => json!({ "spots": exact_spots(&g, *k)? }),
        OracleQuery::Expansion { s, radius, eps } => {
            if !g.contains_vertex(*s) {
                return Err(CliError::Precondition(format!("vertex {s} is not in the graph")));
            }
            let v = check_expansion(&g, *s, *radius, *eps)?;
            json!({ "expanding": v.is_none(), "violation": v.map(|v| json!({ "set": v.set, "cut": v.cut })) })
        }
    };
    print_json(&out)
}

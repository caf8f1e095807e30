use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qgraph::bounds::{evaluate_bounds, Side};
use qgraph::checker::{check_bound_results, check_ids, run_suite, Status, SuiteConfig, SuiteReport};
use qgraph::graph::{MetricGraph, VertexCondition};
use qgraph::oracle::{
    cycle_spectrum_closed_form, interval_secular_spectrum, interval_spectrum_closed_form, EndpointCondition,
};
use qgraph::spectrum::{solve_spectrum, Mesh, Spectrum};
use qgraph::surgery::{apply_script, parse_script};

#[derive(Parser, Debug)]
#[command(name = "qgraph", version, about = "Spectra, surgery and eigenvalue bounds for quantum graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest eigenvalues of a graph with error estimates.
    Spectrum(SpectrumArgs),
    /// Apply a surgery script to a graph and print the result.
    Surgery(SurgeryArgs),
    /// Evaluate the eigenvalue bounds that apply to a graph.
    Bounds(SpectrumArgs),
    /// Run one check of the suite on random instances.
    Check(CheckArgs),
    /// Run the randomized suite.
    Suite(SuiteArgs),
    /// Exact interval or cycle spectra, optionally against the solver.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Elements per edge on the coarse mesh.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    mesh: u32,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    kmax: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SurgeryArgs {
    #[arg(long)]
    graph: PathBuf,
    /// JSON list of surgery steps.
    #[arg(long)]
    ops: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    kmax: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    mesh: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    instances: Option<u32>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Check id; `--list` prints them all.
    #[arg(required_unless_present = "list")]
    id: Option<String>,
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Suite configuration JSON; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Shape {
    Interval,
    Cycle,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_enum, default_value = "interval")]
    shape: Shape,
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// dirichlet, neumann or robin:ALPHA (∂φ = αφ, inward derivative).
    #[arg(long, default_value = "dirichlet", value_parser = parse_endpoint)]
    left: EndpointCondition,
    #[arg(long, default_value = "dirichlet", value_parser = parse_endpoint)]
    right: EndpointCondition,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    kmax: u32,
    /// Also solve with this many elements per edge and report relative errors.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    mesh: Option<u32>,
    #[command(flatten)]
    output: Output,
}

fn parse_endpoint(s: &str) -> Result<EndpointCondition, String> {
    match s {
        "dirichlet" => Ok(EndpointCondition::Dirichlet),
        "neumann" => Ok(EndpointCondition::Neumann),
        _ => {
            let alpha = s
                .strip_prefix("robin:")
                .ok_or_else(|| format!("expected dirichlet, neumann or robin:ALPHA, got '{s}'"))?;
            let alpha: f64 = alpha.parse().map_err(|e| format!("robin coefficient: {e}"))?;
            if alpha.is_finite() {
                Ok(EndpointCondition::Robin(alpha))
            } else {
                Err("robin coefficient must be finite".into())
            }
        }
    }
}

/// Failure of a command: exit 2 for bad input, 1 for failed checks.
#[derive(Debug)]
enum Failure {
    Input(String),
    Checks,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path, what: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("--{what} {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MetricGraph, Failure> {
    let text = read(path, "graph")?;
    MetricGraph::from_json_str(&text).map_err(|e| Failure::Input(format!("--graph {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, payload: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, payload).map_err(|e| Failure::Input(format!("--out {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())?;
            Ok(())
        }
    }
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_string<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)?)
}

fn json_line<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn spectrum_payload(s: &Spectrum, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(s.to_json_string() + "\n"),
        Format::Csv => {
            let cluster_of = |k: usize| s.clusters.iter().position(|c| c.contains(&k)).unwrap_or(0);
            csv_string(
                &["k", "eigenvalue", "error_estimate", "cluster"],
                (1..=s.len()).map(|k| {
                    vec![
                        k.to_string(),
                        number(s.eigenvalues[k - 1]),
                        number(s.error_estimates[k - 1]),
                        cluster_of(k).to_string(),
                    ]
                }),
            )
        }
    }
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), Failure> {
    let g = load_graph(&a.graph)?;
    let s = solve_spectrum(&g, &Mesh::uniform(a.mesh as usize)?, a.kmax as usize)?;
    emit(a.output.out.as_deref(), &spectrum_payload(&s, a.output.format)?)
}

fn cmd_surgery(a: &SurgeryArgs) -> Result<(), Failure> {
    let g = load_graph(&a.graph)?;
    let text = read(&a.ops, "ops")?;
    let ops = parse_script(&text).map_err(|e| Failure::Input(format!("--ops {}: {e}", a.ops.display())))?;
    let result = apply_script(&g, &ops)?;
    emit(a.out.as_deref(), &(result.to_json_string() + "\n"))
}

#[derive(Serialize)]
struct BoundRow {
    bound_id: String,
    k: usize,
    side: Side,
    value: f64,
    applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<Status>,
}

fn cmd_bounds(a: &SpectrumArgs) -> Result<(), Failure> {
    let g = load_graph(&a.graph)?;
    let k = a.kmax as usize;
    let bounds = evaluate_bounds(&g, k)?;
    let s = solve_spectrum(&g, &Mesh::uniform(a.mesh as usize)?, k)?;
    let mut rows = Vec::with_capacity(bounds.len());
    for b in &bounds {
        let verdict = check_bound_results(std::slice::from_ref(b), &s).pop();
        rows.push(BoundRow {
            bound_id: b.bound_id.clone(),
            k: b.k,
            side: b.side,
            value: b.value,
            applicable: b.applicable,
            reason: b.reason.clone(),
            spectrum_value: verdict.as_ref().and(s.eigenvalue(b.k)),
            margin: verdict.as_ref().map(|v| v.margin),
            verdict: verdict.map(|v| v.status),
        });
    }
    let any_fail = rows.iter().any(|r| r.verdict == Some(Status::Fail));
    let payload = match a.output.format {
        Format::Json => json_line(&rows)?,
        Format::Csv => csv_string(
            &["bound_id", "k", "side", "value", "spectrum_value", "margin", "verdict"],
            rows.iter().map(|r| {
                vec![
                    r.bound_id.clone(),
                    r.k.to_string(),
                    r.side.to_string(),
                    number(r.value),
                    r.spectrum_value.map(number).unwrap_or_default(),
                    r.margin.map(number).unwrap_or_default(),
                    match r.verdict {
                        Some(v) => format!("{v:?}"),
                        None => "NotApplicable".into(),
                    },
                ]
            }),
        )?,
    };
    emit(a.output.out.as_deref(), &payload)?;
    if any_fail {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn apply_run_flags(mut config: SuiteConfig, r: &RunArgs) -> SuiteConfig {
    if let Some(s) = r.seed {
        config.seed = s;
    }
    if let Some(k) = r.kmax {
        config.k_max = k as usize;
    }
    if let Some(m) = r.mesh {
        config.elements_per_edge = m as usize;
    }
    if let Some(n) = r.instances {
        config.instances = n as usize;
    }
    config
}

fn suite_payload(report: &SuiteReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(report.to_json_string() + "\n"),
        Format::Csv => csv_string(&SuiteReport::CSV_HEADER, report.to_csv_rows().into_iter().map(Vec::from)),
    }
}

fn run_and_emit(config: SuiteConfig, output: &Output) -> Result<(), Failure> {
    config.validate()?;
    let report = run_suite(&config)?;
    emit(output.out.as_deref(), &suite_payload(&report, output.format)?)?;
    let t = &report.totals;
    eprintln!(
        "pass {} fail {} inconclusive {} errors {}",
        t.pass, t.fail, t.inconclusive, t.errors
    );
    if report.any_fail() {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}

fn cmd_check(a: &CheckArgs) -> Result<(), Failure> {
    if a.list {
        return emit(a.run.output.out.as_deref(), &(check_ids().join("\n") + "\n"));
    }
    let id = a.id.as_deref().unwrap_or_default();
    if !check_ids().contains(&id) {
        return Err(Failure::Input(format!("unknown check '{id}'; see `check --list`")));
    }
    run_and_emit(apply_run_flags(SuiteConfig::default().only(&[id]), &a.run), &a.run.output)
}

fn cmd_suite(a: &SuiteArgs) -> Result<(), Failure> {
    let base = match &a.config {
        Some(p) => SuiteConfig::from_json_str(&read(p, "config")?)
            .map_err(|e| Failure::Input(format!("--config {}: {e}", p.display())))?,
        None => SuiteConfig::default(),
    };
    run_and_emit(apply_run_flags(base, &a.run), &a.run.output)
}

fn pendant_condition(c: EndpointCondition) -> VertexCondition {
    match c {
        EndpointCondition::Dirichlet => VertexCondition::Dirichlet,
        EndpointCondition::Neumann => VertexCondition::Neumann,
        EndpointCondition::Robin(a) => VertexCondition::Delta(a),
    }
}

#[derive(Serialize)]
struct OracleRow {
    k: usize,
    exact: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relative_error: Option<f64>,
}

fn cmd_oracle(a: &OracleArgs) -> Result<(), Failure> {
    let k = a.kmax as usize;
    let (exact, graph) = match a.shape {
        Shape::Interval => {
            let exact = match interval_spectrum_closed_form(a.length, a.left, a.right, k) {
                Ok(v) => v,
                Err(_) => interval_secular_spectrum(a.length, a.left, a.right, k)?,
            };
            let g = MetricGraph::builder()
                .vertex("a", pendant_condition(a.left))
                .vertex("b", pendant_condition(a.right))
                .edge("e", "a", "b", a.length)
                .build()?;
            (exact, g)
        }
        Shape::Cycle => {
            let g = MetricGraph::builder()
                .vertex("v", VertexCondition::Standard)
                .edge("e", "v", "v", a.length)
                .build()?;
            (cycle_spectrum_closed_form(a.length, k)?, g)
        }
    };
    let solved = match a.mesh {
        Some(n) => Some(solve_spectrum(&graph, &Mesh::uniform(n as usize)?, k)?),
        None => None,
    };
    let rows: Vec<OracleRow> = exact
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let solver = solved.as_ref().and_then(|s| s.eigenvalue(i + 1));
            OracleRow {
                k: i + 1,
                exact: x,
                solver,
                relative_error: solver.map(|y| (y - x).abs() / x.abs().max(f64::MIN_POSITIVE)),
            }
        })
        .collect();
    let payload = match a.output.format {
        Format::Json => json_line(&rows)?,
        Format::Csv => csv_string(
            &["k", "exact", "solver", "relative_error"],
            rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    number(r.exact),
                    r.solver.map(number).unwrap_or_default(),
                    r.relative_error.map(number).unwrap_or_default(),
                ]
            }),
        )?,
    };
    emit(a.output.out.as_deref(), &payload)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Surgery(a) => cmd_surgery(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Check(a) => cmd_check(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

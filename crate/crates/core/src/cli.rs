//! The `sqpo` command line.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::algebra::{represent, ExactState, Observable, RuleAlgebraElement};
use crate::canon::canonical_form;
use crate::graph::Graph;
use crate::rewriting::{admissible_overlaps, compose_rules};
use crate::rule::{library, LinearRule};
use crate::stochastic::{
    moments_from_trajectories, simulate_trajectories, CTMCSpec, EdgeModel, ReferenceError, SimConfig,
    VertexModel,
};
use crate::suites::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "sqpo", version, about = "Sesqui-pushout graph rewriting, rule algebras and stochastic simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the admissible overlaps of P2 into P1 and the composite along each.
    ///
    /// Rules are JSON files `{"output","context","input","o","i"}` or
    /// `lib:NAME` for a shipped rule (v+, v-, e+, e-, E-01, E-10, id_vertex,
    /// id_edge).
    Compose { p2: String, p1: String },
    /// Print the rule algebra product δ(A)⊙δ(B), one `key<TAB>coefficient` line per term.
    Product {
        a: String,
        b: String,
        /// Print the commutator [δ(A), δ(B)] instead.
        #[arg(long)]
        commutator: bool,
    },
    /// Apply the canonical representation of δ(RULE) to the basis state of GRAPH.
    Represent { rule: String, graph: PathBuf },
    /// Sample trajectories of a model file and write moment estimates as CSV.
    ///
    /// Model file: {"rules": [{"name": "v+", "rule": "v+" or inline rule, "rate": 2.0}, ...],
    /// "initial": graph}. The initial graph defaults to the empty graph.
    Simulate {
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        n_traj: usize,
        /// Comma-separated sampling times; defaults to 0 and t_max.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
        /// Comma-separated observables: V (vertices), E (edges), P (ordered vertex pairs).
        #[arg(long, value_delimiter = ',', default_value = "V,E")]
        observables: Vec<String>,
        /// Stop and flag trajectories whose state exceeds this many vertices plus edges.
        #[arg(long, default_value_t = crate::stochastic::DEFAULT_MAX_SIZE)]
        max_size: usize,
        /// Moment CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-trajectory CSV `trajectory,jumps,flag`.
        #[arg(long)]
        flags_out: Option<PathBuf>,
        /// JSON lines with every jump of every trajectory.
        #[arg(long)]
        trajectories_out: Option<PathBuf>,
    },
    /// Run a property suite; exit status 1 on a failure, 3 on an inconclusive check.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        size_bound: usize,
        #[arg(long, default_value_t = 100)]
        n_random: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Evaluate a reference curve of the random graph model as CSV.
    Reference {
        #[arg(long, value_enum)]
        formula: Formula,
        #[arg(long, default_value_t = 1.0)]
        nu_plus: f64,
        #[arg(long, default_value_t = 1.0)]
        nu_minus: f64,
        #[arg(long, default_value_t = 1.0)]
        eps_plus: f64,
        #[arg(long, default_value_t = 1.0)]
        eps_minus: f64,
        #[arg(long, default_value_t = 0.0)]
        n_v: f64,
        #[arg(long, default_value_t = 0.0)]
        n_e: f64,
        /// Comma-separated generating-function arguments (mv only).
        #[arg(long, value_delimiter = ',', default_value = "0")]
        lambda: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        grid: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fpc,
    Assoc,
    Concurrency,
    Jump,
    Unit,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    /// Vertex moment generating function.
    Mv,
    /// Mean edge count over time.
    EdgeMean,
    /// Long-time limit of the mean edge count.
    EdgeLimit,
}

/// Output of a command: text for standard output and an exit status.
pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })
}

/// A rule from `lib:NAME` or a JSON file.
pub fn load_rule(arg: &str) -> Result<LinearRule, CliError> {
    if let Some(name) = arg.strip_prefix("lib:") {
        return library::by_name(name)
            .ok_or_else(|| CliError::Usage(format!("unknown library rule {name}")));
    }
    let text = read(Path::new(arg))?;
    LinearRule::from_json(&text).map_err(|e| CliError::Input { path: arg.to_string(), message: e.to_string() })
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = read(path)?;
    Graph::from_json(&text).map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })
}

pub fn cmd_compose(p2: &LinearRule, p1: &LinearRule) -> String {
    let mut out = String::new();
    let overlaps = admissible_overlaps(p2, p1);
    let mut classes: Vec<(String, usize)> = Vec::new();
    for (n, ov) in overlaps.iter().enumerate() {
        let r = compose_rules(p2, ov, p1);
        let key = r.canonical_form().to_string();
        writeln!(
            out,
            "overlap {n}: apex {} m2 {} m1 {}\n  composite {key}\n  {}",
            canonical_form(ov.apex()),
            ov.m2.to_json(),
            ov.m1.to_json(),
            r.to_json()
        )
        .unwrap();
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, c)) => *c += 1,
            None => classes.push((key, 1)),
        }
    }
    writeln!(out, "{} admissible overlaps, {} composite classes", overlaps.len(), classes.len()).unwrap();
    classes.sort();
    for (k, c) in classes {
        writeln!(out, "{c}\t{k}").unwrap();
    }
    out
}

pub fn cmd_product(a: &LinearRule, b: &LinearRule, commutator: bool) -> String {
    let (a, b) = (RuleAlgebraElement::basis(a), RuleAlgebraElement::basis(b));
    if commutator { a.commutator(&b) } else { a.product(&b) }.dump()
}

pub fn cmd_represent(p: &LinearRule, x: &Graph) -> String {
    let s = represent(&RuleAlgebraElement::basis(p), &ExactState::basis(x));
    let mut out = String::new();
    for (k, c) in s.terms() {
        writeln!(out, "{c}\t{k}\t{}", crate::canon::decode_graph(k).to_json()).unwrap();
    }
    out
}

pub fn parse_observable(name: &str) -> Result<Observable, CliError> {
    match name {
        "V" => Ok(Observable::vertices()),
        "E" => Ok(Observable::edges()),
        "P" => Ok(Observable::new(Graph::discrete(2))),
        other => Err(CliError::Usage(format!("unknown observable {other}; expected V, E or P"))),
    }
}

pub struct SimulateArgs<'a> {
    pub spec: &'a CTMCSpec,
    pub cfg: SimConfig,
    pub observables: Vec<String>,
    pub out: Option<&'a Path>,
    pub flags_out: Option<&'a Path>,
    pub trajectories_out: Option<&'a Path>,
}

pub fn cmd_simulate(args: SimulateArgs<'_>) -> Result<String, CliError> {
    let obs = args.observables.iter().map(|n| parse_observable(n)).collect::<Result<Vec<_>, _>>()?;
    let mut cfg = args.cfg;
    cfg.record_jumps = args.trajectories_out.is_some();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if cfg.n_traj < 2 {
        return Err(CliError::Usage("need at least 2 trajectories".into()));
    }
    let trajectories = simulate_trajectories(args.spec, &cfg, &obs);
    let moments = moments_from_trajectories(&trajectories, &cfg.grid, &args.observables);
    if let Some(path) = args.flags_out {
        let mut text = String::from("trajectory,jumps,flag\n");
        for t in &trajectories {
            let flag = match t.flag {
                None => String::new(),
                Some(f) => serde_json::to_string(&f).expect("flags serialize").replace(',', ";"),
            };
            writeln!(text, "{},{},{}", t.index, t.jump_count, flag).unwrap();
        }
        fs::write(path, text)?;
    }
    if let Some(path) = args.trajectories_out {
        let mut file = std::io::BufWriter::new(fs::File::create(path)?);
        for t in &trajectories {
            for j in &t.jumps {
                let line = serde_json::json!({
                    "trajectory": t.index,
                    "time": j.time,
                    "rule": args.spec.rules()[j.rule].name,
                    "state": j.state,
                });
                writeln!(file, "{line}")?;
            }
        }
        file.flush()?;
    }
    let csv = moments.to_csv();
    match args.out {
        None => Ok(csv),
        Some(path) => {
            fs::write(path, &csv)?;
            let mut summary = format!(
                "{:>10} {:>12} {:>14} {:>14} {:>14} {:>8}\n",
                "t", "observable", "mean", "variance", "stderr", "n"
            );
            for r in &moments.rows {
                writeln!(
                    summary,
                    "{:>10} {:>12} {:>14.6} {:>14.6} {:>14.6} {:>8}",
                    r.t, r.observable, r.mean, r.variance, r.stderr, r.n
                )
                .unwrap();
            }
            writeln!(summary, "flagged trajectories: {}", moments.flagged).unwrap();
            Ok(summary)
        }
    }
}

pub fn cmd_verify(suite: SuiteArg, cfg: SuiteConfig) -> Outcome {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Fpc => vec![Suite::Fpc],
        SuiteArg::Assoc => vec![Suite::Assoc],
        SuiteArg::Concurrency => vec![Suite::Concurrency],
        SuiteArg::Jump => vec![Suite::Jump],
        SuiteArg::Unit => vec![Suite::Unit],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut out = String::new();
    let (mut failed, mut inconclusive) = (false, false);
    for s in suites {
        let report = run_suite(s, cfg);
        let status = if !report.failures.is_empty() {
            "FAIL"
        } else if !report.inconclusive.is_empty() {
            "INCONCLUSIVE"
        } else {
            "PASS"
        };
        writeln!(
            out,
            "{status} {s}: {} checks, {} failures, {} inconclusive",
            report.checked,
            report.failures.len(),
            report.inconclusive.len()
        )
        .unwrap();
        for f in &report.failures {
            writeln!(out, "  failure: {f}").unwrap();
        }
        for f in &report.inconclusive {
            writeln!(out, "  inconclusive: {f}").unwrap();
        }
        failed |= !report.failures.is_empty();
        inconclusive |= !report.inconclusive.is_empty();
    }
    Outcome { stdout: out, status: if failed { 1 } else if inconclusive { 3 } else { 0 } }
}

pub struct ReferenceArgs {
    pub formula: Formula,
    pub nu_plus: f64,
    pub nu_minus: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub n_v: f64,
    pub n_e: f64,
    pub lambda: Vec<f64>,
    pub grid: Vec<f64>,
}

pub fn cmd_reference(a: &ReferenceArgs) -> Result<String, CliError> {
    let mut out = String::new();
    match a.formula {
        Formula::Mv => {
            let v = VertexModel::new(a.nu_plus, a.nu_minus, a.n_v)?;
            out.push_str("t,lambda,mgf\n");
            for &t in &a.grid {
                for &l in &a.lambda {
                    writeln!(out, "{t},{l},{}", v.mgf(t, l)).unwrap();
                }
            }
        }
        Formula::EdgeMean => {
            let m = EdgeModel::new(a.nu_plus, a.nu_minus, a.eps_plus, a.eps_minus, a.n_v, a.n_e)?;
            out.push_str("t,edge_mean\n");
            let mut order: Vec<usize> = (0..a.grid.len()).collect();
            order.sort_by(|&x, &y| a.grid[x].total_cmp(&a.grid[y]));
            let sorted: Vec<f64> = order.iter().map(|&k| a.grid[k]).collect();
            let values = crate::stochastic::reference_edge_mean_curve(&m, &sorted)?;
            let mut rows = vec![0.0; a.grid.len()];
            for (pos, &k) in order.iter().enumerate() {
                rows[k] = values[pos];
            }
            for (t, y) in a.grid.iter().zip(rows) {
                writeln!(out, "{t},{y}").unwrap();
            }
        }
        Formula::EdgeLimit => {
            let limit = crate::stochastic::stationary_edge_mean(a.nu_plus, a.nu_minus, a.eps_plus, a.eps_minus)?;
            writeln!(out, "edge_limit\n{limit}").unwrap();
        }
    }
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("SQPO_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialisation in the same process is harmless to ignore
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Compose { p2, p1 } => Ok(Outcome::ok(cmd_compose(&load_rule(&p2)?, &load_rule(&p1)?))),
        Command::Product { a, b, commutator } => {
            Ok(Outcome::ok(cmd_product(&load_rule(&a)?, &load_rule(&b)?, commutator)))
        }
        Command::Represent { rule, graph } => {
            Ok(Outcome::ok(cmd_represent(&load_rule(&rule)?, &load_graph(&graph)?)))
        }
        Command::Simulate {
            model,
            seed,
            t_max,
            n_traj,
            grid,
            observables,
            max_size,
            out,
            flags_out,
            trajectories_out,
        } => {
            configure_threads();
            let text = read(&model)?;
            let spec = CTMCSpec::from_json(&text)
                .map_err(|e| CliError::Input { path: model.display().to_string(), message: e.to_string() })?;
            let grid = if grid.is_empty() { vec![0.0, t_max] } else { grid };
            let cfg = SimConfig { seed, t_max, n_traj, grid, max_size, record_jumps: false };
            Ok(Outcome::ok(cmd_simulate(SimulateArgs {
                spec: &spec,
                cfg,
                observables,
                out: out.as_deref(),
                flags_out: flags_out.as_deref(),
                trajectories_out: trajectories_out.as_deref(),
            })?))
        }
        Command::Verify { suite, size_bound, n_random, seed } => {
            Ok(cmd_verify(suite, SuiteConfig { size_bound, n_random, seed }))
        }
        Command::Reference { formula, nu_plus, nu_minus, eps_plus, eps_minus, n_v, n_e, lambda, grid } => {
            Ok(Outcome::ok(cmd_reference(&ReferenceArgs {
                formula,
                nu_plus,
                nu_minus,
                eps_plus,
                eps_minus,
                n_v,
                n_e,
                lambda,
                grid,
            })?))
        }
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_reports_multiplicities() {
        let text = cmd_compose(&library::vertex_delete(), &library::create_vertices(2));
        assert!(text.contains("3 admissible overlaps, 2 composite classes"));
        assert!(text.lines().any(|l| l.starts_with("2\t")));
    }

    #[test]
    fn reference_rows() {
        let args = |formula, grid: Vec<f64>| ReferenceArgs {
            formula,
            nu_plus: 1.0,
            nu_minus: 1.0,
            eps_plus: 1.0,
            eps_minus: 1.0,
            n_v: 2.0,
            n_e: 0.0,
            lambda: vec![0.5],
            grid,
        };
        let mv = cmd_reference(&args(Formula::Mv, vec![0.0])).unwrap();
        let value: f64 = mv.strip_prefix("t,lambda,mgf\n0,0.5,").unwrap().trim_end().parse().unwrap();
        assert!((value - 1.0f64.exp()).abs() < 1e-14);
        let limit = cmd_reference(&args(Formula::EdgeLimit, vec![])).unwrap();
        assert_eq!(limit, format!("edge_limit\n{}\n", 1.0 / 3.0));
        let curve = cmd_reference(&args(Formula::EdgeMean, vec![2.0, 0.0, 1.0])).unwrap();
        let rows: Vec<&str> = curve.lines().collect();
        assert_eq!(rows[0], "t,edge_mean");
        assert_eq!(rows[2], "0,0");
    }

    #[test]
    fn observables_by_name() {
        assert!(parse_observable("V").is_ok());
        assert!(parse_observable("Q").is_err());
    }
}

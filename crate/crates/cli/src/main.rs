use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use extcount::classify::{classify, ratio_string};
use extcount::count::{ExtensionCounter, DEFAULT_LIST_CAP};
use extcount::exact::{exact_laws, ExactTarget};
use extcount::experiment::{run_cell, CellSpec, EventKind, ExperimentConfig};
use extcount::graph::{load_rooted_graph, PatternGraph, RootTuple, RootedGraph};
use extcount::host::HostGraph;
use extcount::par::Execution;
use extcount::presets::{preset, run_preset, PRESET_NAMES};
use extcount::random::{sample_gnp, SamplerConfig};
use extcount::stats::{binomial_reference, r_star, theory, threshold_quantities, to_f64};

// stdout writes propagate errors so a closed pipe ends the run quietly.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

macro_rules! out_raw {
    ($($arg:tt)*) => {
        write!(io::stdout().lock(), $($arg)*)?
    };
}

#[derive(Parser)]
#[command(name = "extcount", version, about = "Rooted subgraph extension counts in G(n,p)")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density lattice, primal subgraphs and theorem case of a rooted graph.
    Classify {
        /// Fixture name or graph file.
        graph: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact mu, nu, Phi, variance order and thresholds at (n, p).
    Theory {
        graph: String,
        #[arg(long)]
        n: u64,
        /// Edge probability, as `a/b` or a decimal.
        #[arg(long)]
        p: String,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Count extensions in a host graph.
    Count(CountArgs),
    /// Exact law over all hosts on n <= 8 vertices.
    Exact {
        graph: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(value_enum)]
        target: TargetArg,
        /// `r` for `ex-event`.
        r: Option<u64>,
        /// Root tuple for `dist` and `ex-event` (1-based, comma separated).
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate for one (n, p, eps) cell.
    Simulate {
        graph: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = EventArg::Concentration)]
        event: EventArg,
        #[arg(long)]
        json: bool,
    },
    /// Threshold scan from a preset or a TOML config; writes CSV.
    Scan {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the full result as JSON instead of the text report.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct CountArgs {
    /// Pattern: fixture name or graph file.
    pattern: String,
    /// Host edge-list file.
    #[arg(long, conflicts_with = "gnp", required_unless_present = "gnp")]
    host: Option<PathBuf>,
    /// Sample the host as G(n,p): `--gnp N P SEED`.
    #[arg(long, num_args = 3, value_names = ["N", "P", "SEED"])]
    gnp: Option<Vec<String>>,
    /// Root tuple (1-based, comma separated); default `1,...,v_G`.
    #[arg(long)]
    root: Option<String>,
    /// max / min of X_x over all root tuples.
    #[arg(long)]
    extrema: bool,
    /// List the extensions of the root tuple.
    #[arg(long)]
    list: bool,
    /// Check E_x with this r.
    #[arg(long)]
    disjoint_event: Option<u64>,
    /// Per-vertex copy counts of K (`K3`, `K4`, ... or a graph file/fixture).
    #[arg(long)]
    per_vertex: Option<String>,
    #[arg(long, default_value_t = DEFAULT_LIST_CAP)]
    cap: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Dist,
    Maxdist,
    ExEvent,
}

#[derive(Clone, Copy, ValueEnum)]
enum EventArg {
    Concentration,
    LowerTail,
    UpperTail,
    ExEvent,
}

impl From<EventArg> for EventKind {
    fn from(e: EventArg) -> Self {
        match e {
            EventArg::Concentration => EventKind::Concentration,
            EventArg::LowerTail => EventKind::LowerTail,
            EventArg::UpperTail => EventKind::UpperTail,
            EventArg::ExEvent => EventKind::ExEvent,
        }
    }
}

/// Parses `a/b`, an integer or a decimal into an exact rational.
fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || anyhow!("`{text}` is not a rational number");
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b == BigInt::from(0) {
            bail!("zero denominator in `{text}`");
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits_pow10(frac.len());
    Ok(BigRational::new(num, den))
}

fn num_traits_pow10(k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, _| acc * 10)
}

fn load_graph(spec: &str) -> Result<RootedGraph> {
    load_rooted_graph(spec).map_err(|e| anyhow!("cannot load graph `{spec}`: {e}"))
}

fn root_tuple(text: Option<&str>, rg: &RootedGraph) -> Result<RootTuple> {
    match text {
        Some(t) => RootTuple::parse_labels(t).map_err(|e| anyhow!(e)),
        None => Ok(RootTuple::first(rg.v_g())),
    }
}

fn unrooted(spec: &str) -> Result<PatternGraph> {
    if let Some(k) = spec.strip_prefix('K').and_then(|k| k.parse::<usize>().ok()) {
        return PatternGraph::complete(k).map_err(|e| anyhow!(e));
    }
    Ok(load_graph(spec)?.pattern().clone())
}

fn exec(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn cmd_classify(graph: &str, json: bool) -> Result<()> {
    let rg = load_graph(graph)?;
    let report = classify(&rg)?;
    if json {
        out!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    out!("graph: {} roots, {} vertices, {} edges", rg.v_g(), rg.v_h(), rg.e_h());
    out!("m_value: {}", ratio_string(&report.m_value));
    out!("strictly_balanced: {}", report.strictly_balanced);
    out!("grounded: {}", report.grounded);
    out!("primal_subsets:");
    for node in &report.primal_subsets {
        out!("  {} ({} edges)", node.vertex_subset, node.induced_edge_count);
    }
    out!("j_max: {}", report.j_max.vertex_subset);
    out!("has_grounded_primal: {}", report.has_grounded_primal);
    out!("unique_primal: {}", report.unique_primal);
    out!("theorem_case: {:?}", report.theorem_case);
    out!("applicable_cases: {:?}", report.applicable_cases);
    Ok(())
}

fn cmd_theory(graph: &str, n: u64, p: &str, eps: Option<&str>, json: bool) -> Result<()> {
    let rg = load_graph(graph)?;
    let p = parse_rational(p)?;
    let t = theory(&rg, n, &p)?;
    let q = |r: &BigRational| json!({ "exact": ratio_string(r), "approx": to_f64(r) });
    let mut doc = json!({
        "n": t.n,
        "p": q(&t.p),
        "N": t.big_n.to_string(),
        "aut": t.aut,
        "mu": q(&t.mu),
        "nu": q(&t.nu),
        "phi": q(&t.phi),
        "phi_argmin": t.phi_argmin,
        "phi_degenerate": t.phi_degenerate,
        "sigma_sq_order": t.sigma_sq_order.as_ref().map(q),
        "m_value": ratio_string(&t.m_value),
    });
    if let Some(e) = eps {
        let e = parse_rational(e)?;
        let th = threshold_quantities(&rg, n, &p, &e)?;
        doc["eps"] = q(&e);
        doc["r_star"] = json!(r_star(&t.mu, &e));
        doc["thresholds"] = serde_json::to_value(th)?;
        doc["binomial_reference"] = match binomial_reference(&rg, n, &p, &e) {
            Ok(b) => json!(b),
            Err(err) => json!(err.to_string()),
        };
    }
    if json {
        out!("{}", serde_json::to_string_pretty(&doc)?);
        return Ok(());
    }
    for (k, v) in doc.as_object().expect("object") {
        match v {
            serde_json::Value::Object(o) if o.contains_key("exact") => {
                out!("{k}: {} (~ {})", o["exact"].as_str().unwrap_or(""), o["approx"]);
            }
            other => out!("{k}: {other}"),
        }
    }
    Ok(())
}

fn cmd_count(args: &CountArgs, exec: Execution) -> Result<()> {
    let rg = load_graph(&args.pattern)?;
    let host = match (&args.host, &args.gnp) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            HostGraph::parse(&text)?
        }
        (None, Some(v)) => {
            let n: usize = v[0].parse().context("N")?;
            let p: f64 = v[1].parse().context("P")?;
            let seed: u64 = v[2].parse().context("SEED")?;
            if n < 2 || !(0.0..=1.0).contains(&p) {
                bail!("--gnp needs N >= 2 and P in [0, 1]");
            }
            sample_gnp(SamplerConfig { n, p, seed })
        }
        _ => bail!("need --host or --gnp"),
    };
    let counter = ExtensionCounter::new(&rg);
    let x = root_tuple(args.root.as_deref(), &rg)?;
    let y = counter.ordered(&host, &x)?;
    let mut doc = json!({
        "host_n": host.n(),
        "host_edges": host.edge_count(),
        "root": x.to_string(),
        "aut": counter.aut(),
        "ordered": y,
        "unordered": counter.unordered(&host, &x)?,
    });
    if args.extrema {
        let s = counter.all_roots(&host, exec)?;
        doc["max"] = json!(s.max_count);
        doc["argmax"] = json!(s.argmax.to_string());
        doc["min"] = json!(s.min_count);
        doc["argmin"] = json!(s.argmin.to_string());
    }
    if args.list {
        let exts = counter.list(&host, &x, args.cap)?;
        doc["extensions"] = exts
            .iter()
            .map(|e| {
                json!({
                    "vertices": e.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
                    "edges": e.edges.iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect::<Vec<_>>(),
                })
            })
            .collect();
    }
    if let Some(r) = args.disjoint_event {
        doc["disjoint_event"] = json!({ "r": r, "holds": counter.disjoint_event(&host, &x, r, args.cap)? });
    }
    if let Some(k) = &args.per_vertex {
        let k = unrooted(k)?;
        let z = extcount::count::per_vertex_copy_counts(&host, &k, exec)?;
        doc["per_vertex_max"] = json!(z.iter().max());
        doc["per_vertex"] = json!(z);
    }
    if args.json {
        out!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for (k, v) in doc.as_object().expect("object") {
            out!("{k}: {v}");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_exact(
    graph: &str,
    n: usize,
    p: &str,
    target: TargetArg,
    r: Option<u64>,
    root: Option<&str>,
    json: bool,
    exec: Execution,
) -> Result<()> {
    let rg = load_graph(graph)?;
    let p = parse_rational(p)?;
    let target = match target {
        TargetArg::Dist => ExactTarget::RootCount(root_tuple(root, &rg)?),
        TargetArg::Maxdist => ExactTarget::MaxCount,
        TargetArg::ExEvent => ExactTarget::ExEvent {
            root: root_tuple(root, &rg)?,
            r: r.ok_or_else(|| anyhow!("ex-event needs r"))?,
        },
    };
    let law = exact_laws(&rg, n, &p, &[target], exec)?.remove(0);
    if json {
        out!("{}", serde_json::to_string_pretty(&law)?);
    } else {
        out!("value\tprobability");
        for (k, q) in law.rows() {
            out!("{k}\t{q}");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    graph: &str,
    n: usize,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
    event: EventArg,
    json: bool,
    exec: Execution,
) -> Result<()> {
    let rg = load_graph(graph)?;
    if trials == 0 || !(0.0..=1.0).contains(&p) {
        bail!("need trials >= 1 and p in [0, 1]");
    }
    let spec = CellSpec {
        index: 0,
        n,
        grid_value: eps,
        requested_p: p,
        p,
        eps,
    };
    let cell = run_cell(&rg, &spec, trials, seed, event.into(), None, None, exec)?;
    if json {
        out!("{}", serde_json::to_string_pretty(&cell)?);
    } else {
        out!("{}", extcount::experiment::CSV_HEADER);
        out!("{}", cell.csv_row());
        if let (Some(r), Some(b)) = (cell.r_star, cell.binomial_reference) {
            out!("r* = {r}, binomial reference = {b}");
        }
    }
    Ok(())
}

fn cmd_scan(preset_name: Option<&str>, config: Option<&PathBuf>, out: Option<&PathBuf>, json: bool, exec: Execution) -> Result<bool> {
    let preset = match (preset_name, config) {
        (Some(name), _) => preset(name)
            .ok_or_else(|| anyhow!("unknown preset `{name}`; known: {}", PRESET_NAMES.join(", ")))?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            extcount::presets::Preset {
                name: path.display().to_string(),
                description: "config file".into(),
                kind: extcount::presets::PresetKind::Scan(cfg),
                assertions: vec![],
            }
        }
        (None, None) => bail!("need --preset or --config"),
    };
    let outcome = run_preset(&preset, exec)?;
    match out {
        Some(path) => fs::write(path, &outcome.csv).with_context(|| format!("writing {}", path.display()))?,
        None if !json => out_raw!("{}", outcome.csv),
        None => {}
    }
    if json {
        out!("{}", serde_json::to_string_pretty(&outcome)?);
    } else {
        eprint!("{}", outcome.report);
    }
    Ok(outcome.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let exec = exec(&cli);
    match &cli.command {
        Command::Classify { graph, json } => cmd_classify(graph, *json)?,
        Command::Theory { graph, n, p, eps, json } => cmd_theory(graph, *n, p, eps.as_deref(), *json)?,
        Command::Count(args) => cmd_count(args, exec)?,
        Command::Exact {
            graph,
            n,
            p,
            target,
            r,
            root,
            json,
        } => cmd_exact(graph, *n, p, *target, *r, root.as_deref(), *json, exec)?,
        Command::Simulate {
            graph,
            n,
            p,
            eps,
            trials,
            seed,
            event,
            json,
        } => cmd_simulate(graph, *n, *p, *eps, *trials, *seed, *event, *json, exec)?,
        Command::Scan {
            preset,
            config,
            out,
            json,
        } => return cmd_scan(preset.as_deref(), config.as_ref(), out.as_ref(), *json, exec),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("1").unwrap(), r(1, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}

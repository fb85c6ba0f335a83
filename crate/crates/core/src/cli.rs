//! The `svim` command line.
//!
//! Every subcommand writes its outputs plus a `manifest.json` into `--out`.
//! Exit codes: 0 success, 1 usage error, 2 bad input, 3 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::dynamics::{
    oscillation_amplitude, run_to_horizon, steady_state_with, white_totals, LongTermModel,
    SteadyState, SETTLE_CAP, SETTLE_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::graph::{
    generate, parse_snap, serialize_snap, BuildOptions, ColorDistribution, Family, GeneratorConfig,
    SignedDigraph,
};
use crate::maximize::{
    contribution_average, contribution_instant, contribution_longterm_with, heuristic_seeds,
    oscillation_seeds, select_top, ContributionVector, HeuristicKind, SeedSet,
};
use crate::simulate::{mc_run, SimOptions, VoterSimulator};
use crate::structure::classify_components;

/// Version tag of the CSV layouts written below.
pub const CSV_SCHEMA: &str = "1";

#[derive(Parser, Debug)]
#[command(
    name = "svim",
    version,
    about = "Signed voter model dynamics and influence maximization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic signed digraph.
    Generate(GenerateArgs),
    /// Classify every strongly connected component.
    Classify(ClassifyArgs),
    /// Exact expected dynamics and the steady state.
    Dynamics(DynamicsArgs),
    /// Monte Carlo simulation.
    Simulate(SimulateArgs),
    /// Seed selection.
    Maximize(MaximizeArgs),
    /// SVIM seeds against the degree and random baselines.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Signed edge list (`src dst sign` per line).
    #[arg(
        long,
        conflicts_with = "generate",
        required_unless_present = "generate"
    )]
    graph: Option<PathBuf>,
    /// Generator config file.
    #[arg(long)]
    generate: Option<PathBuf>,
    /// Give nodes without out-edges a positive self-loop.
    #[arg(long)]
    repair_dangling: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Generator config file; overrides the inline flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "config")]
    family: Option<FamilyArg>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[command(flatten)]
    source: Source,
    /// Seed file or comma-separated ids.
    #[arg(long)]
    seeds: Option<String>,
    /// Steps to propagate; runs until settled when omitted.
    #[arg(long)]
    t: Option<usize>,
    /// Add one column per node.
    #[arg(long)]
    per_node: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Record per-node white frequencies in the summary.
    #[arg(long)]
    per_node: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MaximizeArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "longterm")]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long)]
    k: usize,
    /// Use a baseline instead of the objective.
    #[arg(long, value_enum)]
    baseline: Option<BaselineArg>,
    /// Seed for the random baseline.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Also write the full contribution vector.
    #[arg(long)]
    contributions: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "longterm")]
    objective: ObjectiveArg,
    /// Steps in the per-step table (and the short-term horizon).
    #[arg(long, default_value_t = 50)]
    t: usize,
    #[arg(long)]
    k: usize,
    /// Monte Carlo trials per method; 0 skips simulation.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyArg {
    Balanced,
    AntiBalanced,
    StrictlyUnbalanced,
    WeaklyConnected,
    Disconnected,
    DisconnectedWithWcc,
    SlowMixing,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Balanced => Family::Balanced,
            FamilyArg::AntiBalanced => Family::AntiBalanced,
            FamilyArg::StrictlyUnbalanced => Family::StrictlyUnbalanced,
            FamilyArg::WeaklyConnected => Family::WeaklyConnected,
            FamilyArg::Disconnected => Family::Disconnected,
            FamilyArg::DisconnectedWithWcc => Family::DisconnectedWithWcc,
            FamilyArg::SlowMixing => Family::SlowMixing,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ObjectiveArg {
    Instant,
    Average,
    Longterm,
    Oscillation,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum BaselineArg {
    OutDegree,
    PositiveOutDegree,
    DegreeDifference,
    Random,
}

impl BaselineArg {
    fn kind(self, seed: u64) -> HeuristicKind {
        match self {
            BaselineArg::OutDegree => HeuristicKind::OutDegree,
            BaselineArg::PositiveOutDegree => HeuristicKind::PositiveOutDegree,
            BaselineArg::DegreeDifference => HeuristicKind::DegreeDifference,
            BaselineArg::Random => HeuristicKind::Random { seed },
        }
    }
}

/// Written next to every output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Full argument vector; replaying it reproduces the outputs.
    pub argv: Vec<String>,
    pub source: serde_json::Value,
    pub params: serde_json::Value,
    pub rng_seed: Option<u64>,
    pub version: String,
    pub duration_secs: f64,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("svim: {e}");
            if e.is_numeric() {
                3
            } else {
                2
            }
        }
    }
}

fn execute(cli: Cli, argv: &[String]) -> Result<()> {
    let started = Instant::now();
    let (command, out, source, params, rng_seed) = match cli.command {
        Command::Generate(a) => {
            let (src, params) = cmd_generate(&a)?;
            ("generate", a.out, src, params, None)
        }
        Command::Classify(a) => {
            let loaded = load(&a.source)?;
            fs::create_dir_all(&a.out)?;
            let mut text = String::new();
            for report in classify_components(&loaded.graph)? {
                text.push_str(&serde_json::to_string(&report).expect("serializable"));
                text.push('\n');
            }
            fs::write(a.out.join("components.jsonl"), text)?;
            ("classify", a.out, loaded.source, json!({}), None)
        }
        Command::Dynamics(a) => {
            let loaded = load(&a.source)?;
            let params = cmd_dynamics(&a, &loaded)?;
            ("dynamics", a.out, loaded.source, params, None)
        }
        Command::Simulate(a) => {
            let loaded = load(&a.source)?;
            let params = cmd_simulate(&a, &loaded)?;
            ("simulate", a.out, loaded.source, params, Some(a.rng_seed))
        }
        Command::Maximize(a) => {
            let loaded = load(&a.source)?;
            let params = cmd_maximize(&a, &loaded)?;
            ("maximize", a.out, loaded.source, params, Some(a.rng_seed))
        }
        Command::Compare(a) => {
            let loaded = load(&a.source)?;
            let params = cmd_compare(&a, &loaded)?;
            ("compare", a.out, loaded.source, params, Some(a.rng_seed))
        }
    };
    let manifest = RunManifest {
        command: command.to_string(),
        argv: argv.to_vec(),
        source,
        params,
        rng_seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_secs: started.elapsed().as_secs_f64(),
    };
    write_json(&out.join("manifest.json"), &manifest)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

struct Loaded {
    graph: SignedDigraph,
    /// External id of each node.
    labels: Vec<u64>,
    source: serde_json::Value,
}

impl Loaded {
    fn index_of(&self, label: u64) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::NodeOutOfRange {
                node: label as usize,
                n: self.labels.len(),
            })
    }

    fn label_all(&self, nodes: &[usize]) -> Vec<u64> {
        nodes.iter().map(|&i| self.labels[i]).collect()
    }
}

fn load(source: &Source) -> Result<Loaded> {
    let options = BuildOptions {
        repair_dangling: source.repair_dangling,
    };
    if let Some(path) = &source.graph {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let parsed = parse_snap(&text, options)?;
        Ok(Loaded {
            graph: parsed.graph,
            labels: parsed.remap,
            source: json!({ "graph": path, "repair_dangling": source.repair_dangling }),
        })
    } else {
        let path = source.generate.as_ref().expect("clap requires a source");
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let config = GeneratorConfig::from_toml_str(&text)?;
        let graph = generate(&config)?;
        let labels = (0..graph.node_count() as u64).collect();
        Ok(Loaded {
            graph,
            labels,
            source: json!({ "generate": path, "config": config }),
        })
    }
}

/// Seeds from a file of ids or an inline comma-separated list, translated
/// to internal indices.
fn parse_seeds(spec: Option<&str>, loaded: &Loaded) -> Result<Vec<usize>> {
    let Some(spec) = spec else {
        return Ok(Vec::new());
    };
    let text = if Path::new(spec).is_file() {
        fs::read_to_string(spec)?
    } else {
        spec.to_string()
    };
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let label: u64 = token.parse().map_err(|_| Error::MalformedLine {
                line: lineno + 1,
                reason: format!("bad seed id `{token}`"),
            })?;
            out.push(loaded.index_of(label)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn cmd_generate(a: &GenerateArgs) -> Result<(serde_json::Value, serde_json::Value)> {
    let config = match &a.config {
        Some(path) => GeneratorConfig::from_toml_str(&fs::read_to_string(path)?)?,
        None => {
            let family: Family = a
                .family
                .expect("clap requires family without config")
                .into();
            GeneratorConfig {
                sizes: a.sizes.clone(),
                m: a.m,
                ..GeneratorConfig::new(family, a.seed)
            }
        }
    };
    let g = generate(&config)?;
    fs::create_dir_all(&a.out)?;
    fs::write(a.out.join("graph.tsv"), serialize_snap(&g))?;
    fs::write(a.out.join("config.toml"), config.to_toml_string())?;
    let source = json!({ "config": config });
    let params = json!({ "nodes": g.node_count(), "edges": g.edge_count() });
    Ok((source, params))
}

#[derive(Serialize)]
struct SinkSummary {
    component: usize,
    size: usize,
    kind: crate::structure::BalanceKind,
    s_size: Option<usize>,
    s_bar_size: Option<usize>,
}

fn steady_summary(steady: &SteadyState) -> serde_json::Value {
    let sinks: Vec<SinkSummary> = steady
        .sinks
        .iter()
        .map(|s| SinkSummary {
            component: s.component,
            size: s.nodes.len(),
            kind: s.kind,
            s_size: s.partition.as_ref().map(|p| p.size_s()),
            s_bar_size: s.partition.as_ref().map(|p| p.size_s_bar()),
        })
        .collect();
    json!({
        "kind": steady.kind,
        "total_even": steady.even.total(),
        "total_odd": steady.odd.total(),
        "average_total": steady.average_total(),
        "amplitude": oscillation_amplitude(steady).ok(),
        "non_sink_size": steady.non_sink.len(),
        "sinks": sinks,
    })
}

fn cmd_dynamics(a: &DynamicsArgs, loaded: &Loaded) -> Result<serde_json::Value> {
    let g = &loaded.graph;
    let n = g.node_count();
    let seeds = parse_seeds(a.seeds.as_deref(), loaded)?;
    let x0 = ColorDistribution::from_seeds(n, &seeds)?;
    let t = match a.t {
        Some(t) => t,
        None => run_to_horizon(g, &x0, SETTLE_TOLERANCE, SETTLE_CAP)?.steps,
    };

    fs::create_dir_all(&a.out)?;
    let mut csv = format!("# schema {CSV_SCHEMA}\nstep,total_white");
    if a.per_node {
        for l in &loaded.labels {
            let _ = write!(csv, ",x_{l}");
        }
    }
    csv.push('\n');
    let mut p = crate::dynamics::Propagator::new(g, &x0)?;
    loop {
        let _ = write!(csv, "{},{}", p.step_index(), p.total());
        if a.per_node {
            for v in p.current() {
                let _ = write!(csv, ",{v}");
            }
        }
        csv.push('\n');
        if p.step_index() == t {
            break;
        }
        p.advance();
    }
    let final_total = p.total();
    fs::write(a.out.join("dynamics.csv"), csv)?;

    let steady = match LongTermModel::build(g).and_then(|m| steady_state_with(&m, &x0)) {
        Ok(s) => steady_summary(&s),
        Err(e) if !e.is_numeric() => json!({ "error": e.to_string() }),
        Err(e) => return Err(e),
    };
    write_json(&a.out.join("steady_state.json"), &steady)?;
    Ok(json!({
        "seeds": loaded.label_all(&seeds),
        "t": t,
        "final_total_white": final_total,
    }))
}

fn cmd_simulate(a: &SimulateArgs, loaded: &Loaded) -> Result<serde_json::Value> {
    let seeds = parse_seeds(a.seeds.as_deref(), loaded)?;
    let sim = VoterSimulator::new(&loaded.graph);
    let options = SimOptions {
        track_nodes: a.per_node,
        partition: None,
    };
    let stats = mc_run(&sim, &seeds, a.t, a.trials, a.rng_seed, &options)?;
    fs::create_dir_all(&a.out)?;
    let mut csv = format!("# schema {CSV_SCHEMA}\nstep,mean,stderr\n");
    for (k, (m, s)) in stats.mean.iter().zip(&stats.stderr).enumerate() {
        let _ = writeln!(csv, "{k},{m},{s}");
    }
    fs::write(a.out.join("simulate.csv"), csv)?;
    write_json(&a.out.join("simulate_summary.json"), &stats)?;
    Ok(json!({
        "seeds": loaded.label_all(&seeds),
        "t": a.t,
        "trials": a.trials,
    }))
}

fn contributions_for(
    g: &SignedDigraph,
    objective: ObjectiveArg,
    t: usize,
    model: Option<&LongTermModel>,
) -> Result<ContributionVector> {
    Ok(match objective {
        ObjectiveArg::Instant => contribution_instant(g, t),
        ObjectiveArg::Average => contribution_average(g, t),
        ObjectiveArg::Longterm => match model {
            Some(m) => contribution_longterm_with(m),
            None => contribution_longterm_with(&LongTermModel::build(g)?),
        },
        ObjectiveArg::Oscillation => {
            return Err(Error::WrongKind {
                expected: "a contribution objective",
                found: "oscillation".into(),
            })
        }
    })
}

fn seed_record(seeds: &SeedSet, loaded: &Loaded) -> serde_json::Value {
    json!({
        "seeds": loaded.label_all(&seeds.nodes),
        "ranking": loaded.label_all(&seeds.ranking),
        "value": seeds.value,
        "objective": seeds.objective,
    })
}

fn cmd_maximize(a: &MaximizeArgs, loaded: &Loaded) -> Result<serde_json::Value> {
    let g = &loaded.graph;
    fs::create_dir_all(&a.out)?;
    let (record, contributions) = match (a.baseline, a.objective) {
        (Some(b), _) => {
            let seeds = heuristic_seeds(g, a.k, b.kind(a.rng_seed));
            (seed_record(&seeds, loaded), None)
        }
        (None, ObjectiveArg::Oscillation) => {
            let osc = oscillation_seeds(g, a.k)?;
            let mut r = seed_record(&osc.seeds, loaded);
            r["amplitude"] = json!(osc.amplitude);
            r["from_s"] = json!(osc.from_s);
            (r, None)
        }
        (None, objective) => {
            let c = contributions_for(g, objective, a.t, None)?;
            (seed_record(&select_top(&c, a.k), loaded), Some(c))
        }
    };
    write_json(&a.out.join("seeds.json"), &record)?;
    if a.contributions {
        let c = match contributions {
            Some(c) => c,
            None => contributions_for(g, a.objective, a.t, None)?,
        };
        let mut csv = format!("# schema {CSV_SCHEMA}\nnode,contribution\n");
        for (i, v) in c.c.iter().enumerate() {
            let _ = writeln!(csv, "{},{v}", loaded.labels[i]);
        }
        fs::write(a.out.join("contributions.csv"), csv)?;
    }
    Ok(json!({
        "objective": a.objective,
        "t": a.t,
        "k": a.k,
        "baseline": a.baseline.map(|b| format!("{b:?}")),
    }))
}

/// One column group of the comparison table.
struct Method {
    name: &'static str,
    seeds: Vec<usize>,
    /// Initial state whose exact trajectory is reported; the random
    /// baseline uses its expectation over draws, `(k/n)·1`.
    x0: ColorDistribution,
}

#[derive(Serialize)]
struct MethodSummary {
    method: &'static str,
    seeds: usize,
    final_step_total: f64,
    /// Cesàro limit of the expected white count.
    steady_state_total: Option<f64>,
}

fn cmd_compare(a: &CompareArgs, loaded: &Loaded) -> Result<serde_json::Value> {
    let g = &loaded.graph;
    let n = g.node_count();
    let model = LongTermModel::build(g);
    let svim = match a.objective {
        ObjectiveArg::Oscillation => oscillation_seeds(g, a.k)?.seeds,
        objective => {
            let m = match objective {
                ObjectiveArg::Longterm => Some(model.as_ref().map_err(Clone::clone)?),
                _ => None,
            };
            select_top(&contributions_for(g, objective, a.t, m)?, a.k)
        }
    };
    let svim_name = match a.objective {
        ObjectiveArg::Instant | ObjectiveArg::Average => "svim_s",
        ObjectiveArg::Longterm => "svim_l",
        ObjectiveArg::Oscillation => "svim_oscillation",
    };
    let k = a.k.min(n);
    let mut methods = vec![Method {
        name: svim_name,
        x0: ColorDistribution::from_seeds(n, &svim.nodes)?,
        seeds: svim.nodes,
    }];
    for (name, kind) in [
        ("out_degree", HeuristicKind::OutDegree),
        ("positive_out_degree", HeuristicKind::PositiveOutDegree),
        ("degree_difference", HeuristicKind::DegreeDifference),
    ] {
        let seeds = heuristic_seeds(g, k, kind).nodes;
        methods.push(Method {
            name,
            x0: ColorDistribution::from_seeds(n, &seeds)?,
            seeds,
        });
    }
    let random = heuristic_seeds(g, k, HeuristicKind::Random { seed: a.rng_seed }).nodes;
    methods.push(Method {
        name: "random",
        seeds: random,
        x0: ColorDistribution::uniform(n, if n == 0 { 0.0 } else { k as f64 / n as f64 })?,
    });

    let sim = (a.trials > 0).then(|| VoterSimulator::new(g));
    let mut columns = Vec::new();
    let mut summaries = Vec::new();
    for m in &methods {
        let exact = white_totals(g, &m.x0, a.t)?;
        let mc = match &sim {
            Some(sim) => Some(mc_run(
                sim,
                &m.seeds,
                a.t,
                a.trials,
                a.rng_seed,
                &SimOptions::default(),
            )?),
            None => None,
        };
        let steady = match &model {
            Ok(model) => Some(steady_state_with(model, &m.x0)?.average_total()),
            Err(_) => None,
        };
        summaries.push(MethodSummary {
            method: m.name,
            seeds: m.seeds.len(),
            final_step_total: exact[a.t],
            steady_state_total: steady,
        });
        columns.push((m.name, exact, mc));
    }

    fs::create_dir_all(&a.out)?;
    let mut csv = format!("# schema {CSV_SCHEMA}\nstep");
    for (name, _, mc) in &columns {
        let _ = write!(csv, ",{name}_exact");
        if mc.is_some() {
            let _ = write!(csv, ",{name}_mc,{name}_mc_stderr");
        }
    }
    csv.push('\n');
    for step in 0..=a.t {
        let _ = write!(csv, "{step}");
        for (_, exact, mc) in &columns {
            let _ = write!(csv, ",{}", exact[step]);
            if let Some(mc) = mc {
                let _ = write!(csv, ",{},{}", mc.mean[step], mc.stderr[step]);
            }
        }
        csv.push('\n');
    }
    fs::write(a.out.join("compare.csv"), csv)?;
    write_json(
        &a.out.join("compare_summary.json"),
        &json!({
            "nodes": n,
            "k": a.k,
            "objective": a.objective,
            "long_term_error": model.as_ref().err().map(ToString::to_string),
            "methods": summaries,
        }),
    )?;
    Ok(json!({
        "objective": a.objective,
        "t": a.t,
        "k": a.k,
        "trials": a.trials,
    }))
}

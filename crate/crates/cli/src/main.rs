//! `revdiam`: solve, generate, measure, and verify arc-reversal diameter
//! instances from the command line.
//!
//! Exit codes: 0 feasible (or plain success), 1 infeasible, 2 error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use revdiam_core::cactus::{cactus_decompose, CactusDecomposition};
use revdiam_core::cactus_solver::solve_cactus;
use revdiam_core::digraph::{Digraph, ExtendedDistance};
use revdiam_core::io;
use revdiam_core::polytope::{
    build_counterexample_pair, cactus_volume, directed_edge_polytope, normalized_volume,
    orientation_sweep, RationalVolume, VolumeCaps,
};
use revdiam_core::reductions::{
    dominating_set_to_kreversals, partition_to_weighted_kreversals, DominatingSetInstance,
    PartitionInstance, SimpleGraph,
};
use revdiam_core::solver::{
    oracle_min_reversals_capped, solve_k_reversals_with, CostMode, SolveBudget, SolveOutcome,
    SolverOptions, DEFAULT_ORACLE_CAP,
};

#[derive(Parser)]
#[command(name = "revdiam", version, about = "Exact diameter reduction via arc reversal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[default]
    Cardinality,
    Weight,
}

impl From<ModeArg> for CostMode {
    fn from(m: ModeArg) -> CostMode {
        match m {
            ModeArg::Cardinality => CostMode::Cardinality,
            ModeArg::Weight => CostMode::Weight,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    #[default]
    Auto,
    Brute,
    Cactus,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Decide feasibility and print a witness report.
    Solve {
        instance: PathBuf,
        #[arg(short = 'd', long)]
        diameter: u64,
        #[arg(short = 'k', long)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        algo: AlgoArg,
        /// Worker threads for the brute-force search (0 = library default).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Emit instance, mapping sidecar, and DOT files.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Exact polytope volume of an instance, or a per-orientation sweep.
    Volume {
        instance: PathBuf,
        /// One CSV row per orientation of the instance's arcs.
        #[arg(long)]
        sweep: bool,
        /// Write the sweep CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute a witness's diameter and cost without trusting any solver.
    Verify {
        instance: PathBuf,
        witness: PathBuf,
        #[arg(short = 'd', long)]
        diameter: u64,
        #[arg(short = 'k', long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Dominating-set reduction: gadget digraph with d = 3, k = ell.
    Ds {
        /// Number of source-graph vertices.
        #[arg(long)]
        vertices: usize,
        /// Source edges as `u-v` pairs, e.g. `0-1,0-2,1-2`.
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        ell: u64,
        /// Output prefix; writes PREFIX.json, PREFIX.map.json, PREFIX.dot.
        #[arg(long)]
        out: PathBuf,
    },
    /// Subset-sum reduction: weighted parallel-pair chain with d = k = b + n.
    Partition {
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Equal-volume pair with diameters i and j < i.
    Counterexample {
        #[arg(long)]
        index: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct InstanceDigest {
    n: usize,
    arc_count: usize,
    total_weight: u64,
}

impl InstanceDigest {
    fn of(g: &Digraph) -> Self {
        InstanceDigest {
            n: g.vertex_count(),
            arc_count: g.arc_count(),
            total_weight: g.total_weight(),
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<InstanceDigest>,
    parameters: serde_json::Value,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    achieved_diameter: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    files: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    volume: Option<VolumeJson>,
    wall_time_ms: f64,
}

#[derive(Serialize)]
struct VolumeJson {
    num: String,
    den: String,
}

impl VolumeJson {
    fn of(v: &RationalVolume) -> Self {
        VolumeJson { num: v.numer().to_string(), den: v.denom().to_string() }
    }
}

fn distance_json(d: ExtendedDistance) -> serde_json::Value {
    match d {
        ExtendedDistance::Finite(v) => serde_json::json!(v),
        ExtendedDistance::Infinite => serde_json::json!("inf"),
    }
}

fn emit(report: &RunReport) {
    println!("{}", serde_json::to_string(report).expect("report serialization cannot fail"));
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(cli.command, started) {
        Ok(code) => code,
        Err(err) => {
            emit(&RunReport {
                command: "error",
                instance: None,
                parameters: serde_json::json!({}),
                outcome: "error",
                error: Some(format!("{err:#}")),
                witness: None,
                achieved_diameter: None,
                cost: None,
                files: None,
                volume: None,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            });
            2
        }
    };
    std::process::exit(code);
}

fn load_instance(path: &Path) -> Result<Digraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read instance {}", path.display()))?;
    io::digraph_from_json(&text).with_context(|| format!("malformed instance {}", path.display()))
}

fn oracle_cap() -> usize {
    std::env::var("REVDIAM_ORACLE_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

fn run(command: Command, started: Instant) -> Result<i32> {
    match command {
        Command::Solve { instance, diameter, budget, mode, algo, threads } => {
            let graph = load_instance(&instance)?;
            let cost_mode = CostMode::from(mode);
            let outcome = dispatch_solve(&graph, diameter, budget, cost_mode, algo, threads)?;
            let feasible = outcome.is_feasible();
            let report = RunReport {
                command: "solve",
                instance: Some(InstanceDigest::of(&graph)),
                parameters: serde_json::json!({
                    "d": diameter,
                    "k": budget,
                    "mode": format!("{mode:?}").to_lowercase(),
                    "algo": format!("{algo:?}").to_lowercase(),
                }),
                outcome: if feasible { "feasible" } else { "infeasible" },
                error: None,
                witness: outcome.solution().map(|s| s.witness.ids().to_vec()),
                achieved_diameter: outcome.solution().map(|s| distance_json(s.achieved_diameter)),
                cost: outcome.solution().map(|s| s.cost),
                files: None,
                volume: None,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            emit(&report);
            Ok(if feasible { 0 } else { 1 })
        }
        Command::Generate { kind } => {
            let files = generate(kind)?;
            emit(&RunReport {
                command: "generate",
                instance: None,
                parameters: serde_json::json!({}),
                outcome: "feasible",
                error: None,
                witness: None,
                achieved_diameter: None,
                cost: None,
                files: Some(files),
                volume: None,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            });
            Ok(0)
        }
        Command::Volume { instance, sweep, out } => {
            let graph = load_instance(&instance)?;
            if sweep {
                let rows = orientation_sweep(&graph, VolumeCaps::default())?;
                let mut csv = String::from("mask,diameter,volume_num,volume_den\n");
                for row in &rows {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        row.mask,
                        row.diameter,
                        row.volume.numer(),
                        row.volume.denom()
                    ));
                }
                match out {
                    Some(path) => std::fs::write(&path, csv)
                        .with_context(|| format!("cannot write {}", path.display()))?,
                    None => print!("{csv}"),
                }
                return Ok(0);
            }
            let polytope = directed_edge_polytope(&graph)?;
            let volume = match cactus_decompose(&graph) {
                Ok(CactusDecomposition::Tree(tree)) => {
                    cactus_volume(&graph, &tree).or_else(|_| normalized_volume(&polytope))?
                }
                _ => normalized_volume(&polytope)?,
            };
            emit(&RunReport {
                command: "volume",
                instance: Some(InstanceDigest::of(&graph)),
                parameters: serde_json::json!({ "sweep": false }),
                outcome: "feasible",
                error: None,
                witness: None,
                achieved_diameter: None,
                cost: None,
                files: None,
                volume: Some(VolumeJson::of(&volume)),
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            });
            Ok(0)
        }
        Command::Verify { instance, witness, diameter, budget, mode } => {
            let graph = load_instance(&instance)?;
            let text = std::fs::read_to_string(&witness)
                .with_context(|| format!("cannot read witness {}", witness.display()))?;
            let set = io::witness_from_json(&text)?;
            set.validate(&graph).map_err(|e| anyhow!(e))?;
            let cost_mode = CostMode::from(mode);
            let cost = cost_mode.set_cost(&graph, set.ids());
            let achieved = graph.reverse_arcs(&set)?.diameter();
            let feasible = achieved <= ExtendedDistance::Finite(diameter)
                && budget.map_or(true, |k| cost <= k);
            emit(&RunReport {
                command: "verify",
                instance: Some(InstanceDigest::of(&graph)),
                parameters: serde_json::json!({
                    "d": diameter,
                    "k": budget,
                    "mode": format!("{mode:?}").to_lowercase(),
                }),
                outcome: if feasible { "feasible" } else { "infeasible" },
                error: None,
                witness: Some(set.ids().to_vec()),
                achieved_diameter: Some(distance_json(achieved)),
                cost: Some(cost),
                files: None,
                volume: None,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            });
            Ok(if feasible { 0 } else { 1 })
        }
    }
}

fn dispatch_solve(
    graph: &Digraph,
    diameter: u64,
    budget: u64,
    mode: CostMode,
    algo: AlgoArg,
    threads: usize,
) -> Result<SolveOutcome> {
    let brute = || -> Result<SolveOutcome> {
        let out = solve_k_reversals_with(
            graph,
            &SolveBudget { target_diameter: diameter, budget, mode },
            &SolverOptions { threads },
        )?;
        Ok(out)
    };
    match algo {
        AlgoArg::Brute => brute(),
        AlgoArg::Cactus => Ok(solve_cactus(graph, diameter, budget, mode)?),
        AlgoArg::Oracle => {
            let out = oracle_min_reversals_capped(graph, diameter, mode, oracle_cap())?;
            Ok(match out {
                SolveOutcome::Feasible(sol) if sol.cost <= budget => SolveOutcome::Feasible(sol),
                _ => SolveOutcome::Infeasible,
            })
        }
        AlgoArg::Auto => match cactus_decompose(graph) {
            Ok(CactusDecomposition::Tree(_)) => Ok(solve_cactus(graph, diameter, budget, mode)?),
            _ => brute(),
        },
    }
}

#[derive(Serialize)]
struct GadgetJson {
    source_vertex: usize,
    upper: [usize; 2],
    down: [usize; 2],
    aux_upper: [usize; 2],
    aux_down: [usize; 2],
    upper_core_arc: usize,
}

fn write_file(path: PathBuf, contents: &str, files: &mut Vec<String>) -> Result<()> {
    std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    files.push(path.display().to_string());
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn generate(kind: GenerateKind) -> Result<Vec<String>> {
    let mut files = Vec::new();
    match kind {
        GenerateKind::Ds { vertices, edges, ell, out } => {
            let edges = parse_edges(&edges)?;
            let graph = SimpleGraph::new(vertices, edges)?;
            let red = dominating_set_to_kreversals(&DominatingSetInstance { graph, ell })?;
            let map = serde_json::json!({
                "kind": "dominating_set",
                "ell": ell,
                "target_diameter": red.target_diameter,
                "budget": red.budget,
                "gadgets": red.map.gadgets.iter().map(|g| GadgetJson {
                    source_vertex: g.source_vertex,
                    upper: g.upper,
                    down: g.down,
                    aux_upper: g.aux_upper,
                    aux_down: g.aux_down,
                    upper_core_arc: g.upper_core_arc,
                }).collect::<Vec<_>>(),
            });
            write_file(with_suffix(&out, ".json"), &io::digraph_to_json(&red.digraph), &mut files)?;
            write_file(
                with_suffix(&out, ".map.json"),
                &format!("{}\n", serde_json::to_string_pretty(&map)?),
                &mut files,
            )?;
            write_file(with_suffix(&out, ".dot"), &io::digraph_to_dot(&red.digraph), &mut files)?;
        }
        GenerateKind::Partition { values, out } => {
            let inst = PartitionInstance::new(values)?;
            let red = partition_to_weighted_kreversals(&inst);
            let map = serde_json::json!({
                "kind": "partition",
                "values": inst.values(),
                "half_sum": inst.half_sum(),
                "target_diameter": red.target_diameter,
                "budget": red.budget,
                "unit_arcs": red.unit_arcs,
                "heavy_arcs": red.heavy_arcs,
            });
            write_file(with_suffix(&out, ".json"), &io::digraph_to_json(&red.digraph), &mut files)?;
            write_file(
                with_suffix(&out, ".map.json"),
                &format!("{}\n", serde_json::to_string_pretty(&map)?),
                &mut files,
            )?;
            write_file(with_suffix(&out, ".dot"), &io::digraph_to_dot(&red.digraph), &mut files)?;
        }
        GenerateKind::Counterexample { index, out } => {
            let (g, h) = build_counterexample_pair(index)?;
            let tree = |d: &Digraph| match cactus_decompose(d) {
                Ok(CactusDecomposition::Tree(t)) => Ok(t),
                other => Err(anyhow!("counter-example graph is not a cactus: {other:?}")),
            };
            let vol_g = cactus_volume(&g, &tree(&g)?)?;
            let vol_h = cactus_volume(&h, &tree(&h)?)?;
            let meta = serde_json::json!({
                "kind": "counterexample",
                "index": index,
                "diameter_g": distance_json(g.diameter()),
                "diameter_h": distance_json(h.diameter()),
                "volume_g": VolumeJson::of(&vol_g),
                "volume_h": VolumeJson::of(&vol_h),
            });
            write_file(with_suffix(&out, ".g.json"), &io::digraph_to_json(&g), &mut files)?;
            write_file(with_suffix(&out, ".h.json"), &io::digraph_to_json(&h), &mut files)?;
            write_file(with_suffix(&out, ".g.dot"), &io::digraph_to_dot(&g), &mut files)?;
            write_file(with_suffix(&out, ".h.dot"), &io::digraph_to_dot(&h), &mut files)?;
            write_file(
                with_suffix(&out, ".meta.json"),
                &format!("{}\n", serde_json::to_string_pretty(&meta)?),
                &mut files,
            )?;
        }
    }
    Ok(files)
}

fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|part| {
            let (u, v) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| anyhow!("edge `{part}` is not of the form u-v"))?;
            Ok((u.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}

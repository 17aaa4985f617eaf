//! `extform` subcommands as library calls, so tests can run them in-process.
//!
//! Exit codes: 0 success, 10 infeasible instance (`solve`), 2 input error,
//! 1 failed verification or internal error.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use csp_extform::csp::json::{from_json, to_json};
use csp_extform::csp::{CspInstance, Value};
use csp_extform::extform::lpformat::write_lp;
use csp_extform::extform::{
    build_base_lp, build_extended_lp_with, DecompositionSummary, FormulationStats, ModelKind,
    DEFAULT_MAX_CONFIGS,
};
use csp_extform::oracles::{brute_force, treewidth_dp, OracleError, OracleResult};
use csp_extform::pipeline::{decompose, solve_instance, InstanceSummary, PipelineOptions};
use csp_extform::random::suite_seed;
use csp_extform::ratlp::{Rational, Status};
use csp_extform::reductions::{chromatic_number, parse_graph, reduce, GraphInput, Problem};
use csp_extform::treedec::text::{parse_td, write_nice, write_td};
use csp_extform::treedec::{heuristic_tree_decomposition, TreeDecomposition};
use csp_extform::verify::{summarize, verify_cases, verify_instance, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 10;

pub const DEFAULT_SEEDS: usize = 200;

#[derive(Parser, Debug)]
#[command(
    name = "extform",
    version,
    about = "Exact extended LP formulations for weighted CSP"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Local relaxation over constraint scopes.
    #[arg(long, conflicts_with = "extended")]
    pub base: bool,
    /// Extended formulation over decomposition bags (default).
    #[arg(long)]
    pub extended: bool,
    /// Tree decomposition file; a min-fill decomposition is used otherwise.
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Abort if the extended model would exceed this many f-variables.
    #[arg(long, default_value_t = DEFAULT_MAX_CONFIGS)]
    pub max_configs: usize,
}

impl ModelArgs {
    fn kind(&self) -> ModelKind {
        if self.base {
            ModelKind::Base
        } else {
            ModelKind::Extended
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance through the LP and print a JSON run report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Print the final simplex tableau to stderr.
        #[arg(long)]
        dump_tableau: bool,
        /// Also write the witness assignment as JSON to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Write the LP in CPLEX LP format.
    EmitLp {
        instance: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check LP, DP and brute force against each other.
    Verify {
        /// Optional instance checked in addition to the random suite.
        instance: Option<PathBuf>,
        /// Number of random instances (seeded from EXTFORM_SEED).
        #[arg(long, default_value_t = DEFAULT_SEEDS)]
        seeds: usize,
        /// Corrupt the bag-sum rows; every check should then fail.
        #[arg(long)]
        fault_inject: bool,
    },
    /// Encode a graph problem as a CSP instance.
    Reduce {
        problem: String,
        graph: PathBuf,
        /// Number of colors (coloring).
        #[arg(long)]
        colors: Option<usize>,
        /// Number of labels (unique games); inferred from permutations if omitted.
        #[arg(long)]
        labels: Option<usize>,
        /// Instance output file; the recovery sidecar goes next to it.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Chromatic number of a graph via a sequence of feasibility LPs.
    Chromatic { graph: PathBuf },
    /// Solve with the reference oracles only.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Print a tree decomposition of the instance's constraint graph.
    Td {
        instance: PathBuf,
        /// Print the nice decomposition instead.
        #[arg(long)]
        nice: bool,
    },
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input(msg: impl Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stderr: format!("error: {msg}\n"),
            ..Outcome::default()
        }
    }

    fn failure(msg: impl Display) -> Self {
        Outcome {
            code: EXIT_FAILURE,
            stderr: format!("error: {msg}\n"),
            ..Outcome::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleAgreement {
    /// `None` if the oracle was not run (brute force above its cap).
    pub dp: Option<bool>,
    pub brute_force: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub instance: InstanceSummary,
    pub model: &'static str,
    pub decomposition: Option<DecompositionSummary>,
    pub stats: Option<FormulationStats>,
    pub status: Status,
    pub optimum: Option<Rational>,
    pub pivots: Option<usize>,
    pub integral: Option<bool>,
    pub oracles: OracleAgreement,
    pub witness: Option<Vec<Value>>,
    pub satisfied: Option<Vec<bool>>,
    /// Reported on stderr only, so stdout stays byte-stable.
    #[serde(skip)]
    pub wall_time: Duration,
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<CspInstance, Outcome> {
    from_json(&read(path)?).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn load_td(path: Option<&PathBuf>) -> Result<Option<TreeDecomposition>, Outcome> {
    path.map(|p| parse_td(&read(p)?).map_err(|e| Outcome::input(format!("{}: {e}", p.display()))))
        .transpose()
}

fn load_graph(path: &Path) -> Result<GraphInput, Outcome> {
    parse_graph(&read(path)?).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), Outcome> {
    fs::write(path, text).map_err(|e| Outcome::failure(format!("{}: {e}", path.display())))
}

fn agreement(lp: Option<&Rational>, oracle: Result<OracleResult, OracleError>) -> Option<bool> {
    oracle.ok().map(|r| r.optimum() == lp)
}

pub fn cmd_solve(
    instance: &Path,
    model: &ModelArgs,
    dump_tableau: bool,
    witness_out: Option<&Path>,
) -> Result<(RunReport, Outcome), Outcome> {
    let inst = load_instance(instance)?;
    let opts = PipelineOptions {
        model: model.kind(),
        td: load_td(model.td.as_ref())?,
        max_configs: model.max_configs,
        dump_tableau,
    };
    let start = Instant::now();
    let out = solve_instance(&inst, &opts).map_err(Outcome::input)?;
    let wall_time = start.elapsed();

    let lp_opt = out.optimum.as_ref();
    // Oracles only judge a valid model's optimum; base-model optima may be
    // fractional and are expected to disagree.
    let oracles = if out.model.is_some() {
        let ntd = match &out.ntd {
            Some(ntd) => ntd.clone(),
            None => decompose(&inst, None).map_err(Outcome::input)?,
        };
        OracleAgreement {
            dp: agreement(lp_opt, treewidth_dp(&inst, &ntd)),
            brute_force: agreement(lp_opt, brute_force(&inst)),
        }
    } else {
        let infeasible = Some(lp_opt.is_none());
        OracleAgreement {
            dp: infeasible,
            brute_force: infeasible,
        }
    };
    let report = RunReport {
        instance: out.summary.clone(),
        model: match opts.model {
            ModelKind::Base => "base",
            ModelKind::Extended => "extended",
        },
        decomposition: out.model.as_ref().and_then(|m| m.decomposition),
        stats: out.stats.clone(),
        status: out.status,
        optimum: out.optimum.clone(),
        pivots: out.solution.as_ref().map(|s| s.pivots),
        integral: out.integral,
        oracles,
        witness: out.witness.as_ref().map(|z| z.0.clone()),
        satisfied: out.extended.as_ref().map(|e| e.h.clone()),
        wall_time,
    };
    let mut outcome = Outcome {
        code: match out.status {
            Status::Optimal => EXIT_OK,
            Status::Infeasible => EXIT_INFEASIBLE,
            Status::Unbounded => EXIT_FAILURE,
        },
        stdout: json(&report),
        stderr: format!("wall time: {:.3} ms\n", wall_time.as_secs_f64() * 1e3),
    };
    if let Some(dump) = out.solution.as_ref().and_then(|s| s.tableau_dump.as_ref()) {
        outcome.stderr.push_str(dump);
    }
    if let Some(path) = witness_out {
        write_file(path, &json(&report.witness))?;
    }
    Ok((report, outcome))
}

pub fn cmd_emit_lp(instance: &Path, model: &ModelArgs) -> Result<String, Outcome> {
    let inst = load_instance(instance)?;
    inst.validate()
        .map_err(|e| Outcome::input(format!("invalid instance: {e:?}")))?;
    let lp = match model.kind() {
        ModelKind::Base => build_base_lp(&inst),
        ModelKind::Extended => {
            let ntd =
                decompose(&inst, load_td(model.td.as_ref())?.as_ref()).map_err(Outcome::input)?;
            build_extended_lp_with(&inst, &ntd, model.max_configs).map_err(Outcome::input)?
        }
    };
    Ok(write_lp(&lp))
}

pub fn cmd_verify(
    instance: Option<&Path>,
    seeds: usize,
    fault_inject: bool,
) -> Result<Outcome, Outcome> {
    let opts = VerifyOptions {
        corrupt_bag_sums: fault_inject,
    };
    let seed = suite_seed();
    let mut cases = Vec::new();
    if let Some(path) = instance {
        let inst = load_instance(path)?;
        cases.push(verify_instance(&path.display().to_string(), &inst, &opts));
    }
    cases.extend(verify_cases(seed, seeds, &opts));
    let report = summarize(Some(seed), cases);
    Ok(Outcome {
        code: if report.ok() { EXIT_OK } else { EXIT_FAILURE },
        stdout: json(&report),
        stderr: String::new(),
    })
}

#[derive(Debug, Serialize)]
struct RecoverySidecar {
    problem: &'static str,
    recovery: csp_extform::reductions::Recovery,
    size: String,
    vertices: usize,
    edges: usize,
}

pub fn cmd_reduce(
    problem: &str,
    graph: &Path,
    colors: Option<usize>,
    labels: Option<usize>,
    out: Option<&Path>,
) -> Result<String, Outcome> {
    let p = Problem::from_name(problem).ok_or_else(|| {
        let known: Vec<&str> = Problem::ALL.iter().map(|p| p.name()).collect();
        Outcome::input(format!(
            "unknown problem {problem:?}; known: {}",
            known.join(", ")
        ))
    })?;
    let g = load_graph(graph)?;
    let param = match p {
        Problem::Coloring => colors,
        Problem::UniqueGames => labels,
        _ => None,
    };
    let red = reduce(p, &g, param).map_err(Outcome::input)?;
    let sidecar = RecoverySidecar {
        problem: p.name(),
        recovery: red.recovery,
        size: red.claimed_size.clone(),
        vertices: g.n,
        edges: g.edges.len(),
    };
    let instance_json = to_json(&red.instance);
    match out {
        Some(path) => {
            write_file(path, &instance_json)?;
            let side = path.with_extension("recovery.json");
            write_file(&side, &json(&sidecar))?;
            Ok(String::new())
        }
        None => {
            let inst: serde_json::Value =
                serde_json::from_str(&instance_json).expect("round-trips");
            Ok(json(
                &serde_json::json!({ "instance": inst, "recovery": sidecar }),
            ))
        }
    }
}

pub fn cmd_oracle(instance: &Path, td: Option<&PathBuf>) -> Result<Outcome, Outcome> {
    #[derive(Serialize)]
    struct Line {
        method: &'static str,
        optimum: Option<Rational>,
        witness: Option<Vec<Value>>,
        feasible_count: Option<u128>,
    }
    let inst = load_instance(instance)?;
    inst.validate()
        .map_err(|e| Outcome::input(format!("invalid instance: {e:?}")))?;
    let ntd = decompose(&inst, load_td(td)?.as_ref()).map_err(Outcome::input)?;
    let line = |method, r: &OracleResult| Line {
        method,
        optimum: r.optimum().cloned(),
        witness: r.witness().map(|z| z.0.clone()),
        feasible_count: r.feasible_count,
    };
    let dp = treewidth_dp(&inst, &ntd).map_err(Outcome::failure)?;
    let mut lines = vec![line("dp", &dp)];
    if let Ok(bf) = brute_force(&inst) {
        lines.push(line("brute-force", &bf));
    }
    Ok(Outcome {
        code: if dp.optimum().is_some() {
            EXIT_OK
        } else {
            EXIT_INFEASIBLE
        },
        stdout: json(&lines),
        stderr: String::new(),
    })
}

pub fn cmd_td(instance: &Path, nice: bool) -> Result<String, Outcome> {
    let inst = load_instance(instance)?;
    inst.validate()
        .map_err(|e| Outcome::input(format!("invalid instance: {e:?}")))?;
    let td = heuristic_tree_decomposition(&inst.constraint_graph());
    Ok(if nice {
        write_nice(&csp_extform::treedec::make_nice(&td))
    } else {
        write_td(&td)
    })
}

fn stdout_only(r: Result<String, Outcome>) -> Outcome {
    match r {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(o) => o,
    }
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve {
            instance,
            model,
            dump_tableau,
            witness,
        } => match cmd_solve(&instance, &model, dump_tableau, witness.as_deref()) {
            Ok((_, o)) | Err(o) => o,
        },
        Command::EmitLp {
            instance,
            model,
            out,
        } => stdout_only(cmd_emit_lp(&instance, &model).and_then(|text| match out {
            Some(path) => write_file(&path, &text).map(|_| String::new()),
            None => Ok(text),
        })),
        Command::Verify {
            instance,
            seeds,
            fault_inject,
        } => cmd_verify(instance.as_deref(), seeds, fault_inject).unwrap_or_else(|o| o),
        Command::Reduce {
            problem,
            graph,
            colors,
            labels,
            out,
        } => stdout_only(cmd_reduce(&problem, &graph, colors, labels, out.as_deref())),
        Command::Chromatic { graph } => stdout_only(
            load_graph(&graph)
                .and_then(|g| chromatic_number(&g).map_err(Outcome::input))
                .map(|k| format!("{k}\n")),
        ),
        Command::Oracle { instance, td } => {
            cmd_oracle(&instance, td.as_ref()).unwrap_or_else(|o| o)
        }
        Command::Td { instance, nice } => stdout_only(cmd_td(&instance, nice)),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stderr: text,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    ..Outcome::default()
                }
            }
        }
    }
}

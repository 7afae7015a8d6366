//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on validation errors, 3 when a size guard
//! is hit, 1 otherwise.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tlsynth::cost::{format_rational, parse_rational, Rational};
use tlsynth::harness::{
    emit_table2, measure_ratio, read_sequence_arg, resolve_problem, Algorithm, GeneratorSpec, Guarantee,
    MeasureConfig, TableConfig, ALGORITHM_NAMES,
};
use tlsynth::policy::{policy_from_json, policy_to_value, TablePolicy};
use tlsynth::ratio::evaluate_policy;
use tlsynth::synthesis::{synthesize_det, synthesize_rand, verify_lower_bound, SynthesisConfig};
use tlsynth::{Error, LocalProblem, Result};

#[derive(Parser)]
#[command(name = "tlsynth", version, about = "Synthesize and analyze time-local online algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Bundled problem name or path to a problem file
    #[arg(long)]
    problem: String,

    /// Parameter override, e.g. alpha=3/2 (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Find optimal deterministic or best-effort randomized policies
    Synth {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        randomized: bool,
        /// Grid step for randomized search
        #[arg(long, default_value = "1/20")]
        grid_step: String,
        /// Report every optimal deterministic policy
        #[arg(long)]
        all_optimal: bool,
        /// Worker threads, 0 for all cores
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Only check that no policy beats this ratio
        #[arg(long, value_name = "R")]
        verify_lower_bound: Option<String>,
        /// Disable self-loop forcing and short-cycle pruning
        #[arg(long)]
        no_pruning: bool,
        /// Largest candidate count to enumerate
        #[arg(long)]
        max_candidates: Option<u128>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact competitive ratio of a policy table
    Eval {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        policy: String,
    },
    /// Offline optimum of an input sequence
    Opt {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Sequence string, or @path
        #[arg(long)]
        input: String,
    },
    /// Run an algorithm on one input sequence
    Simulate {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Policy file or one of the built-in algorithms
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Empirical ratio against the offline optimum
    Measure {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        algorithm: String,
        /// blocks:T=..,L=.. | adaptive:L=..,cutoff=.. | uniform:n=..,p=..,seed=.. | fixed:SEQ
        #[arg(long)]
        generator: String,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Guarantee to check, c=..,d=..
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Best ratios for file migration over a grid of alpha and T, as CSV
    Table2 {
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        #[arg(long)]
        randomized: bool,
        #[arg(long, default_value = "1/20")]
        grid_step: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

fn load(args: &ProblemArgs) -> Result<LocalProblem> {
    let mut overrides = BTreeMap::new();
    for p in &args.params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("--param expects NAME=VALUE, got `{p}`")))?;
        overrides.insert(name.trim().to_string(), parse_rational(value.trim())?);
    }
    let problem = resolve_problem(&args.problem, &overrides)?;
    for w in problem.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(problem)
}

fn read_policy(path: &str) -> Result<TablePolicy> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    policy_from_json(&text)
}

fn algorithm(name: &str, problem: &LocalProblem, horizon: Option<usize>) -> Result<Algorithm> {
    if ALGORITHM_NAMES.contains(&name) {
        Algorithm::from_name(name, problem, horizon)
    } else {
        Ok(Algorithm::Table(read_policy(name)?))
    }
}

fn emit(text: &str, out: Option<&str>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn with_problem(mut value: Value, problem: &LocalProblem) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("problem".into(), json!(problem.name()));
        let params: serde_json::Map<String, Value> =
            problem.parameters().iter().map(|(k, v)| (k.clone(), json!(format_rational(v)))).collect();
        map.insert("parameters".into(), Value::Object(params));
    }
    value
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth {
            problem,
            horizon,
            randomized,
            grid_step,
            all_optimal,
            jobs,
            verify_lower_bound: bound,
            no_pruning,
            max_candidates,
            out,
        } => {
            let problem = load(&problem)?;
            let mut config = SynthesisConfig::new(horizon);
            config.collect_all_optimal = all_optimal;
            config.jobs = jobs;
            config.grid_step = parse_rational(&grid_step)?;
            if let Some(m) = max_candidates {
                config.max_candidates = m;
            }
            if no_pruning {
                config.self_loop_forcing = false;
                config.prune_cycle_length = 0;
            }
            let value = if let Some(bound) = bound {
                let report = verify_lower_bound(&problem, &config, parse_rational(&bound)?)?;
                json!({
                    "horizon": horizon,
                    "bound": format_rational(&report.bound),
                    "holds": report.holds,
                    "examined": report.examined.to_string(),
                    "counterexample": report.counterexample.map(|p| policy_to_value(&TablePolicy::Deterministic(p))),
                })
            } else if randomized {
                synthesize_rand(&problem, &config)?.to_value()
            } else {
                synthesize_det(&problem, &config)?.to_value()
            };
            emit(&pretty(&with_problem(value, &problem)), out.as_deref())
        }
        Command::Eval { problem, policy } => {
            let problem = load(&problem)?;
            let policy = read_policy(&policy)?;
            let (graph, verdict) = evaluate_policy(&problem, &policy)?;
            emit(&pretty(&verdict.to_value(&graph, Some(&problem))), None)
        }
        Command::Opt { problem, input } => {
            let problem = load(&problem)?;
            let x = read_sequence_arg(&problem, &input)?;
            let (cost, outputs) = problem.offline_opt(&x)?;
            let value = json!({
                "input": problem.inputs().format_sequence(&x),
                "opt": cost.to_string(),
                "outputs": problem.outputs().format_sequence(&outputs),
            });
            emit(&pretty(&value), None)
        }
        Command::Simulate { problem, algorithm: name, input, horizon, seed } => {
            let problem = load(&problem)?;
            let alg = algorithm(&name, &problem, horizon)?;
            let x = read_sequence_arg(&problem, &input)?;
            let trace = alg.run(&problem, &x, seed)?;
            let mut value = serde_json::to_value(&trace).expect("serializable");
            if let Value::Object(map) = &mut value {
                map.insert("algorithm".into(), json!(alg.to_string()));
                map.insert("input_string".into(), json!(problem.inputs().format_sequence(&trace.inputs)));
                map.insert("output_string".into(), json!(problem.outputs().format_sequence(&trace.outputs)));
            }
            emit(&pretty(&value), None)
        }
        Command::Measure { problem, algorithm: name, generator, trials, check, horizon, seed } => {
            let problem = load(&problem)?;
            let alg = algorithm(&name, &problem, horizon)?;
            let generator: GeneratorSpec = generator.parse()?;
            let check: Option<Guarantee> = check.map(|c| c.parse()).transpose()?;
            let record = measure_ratio(&alg, &problem, &generator, &MeasureConfig { trials, seed, check })?;
            if record.cutoff_hit {
                eprintln!("warning: adaptive cutoff reached; the algorithm never switched");
            }
            emit(&record.to_csv(), None)
        }
        Command::Table2 { alphas, horizons, randomized, grid_step, jobs, out } => {
            let alphas: Vec<Rational> = alphas.iter().map(|a| parse_rational(a.trim())).collect::<Result<_>>()?;
            let config = TableConfig { randomized, jobs, grid_step: parse_rational(&grid_step)?, ..TableConfig::default() };
            emit(&emit_table2(&alphas, &horizons, &config)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() {
                2
            } else if e.is_limit() {
                3
            } else {
                1
            })
        }
    }
}

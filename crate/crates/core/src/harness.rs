//! Input generators, empirical ratio measurement and table emission.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{format_rational, format_short, parse_rational, rational_to_f64, ExtendedCost, Rational};
use crate::error::{Error, Result};
use crate::policy::{
    mixed_resetting_horizon, run_coin_flip, run_randomized, sample_mixed_resetting, trace_policy, window_at,
    CounterMigration, ExecutionTrace, Policy, ResetWrapper, SlidingWindow, TablePolicy,
};
use crate::problem::{bundled_document, load_problem_with, LocalProblem};
use crate::ratio::CycleRatio;
use crate::synthesis::{ratio_decimal, synthesize_det, synthesize_rand, SynthesisConfig};

/// How a measurement produces its input sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// `(1^block 0^block)^repeats`.
    Blocks { block: usize, repeats: usize },
    /// Requests that chase the algorithm, `phases` times.
    Adaptive { phases: usize, cutoff: usize },
    /// Independent symbols, 1 with probability `p`; reseeded per trial.
    Uniform { length: usize, p: Rational, seed: u64 },
    /// A literal sequence in the problem's token syntax.
    Fixed(String),
}

fn parse_params<'a>(kind: &str, body: &'a str) -> Result<Vec<(&'a str, &'a str)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::parse(format!("generator {kind}"), format!("expected key=value, got `{kv}`")))
        })
        .collect()
}

fn parse_usize(kind: &str, key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::parse(format!("generator {kind}"), format!("{key} must be a non-negative integer")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, body) = text.split_once(':').unwrap_or((text, ""));
        let kind = kind.trim();
        if kind == "fixed" {
            return Ok(GeneratorSpec::Fixed(body.trim().to_string()));
        }
        let params = parse_params(kind, body)?;
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let need = |key: &str| {
            get(key).ok_or_else(|| Error::parse(format!("generator {kind}"), format!("missing parameter {key}")))
        };
        let spec = match kind {
            "blocks" => GeneratorSpec::Blocks {
                block: parse_usize(kind, "T", need("T")?)?,
                repeats: parse_usize(kind, "L", need("L")?)?,
            },
            "adaptive" => GeneratorSpec::Adaptive {
                phases: parse_usize(kind, "L", need("L")?)?,
                cutoff: match get("cutoff") {
                    Some(v) => parse_usize(kind, "cutoff", v)?,
                    None => 1000,
                },
            },
            "uniform" => {
                let seed = match get("seed") {
                    Some(v) => v
                        .parse()
                        .map_err(|_| Error::parse("generator uniform", "seed must be an unsigned integer"))?,
                    None => 0,
                };
                GeneratorSpec::Uniform {
                    length: parse_usize(kind, "n", need("n")?)?,
                    p: match get("p") {
                        Some(v) => parse_rational(v)?,
                        None => Rational::new(1, 2),
                    },
                    seed,
                }
            }
            other => {
                return Err(Error::parse(
                    "generator",
                    format!("unknown kind `{other}` (expected blocks, adaptive, uniform or fixed)"),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Blocks { block, repeats } => write!(f, "blocks:T={block},L={repeats}"),
            GeneratorSpec::Adaptive { phases, cutoff } => write!(f, "adaptive:L={phases},cutoff={cutoff}"),
            GeneratorSpec::Uniform { length, p, seed } => {
                write!(f, "uniform:n={length},p={},seed={seed}", format_rational(p))
            }
            GeneratorSpec::Fixed(s) => write!(f, "fixed:{s}"),
        }
    }
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Blocks { block, repeats } if *block == 0 || *repeats == 0 => {
                Err(Error::InvalidArgument("blocks needs T >= 1 and L >= 1".into()))
            }
            GeneratorSpec::Adaptive { phases, cutoff } if *phases == 0 || *cutoff == 0 => {
                Err(Error::InvalidArgument("adaptive needs L >= 1 and cutoff >= 1".into()))
            }
            GeneratorSpec::Uniform { length, p, .. } => {
                if *length == 0 {
                    Err(Error::InvalidArgument("uniform needs n >= 1".into()))
                } else if *p < Rational::from_integer(0) || *p > Rational::from_integer(1) {
                    Err(Error::InvalidArgument("uniform needs 0 <= p <= 1".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// True if every trial sees the same sequence.
    pub fn is_fixed_input(&self) -> bool {
        !matches!(self, GeneratorSpec::Uniform { .. })
    }
}

/// `(1^T 0^T)^L` as symbol indices.
pub fn gen_blocks(block: usize, repeats: usize) -> Vec<usize> {
    let period: Vec<usize> = std::iter::repeat_n(1, block).chain(std::iter::repeat_n(0, block)).collect();
    period.repeat(repeats)
}

/// Plays `phases` rounds against `policy`: requests `1` until the policy
/// outputs 1, then `0` until it outputs 0, and so on. A phase that reaches
/// `cutoff` requests ends the sequence and sets the returned flag.
pub fn gen_adaptive(policy: &dyn Policy, phases: usize, cutoff: usize) -> (Vec<usize>, bool) {
    let t = policy.horizon();
    let mut seq = Vec::new();
    for phase in 0..phases {
        let target = 1 - phase % 2;
        let mut len = 0;
        loop {
            let time = seq.len() + 1;
            if policy.decide(&window_at(&seq, t, time), time) == target {
                break;
            }
            if len == cutoff {
                return (seq, true);
            }
            seq.push(target);
            len += 1;
        }
    }
    (seq, false)
}

/// Symbols in `{0, 1}` drawn independently with `P(1) = p`.
pub fn gen_uniform(length: usize, p: Rational, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pf = rational_to_f64(&p).clamp(0.0, 1.0);
    (0..length).map(|_| usize::from(rng.gen_bool(pf))).collect()
}

/// Seed for trial `trial` on stream `stream`, derived from `base`.
pub fn derive_seed(base: u64, stream: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(trial) * 2);
    rng.next_u64()
}

const SEQUENCE_STREAM: u64 = 1;
const ALGORITHM_STREAM: u64 = 2;

/// An algorithm the harness can run.
#[derive(Debug, Clone)]
pub enum Algorithm {
    Table(TablePolicy),
    SlidingWindow(SlidingWindow),
    /// Uniformly mixed resetting strategies with period `T`.
    MixedResetting { horizon: usize },
    CoinFlip { alpha: Rational },
    /// Counter-based migration restarted every `T` steps.
    ResetWrapper(ResetWrapper<CounterMigration>),
}

pub const ALGORITHM_NAMES: [&str; 4] = ["sliding-window", "mixed-resetting", "coin-flip", "reset-wrapper"];

fn alpha_of(problem: &LocalProblem) -> Result<Rational> {
    problem
        .parameter("alpha")
        .ok_or_else(|| Error::Validation(format!("problem `{}` has no alpha parameter", problem.name())))
}

fn require_binary(problem: &LocalProblem, name: &str) -> Result<()> {
    if problem.inputs().len() != 2 || problem.outputs().len() != 2 {
        return Err(Error::Validation(format!("{name} needs binary input and output alphabets")));
    }
    Ok(())
}

impl Algorithm {
    /// Builds a named algorithm for `problem`, whose `alpha` parameter
    /// configures it. Default horizons: `max(6, ⌈6α⌉)` for sliding window,
    /// the balancing horizon for mixed resetting and `⌈α⌉` for the reset
    /// wrapper.
    pub fn from_name(name: &str, problem: &LocalProblem, horizon: Option<usize>) -> Result<Self> {
        let alpha = alpha_of(problem)?;
        require_binary(problem, name)?;
        match name {
            "sliding-window" => {
                let t = horizon.unwrap_or_else(|| ((alpha * Rational::from_integer(6)).ceil().to_integer() as usize).max(6));
                Ok(Algorithm::SlidingWindow(SlidingWindow::new(t, alpha)?))
            }
            "mixed-resetting" => {
                let t = horizon.unwrap_or_else(|| mixed_resetting_horizon(rational_to_f64(&alpha)));
                if t == 0 {
                    return Err(Error::InvalidHorizon("T must be at least 1".into()));
                }
                Ok(Algorithm::MixedResetting { horizon: t })
            }
            "coin-flip" => {
                crate::policy::coin_flip_probability(alpha)?;
                Ok(Algorithm::CoinFlip { alpha })
            }
            "reset-wrapper" => {
                let t = horizon.unwrap_or_else(|| (alpha.ceil().to_integer() as usize).max(1));
                Ok(Algorithm::ResetWrapper(ResetWrapper::new(CounterMigration::for_alpha(alpha), t)?))
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm `{other}` (expected a policy file or one of {})",
                ALGORITHM_NAMES.join(", ")
            ))),
        }
    }

    pub fn is_randomized(&self) -> bool {
        match self {
            Algorithm::Table(TablePolicy::Randomized(p)) => p.to_deterministic().is_none(),
            Algorithm::MixedResetting { .. } | Algorithm::CoinFlip { .. } => true,
            _ => false,
        }
    }

    /// The deterministic decision procedure, if there is one.
    pub fn as_policy(&self) -> Option<Box<dyn Policy + '_>> {
        match self {
            Algorithm::Table(TablePolicy::Deterministic(p)) => Some(Box::new(p.clone())),
            Algorithm::Table(TablePolicy::Randomized(p)) => p.to_deterministic().map(|d| Box::new(d) as Box<dyn Policy>),
            Algorithm::SlidingWindow(s) => Some(Box::new(*s)),
            Algorithm::ResetWrapper(w) => Some(Box::new(w.clone())),
            _ => None,
        }
    }

    /// Runs the algorithm once; `seed` drives any randomness.
    pub fn run(&self, problem: &LocalProblem, x_seq: &[usize], seed: u64) -> Result<ExecutionTrace> {
        match self {
            Algorithm::Table(TablePolicy::Randomized(p)) if self.is_randomized() => {
                run_randomized(problem, p, x_seq, seed)
            }
            Algorithm::MixedResetting { horizon } => {
                let strategy = sample_mixed_resetting(*horizon, seed)?;
                let mut trace = trace_policy(problem, &strategy, x_seq)?;
                trace.seed = Some(seed);
                Ok(trace)
            }
            Algorithm::CoinFlip { alpha } => run_coin_flip(problem, x_seq, *alpha, seed),
            _ => {
                let policy = self.as_policy().expect("deterministic algorithm");
                trace_policy(problem, policy.as_ref(), x_seq)
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Table(TablePolicy::Deterministic(p)) => write!(f, "table(T={})", p.space().len()),
            Algorithm::Table(TablePolicy::Randomized(p)) => write!(f, "randomized-table(T={})", p.horizon()),
            Algorithm::SlidingWindow(s) => write!(f, "sliding-window(T={},lambda={})", s.horizon, s.lambda),
            Algorithm::MixedResetting { horizon } => write!(f, "mixed-resetting(T={horizon})"),
            Algorithm::CoinFlip { alpha } => write!(f, "coin-flip(alpha={})", format_rational(alpha)),
            Algorithm::ResetWrapper(w) => {
                write!(f, "reset-wrapper(T={},threshold={})", w.block, w.inner.threshold)
            }
        }
    }
}

/// The competitiveness bound `cost ≤ c·OPT + d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guarantee {
    pub c: Rational,
    pub d: Rational,
}

impl Guarantee {
    pub fn holds(&self, cost: ExtendedCost, opt: ExtendedCost) -> bool {
        match (cost.as_finite(), opt.as_finite()) {
            (Some(a), Some(o)) => a <= self.c * o + self.d,
            _ => cost <= opt,
        }
    }
}

impl FromStr for Guarantee {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let params = parse_params("check", text)?;
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| parse_rational(v))
                .unwrap_or_else(|| Err(Error::parse("check", format!("missing {key}"))))
        };
        Ok(Guarantee { c: get("c")?, d: get("d")? })
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={},d={}", format_rational(&self.c), format_rational(&self.d))
    }
}

/// One trial of a measurement.
#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub length: usize,
    #[serde(serialize_with = "crate::problem::serialize_cost")]
    pub cost: ExtendedCost,
    #[serde(serialize_with = "crate::problem::serialize_cost")]
    pub opt: ExtendedCost,
    /// `cost / OPT`; infinite when only OPT is zero, 1 when both are.
    pub ratio: f64,
    pub seed: u64,
    pub guarantee_holds: Option<bool>,
}

/// Aggregate of a measurement.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub generator: String,
    pub algorithm: String,
    pub trials: usize,
    pub length: usize,
    pub mean_cost: f64,
    pub mean_opt: f64,
    pub mean_ratio: f64,
    pub stderr: f64,
    pub max_ratio: f64,
    pub seed: u64,
    pub cutoff_hit: bool,
    pub check: Option<String>,
    pub violations: usize,
    pub outcomes: Vec<TrialOutcome>,
}

pub const RUN_RECORD_HEADER: &str =
    "generator,algorithm,trials,length,mean_cost,mean_opt,mean_ratio,stderr,max_ratio,seed,cutoff_hit,check,violations";

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.4}")
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("utf-8 fields").trim_end().to_string()
}

impl RunRecord {
    pub fn to_csv_row(&self) -> String {
        csv_row(&[
            self.generator.clone(),
            self.algorithm.clone(),
            self.trials.to_string(),
            self.length.to_string(),
            fmt_f64(self.mean_cost),
            fmt_f64(self.mean_opt),
            fmt_f64(self.mean_ratio),
            fmt_f64(self.stderr),
            fmt_f64(self.max_ratio),
            self.seed.to_string(),
            self.cutoff_hit.to_string(),
            self.check.clone().unwrap_or_default(),
            self.violations.to_string(),
        ])
    }

    pub fn to_csv(&self) -> String {
        format!("{RUN_RECORD_HEADER}\n{}\n", self.to_csv_row())
    }
}

fn empirical_ratio(cost: ExtendedCost, opt: ExtendedCost) -> f64 {
    match (cost.as_finite(), opt.as_finite()) {
        (Some(c), Some(o)) if o != Rational::from_integer(0) => rational_to_f64(&(c / o)),
        (Some(c), Some(_)) if c == Rational::from_integer(0) => 1.0,
        _ => f64::INFINITY,
    }
}

/// Measurement settings.
#[derive(Debug, Clone)]
pub struct MeasureConfig {
    pub trials: usize,
    /// Base seed for the algorithm's coin flips.
    pub seed: u64,
    pub check: Option<Guarantee>,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig { trials: 1, seed: 0, check: None }
    }
}

/// Runs `algorithm` against sequences from `generator` and compares with
/// the offline optimum. Deterministic algorithms on a fixed input run once.
pub fn measure_ratio(
    algorithm: &Algorithm,
    problem: &LocalProblem,
    generator: &GeneratorSpec,
    config: &MeasureConfig,
) -> Result<RunRecord> {
    generator.validate()?;
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let binary_needed = !matches!(generator, GeneratorSpec::Fixed(_));
    if binary_needed && problem.inputs().len() < 2 {
        return Err(Error::Validation("generator needs at least two input symbols".into()));
    }
    let trials = if generator.is_fixed_input() && !algorithm.is_randomized() { 1 } else { config.trials };

    let mut cutoff_hit = false;
    let fixed = match generator {
        GeneratorSpec::Blocks { block, repeats } => Some(gen_blocks(*block, *repeats)),
        GeneratorSpec::Fixed(text) => Some(problem.inputs().parse_sequence(text)?),
        GeneratorSpec::Adaptive { phases, cutoff } => {
            let policy = algorithm.as_policy().ok_or_else(|| {
                Error::InvalidArgument("the adaptive generator needs a deterministic algorithm".into())
            })?;
            let (seq, hit) = gen_adaptive(policy.as_ref(), *phases, *cutoff);
            cutoff_hit = hit;
            Some(seq)
        }
        GeneratorSpec::Uniform { .. } => None,
    };
    if fixed.as_ref().is_some_and(|s| s.is_empty()) {
        return Err(Error::InvalidArgument("generated sequence is empty".into()));
    }
    let fixed_opt = match &fixed {
        Some(seq) => Some(problem.offline_opt(seq)?.0),
        None => None,
    };

    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let (seq, opt) = match (&fixed, generator) {
                (Some(seq), _) => (seq.clone(), fixed_opt.expect("fixed optimum")),
                (None, GeneratorSpec::Uniform { length, p, seed }) => {
                    let seq = gen_uniform(*length, *p, derive_seed(*seed, SEQUENCE_STREAM, trial));
                    let opt = problem.offline_opt(&seq)?.0;
                    (seq, opt)
                }
                _ => unreachable!(),
            };
            let seed = derive_seed(config.seed, ALGORITHM_STREAM, trial);
            let trace = algorithm.run(problem, &seq, seed)?;
            Ok(TrialOutcome {
                length: seq.len(),
                cost: trace.total,
                opt,
                ratio: empirical_ratio(trace.total, opt),
                seed,
                guarantee_holds: config.check.map(|g| g.holds(trace.total, opt)),
            })
        })
        .collect::<Result<_>>()?;

    let n = outcomes.len() as f64;
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| outcomes.iter().map(f).sum::<f64>() / n;
    let mean_ratio = mean(&|o| o.ratio);
    let stderr = if outcomes.len() > 1 && mean_ratio.is_finite() {
        let var = outcomes.iter().map(|o| (o.ratio - mean_ratio).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(RunRecord {
        generator: generator.to_string(),
        algorithm: algorithm.to_string(),
        trials: outcomes.len(),
        length: outcomes.iter().map(|o| o.length).max().unwrap_or(0),
        mean_cost: mean(&|o| o.cost.to_f64()),
        mean_opt: mean(&|o| o.opt.to_f64()),
        mean_ratio,
        stderr,
        max_ratio: outcomes.iter().map(|o| o.ratio).fold(f64::NEG_INFINITY, f64::max),
        seed: config.seed,
        cutoff_hit,
        check: config.check.map(|g| g.to_string()),
        violations: outcomes.iter().filter(|o| o.guarantee_holds == Some(false)).count(),
        outcomes,
    })
}

/// One cell of the synthesis table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub alpha: Rational,
    pub horizon: usize,
    pub kind: &'static str,
    /// `None` when the cell exceeded a guard.
    pub ratio: Option<CycleRatio>,
}

impl TableCell {
    pub fn to_csv_row(&self) -> String {
        let (exact, decimal) = match &self.ratio {
            Some(r) => (
                r.value().map_or("inf".to_string(), |v| format_rational(&v)),
                ratio_decimal(r),
            ),
            None => ("skipped".to_string(), "skipped".to_string()),
        };
        csv_row(&[format_short(&self.alpha), self.horizon.to_string(), self.kind.to_string(), exact, decimal])
    }
}

pub const RATIO_GRID_HEADER: &str = "alpha,T,kind,ratio_exact,ratio_decimal";

/// Settings shared by every cell of [`emit_table2`].
#[derive(Debug, Clone)]
pub struct TableConfig {
    pub randomized: bool,
    pub jobs: usize,
    pub grid_step: Rational,
    pub max_candidates: u128,
}

impl Default for TableConfig {
    fn default() -> Self {
        let base = SynthesisConfig::new(1);
        TableConfig { randomized: false, jobs: 0, grid_step: base.grid_step, max_candidates: base.max_candidates }
    }
}

/// Synthesizes every `(α, T)` cell for file migration, deterministic and
/// optionally randomized. Cells over a guard are kept as skipped.
pub fn table2_cells(alphas: &[Rational], horizons: &[usize], config: &TableConfig) -> Result<Vec<TableCell>> {
    let mut cells = Vec::new();
    for &alpha in alphas {
        let problem = crate::problem::file_migration(alpha)?;
        for &t in horizons {
            let mut sc = SynthesisConfig::new(t);
            sc.jobs = config.jobs;
            sc.grid_step = config.grid_step;
            sc.max_candidates = config.max_candidates;
            let det = match synthesize_det(&problem, &sc) {
                Ok(r) => Some(r.ratio),
                Err(e) if e.is_limit() => None,
                Err(e) => return Err(e),
            };
            cells.push(TableCell { alpha, horizon: t, kind: "det", ratio: det });
            if config.randomized {
                let rand = match synthesize_rand(&problem, &sc) {
                    Ok(r) => Some(r.ratio),
                    Err(e) if e.is_limit() => None,
                    Err(e) => return Err(e),
                };
                cells.push(TableCell { alpha, horizon: t, kind: "rand", ratio: rand });
            }
        }
    }
    Ok(cells)
}

/// CSV rendering of [`table2_cells`].
pub fn emit_table2(alphas: &[Rational], horizons: &[usize], config: &TableConfig) -> Result<String> {
    let mut out = String::from(RATIO_GRID_HEADER);
    out.push('\n');
    for cell in table2_cells(alphas, horizons, config)? {
        out.push_str(&cell.to_csv_row());
        out.push('\n');
    }
    Ok(out)
}

/// Loads a bundled problem by name, or a problem document from a path.
pub fn resolve_problem(source: &str, overrides: &BTreeMap<String, Rational>) -> Result<LocalProblem> {
    match bundled_document(source) {
        Some(doc) => load_problem_with(doc, overrides),
        None => {
            if !std::path::Path::new(source).exists() {
                return Err(Error::InvalidArgument(format!(
                    "`{source}` is neither a bundled problem ({}) nor a file",
                    crate::problem::bundled_names().join(", ")
                )));
            }
            let text = std::fs::read_to_string(source).map_err(|e| Error::Io(format!("{source}: {e}")))?;
            load_problem_with(&text, overrides)
        }
    }
}

/// Parses a command-line sequence; `@path` reads it from a file.
pub fn read_sequence_arg(problem: &LocalProblem, arg: &str) -> Result<Vec<usize>> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    problem.inputs().parse_sequence(text.trim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{int, rat};
    use crate::policy::DeterministicPolicy;
    use crate::problem::file_migration;
    use proptest::prelude::*;

    #[test]
    fn blocks_shape() {
        assert_eq!(gen_blocks(1, 2), vec![1, 0, 1, 0]);
        assert_eq!(gen_blocks(3, 1), vec![1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn parse_generators() {
        assert_eq!(
            "blocks:T=6,L=50".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::Blocks { block: 6, repeats: 50 }
        );
        let u: GeneratorSpec = "uniform:n=10,p=1/4,seed=3".parse().unwrap();
        assert_eq!(u.to_string(), "uniform:n=10,p=1/4,seed=3");
        assert!("blocks:T=0,L=1".parse::<GeneratorSpec>().is_err());
        assert!("zigzag:n=1".parse::<GeneratorSpec>().is_err());
        assert!("uniform:n=5,p=3/2".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn adaptive_follow_the_request() {
        let p = file_migration(int(1)).unwrap();
        let policy = DeterministicPolicy::follow_the_request(&p, 1).unwrap();
        let (seq, hit) = gen_adaptive(&policy, 4, 10);
        assert_eq!(seq, vec![1, 0, 1, 0]);
        assert!(!hit);
    }

    #[test]
    fn adaptive_never_migrating() {
        let p = file_migration(int(1)).unwrap();
        let policy = DeterministicPolicy::constant(&p, 2, 0).unwrap();
        let (seq, hit) = gen_adaptive(&policy, 3, 7);
        assert!(hit);
        assert_eq!(seq, vec![1; 7]);
    }

    #[test]
    fn adaptive_sliding_window_phases() {
        let sw = SlidingWindow::new(6, int(1)).unwrap();
        let (seq, hit) = gen_adaptive(&sw, 6, 50);
        assert!(!hit);
        let mut runs = vec![1usize];
        for w in seq.windows(2) {
            if w[0] == w[1] {
                *runs.last_mut().unwrap() += 1;
            } else {
                runs.push(1);
            }
        }
        assert_eq!(runs.len(), 6);
        assert!(runs.iter().all(|&r| r >= 2));
    }

    #[test]
    fn all_zero_input() {
        let p = file_migration(int(1)).unwrap();
        let stay = Algorithm::Table(TablePolicy::Deterministic(DeterministicPolicy::constant(&p, 1, 0).unwrap()));
        let r = measure_ratio(&stay, &p, &GeneratorSpec::Fixed("0000".into()), &MeasureConfig::default()).unwrap();
        assert_eq!(r.mean_cost, 0.0);
        assert_eq!(r.mean_opt, 0.0);
        let flip = Algorithm::Table(TablePolicy::Deterministic(
            DeterministicPolicy::from_fn(1, p.inputs().clone(), p.outputs().clone(), |_| 1).unwrap(),
        ));
        let r = measure_ratio(&flip, &p, &GeneratorSpec::Fixed("0000".into()), &MeasureConfig::default()).unwrap();
        assert!(r.mean_cost > 0.0);
        assert!(r.mean_ratio.is_infinite());
    }

    #[test]
    fn guarantee_parse_and_check() {
        let g: Guarantee = "c=6,d=6".parse().unwrap();
        assert!(g.holds(ExtendedCost::finite(int(12)), ExtendedCost::finite(int(1))));
        assert!(!g.holds(ExtendedCost::finite(int(13)), ExtendedCost::finite(int(1))));
        assert_eq!(g.to_string(), "c=6,d=6");
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(derive_seed(7, 1, 3), derive_seed(7, 1, 3));
        assert_ne!(derive_seed(7, 1, 3), derive_seed(7, 1, 4));
        assert_ne!(derive_seed(7, 1, 3), derive_seed(7, 2, 3));
    }

    #[test]
    fn table_cell_rendering() {
        let cell = TableCell { alpha: rat(3, 10), horizon: 1, kind: "det", ratio: Some(CycleRatio::Finite(rat(13, 3))) };
        assert_eq!(cell.to_csv_row(), "0.3,1,det,13/3,4.3333");
        let skipped = TableCell { alpha: int(1), horizon: 9, kind: "det", ratio: None };
        assert_eq!(skipped.to_csv_row(), "1,9,det,skipped,skipped");
    }

    proptest! {
        #[test]
        fn blocks_length(t in 1usize..10, l in 1usize..10) {
            prop_assert_eq!(gen_blocks(t, l).len(), 2 * t * l);
        }

        #[test]
        fn uniform_is_reproducible(n in 1usize..200, seed in any::<u64>()) {
            let a = gen_uniform(n, rat(1, 3), seed);
            prop_assert_eq!(&a, &gen_uniform(n, rat(1, 3), seed));
            prop_assert!(a.iter().all(|&s| s < 2));
        }
    }
}

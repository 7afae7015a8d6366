//! Time-local policies and their execution.
//!
//! Every policy follows the `[T, -1]` convention: the output `y_i` serving
//! input `x_i` is chosen from the window `(x_{i-T}, …, x_{i-1})`, with `⊥`
//! (`None`) for positions before the start of the sequence.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::cost::{format_rational, int, parse_rational, ExtendedCost, Rational};
use crate::error::{Error, Result};
use crate::problem::{serialize_cost, Alphabet, CostBreakdown, LocalProblem};
use crate::window::WindowSpace;

/// Largest dense table the crate will build.
pub const MAX_TABLE_ENTRIES: usize = 1 << 24;

/// A deterministic time-local decision procedure.
pub trait Policy: Send + Sync {
    /// Number of visible past inputs.
    fn horizon(&self) -> usize;

    /// Output serving `x_time`, given `window = (x_{time-T}, …, x_{time-1})`.
    /// `time` starts at 1.
    fn decide(&self, window: &[Option<usize>], time: usize) -> usize;

    /// True if `decide` depends on `time`.
    fn is_clocked(&self) -> bool {
        false
    }
}

/// The visible window for step `time` (1-based).
pub fn window_at(x_seq: &[usize], horizon: usize, time: usize) -> Vec<Option<usize>> {
    (0..horizon)
        .map(|k| (time + k).checked_sub(horizon + 1).map(|j| x_seq[j]))
        .collect()
}

/// Runs a deterministic policy on `x_seq`.
pub fn run_policy(policy: &dyn Policy, x_seq: &[usize]) -> Vec<usize> {
    let t = policy.horizon();
    (1..=x_seq.len())
        .map(|time| policy.decide(&window_at(x_seq, t, time), time))
        .collect()
}

/// Inputs, outputs and costs of one run.
#[derive(Debug, Clone, Serialize)]
pub struct ExecutionTrace {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub breakdown: CostBreakdown,
    #[serde(serialize_with = "serialize_cost")]
    pub total: ExtendedCost,
    pub seed: Option<u64>,
}

impl ExecutionTrace {
    pub fn new(problem: &LocalProblem, inputs: Vec<usize>, outputs: Vec<usize>, seed: Option<u64>) -> Result<Self> {
        let breakdown = problem.evaluate(&inputs, &outputs)?;
        Ok(ExecutionTrace { total: breakdown.total, inputs, outputs, breakdown, seed })
    }
}

/// Runs `policy` and evaluates its outputs.
pub fn trace_policy(problem: &LocalProblem, policy: &dyn Policy, x_seq: &[usize]) -> Result<ExecutionTrace> {
    let outputs = run_policy(policy, x_seq);
    ExecutionTrace::new(problem, x_seq.to_vec(), outputs, None)
}

/// A map `X^T → Y` stored densely by window code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicPolicy {
    horizon: usize,
    inputs: Alphabet,
    outputs: Alphabet,
    table: Vec<usize>,
}

fn window_space(inputs: &Alphabet, horizon: usize) -> Result<WindowSpace> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon("T must be at least 1".into()));
    }
    WindowSpace::new(inputs.len(), horizon, MAX_TABLE_ENTRIES)
}

/// Code of a window with `⊥` replaced by the first input symbol.
fn padded_code(space: &WindowSpace, window: &[Option<usize>]) -> usize {
    window.iter().fold(0, |acc, s| acc * space.base() + s.unwrap_or(0))
}

impl DeterministicPolicy {
    pub fn new(horizon: usize, inputs: Alphabet, outputs: Alphabet, table: Vec<usize>) -> Result<Self> {
        let space = window_space(&inputs, horizon)?;
        if table.len() != space.size() {
            return Err(Error::Validation(format!(
                "table has {} entries, expected |X|^T = {}",
                table.len(),
                space.size()
            )));
        }
        if table.iter().any(|&y| y >= outputs.len()) {
            return Err(Error::Validation("table entry outside the output alphabet".into()));
        }
        Ok(DeterministicPolicy { horizon, inputs, outputs, table })
    }

    /// Tabulates `f` over all windows, oldest symbol first.
    pub fn from_fn(
        horizon: usize,
        inputs: Alphabet,
        outputs: Alphabet,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let space = window_space(&inputs, horizon)?;
        let table = (0..space.size()).map(|c| f(&space.decode(c))).collect();
        DeterministicPolicy::new(horizon, inputs, outputs, table)
    }

    /// Policy for `problem` whose output is always symbol `y`.
    pub fn constant(problem: &LocalProblem, horizon: usize, y: usize) -> Result<Self> {
        Self::from_fn(horizon, problem.inputs().clone(), problem.outputs().clone(), |_| y)
    }

    /// Outputs the most recent request (`X = Y`).
    pub fn follow_the_request(problem: &LocalProblem, horizon: usize) -> Result<Self> {
        Self::from_fn(horizon, problem.inputs().clone(), problem.outputs().clone(), |w| w[horizon - 1])
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }
    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }
    pub fn table(&self) -> &[usize] {
        &self.table
    }
    pub fn space(&self) -> WindowSpace {
        window_space(&self.inputs, self.horizon).expect("validated at construction")
    }

    pub fn entry(&self, window_code: usize) -> usize {
        self.table[window_code]
    }

    pub fn entry_for(&self, window: &[usize]) -> usize {
        self.table[self.space().encode(window)]
    }

    /// Same table, viewed as a randomized policy with 0/1 probabilities.
    pub fn to_randomized(&self) -> Result<RandomizedPolicy> {
        RandomizedPolicy::new(
            self.horizon,
            self.inputs.clone(),
            self.outputs.clone(),
            self.table.iter().map(|&y| int(y as i128)).collect(),
        )
    }
}

impl Policy for DeterministicPolicy {
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn decide(&self, window: &[Option<usize>], _time: usize) -> usize {
        self.table[padded_code(&self.space(), window)]
    }
}

/// A behavioral randomized policy over binary outputs: each entry is the
/// probability of outputting the second output symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedPolicy {
    horizon: usize,
    inputs: Alphabet,
    outputs: Alphabet,
    table: Vec<Rational>,
}

impl RandomizedPolicy {
    pub fn new(horizon: usize, inputs: Alphabet, outputs: Alphabet, table: Vec<Rational>) -> Result<Self> {
        if outputs.len() != 2 {
            return Err(Error::Validation("randomized policies need a binary output alphabet".into()));
        }
        let space = window_space(&inputs, horizon)?;
        if table.len() != space.size() {
            return Err(Error::Validation(format!(
                "table has {} entries, expected |X|^T = {}",
                table.len(),
                space.size()
            )));
        }
        if table.iter().any(|p| *p < Rational::zero() || *p > Rational::one()) {
            return Err(Error::Validation("probabilities must lie in [0, 1]".into()));
        }
        Ok(RandomizedPolicy { horizon, inputs, outputs, table })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }
    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }
    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }
    pub fn table(&self) -> &[Rational] {
        &self.table
    }
    pub fn space(&self) -> WindowSpace {
        window_space(&self.inputs, self.horizon).expect("validated at construction")
    }

    pub fn probability(&self, window_code: usize) -> Rational {
        self.table[window_code]
    }

    pub fn probability_for(&self, window: &[Option<usize>]) -> Rational {
        self.table[padded_code(&self.space(), window)]
    }

    /// `Some(policy)` if every entry is 0 or 1.
    pub fn to_deterministic(&self) -> Option<DeterministicPolicy> {
        let table = self
            .table
            .iter()
            .map(|p| if p.is_zero() { Some(0) } else if p.is_one() { Some(1) } else { None })
            .collect::<Option<Vec<_>>>()?;
        DeterministicPolicy::new(self.horizon, self.inputs.clone(), self.outputs.clone(), table).ok()
    }
}

/// Exact test `u < p` for `u = v / 2^64`.
fn below(v: u64, p: &Rational) -> bool {
    Rational::new_raw(v as i128, 1i128 << 64) < *p
}

/// Runs a randomized policy with a seeded generator. One uniform variate is
/// drawn per step and the output is 1 iff the variate is below the entry.
pub fn run_randomized(problem: &LocalProblem, policy: &RandomizedPolicy, x_seq: &[usize], seed: u64) -> Result<ExecutionTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = policy.horizon();
    let outputs = (1..=x_seq.len())
        .map(|time| {
            let p = policy.probability_for(&window_at(x_seq, t, time));
            usize::from(below(rng.gen::<u64>(), &p))
        })
        .collect();
    ExecutionTrace::new(problem, x_seq.to_vec(), outputs, Some(seed))
}

/// A table per residue of the clock: step `i` uses `tables[(i-1) mod P]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTablePolicy {
    tables: Vec<DeterministicPolicy>,
}

impl ResidueTablePolicy {
    pub fn new(tables: Vec<DeterministicPolicy>) -> Result<Self> {
        let first = tables
            .first()
            .ok_or_else(|| Error::Validation("need at least one table".into()))?;
        if tables.iter().any(|t| t.horizon != first.horizon || t.inputs != first.inputs) {
            return Err(Error::Validation("residue tables must share horizon and alphabets".into()));
        }
        Ok(ResidueTablePolicy { tables })
    }
}

impl Policy for ResidueTablePolicy {
    fn horizon(&self) -> usize {
        self.tables[0].horizon
    }
    fn decide(&self, window: &[Option<usize>], time: usize) -> usize {
        self.tables[(time - 1) % self.tables.len()].decide(window, time)
    }
    fn is_clocked(&self) -> bool {
        true
    }
}

/// A stateful online algorithm expressed as a pure function of the inputs
/// seen so far.
pub trait ClassicAlgorithm: Send + Sync {
    /// Output serving the next input after `history`.
    fn decide(&self, history: &[usize]) -> usize;
}

/// Rent-or-buy file migration: stay put until `threshold` remote requests
/// have been paid since the last move, then move to the requester.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterMigration {
    pub threshold: usize,
}

impl CounterMigration {
    /// Threshold `max(1, ⌈α⌉)`.
    pub fn for_alpha(alpha: Rational) -> Self {
        let t = alpha.ceil().to_integer().max(1);
        CounterMigration { threshold: t as usize }
    }
}

impl ClassicAlgorithm for CounterMigration {
    fn decide(&self, history: &[usize]) -> usize {
        let mut location = 0;
        let mut remote = 0;
        for &x in history {
            if x != location {
                remote += 1;
                if remote >= self.threshold {
                    location = x;
                    remote = 0;
                }
            }
        }
        location
    }
}

/// Restarts a classic algorithm every `T` steps, making it clocked
/// time-local with horizon `T`.
#[derive(Debug, Clone)]
pub struct ResetWrapper<A> {
    pub inner: A,
    pub block: usize,
}

impl<A: ClassicAlgorithm> ResetWrapper<A> {
    pub fn new(inner: A, block: usize) -> Result<Self> {
        if block == 0 {
            return Err(Error::InvalidHorizon("block length must be at least 1".into()));
        }
        Ok(ResetWrapper { inner, block })
    }
}

impl<A: ClassicAlgorithm> Policy for ResetWrapper<A> {
    fn horizon(&self) -> usize {
        self.block
    }
    fn decide(&self, window: &[Option<usize>], time: usize) -> usize {
        let seen = (time - 1) % self.block;
        let history: Vec<usize> = window[self.block - seen..].iter().map(|s| s.unwrap_or(0)).collect();
        self.inner.decide(&history)
    }
    fn is_clocked(&self) -> bool {
        true
    }
}

/// One deterministic strategy of the mixed resetting algorithm: move to the
/// requester at times `k, k+T, k+2T, …`, after serving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedResettingStrategy {
    pub horizon: usize,
    pub k: usize,
}

impl MixedResettingStrategy {
    pub fn new(horizon: usize, k: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidHorizon("T must be at least 1".into()));
        }
        if k == 0 || k > horizon {
            return Err(Error::InvalidArgument(format!("k must lie in [1, {horizon}]")));
        }
        Ok(MixedResettingStrategy { horizon, k })
    }

    /// Time of the last move strictly before `time`, if any.
    pub fn last_move_before(&self, time: usize) -> Option<usize> {
        (time > self.k).then(|| self.k + self.horizon * ((time - 1 - self.k) / self.horizon))
    }
}

impl Policy for MixedResettingStrategy {
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn decide(&self, window: &[Option<usize>], time: usize) -> usize {
        match self.last_move_before(time) {
            None => 0,
            Some(m) => window[m + self.horizon - time].unwrap_or(0),
        }
    }
    fn is_clocked(&self) -> bool {
        true
    }
}

/// Draws `k` uniformly from `[1, T]`.
pub fn sample_mixed_resetting(horizon: usize, seed: u64) -> Result<MixedResettingStrategy> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon("T must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MixedResettingStrategy::new(horizon, rng.gen_range(1..=horizon))
}

/// The horizon `round(α + ½√(20α² − 4α + 1) − 1)` at which mixed resetting
/// balances its two cost terms, at least 1.
pub fn mixed_resetting_horizon(alpha: f64) -> usize {
    let t = alpha + 0.5 * (20.0 * alpha * alpha - 4.0 * alpha + 1.0).sqrt() - 1.0;
    t.round().max(1.0) as usize
}

/// `λ = min(⌈T/6⌉, ⌊α⌋)`.
pub fn sliding_window_lambda(horizon: usize, alpha: Rational) -> Result<usize> {
    if horizon < 6 {
        return Err(Error::InvalidHorizon(format!("sliding window needs T >= 6, got {horizon}")));
    }
    if alpha < Rational::one() {
        return Err(Error::InvalidAlpha(format!("sliding window needs alpha >= 1, got {}", format_rational(&alpha))));
    }
    let a = alpha.floor().to_integer().min(i128::from(u32::MAX)) as usize;
    Ok(horizon.div_ceil(6).min(a))
}

/// Scans segments of length `3λ` from the most recent end and returns `b`
/// for the first `b`-window, or 0 if there is none. `⊥` entries are skipped.
pub fn sliding_window_output(window: &[Option<usize>], lambda: usize) -> usize {
    let seen: Vec<usize> = window.iter().flatten().copied().collect();
    let len = 3 * lambda;
    if lambda == 0 || seen.len() < len {
        return 0;
    }
    for end in (len..=seen.len()).rev() {
        let ones = seen[end - len..end].iter().filter(|&&s| s == 1).count();
        let zeros = len - ones;
        let one_window = ones >= 2 * lambda;
        let zero_window = zeros >= 2 * lambda;
        debug_assert!(!(one_window && zero_window));
        if one_window {
            return 1;
        }
        if zero_window {
            return 0;
        }
    }
    0
}

/// The sliding window algorithm for two-node file migration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlidingWindow {
    pub horizon: usize,
    pub lambda: usize,
}

impl SlidingWindow {
    pub fn new(horizon: usize, alpha: Rational) -> Result<Self> {
        Ok(SlidingWindow { horizon, lambda: sliding_window_lambda(horizon, alpha)? })
    }
}

impl Policy for SlidingWindow {
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn decide(&self, window: &[Option<usize>], _time: usize) -> usize {
        sliding_window_output(window, self.lambda)
    }
}

/// Answer of the coin flip algorithm to one request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoinFlipAnswer {
    Move,
    Skip,
}

pub fn coin_flip_probability(alpha: Rational) -> Result<Rational> {
    if alpha <= Rational::zero() || Rational::one() / (alpha * int(2)) > Rational::one() {
        return Err(Error::InvalidAlpha(format!(
            "coin flip needs alpha >= 1/2, got {}",
            format_rational(&alpha)
        )));
    }
    Ok(Rational::one() / (alpha * int(2)))
}

/// Moves to the requester with probability `1/(2α)`; `variate` is uniform
/// in `[0, 1)`.
pub fn coin_flip_step(current: usize, request: usize, alpha: Rational, variate: f64) -> Result<(CoinFlipAnswer, usize)> {
    let p = coin_flip_probability(alpha)?;
    if variate < crate::cost::rational_to_f64(&p) {
        Ok((CoinFlipAnswer::Move, request))
    } else {
        Ok((CoinFlipAnswer::Skip, current))
    }
}

/// Simulates the coin flip algorithm from node 0. Output `y_i` is the node
/// serving `x_i`; any move happens after serving.
pub fn run_coin_flip(problem: &LocalProblem, x_seq: &[usize], alpha: Rational, seed: u64) -> Result<ExecutionTrace> {
    coin_flip_probability(alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut location = 0;
    let mut outputs = Vec::with_capacity(x_seq.len());
    for &x in x_seq {
        outputs.push(location);
        location = coin_flip_step(location, x, alpha, rng.gen::<f64>())?.1;
    }
    ExecutionTrace::new(problem, x_seq.to_vec(), outputs, Some(seed))
}

/// Tabulates an unclocked rule-based policy on every full window.
pub fn compile_to_table(policy: &dyn Policy, inputs: &Alphabet, outputs: &Alphabet) -> Result<DeterministicPolicy> {
    if policy.is_clocked() {
        return Err(Error::InvalidArgument("clocked policies cannot be tabulated".into()));
    }
    let t = policy.horizon();
    DeterministicPolicy::from_fn(t, inputs.clone(), outputs.clone(), |w| {
        let window: Vec<Option<usize>> = w.iter().map(|&s| Some(s)).collect();
        policy.decide(&window, t + 1)
    })
}

/// A deterministic or randomized table policy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TablePolicy {
    Deterministic(DeterministicPolicy),
    Randomized(RandomizedPolicy),
}

impl TablePolicy {
    pub fn horizon(&self) -> usize {
        match self {
            TablePolicy::Deterministic(p) => p.horizon,
            TablePolicy::Randomized(p) => p.horizon,
        }
    }
}

/// Serializes a policy table to its JSON document.
pub fn policy_to_value(policy: &TablePolicy) -> Value {
    let (horizon, inputs, outputs, kind) = match policy {
        TablePolicy::Deterministic(p) => (p.horizon, &p.inputs, &p.outputs, "deterministic"),
        TablePolicy::Randomized(p) => (p.horizon, &p.inputs, &p.outputs, "randomized"),
    };
    let space = window_space(inputs, horizon).expect("validated at construction");
    let mut entries = Map::new();
    for code in 0..space.size() {
        let key = inputs.format_sequence(&space.decode(code));
        let value = match policy {
            TablePolicy::Deterministic(p) => Value::String(outputs.symbol(p.table[code]).to_string()),
            TablePolicy::Randomized(p) => Value::String(format_rational(&p.table[code])),
        };
        entries.insert(key, value);
    }
    let mut doc = Map::new();
    doc.insert("horizon".into(), Value::from(horizon));
    doc.insert("inputs".into(), Value::from(inputs.symbols().to_vec()));
    doc.insert("outputs".into(), Value::from(outputs.symbols().to_vec()));
    doc.insert("kind".into(), Value::from(kind));
    doc.insert("entries".into(), Value::Object(entries));
    Value::Object(doc)
}

pub fn policy_to_json(policy: &TablePolicy) -> String {
    serde_json::to_string_pretty(&policy_to_value(policy)).expect("serializable")
}

fn field<'a>(doc: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    doc.get(name).ok_or_else(|| Error::parse(name, "missing field"))
}

fn string_list(v: &Value, name: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::parse(name, "expected a list of strings"))?
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| Error::parse(name, "expected a string")))
        .collect()
}

/// Parses a policy document. A synthesis result is accepted too; its first
/// policy is used.
pub fn policy_from_value(value: &Value) -> Result<TablePolicy> {
    let mut doc = value.as_object().ok_or_else(|| Error::parse("policy", "expected an object"))?;
    if !doc.contains_key("entries") {
        if let Some(list) = doc.get("policies").and_then(Value::as_array) {
            doc = list
                .first()
                .and_then(Value::as_object)
                .ok_or_else(|| Error::parse("policies", "expected at least one policy object"))?;
        }
    }
    let horizon = field(doc, "horizon")?
        .as_u64()
        .ok_or_else(|| Error::parse("horizon", "expected a positive integer"))? as usize;
    let inputs = Alphabet::new(string_list(field(doc, "inputs")?, "inputs")?)?;
    let outputs = Alphabet::new(string_list(field(doc, "outputs")?, "outputs")?)?;
    let kind = field(doc, "kind")?.as_str().unwrap_or_default();
    let entries = field(doc, "entries")?
        .as_object()
        .ok_or_else(|| Error::parse("entries", "expected an object"))?;
    let space = window_space(&inputs, horizon)?;
    let mut slots: Vec<Option<&Value>> = vec![None; space.size()];
    for (key, v) in entries {
        let loc = format!("entries.{key}");
        let window = inputs.parse_sequence(key).map_err(|e| Error::parse(&loc, e.to_string()))?;
        if window.len() != horizon {
            return Err(Error::parse(&loc, format!("window must have {horizon} symbols")));
        }
        slots[space.encode(&window)] = Some(v);
    }
    let missing = |code: usize| Error::parse("entries", format!("missing window {}", inputs.format_sequence(&space.decode(code))));
    match kind {
        "deterministic" => {
            let table = slots
                .iter()
                .enumerate()
                .map(|(code, v)| {
                    let v = v.ok_or_else(|| missing(code))?;
                    v.as_str()
                        .and_then(|s| outputs.index_of(s))
                        .ok_or_else(|| Error::parse(format!("entries[{code}]"), "expected an output symbol"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TablePolicy::Deterministic(DeterministicPolicy::new(horizon, inputs, outputs, table)?))
        }
        "randomized" => {
            let table = slots
                .iter()
                .enumerate()
                .map(|(code, v)| {
                    let v = v.ok_or_else(|| missing(code))?;
                    let text = match v {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(Error::parse(format!("entries[{code}]"), "expected a probability")),
                    };
                    parse_rational(&text)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TablePolicy::Randomized(RandomizedPolicy::new(horizon, inputs, outputs, table)?))
        }
        other => Err(Error::parse("kind", format!("unknown policy kind `{other}`"))),
    }
}

pub fn policy_from_json(text: &str) -> Result<TablePolicy> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::parse(format!("line {}", e.line()), e.to_string()))?;
    policy_from_value(&value)
}

/// Builds a deterministic policy from `(window string, output token)` rows.
pub fn policy_from_rows(horizon: usize, inputs: &Alphabet, outputs: &Alphabet, rows: &[(&str, &str)]) -> Result<DeterministicPolicy> {
    let space = window_space(inputs, horizon)?;
    let mut table = vec![None; space.size()];
    for (w, y) in rows {
        let code = space.encode(&inputs.parse_sequence(w)?);
        table[code] = Some(outputs.index_of(y).ok_or_else(|| Error::parse(*w, format!("unknown output `{y}`")))?);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(c, v)| v.ok_or_else(|| Error::parse("rows", format!("missing window {}", inputs.format_sequence(&space.decode(c))))))
        .collect::<Result<Vec<_>>>()?;
    DeterministicPolicy::new(horizon, inputs.clone(), outputs.clone(), table)
}

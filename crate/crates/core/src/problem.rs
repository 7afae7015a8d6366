//! Local optimization problems: rule-based local cost tables, solution
//! evaluation and the exact offline optimum.
//!
//! A problem is `(X, Y, r, v, aggr, obj)`. The local cost `v` is given as an
//! ordered list of pattern rules over windows of `r + 1` inputs and outputs;
//! the first matching rule wins. Inputs before the start of the sequence are
//! the placeholder `⊥`, outputs before the start come from
//! `initial_outputs`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::{parse_rational, CostExpr, ExtendedCost, Rational};
use crate::error::{Error, Result};
use crate::window::checked_pow;

/// Token used in documents for the `⊥` placeholder.
pub const BOTTOM_TOKEN: &str = "_|_";
pub const WILDCARD_TOKEN: &str = "*";

const MAX_COST_TABLE: usize = 1 << 22;

/// Ordered set of distinct symbols; a symbol is referred to by its index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Validation("alphabet must not be empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == ',') {
                return Err(Error::Validation(format!("invalid symbol `{s}`")));
            }
            if s == BOTTOM_TOKEN || s == "⊥" || s == WILDCARD_TOKEN {
                return Err(Error::Validation(format!("`{s}` is reserved")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::Validation(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == token)
    }

    fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses `"0110"` for single-character alphabets or `"a,b,c"` otherwise.
    /// A comma-separated list is accepted for any alphabet.
    pub fn parse_sequence(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let tokens: Vec<String> = if text.contains(',') || !self.single_char() {
            text.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
        };
        tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                self.index_of(t)
                    .ok_or_else(|| Error::parse(format!("sequence position {i}"), format!("unknown symbol `{t}`")))
            })
            .collect()
    }

    pub fn format_sequence(&self, seq: &[usize]) -> String {
        let sep = if self.single_char() { "" } else { "," };
        seq.iter().map(|&s| self.symbol(s)).collect::<Vec<_>>().join(sep)
    }

    /// Like `format_sequence`, with `⊥` for missing entries.
    pub fn format_window(&self, seq: &[Option<usize>]) -> String {
        let parts: Vec<&str> = seq
            .iter()
            .map(|s| s.map(|i| self.symbol(i)).unwrap_or(BOTTOM_TOKEN))
            .collect();
        format!("({})", parts.join(","))
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// One position of a rule pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// Matches any symbol and `⊥`.
    Any,
    /// Matches only `⊥`.
    Bottom,
    Symbol(usize),
}

impl Pattern {
    fn matches(&self, value: Option<usize>) -> bool {
        match self {
            Pattern::Any => true,
            Pattern::Bottom => value.is_none(),
            Pattern::Symbol(s) => value == Some(*s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostRule {
    pub x_pattern: Vec<Pattern>,
    pub y_pattern: Vec<Pattern>,
    pub expr: CostExpr,
    /// `expr` with the problem parameters substituted.
    pub cost: ExtendedCost,
}

impl CostRule {
    fn matches(&self, x: &[Option<usize>], y: &[Option<usize>]) -> bool {
        self.x_pattern.iter().zip(x).all(|(p, v)| p.matches(*v))
            && self.y_pattern.iter().zip(y).all(|(p, v)| p.matches(*v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    Sum,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Min,
    Max,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Sum => "sum",
            Aggregation::Min => "min",
            Aggregation::Max => "max",
        })
    }
}

impl Objective {
    /// True if `a` is strictly preferred to `b`.
    pub fn better(&self, a: &ExtendedCost, b: &ExtendedCost) -> bool {
        match self {
            Objective::Min => a < b,
            Objective::Max => a > b,
        }
    }
}

/// Per-step values `u_i` and their aggregate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostBreakdown {
    #[serde(serialize_with = "serialize_costs")]
    pub per_step: Vec<ExtendedCost>,
    #[serde(serialize_with = "serialize_cost")]
    pub total: ExtendedCost,
}

pub(crate) fn serialize_cost<S: serde::Serializer>(c: &ExtendedCost, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

fn serialize_costs<S: serde::Serializer>(c: &[ExtendedCost], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|c| c.to_string()))
}

#[derive(Debug, Clone)]
pub struct LocalProblem {
    name: String,
    inputs: Alphabet,
    outputs: Alphabet,
    horizon: usize,
    rules: Vec<CostRule>,
    aggregation: Aggregation,
    objective: Objective,
    parameters: BTreeMap<String, Rational>,
    initial_outputs: Vec<usize>,
    /// First-match results over the extended alphabets `X ∪ {⊥}`, `Y ∪ {⊥}`.
    table: Vec<Option<u32>>,
}

impl LocalProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        inputs: Alphabet,
        outputs: Alphabet,
        horizon: usize,
        rules: Vec<(Vec<Pattern>, Vec<Pattern>, CostExpr)>,
        aggregation: Aggregation,
        objective: Objective,
        parameters: BTreeMap<String, Rational>,
        initial_outputs: Vec<usize>,
    ) -> Result<Self> {
        if initial_outputs.len() != horizon {
            return Err(Error::Validation(format!(
                "initial_outputs has {} entries, expected r = {horizon}",
                initial_outputs.len()
            )));
        }
        if initial_outputs.iter().any(|&y| y >= outputs.len()) {
            return Err(Error::Validation("initial output outside the output alphabet".into()));
        }
        let mut resolved = Vec::with_capacity(rules.len());
        for (i, (xp, yp, expr)) in rules.into_iter().enumerate() {
            if xp.len() != horizon + 1 || yp.len() != horizon + 1 {
                return Err(Error::Validation(format!(
                    "rule {i}: patterns must have r+1 = {} entries",
                    horizon + 1
                )));
            }
            let check = |p: &Pattern, n: usize| !matches!(p, Pattern::Symbol(s) if *s >= n);
            if !xp.iter().all(|p| check(p, inputs.len())) || !yp.iter().all(|p| check(p, outputs.len())) {
                return Err(Error::Validation(format!("rule {i}: symbol outside alphabet")));
            }
            let cost = expr
                .eval(&parameters)
                .map_err(|e| Error::Validation(format!("rule {i}: {e}")))?;
            resolved.push(CostRule { x_pattern: xp, y_pattern: yp, expr, cost });
        }
        let mut problem = LocalProblem {
            name: name.into(),
            inputs,
            outputs,
            horizon,
            rules: resolved,
            aggregation,
            objective,
            parameters,
            initial_outputs,
            table: Vec::new(),
        };
        problem.build_table()?;
        problem.check_coverage()?;
        Ok(problem)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }
    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }
    /// The horizon `r` of the local cost function.
    pub fn horizon(&self) -> usize {
        self.horizon
    }
    pub fn rules(&self) -> &[CostRule] {
        &self.rules
    }
    pub fn aggregation(&self) -> Aggregation {
        self.aggregation
    }
    pub fn objective(&self) -> Objective {
        self.objective
    }
    pub fn parameters(&self) -> &BTreeMap<String, Rational> {
        &self.parameters
    }
    pub fn parameter(&self, name: &str) -> Option<Rational> {
        self.parameters.get(name).copied()
    }
    pub fn initial_outputs(&self) -> &[usize] {
        &self.initial_outputs
    }

    /// Returns a copy with one parameter replaced and all rule costs
    /// re-resolved.
    pub fn with_parameter(&self, name: &str, value: Rational) -> Result<Self> {
        let mut params = self.parameters.clone();
        params.insert(name.to_string(), value);
        let rules = self
            .rules
            .iter()
            .map(|r| (r.x_pattern.clone(), r.y_pattern.clone(), r.expr.clone()))
            .collect();
        LocalProblem::new(
            self.name.clone(),
            self.inputs.clone(),
            self.outputs.clone(),
            self.horizon,
            rules,
            self.aggregation,
            self.objective,
            params,
            self.initial_outputs.clone(),
        )
    }

    fn ext_x(&self) -> usize {
        self.inputs.len() + 1
    }
    fn ext_y(&self) -> usize {
        self.outputs.len() + 1
    }

    fn build_table(&mut self) -> Result<()> {
        let w = self.horizon + 1;
        let xs = checked_pow(self.ext_x(), w);
        let ys = checked_pow(self.ext_y(), w);
        let size = match (xs, ys) {
            (Some(a), Some(b)) => a.checked_mul(b),
            _ => None,
        };
        let size = size.filter(|&s| s <= MAX_COST_TABLE).ok_or(Error::TableTooLarge {
            entries: u128::MAX,
            limit: MAX_COST_TABLE as u128,
        })?;
        let (xs, ys) = (xs.unwrap(), ys.unwrap());
        let mut table = vec![None; size];
        let mut xw = vec![None; w];
        let mut yw = vec![None; w];
        for xc in 0..xs {
            decode_ext(xc, self.ext_x(), &mut xw);
            for yc in 0..ys {
                decode_ext(yc, self.ext_y(), &mut yw);
                table[xc * ys + yc] = self
                    .rules
                    .iter()
                    .position(|rule| rule.matches(&xw, &yw))
                    .map(|i| i as u32);
            }
        }
        self.table = table;
        Ok(())
    }

    fn ext_code(window: &[Option<usize>], missing: usize) -> usize {
        window.iter().fold(0, |acc, s| acc * (missing + 1) + s.unwrap_or(missing))
    }

    fn rule_index(&self, x: &[Option<usize>], y: &[Option<usize>]) -> Option<usize> {
        let xc = Self::ext_code(x, self.inputs.len());
        let yc = Self::ext_code(y, self.outputs.len());
        let ys = checked_pow(self.ext_y(), self.horizon + 1).unwrap();
        self.table[xc * ys + yc].map(|i| i as usize)
    }

    /// `v(x_{i-r}, …, x_i, y_{i-r}, …, y_i)`: cost of the first matching rule.
    pub fn lookup_cost(&self, x_window: &[Option<usize>], y_window: &[Option<usize>]) -> Result<ExtendedCost> {
        let w = self.horizon + 1;
        if x_window.len() != w || y_window.len() != w {
            return Err(Error::InvalidArgument(format!("windows must have r+1 = {w} entries")));
        }
        if x_window.iter().flatten().any(|&s| s >= self.inputs.len())
            || y_window.iter().flatten().any(|&s| s >= self.outputs.len())
        {
            return Err(Error::InvalidArgument("window symbol outside alphabet".into()));
        }
        match self.rule_index(x_window, y_window) {
            Some(i) => Ok(self.rules[i].cost),
            None => Err(Error::NoMatchingRule {
                x_window: self.inputs.format_window(x_window),
                y_window: self.outputs.format_window(y_window),
            }),
        }
    }

    /// Costs of all fully concrete windows, indexed by
    /// `x_code * |Y|^(r+1) + y_code` with base-`|X|` / base-`|Y|` codes.
    pub fn concrete_costs(&self) -> Result<Vec<ExtendedCost>> {
        let w = self.horizon + 1;
        let xs = checked_pow(self.inputs.len(), w).ok_or(Error::Overflow)?;
        let ys = checked_pow(self.outputs.len(), w).ok_or(Error::Overflow)?;
        let mut out = Vec::with_capacity(xs * ys);
        let mut xw = vec![0usize; w];
        let mut yw = vec![0usize; w];
        for xc in 0..xs {
            decode_into(xc, self.inputs.len(), &mut xw);
            let xo: Vec<Option<usize>> = xw.iter().map(|&s| Some(s)).collect();
            for yc in 0..ys {
                decode_into(yc, self.outputs.len(), &mut yw);
                let yo: Vec<Option<usize>> = yw.iter().map(|&s| Some(s)).collect();
                out.push(self.lookup_cost(&xo, &yo)?);
            }
        }
        Ok(out)
    }

    fn x_window_at(&self, x_seq: &[usize], t: usize) -> Vec<Option<usize>> {
        let r = self.horizon;
        (0..=r)
            .map(|k| (t + k).checked_sub(r).map(|j| x_seq[j]))
            .collect()
    }

    fn y_window_at(&self, y_seq: &[usize], t: usize) -> Vec<Option<usize>> {
        let r = self.horizon;
        (0..=r)
            .map(|k| match (t + k).checked_sub(r) {
                Some(j) => Some(y_seq[j]),
                None => Some(self.initial_outputs[t + k]),
            })
            .collect()
    }

    fn aggregate(&self, acc: Option<ExtendedCost>, u: ExtendedCost) -> Result<ExtendedCost> {
        Ok(match (self.aggregation, acc) {
            (_, None) => u,
            (Aggregation::Sum, Some(a)) => a.checked_add(u)?,
            (Aggregation::Min, Some(a)) => a.min(u),
            (Aggregation::Max, Some(a)) => a.max(u),
        })
    }

    /// Cost of output `y_seq` on input `x_seq`. The aggregate of an empty
    /// sequence is 0.
    pub fn evaluate(&self, x_seq: &[usize], y_seq: &[usize]) -> Result<CostBreakdown> {
        if x_seq.len() != y_seq.len() {
            return Err(Error::InvalidArgument(format!(
                "input has length {} but output has length {}",
                x_seq.len(),
                y_seq.len()
            )));
        }
        if x_seq.iter().any(|&s| s >= self.inputs.len()) || y_seq.iter().any(|&s| s >= self.outputs.len()) {
            return Err(Error::InvalidArgument("sequence symbol outside alphabet".into()));
        }
        let mut per_step = Vec::with_capacity(x_seq.len());
        let mut acc = None;
        for t in 0..x_seq.len() {
            let u = self.lookup_cost(&self.x_window_at(x_seq, t), &self.y_window_at(y_seq, t))?;
            acc = Some(self.aggregate(acc, u)?);
            per_step.push(u);
        }
        Ok(CostBreakdown { per_step, total: acc.unwrap_or(ExtendedCost::ZERO) })
    }

    /// Costs `u_t` for every choice of the last `r + 1` outputs at step `t`,
    /// indexed by the base-`|Y|` code of the output window.
    fn step_costs(&self, x_seq: &[usize], t: usize) -> Result<Vec<ExtendedCost>> {
        let w = self.horizon + 1;
        let ny = self.outputs.len();
        let ys = checked_pow(ny, w).ok_or(Error::Overflow)?;
        let xw = self.x_window_at(x_seq, t);
        let mut yw = vec![0usize; w];
        (0..ys)
            .map(|yc| {
                decode_into(yc, ny, &mut yw);
                let yo: Vec<Option<usize>> = yw.iter().map(|&s| Some(s)).collect();
                self.lookup_cost(&xw, &yo)
            })
            .collect()
    }

    /// Exact offline optimum and one optimal output sequence.
    ///
    /// Sum aggregation runs the additive recursion over the last `r` outputs;
    /// min/max aggregation additionally carries the running aggregate, whose
    /// values range over the finite set of rule costs. Ties resolve to the
    /// lexicographically smallest decision sequence found first.
    pub fn offline_opt(&self, x_seq: &[usize]) -> Result<(ExtendedCost, Vec<usize>)> {
        if x_seq.is_empty() {
            return Err(Error::InvalidArgument("offline optimum needs a non-empty input".into()));
        }
        if x_seq.iter().any(|&s| s >= self.inputs.len()) {
            return Err(Error::InvalidArgument("sequence symbol outside alphabet".into()));
        }
        match self.aggregation {
            Aggregation::Sum => self.opt_additive(x_seq),
            Aggregation::Min | Aggregation::Max => self.opt_bottleneck(x_seq),
        }
    }

    fn initial_state(&self) -> usize {
        let ny = self.outputs.len();
        self.initial_outputs.iter().fold(0, |acc, &y| acc * ny + y)
    }

    fn opt_additive(&self, x_seq: &[usize]) -> Result<(ExtendedCost, Vec<usize>)> {
        let ny = self.outputs.len();
        let states = checked_pow(ny, self.horizon).ok_or(Error::Overflow)?;
        let mut value: Vec<Option<ExtendedCost>> = vec![None; states];
        value[self.initial_state()] = Some(ExtendedCost::ZERO);
        let mut parents: Vec<Vec<(usize, usize)>> = Vec::with_capacity(x_seq.len());
        for t in 0..x_seq.len() {
            let costs = self.step_costs(x_seq, t)?;
            let mut next: Vec<Option<ExtendedCost>> = vec![None; states];
            let mut parent = vec![(usize::MAX, usize::MAX); states];
            for (s, v) in value.iter().enumerate() {
                let Some(v) = v else { continue };
                for y in 0..ny {
                    let window = s * ny + y;
                    let cand = v.checked_add(costs[window])?;
                    let ns = window % states;
                    if next[ns].is_none_or(|cur| self.objective.better(&cand, &cur)) {
                        next[ns] = Some(cand);
                        parent[ns] = (s, y);
                    }
                }
            }
            value = next;
            parents.push(parent);
        }
        let (mut state, best) = value
            .iter()
            .enumerate()
            .filter_map(|(s, v)| v.map(|v| (s, v)))
            .reduce(|a, b| if self.objective.better(&b.1, &a.1) { b } else { a })
            .expect("at least one reachable state");
        let mut outputs = vec![0; x_seq.len()];
        for t in (0..x_seq.len()).rev() {
            let (prev, y) = parents[t][state];
            outputs[t] = y;
            state = prev;
        }
        Ok((best, outputs))
    }

    fn opt_bottleneck(&self, x_seq: &[usize]) -> Result<(ExtendedCost, Vec<usize>)> {
        let ny = self.outputs.len();
        let states = checked_pow(ny, self.horizon).ok_or(Error::Overflow)?;
        // A layer maps (state, running aggregate) to (parent node, decision).
        type Layer = BTreeMap<(usize, Option<ExtendedCost>), (usize, usize)>;
        let mut layers: Vec<Vec<((usize, Option<ExtendedCost>), (usize, usize))>> = Vec::new();
        let mut current: Vec<(usize, Option<ExtendedCost>)> = vec![(self.initial_state(), None)];
        for t in 0..x_seq.len() {
            let costs = self.step_costs(x_seq, t)?;
            let mut next: Layer = BTreeMap::new();
            for (idx, &(s, agg)) in current.iter().enumerate() {
                for y in 0..ny {
                    let window = s * ny + y;
                    let agg2 = self.aggregate(agg, costs[window])?;
                    next.entry((window % states, Some(agg2))).or_insert((idx, y));
                }
            }
            let layer: Vec<_> = next.into_iter().collect();
            current = layer.iter().map(|(k, _)| *k).collect();
            layers.push(layer);
        }
        let last = layers.last().expect("non-empty input");
        let mut best_idx = 0;
        for (i, ((_, agg), _)) in last.iter().enumerate() {
            if self.objective.better(&agg.unwrap(), &last[best_idx].0 .1.unwrap()) {
                best_idx = i;
            }
        }
        let best = last[best_idx].0 .1.unwrap();
        let mut outputs = vec![0; x_seq.len()];
        let mut idx = best_idx;
        for t in (0..x_seq.len()).rev() {
            let (_, (parent, y)) = layers[t][idx];
            outputs[t] = y;
            idx = parent;
        }
        Ok((best, outputs))
    }

    /// Every `(x-window, y-window)` pair that can occur while evaluating some
    /// sequence: `k` leading `⊥` inputs are paired with the last `k` initial
    /// outputs.
    fn reachable_windows(&self) -> Vec<(Vec<Option<usize>>, Vec<Option<usize>>)> {
        let r = self.horizon;
        let (nx, ny) = (self.inputs.len(), self.outputs.len());
        let mut out = Vec::new();
        for k in 0..=r {
            let free = r + 1 - k;
            let xs = checked_pow(nx, free).unwrap_or(0);
            let ys = checked_pow(ny, free).unwrap_or(0);
            let mut xd = vec![0; free];
            let mut yd = vec![0; free];
            for xc in 0..xs {
                decode_into(xc, nx, &mut xd);
                let mut xw: Vec<Option<usize>> = vec![None; k];
                xw.extend(xd.iter().map(|&s| Some(s)));
                for yc in 0..ys {
                    decode_into(yc, ny, &mut yd);
                    let mut yw: Vec<Option<usize>> =
                        self.initial_outputs[r - k..].iter().map(|&s| Some(s)).collect();
                    yw.extend(yd.iter().map(|&s| Some(s)));
                    out.push((xw.clone(), yw));
                }
            }
        }
        out
    }

    fn check_coverage(&self) -> Result<()> {
        for (xw, yw) in self.reachable_windows() {
            if self.rule_index(&xw, &yw).is_none() {
                return Err(Error::Validation(format!(
                    "no rule covers window x={}, y={}",
                    self.inputs.format_window(&xw),
                    self.outputs.format_window(&yw)
                )));
            }
        }
        Ok(())
    }

    /// Indices of rules that never win the first-match on a reachable window.
    pub fn unreachable_rules(&self) -> Vec<usize> {
        let mut hit = vec![false; self.rules.len()];
        for (xw, yw) in self.reachable_windows() {
            if let Some(i) = self.rule_index(&xw, &yw) {
                hit[i] = true;
            }
        }
        hit.iter().enumerate().filter(|(_, h)| !**h).map(|(i, _)| i).collect()
    }

    /// Human-readable warnings produced during loading.
    pub fn warnings(&self) -> Vec<String> {
        self.unreachable_rules()
            .into_iter()
            .map(|i| format!("rule {i} is shadowed by earlier rules and never applies"))
            .collect()
    }
}

fn decode_ext(mut code: usize, base: usize, out: &mut [Option<usize>]) {
    let missing = base - 1;
    for slot in out.iter_mut().rev() {
        let d = code % base;
        *slot = if d == missing { None } else { Some(d) };
        code /= base;
    }
}

fn decode_into(mut code: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDocument {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    r: usize,
    aggregation: Aggregation,
    objective: Objective,
    #[serde(default)]
    parameters: BTreeMap<String, toml::Value>,
    initial_outputs: Option<Vec<String>>,
    rules: Vec<RuleDocument>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDocument {
    x: Vec<String>,
    y: Vec<String>,
    cost: toml::Value,
}

fn value_text(v: &toml::Value, location: &str) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => Err(Error::parse(location, "expected a number or a string")),
    }
}

fn parse_pattern(token: &str, alphabet: &Alphabet, location: &str) -> Result<Pattern> {
    match token {
        WILDCARD_TOKEN => Ok(Pattern::Any),
        BOTTOM_TOKEN | "⊥" => Ok(Pattern::Bottom),
        t => alphabet
            .index_of(t)
            .map(Pattern::Symbol)
            .ok_or_else(|| Error::parse(location, format!("unknown token `{t}`"))),
    }
}

/// Parses and validates a problem document (TOML).
pub fn load_problem(document: &str) -> Result<LocalProblem> {
    load_problem_with(document, &BTreeMap::new())
}

/// Like [`load_problem`], overriding document parameters.
pub fn load_problem_with(document: &str, overrides: &BTreeMap<String, Rational>) -> Result<LocalProblem> {
    let doc: ProblemDocument = toml::from_str(document).map_err(|e| {
        let location = match e.span() {
            Some(span) => {
                let line = document[..span.start.min(document.len())].matches('\n').count() + 1;
                format!("line {line}")
            }
            None => "document".to_string(),
        };
        Error::parse(location, e.message().to_string())
    })?;
    let inputs = Alphabet::new(doc.inputs).map_err(|e| Error::parse("inputs", e.to_string()))?;
    let outputs = Alphabet::new(doc.outputs).map_err(|e| Error::parse("outputs", e.to_string()))?;
    let mut parameters = BTreeMap::new();
    for (name, v) in &doc.parameters {
        let loc = format!("parameters.{name}");
        let value = parse_rational(&value_text(v, &loc)?).map_err(|e| Error::parse(&loc, e.to_string()))?;
        parameters.insert(name.clone(), value);
    }
    for (name, v) in overrides {
        parameters.insert(name.clone(), *v);
    }
    let initial_outputs = match doc.initial_outputs {
        Some(tokens) => tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                outputs
                    .index_of(t)
                    .ok_or_else(|| Error::parse(format!("initial_outputs[{i}]"), format!("unknown token `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![0; doc.r],
    };
    let mut rules = Vec::with_capacity(doc.rules.len());
    for (i, rule) in doc.rules.iter().enumerate() {
        let xp = rule
            .x
            .iter()
            .enumerate()
            .map(|(j, t)| parse_pattern(t, &inputs, &format!("rules[{i}].x[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        let yp = rule
            .y
            .iter()
            .enumerate()
            .map(|(j, t)| parse_pattern(t, &outputs, &format!("rules[{i}].y[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        let loc = format!("rules[{i}].cost");
        let expr = CostExpr::parse(&value_text(&rule.cost, &loc)?).map_err(|e| Error::parse(&loc, e.to_string()))?;
        let mut used = Vec::new();
        expr.params(&mut used);
        if let Some(p) = used.iter().find(|p| !parameters.contains_key(*p)) {
            return Err(Error::parse(&loc, format!("unknown parameter `{p}`")));
        }
        rules.push((xp, yp, expr));
    }
    LocalProblem::new(
        doc.name,
        inputs,
        outputs,
        doc.r,
        rules,
        doc.aggregation,
        doc.objective,
        parameters,
        initial_outputs,
    )
}

const BUNDLED: &[(&str, &str)] = &[
    ("file-migration", include_str!("../problems/file-migration.toml")),
    ("load-balancing", include_str!("../problems/load-balancing.toml")),
    ("max-ind-set", include_str!("../problems/max-ind-set.toml")),
    ("min-dom-set", include_str!("../problems/min-dom-set.toml")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_document(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, d)| *d)
}

pub fn load_bundled(name: &str) -> Result<LocalProblem> {
    let doc = bundled_document(name)
        .ok_or_else(|| Error::InvalidArgument(format!("no bundled problem named `{name}`")))?;
    load_problem(doc)
}

/// The two-node file migration problem with migration cost `alpha`.
pub fn file_migration(alpha: Rational) -> Result<LocalProblem> {
    load_bundled("file-migration")?.with_parameter("alpha", alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{int, rat};

    fn fm(alpha: Rational) -> LocalProblem {
        file_migration(alpha).unwrap()
    }

    fn c(v: i128) -> ExtendedCost {
        ExtendedCost::Finite(int(v))
    }

    fn w(v: &[usize]) -> Vec<Option<usize>> {
        v.iter().map(|&s| Some(s)).collect()
    }

    #[test]
    fn lookup_matches_migration_table() {
        let p = fm(int(1));
        assert_eq!(p.lookup_cost(&w(&[1, 0]), &w(&[0, 0])).unwrap(), c(0));
        assert_eq!(p.lookup_cost(&w(&[1, 0]), &w(&[1, 0])).unwrap(), c(1));
        let p2 = fm(int(2));
        assert_eq!(p2.lookup_cost(&w(&[0, 1]), &w(&[1, 0])).unwrap(), c(3));
    }

    #[test]
    fn eight_migration_windows_in_listed_order() {
        let alpha = rat(3, 2);
        let p = fm(alpha);
        let windows = [
            (0, [0, 0]),
            (0, [1, 1]),
            (0, [1, 0]),
            (0, [0, 1]),
            (1, [1, 1]),
            (1, [0, 0]),
            (1, [0, 1]),
            (1, [1, 0]),
        ];
        let expected = [int(0), int(1), alpha, int(1) + alpha, int(0), int(1), alpha, int(1) + alpha];
        for ((x, y), e) in windows.iter().zip(expected) {
            for prev in [None, Some(0), Some(1)] {
                let got = p.lookup_cost(&[prev, Some(*x)], &w(y)).unwrap();
                assert_eq!(got, ExtendedCost::Finite(e));
            }
        }
        assert_eq!(p.rules().len(), 8);
        assert!(p.unreachable_rules().is_empty());
    }

    #[test]
    fn evaluate_uses_bottom_and_initial_outputs() {
        let p = fm(int(1));
        assert_eq!(p.evaluate(&[0, 0, 0], &[0, 0, 0]).unwrap().total, c(0));
        let b = p.evaluate(&[1, 1], &[1, 1]).unwrap();
        assert_eq!(b.per_step, vec![c(1), c(0)]);
        assert_eq!(b.total, c(1));
        assert!(p.evaluate(&[1], &[1, 1]).is_err());
        assert_eq!(p.evaluate(&[], &[]).unwrap().total, c(0));
    }

    #[test]
    fn independent_set_adjacent_selection_is_minus_infinity() {
        let p = load_bundled("max-ind-set").unwrap();
        let x = p.inputs().parse_sequence("5,7").unwrap();
        assert_eq!(p.evaluate(&x, &[1, 1]).unwrap().total, ExtendedCost::NegInf);
        assert_eq!(p.evaluate(&x, &[0, 1]).unwrap().total, c(7));
    }

    #[test]
    fn offline_opt_examples() {
        let p = fm(int(1));
        assert_eq!(p.offline_opt(&[0, 0, 0, 0]).unwrap(), (c(0), vec![0, 0, 0, 0]));
        assert_eq!(p.offline_opt(&[1, 1, 1, 1]).unwrap().0, c(1));
        assert_eq!(p.offline_opt(&[1, 0, 1, 0]).unwrap(), (c(2), vec![0, 0, 0, 0]));
        assert!(p.offline_opt(&[]).is_err());
    }

    #[test]
    fn bottleneck_opt_for_load_balancing() {
        let p = load_bundled("load-balancing").unwrap();
        // Two long jobs in a row can be split across machines.
        let x = p.inputs().parse_sequence("2,2,2").unwrap();
        let (v, y) = p.offline_opt(&x).unwrap();
        assert_eq!(v, c(1));
        assert_eq!(p.evaluate(&x, &y).unwrap().total, c(1));
    }

    #[test]
    fn missing_window_is_a_validation_error() {
        let doc = r#"
name = "broken"
inputs = ["0", "1"]
outputs = ["0", "1"]
r = 1
aggregation = "sum"
objective = "min"
initial_outputs = ["0"]
[[rules]]
x = ["*", "1"]
y = ["*", "*"]
cost = 1
[[rules]]
x = ["*", "0"]
y = ["*", "0"]
cost = 0
[[rules]]
x = ["1", "0"]
y = ["1", "1"]
cost = 0
[[rules]]
x = ["_|_", "0"]
y = ["*", "1"]
cost = 0
"#;
        match load_problem(doc) {
            Err(Error::Validation(msg)) => assert!(msg.contains("x=(0,0), y=(0,1)"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_name_the_field() {
        let doc = bundled_document("file-migration").unwrap().replace("[\"*\", \"0\"]", "[\"*\", \"9\"]");
        match load_problem(&doc) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("rules["), "{location}"),
            other => panic!("unexpected {other:?}"),
        }
        match load_problem("name = 3") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line") || location == "document"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bundled_dominating_set_has_infinite_rule() {
        let p = load_bundled("min-dom-set").unwrap();
        assert_eq!(p.horizon(), 2);
        assert!(p.rules().iter().any(|r| r.cost == ExtendedCost::PosInf));
        let x = p.inputs().parse_sequence("1,1,1").unwrap();
        // Node 1 undominated: y = (0,0,*) is infeasible once node 1 is checked.
        assert_eq!(p.evaluate(&x, &[0, 0, 0]).unwrap().total, ExtendedCost::PosInf);
    }

    #[test]
    fn rule_order_decides_overlaps() {
        let doc = r#"
name = "overlap"
inputs = ["a"]
outputs = ["b"]
r = 0
aggregation = "sum"
objective = "min"
[[rules]]
x = ["a"]
y = ["b"]
cost = "2"
[[rules]]
x = ["*"]
y = ["*"]
cost = "5"
"#;
        let p = load_problem(doc).unwrap();
        assert_eq!(p.lookup_cost(&[Some(0)], &[Some(0)]).unwrap(), c(2));
        assert_eq!(p.unreachable_rules(), vec![1]);
        assert_eq!(p.warnings().len(), 1);
    }

    #[test]
    fn sequence_parsing() {
        let a = Alphabet::binary();
        assert_eq!(a.parse_sequence("0110").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(a.parse_sequence("0,1").unwrap(), vec![0, 1]);
        assert!(a.parse_sequence("012").is_err());
        let b = Alphabet::new(["10", "20"]).unwrap();
        assert_eq!(b.parse_sequence("20,10").unwrap(), vec![1, 0]);
        assert_eq!(b.format_sequence(&[1, 0]), "20,10");
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["_|_"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }
}

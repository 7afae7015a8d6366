//! Exhaustive search for optimal time-local policies.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cost::{format_decimal, format_rational, int, ExtendedCost, Rational};
use crate::debruijn::{DualGraph, GraphBuilder};
use crate::error::{Error, Result};
use crate::policy::{policy_to_value, DeterministicPolicy, RandomizedPolicy, TablePolicy};
use crate::problem::LocalProblem;
use crate::ratio::{cycle_with_ratio_at_least, max_ratio_cycle, walk_costs, CycleRatio, RatioVerdict};
use crate::window::{checked_pow, WindowSpace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub horizon: usize,
    pub collect_all_optimal: bool,
    /// Force outputs on constant windows with free adversary self-loops.
    pub self_loop_forcing: bool,
    /// Discard candidates with a bad cycle of length at most
    /// `prune_cycle_length` before the full analysis. 0 disables.
    pub prune_cycle_length: usize,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
    pub grid_step: Rational,
    pub refinement_rounds: usize,
    pub max_candidates: u128,
}

impl SynthesisConfig {
    pub fn new(horizon: usize) -> Self {
        SynthesisConfig {
            horizon,
            collect_all_optimal: false,
            self_loop_forcing: true,
            prune_cycle_length: 2,
            jobs: 0,
            grid_step: Rational::new(1, 20),
            refinement_rounds: 6,
            max_candidates: 1 << 26,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::InvalidHorizon("T must be at least 1".into()));
        }
        if self.grid_step <= Rational::zero() || self.grid_step > Rational::one() {
            return Err(Error::InvalidArgument("grid step must lie in (0, 1]".into()));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

/// Outputs allowed on each constant input window.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Constraints {
    /// Window code to the outputs that keep its self-loop free.
    pub forced: BTreeMap<usize, Vec<usize>>,
}

impl Constraints {
    pub fn forced_count(&self) -> usize {
        self.forced.len()
    }
}

/// On a constant window `c^T` whose self-loop is free for some adversary
/// output, a finite-ratio policy must pick an output whose own self-loop is
/// free. The adversary's free outputs are always such outputs, so the
/// constraint is never empty.
pub fn self_loop_constraints(problem: &LocalProblem, horizon: usize) -> Result<Constraints> {
    let r = problem.horizon();
    let (nx, ny) = (problem.inputs().len(), problem.outputs().len());
    let space = WindowSpace::new(nx, horizon, crate::policy::MAX_TABLE_ENTRIES)?;
    let mut out = Constraints::default();
    for c in 0..nx {
        let xw = vec![Some(c); r + 1];
        let loop_cost = |y: usize| problem.lookup_cost(&xw, &vec![Some(y); r + 1]);
        let mut allowed = Vec::new();
        for y in 0..ny {
            if loop_cost(y)?.is_zero() {
                allowed.push(y);
            }
        }
        if allowed.is_empty() {
            continue;
        }
        let window = space.encode(&vec![c; horizon]);
        if allowed.len() < ny {
            out.forced.insert(window, allowed);
        }
    }
    Ok(out)
}

/// Per-window output domains and their mixed-radix enumeration.
#[derive(Debug, Clone)]
pub struct CandidateSpace {
    domains: Vec<Vec<usize>>,
    /// Windows with more than one allowed output, in code order.
    free: Vec<usize>,
    count: u128,
}

impl CandidateSpace {
    pub fn new(windows: usize, outputs: usize, constraints: &Constraints, guard: u128) -> Result<Self> {
        let domains: Vec<Vec<usize>> = (0..windows)
            .map(|w| constraints.forced.get(&w).cloned().unwrap_or_else(|| (0..outputs).collect()))
            .collect();
        let free: Vec<usize> = (0..windows).filter(|&w| domains[w].len() > 1).collect();
        let mut count: u128 = 1;
        for &w in &free {
            count = count.saturating_mul(domains[w].len() as u128);
        }
        if count > guard {
            return Err(Error::SearchSpaceTooLarge { count, limit: guard });
        }
        Ok(CandidateSpace { domains, free, count })
    }

    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn free_windows(&self) -> &[usize] {
        &self.free
    }

    /// Table number `index` in lexicographic order of the free entries.
    pub fn table(&self, mut index: u128) -> Vec<usize> {
        let mut table: Vec<usize> = self.domains.iter().map(|d| d[0]).collect();
        for &w in self.free.iter().rev() {
            let d = &self.domains[w];
            table[w] = d[(index % d.len() as u128) as usize];
            index /= d.len() as u128;
        }
        table
    }
}

/// Every table consistent with `constraints`, in lexicographic order.
pub fn enumerate_candidates(
    problem: &LocalProblem,
    horizon: usize,
    constraints: &Constraints,
    guard: u128,
) -> Result<impl Iterator<Item = DeterministicPolicy>> {
    let windows = checked_pow(problem.inputs().len(), horizon).ok_or(Error::Overflow)?;
    let space = CandidateSpace::new(windows, problem.outputs().len(), constraints, guard)?;
    let (x, y) = (problem.inputs().clone(), problem.outputs().clone());
    Ok((0..space.count()).map(move |i| {
        DeterministicPolicy::new(horizon, x.clone(), y.clone(), space.table(i)).expect("valid candidate")
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prune {
    Keep,
    Discard,
}

/// Simple cycles with at most `max_len` edges, as edge lists.
pub fn short_cycles(graph: &DualGraph, max_len: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let usable = |e: usize| graph.edge(e).w != ExtendedCost::PosInf;
    for start in 0..graph.vertex_count() {
        let mut path: Vec<usize> = Vec::new();
        let mut frames: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let out = graph.out_edges(v);
            if *pos == out.len() || path.len() >= max_len {
                frames.pop();
                path.pop();
                continue;
            }
            let e = out[*pos];
            *pos += 1;
            if !usable(e) {
                continue;
            }
            let t = graph.edge(e).target;
            if t == start {
                path.push(e);
                found.push(path.clone());
                path.pop();
            } else if t > start && path.len() + 1 < max_len && !path.iter().any(|&p| graph.edge(p).target == t) {
                path.push(e);
                frames.push((t, 0));
            }
        }
    }
    found
}

/// Discards a candidate if some cycle of length at most `max_len` has ratio
/// at least `incumbent` (strictly above it when `strict`).
pub fn short_cycle_prune(graph: &DualGraph, incumbent: CycleRatio, max_len: usize, strict: bool) -> Prune {
    for cycle in short_cycles(graph, max_len) {
        let Ok((q, w)) = walk_costs(graph, &cycle) else { continue };
        let r = CycleRatio::of(q, w);
        if r > incumbent || (!strict && r == incumbent) {
            return Prune::Discard;
        }
    }
    Prune::Keep
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynthesisStats {
    /// Candidates without any forcing, `|Y|^(|X|^T)`.
    pub total_space: u128,
    /// Candidates consistent with the forced entries.
    pub examined: u128,
    pub pruned_by_forced: u128,
    pub pruned_by_short_cycles: u64,
    pub fully_evaluated: u64,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub horizon: usize,
    pub ratio: CycleRatio,
    /// Optimal tables, sorted; one unless all optimal ones were requested.
    pub policies: Vec<DeterministicPolicy>,
    pub stats: SynthesisStats,
}

impl SynthesisResult {
    pub fn to_value(&self) -> Value {
        json!({
            "horizon": self.horizon,
            "kind": "deterministic",
            "ratio": self.ratio.to_string(),
            "ratio_decimal": ratio_decimal(&self.ratio),
            "policies": self.policies.iter().map(|p| policy_to_value(&TablePolicy::Deterministic(p.clone()))).collect::<Vec<_>>(),
            "stats": stats_value(&self.stats),
        })
    }
}

pub fn ratio_decimal(r: &CycleRatio) -> String {
    r.value().map_or("inf".to_string(), |v| format_decimal(&v, 4))
}

fn stats_value(s: &SynthesisStats) -> Value {
    json!({
        "total_space": s.total_space.to_string(),
        "examined": s.examined.to_string(),
        "pruned_by_forced": s.pruned_by_forced.to_string(),
        "pruned_by_short_cycles": s.pruned_by_short_cycles,
        "fully_evaluated": s.fully_evaluated,
        "elapsed_ms": s.elapsed_ms.to_string(),
    })
}

fn total_space(problem: &LocalProblem, horizon: usize) -> u128 {
    let windows = checked_pow(problem.inputs().len(), horizon).unwrap_or(usize::MAX);
    (problem.outputs().len() as u128).checked_pow(windows.min(u32::MAX as usize) as u32).unwrap_or(u128::MAX)
}

fn constraints_for(problem: &LocalProblem, config: &SynthesisConfig) -> Result<Constraints> {
    if config.self_loop_forcing {
        self_loop_constraints(problem, config.horizon)
    } else {
        Ok(Constraints::default())
    }
}

/// Best incumbent so far, ordered by ratio and then candidate index.
struct Incumbent(Mutex<Option<(CycleRatio, u128)>>);

impl Incumbent {
    fn get(&self) -> Option<(CycleRatio, u128)> {
        *self.0.lock().expect("incumbent lock")
    }

    fn offer(&self, ratio: CycleRatio, index: u128) {
        let mut guard = self.0.lock().expect("incumbent lock");
        if guard.is_none_or(|(r, i)| ratio < r || (ratio == r && index < i)) {
            *guard = Some((ratio, index));
        }
    }
}

/// Optimal deterministic policies by exhaustive search.
pub fn synthesize_det(problem: &LocalProblem, config: &SynthesisConfig) -> Result<SynthesisResult> {
    config.validate()?;
    let start = Instant::now();
    let builder = GraphBuilder::new(problem, config.horizon)?;
    let constraints = constraints_for(problem, config)?;
    let windows = checked_pow(problem.inputs().len(), config.horizon).ok_or(Error::Overflow)?;
    let space = CandidateSpace::new(windows, problem.outputs().len(), &constraints, config.max_candidates)?;
    let incumbent = Incumbent(Mutex::new(None));
    let pruned = AtomicU64::new(0);
    let evaluated = AtomicU64::new(0);
    let collect = config.collect_all_optimal;

    let evaluate = |index: u128| -> Result<Option<(CycleRatio, u128)>> {
        let table = space.table(index);
        let graph = builder.assemble(builder.det_costs(&table))?;
        if config.prune_cycle_length > 0 {
            if let Some((best, best_index)) = incumbent.get() {
                // Ties may only be dropped if a lower-indexed candidate
                // already achieves them.
                let strict = collect || best_index > index;
                if short_cycle_prune(&graph, best, config.prune_cycle_length, strict) == Prune::Discard {
                    pruned.fetch_add(1, Ordering::Relaxed);
                    return Ok(None);
                }
            }
        }
        evaluated.fetch_add(1, Ordering::Relaxed);
        let ratio = max_ratio_cycle(&graph)?.ratio();
        incumbent.offer(ratio, index);
        Ok(Some((ratio, index)))
    };

    let results: Vec<(CycleRatio, u128)> = config.pool()?.install(|| {
        (0..space.count() as u64)
            .into_par_iter()
            .map(|i| evaluate(i as u128))
            .filter_map(|r| r.transpose())
            .collect::<Result<Vec<_>>>()
    })?;

    let (best, best_index) = incumbent.get().ok_or(Error::NoCycle)?;
    let mut indices: Vec<u128> = if collect {
        results.iter().filter(|(r, _)| *r == best).map(|(_, i)| *i).collect()
    } else {
        vec![best_index]
    };
    indices.sort_unstable();
    let mut policies: Vec<DeterministicPolicy> = indices
        .into_iter()
        .map(|i| DeterministicPolicy::new(config.horizon, problem.inputs().clone(), problem.outputs().clone(), space.table(i)))
        .collect::<Result<_>>()?;
    policies.sort();

    let total = total_space(problem, config.horizon);
    let stats = SynthesisStats {
        total_space: total,
        examined: space.count(),
        pruned_by_forced: total.saturating_sub(space.count()),
        pruned_by_short_cycles: pruned.into_inner(),
        fully_evaluated: evaluated.into_inner(),
        elapsed_ms: start.elapsed().as_millis(),
    };
    Ok(SynthesisResult { horizon: config.horizon, ratio: best, policies, stats })
}

/// Outcome of a lower-bound check over all candidates.
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub bound: Rational,
    /// True if every candidate has a cycle with ratio at least `bound`.
    pub holds: bool,
    /// A candidate whose ratio is below the bound, if any.
    pub counterexample: Option<DeterministicPolicy>,
    pub examined: u128,
}

/// Checks that no candidate policy achieves a ratio below `bound`. Each
/// candidate only needs one cycle of ratio at least `bound`.
pub fn verify_lower_bound(problem: &LocalProblem, config: &SynthesisConfig, bound: Rational) -> Result<LowerBoundReport> {
    config.validate()?;
    let builder = GraphBuilder::new(problem, config.horizon)?;
    let constraints = constraints_for(problem, config)?;
    let windows = checked_pow(problem.inputs().len(), config.horizon).ok_or(Error::Overflow)?;
    let space = CandidateSpace::new(windows, problem.outputs().len(), &constraints, config.max_candidates)?;
    let failed = AtomicBool::new(false);
    let bound_ratio = CycleRatio::Finite(bound);
    let witness: Mutex<Option<u128>> = Mutex::new(None);
    config.pool()?.install(|| {
        (0..space.count() as u64).into_par_iter().try_for_each(|i| -> Result<()> {
            if failed.load(Ordering::Relaxed) {
                return Ok(());
            }
            let table = space.table(i as u128);
            let graph = builder.assemble(builder.det_costs(&table))?;
            let cheap = config.prune_cycle_length > 0
                && short_cycle_prune(&graph, bound_ratio, config.prune_cycle_length, false) == Prune::Discard;
            if cheap || cycle_with_ratio_at_least(&graph, bound)?.is_some() {
                return Ok(());
            }
            failed.store(true, Ordering::Relaxed);
            let mut w = witness.lock().expect("witness lock");
            if w.is_none_or(|j| (i as u128) < j) {
                *w = Some(i as u128);
            }
            Ok(())
        })
    })?;
    let counterexample = witness
        .into_inner()
        .expect("witness lock")
        .map(|i| DeterministicPolicy::new(config.horizon, problem.inputs().clone(), problem.outputs().clone(), space.table(i)))
        .transpose()?;
    Ok(LowerBoundReport { bound, holds: counterexample.is_none(), counterexample, examined: space.count() })
}

#[derive(Debug, Clone)]
pub struct RandomizedSynthesisResult {
    pub policy: RandomizedPolicy,
    pub ratio: CycleRatio,
    pub grid_points: u128,
    pub refinement_improvements: usize,
    pub elapsed_ms: u128,
}

impl RandomizedSynthesisResult {
    pub fn to_value(&self) -> Value {
        json!({
            "horizon": self.policy.horizon(),
            "kind": "randomized",
            "ratio": self.ratio.to_string(),
            "ratio_decimal": ratio_decimal(&self.ratio),
            "policies": [policy_to_value(&TablePolicy::Randomized(self.policy.clone()))],
            "stats": {
                "grid_points": self.grid_points.to_string(),
                "refinement_improvements": self.refinement_improvements,
                "elapsed_ms": self.elapsed_ms.to_string(),
            },
        })
    }
}

fn grid(step: Rational) -> Vec<Rational> {
    let mut points = Vec::new();
    let mut p = Rational::zero();
    while p < Rational::one() {
        points.push(p);
        p += step;
    }
    points.push(Rational::one());
    points
}

fn rand_ratio(builder: &GraphBuilder, table: &[Rational]) -> Result<CycleRatio> {
    let graph = builder.assemble(builder.rand_costs(table)?)?;
    Ok(max_ratio_cycle(&graph)?.ratio())
}

/// Coordinate sweeps per refinement step size.
const MAX_SWEEPS: usize = 64;

/// Best-effort randomized policy: a grid sweep over the free windows
/// followed by local refinement with a halving step. Each step moves one
/// or two entries.
pub fn synthesize_rand(problem: &LocalProblem, config: &SynthesisConfig) -> Result<RandomizedSynthesisResult> {
    config.validate()?;
    let start = Instant::now();
    let builder = GraphBuilder::new(problem, config.horizon)?;
    let windows = checked_pow(problem.inputs().len(), config.horizon).ok_or(Error::Overflow)?;
    builder.rand_costs(&vec![Rational::zero(); windows])?;
    let constraints = constraints_for(problem, config)?;
    let mut base = vec![Rational::zero(); windows];
    let mut free = Vec::new();
    for (w, slot) in base.iter_mut().enumerate() {
        match constraints.forced.get(&w).map(Vec::as_slice) {
            Some([y]) => *slot = int(*y as i128),
            _ => free.push(w),
        }
    }
    let points = grid(config.grid_step);
    let mut count: u128 = 1;
    for _ in &free {
        count = count.saturating_mul(points.len() as u128);
    }
    if count > config.max_candidates {
        return Err(Error::SearchSpaceTooLarge { count, limit: config.max_candidates });
    }
    let table_at = |mut index: u128| {
        let mut t = base.clone();
        for &w in free.iter().rev() {
            t[w] = points[(index % points.len() as u128) as usize];
            index /= points.len() as u128;
        }
        t
    };
    let scored: Vec<(CycleRatio, u128)> = config.pool()?.install(|| {
        (0..count as u64)
            .into_par_iter()
            .map(|i| rand_ratio(&builder, &table_at(i as u128)).map(|r| (r, i as u128)))
            .collect::<Result<Vec<_>>>()
    })?;
    let (mut best, best_index) = scored
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .ok_or(Error::NoCycle)?;
    let mut table = table_at(best_index);

    let mut step = config.grid_step / int(2);
    let mut improvements = 0;
    let in_range = |v: Rational| v >= Rational::zero() && v <= Rational::one();
    for _ in 0..config.refinement_rounds {
        let mut moves: Vec<Vec<(usize, Rational)>> = Vec::new();
        for (i, &a) in free.iter().enumerate() {
            for da in [-step, step] {
                moves.push(vec![(a, da)]);
            }
            for &b in &free[i + 1..] {
                for da in [-step, step] {
                    for db in [-step, step] {
                        moves.push(vec![(a, da), (b, db)]);
                    }
                }
            }
        }
        for _sweep in 0..MAX_SWEEPS {
            let mut improved = false;
            for m in &moves {
                if !m.iter().all(|&(w, d)| in_range(table[w] + d)) {
                    continue;
                }
                let mut trial = table.clone();
                for &(w, d) in m {
                    trial[w] += d;
                }
                let r = rand_ratio(&builder, &trial)?;
                if r < best {
                    best = r;
                    table = trial;
                    improvements += 1;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        step /= int(2);
    }
    let policy = RandomizedPolicy::new(config.horizon, problem.inputs().clone(), problem.outputs().clone(), table)?;
    Ok(RandomizedSynthesisResult {
        policy,
        ratio: best,
        grid_points: count,
        refinement_improvements: improvements,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Re-evaluates a policy from scratch; used to check reported optima.
pub fn reevaluate(problem: &LocalProblem, policy: &DeterministicPolicy) -> Result<RatioVerdict> {
    let graph = crate::debruijn::build_graph_det(problem, policy)?;
    max_ratio_cycle(&graph)
}

/// Human-readable one-line summary of a ratio.
pub fn describe_ratio(r: &CycleRatio) -> String {
    match r.value() {
        Some(v) => format!("{} ({})", format_rational(&v), format_decimal(&v, 4)),
        None => "inf".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::rat;
    use crate::problem::file_migration;

    fn synth(alpha: Rational, t: usize) -> SynthesisResult {
        synthesize_det(&file_migration(alpha).unwrap(), &SynthesisConfig::new(t)).unwrap()
    }

    #[test]
    fn forced_entries_for_migration() {
        let p = file_migration(int(1)).unwrap();
        let c = self_loop_constraints(&p, 3).unwrap();
        assert_eq!(c.forced_count(), 2);
        assert_eq!(c.forced[&0], vec![0]);
        assert_eq!(c.forced[&7], vec![1]);
        assert_eq!(enumerate_candidates(&p, 3, &c, 1 << 26).unwrap().count(), 64);
        assert_eq!(enumerate_candidates(&p, 1, &self_loop_constraints(&p, 1).unwrap(), 1 << 26).unwrap().count(), 1);
        assert_eq!(enumerate_candidates(&p, 2, &self_loop_constraints(&p, 2).unwrap(), 1 << 26).unwrap().count(), 4);
        let c4 = self_loop_constraints(&p, 4).unwrap();
        assert_eq!(enumerate_candidates(&p, 4, &c4, 1 << 26).unwrap().count(), 1 << 14);
        let c5 = self_loop_constraints(&p, 5).unwrap();
        assert!(matches!(
            enumerate_candidates(&p, 5, &c5, 1 << 26),
            Err(Error::SearchSpaceTooLarge { count, .. }) if count == 1 << 30
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let p = file_migration(int(1)).unwrap();
        let c = self_loop_constraints(&p, 2).unwrap();
        let tables: Vec<Vec<usize>> = enumerate_candidates(&p, 2, &c, 100).unwrap().map(|t| t.table().to_vec()).collect();
        assert_eq!(tables, vec![vec![0, 0, 0, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 1, 1]]);
    }

    #[test]
    fn small_table_cells() {
        assert_eq!(synth(int(1), 1).ratio, CycleRatio::Finite(int(4)));
        assert_eq!(synth(rat(1, 2), 2).ratio, CycleRatio::Finite(int(3)));
        assert_eq!(synth(rat(1, 10), 1).ratio, CycleRatio::Finite(int(11)));
        assert_eq!(synth(rat(3, 10), 1).ratio, CycleRatio::Finite(rat(13, 3)));
    }

    #[test]
    fn pruning_only_drops_non_improving_candidates() {
        let g = DualGraph::from_edges(
            2,
            vec![
                crate::debruijn::Edge { source: 0, target: 1, input: 0, adversary: 0, q: ExtendedCost::Finite(int(2)), w: ExtendedCost::Finite(int(1)) },
                crate::debruijn::Edge { source: 1, target: 0, input: 0, adversary: 0, q: ExtendedCost::Finite(int(4)), w: ExtendedCost::Finite(int(1)) },
            ],
        )
        .unwrap();
        assert_eq!(short_cycle_prune(&g, CycleRatio::Finite(int(4)), 2, false), Prune::Keep);
        assert_eq!(short_cycle_prune(&g, CycleRatio::Finite(int(3)), 2, false), Prune::Discard);
        assert_eq!(short_cycle_prune(&g, CycleRatio::Finite(int(3)), 2, true), Prune::Keep);
        let g = DualGraph::from_edges(
            1,
            vec![crate::debruijn::Edge { source: 0, target: 0, input: 0, adversary: 0, q: ExtendedCost::Finite(int(1)), w: ExtendedCost::ZERO }],
        )
        .unwrap();
        assert_eq!(short_cycle_prune(&g, CycleRatio::Finite(int(100)), 2, true), Prune::Discard);
    }

    #[test]
    fn degenerate_grid_recovers_deterministic() {
        let p = file_migration(int(1)).unwrap();
        let mut cfg = SynthesisConfig::new(2);
        cfg.grid_step = int(1);
        cfg.refinement_rounds = 0;
        let r = synthesize_rand(&p, &cfg).unwrap();
        assert_eq!(r.ratio, synthesize_det(&p, &cfg).unwrap().ratio);
    }

    #[test]
    fn lower_bound_mode() {
        let p = file_migration(int(1)).unwrap();
        let cfg = SynthesisConfig::new(2);
        assert!(verify_lower_bound(&p, &cfg, int(4)).unwrap().holds);
        assert!(verify_lower_bound(&p, &SynthesisConfig::new(3), int(4)).unwrap().holds);
        let r = verify_lower_bound(&p, &cfg, int(5)).unwrap();
        assert!(!r.holds);
        assert!(r.counterexample.is_some());
    }
}

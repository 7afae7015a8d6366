//! Maximum cost-ratio cycles of dual-weighted graphs.
//!
//! The ratio of a cycle with policy cost `q` and adversary cost `w` is `q/w`
//! for `w > 0`, 1 when `q = w = 0`, and `+∞` otherwise. Edges with `w = +∞`
//! can never be part of an adversary's input and are ignored. Costs must be
//! non-negative.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_traits::Signed;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde_json::{json, Value};

use crate::cost::{format_rational, format_short, ExtendedCost, Rational};
use crate::debruijn::{induced_input, DualGraph};
use crate::error::{Error, Result};
use crate::policy::TablePolicy;
use crate::problem::LocalProblem;

/// Graphs up to this size are accepted by the brute-force oracle.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 14;

#[derive(Debug, Clone, Copy)]
pub enum CycleRatio {
    Finite(Rational),
    /// `q = w = 0`, counted as 1.
    Unit,
    Infinite,
}

impl CycleRatio {
    /// Numeric value; `None` for `+∞`.
    pub fn value(&self) -> Option<Rational> {
        match self {
            CycleRatio::Finite(r) => Some(*r),
            CycleRatio::Unit => Some(Rational::from_integer(1)),
            CycleRatio::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CycleRatio::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        self.value().map_or(f64::INFINITY, |v| crate::cost::rational_to_f64(&v))
    }

    /// The case split on `(q, w)`.
    pub fn of(q: ExtendedCost, w: ExtendedCost) -> CycleRatio {
        match (q, w) {
            (_, ExtendedCost::Finite(w)) if w.is_positive() => match q {
                ExtendedCost::Finite(q) => CycleRatio::Finite(q / w),
                _ => CycleRatio::Infinite,
            },
            (q, w) if q.is_zero() && w.is_zero() => CycleRatio::Unit,
            _ => CycleRatio::Infinite,
        }
    }
}

impl PartialEq for CycleRatio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CycleRatio {}

impl PartialOrd for CycleRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycleRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.value(), other.value()) {
            (Some(a), Some(b)) => a.cmp(&b),
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
        }
    }
}

impl fmt::Display for CycleRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => f.write_str(&format_rational(&v)),
            None => f.write_str("inf"),
        }
    }
}

/// A directed cycle with its costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    /// Vertices `v_0, …, v_{k-1}`; the cycle returns to `v_0`.
    pub vertices: Vec<usize>,
    /// Edge indices; edge `i` leaves `vertices[i]`.
    pub edges: Vec<usize>,
    pub q: ExtendedCost,
    pub w: ExtendedCost,
    pub ratio: CycleRatio,
    /// Input symbols consumed along the cycle.
    pub input: Vec<usize>,
}

impl CycleReport {
    pub fn from_edges(graph: &DualGraph, edges: Vec<usize>) -> Result<Self> {
        let input = induced_input(graph, &edges)?;
        let (q, w) = walk_costs(graph, &edges)?;
        Ok(CycleReport {
            vertices: edges.iter().map(|&e| graph.edge(e).source).collect(),
            edges,
            q,
            w,
            ratio: CycleRatio::of(q, w),
            input,
        })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_value(&self, graph: &DualGraph, problem: Option<&LocalProblem>) -> Value {
        let input = match problem {
            Some(p) => json!(p.inputs().format_sequence(&self.input)),
            None => json!(self.input),
        };
        json!({
            "vertices": self.vertices.iter().map(|&v| graph.vertex_label(v)).collect::<Vec<_>>(),
            "adversary_outputs": self.edges.iter().map(|&e| {
                let b = graph.edge(e).adversary;
                problem.map_or(json!(b), |p| json!(p.outputs().symbol(b)))
            }).collect::<Vec<_>>(),
            "q": self.q.to_string(),
            "w": self.w.to_string(),
            "ratio": self.ratio.to_string(),
            "induced_input": input,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioVerdict {
    pub best: CycleReport,
    pub classification: Classification,
    /// Improvement steps of the parametric search, or cycles enumerated by
    /// the brute-force oracle.
    pub iterations: usize,
}

impl RatioVerdict {
    pub fn ratio(&self) -> CycleRatio {
        self.best.ratio
    }

    pub fn to_value(&self, graph: &DualGraph, problem: Option<&LocalProblem>) -> Value {
        let ratio = self.best.ratio;
        json!({
            "classification": match self.classification {
                Classification::Finite => "finite",
                Classification::Infinite => "infinite",
            },
            "ratio": ratio.to_string(),
            "ratio_decimal": ratio.value().map_or("inf".to_string(), |v| format_short(&v)),
            "witness": self.best.to_value(graph, problem),
        })
    }
}

/// Total `(q, w)` of a closed walk.
pub fn walk_costs(graph: &DualGraph, edges: &[usize]) -> Result<(ExtendedCost, ExtendedCost)> {
    let mut q = ExtendedCost::ZERO;
    let mut w = ExtendedCost::ZERO;
    for &e in edges {
        q = q.checked_add(graph.edge(e).q)?;
        w = w.checked_add(graph.edge(e).w)?;
    }
    Ok((q, w))
}

/// Ratio of a closed walk given as edge indices.
pub fn walk_ratio(graph: &DualGraph, edges: &[usize]) -> Result<CycleRatio> {
    induced_input(graph, edges)?;
    let (q, w) = walk_costs(graph, edges)?;
    Ok(CycleRatio::of(q, w))
}

/// Splits a closed walk into simple cycles.
pub fn decompose_closed_walk(graph: &DualGraph, edges: &[usize]) -> Result<Vec<Vec<usize>>> {
    induced_input(graph, edges)?;
    let mut cycles = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut position = vec![usize::MAX; graph.vertex_count()];
    let start = graph.edge(edges[0]).source;
    position[start] = 0;
    let mut vertices = vec![start];
    for &e in edges {
        stack.push(e);
        let t = graph.edge(e).target;
        if position[t] != usize::MAX {
            let at = position[t];
            let cycle: Vec<usize> = stack.drain(at..).collect();
            for v in vertices.drain(at + 1..) {
                position[v] = usize::MAX;
            }
            cycles.push(cycle);
        } else {
            position[t] = vertices.len();
            vertices.push(t);
        }
    }
    debug_assert!(stack.is_empty());
    Ok(cycles)
}

fn check_weights(graph: &DualGraph) -> Result<()> {
    let mut neg_inf = false;
    let mut pos_inf = false;
    for e in graph.edges() {
        for c in [e.q, e.w] {
            match c {
                ExtendedCost::NegInf => neg_inf = true,
                ExtendedCost::PosInf => pos_inf = true,
                ExtendedCost::Finite(v) if v.is_negative() => {
                    return Err(Error::InvalidWeights(format!(
                        "edge {} -> {} has negative cost {}",
                        e.source,
                        e.target,
                        format_rational(&v)
                    )))
                }
                _ => {}
            }
        }
    }
    match (neg_inf, pos_inf) {
        (true, true) => Err(Error::InfinityClash),
        (true, false) => Err(Error::InvalidWeights("cost -inf is not allowed".into())),
        _ => Ok(()),
    }
}

/// Strongly connected component id of each vertex, over the edges for which
/// `keep` holds.
fn components(graph: &DualGraph, keep: &dyn Fn(usize) -> bool) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut g = DiGraph::<(), ()>::with_capacity(n, graph.edges().len());
    for _ in 0..n {
        g.add_node(());
    }
    for (i, e) in graph.edges().iter().enumerate() {
        if keep(i) {
            g.add_edge(NodeIndex::new(e.source), NodeIndex::new(e.target), ());
        }
    }
    let mut comp = vec![0; n];
    for (c, scc) in tarjan_scc(&g).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = c;
        }
    }
    comp
}

/// Shortest path (in edges) from `from` to `to` using edges inside one
/// component; `None` if unreachable.
fn path_within(graph: &DualGraph, from: usize, to: usize, keep: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut pred = vec![usize::MAX; graph.vertex_count()];
    let mut seen = vec![false; graph.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &e in graph.out_edges(v) {
            let t = graph.edge(e).target;
            if !keep(e) || seen[t] {
                continue;
            }
            seen[t] = true;
            pred[t] = e;
            if t == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let e = pred[cur];
                    path.push(e);
                    cur = graph.edge(e).source;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(t);
        }
    }
    None
}

/// A cycle through some edge satisfying `trigger` inside the subgraph of
/// edges satisfying `keep`.
fn cycle_through(graph: &DualGraph, keep: &dyn Fn(usize) -> bool, trigger: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
    let comp = components(graph, keep);
    for (i, e) in graph.edges().iter().enumerate() {
        if keep(i) && trigger(i) && comp[e.source] == comp[e.target] {
            let inside = |f: usize| keep(f) && comp[graph.edge(f).source] == comp[e.source] && comp[graph.edge(f).target] == comp[e.source];
            let mut cycle = vec![i];
            cycle.extend(path_within(graph, e.target, e.source, &inside)?);
            return Some(cycle);
        }
    }
    None
}

/// Any cycle in the subgraph of edges satisfying `keep`.
fn any_cycle(graph: &DualGraph, keep: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
    cycle_through(graph, keep, &|_| true)
}

/// Integer-scaled costs of the finite edges.
struct Scaled {
    q: Vec<i128>,
    w: Vec<i128>,
    usable: Vec<bool>,
}

fn scale(graph: &DualGraph, usable: &[bool]) -> Result<Scaled> {
    let mut lcm: i128 = 1;
    for (i, e) in graph.edges().iter().enumerate() {
        if usable[i] {
            for c in [e.q, e.w] {
                if let ExtendedCost::Finite(v) = c {
                    lcm = lcm.lcm(v.denom());
                    if lcm > 1i128 << 80 {
                        return Err(Error::Overflow);
                    }
                }
            }
        }
    }
    let to_int = |c: ExtendedCost| -> Result<i128> {
        let v = c.as_finite().unwrap_or_default();
        v.numer().checked_mul(lcm / v.denom()).ok_or(Error::Overflow)
    };
    let mut q = Vec::with_capacity(graph.edges().len());
    let mut w = Vec::with_capacity(graph.edges().len());
    for (i, e) in graph.edges().iter().enumerate() {
        if usable[i] {
            q.push(to_int(e.q)?);
            w.push(to_int(e.w)?);
        } else {
            q.push(0);
            w.push(0);
        }
    }
    Ok(Scaled { q, w, usable: usable.to_vec() })
}

/// A cycle of positive weight under `d·q − p·w`, i.e. with ratio above
/// `p/d`, found by Bellman-Ford on the negated weights.
fn improving_cycle(graph: &DualGraph, s: &Scaled, p: i128, d: i128) -> Result<Option<Vec<usize>>> {
    let n = graph.vertex_count();
    let mut weight = vec![0i128; graph.edges().len()];
    for i in 0..weight.len() {
        if s.usable[i] {
            let a = p.checked_mul(s.w[i]).ok_or(Error::Overflow)?;
            let b = d.checked_mul(s.q[i]).ok_or(Error::Overflow)?;
            weight[i] = a.checked_sub(b).ok_or(Error::Overflow)?;
        }
    }
    let mut dist = vec![0i128; n];
    let mut pred = vec![usize::MAX; n];
    let mut last_changed = None;
    for _round in 0..=n {
        last_changed = None;
        for (i, e) in graph.edges().iter().enumerate() {
            if !s.usable[i] {
                continue;
            }
            let cand = dist[e.source].checked_add(weight[i]).ok_or(Error::Overflow)?;
            if cand < dist[e.target] {
                dist[e.target] = cand;
                pred[e.target] = i;
                last_changed = Some(e.target);
            }
        }
        if last_changed.is_none() {
            return Ok(None);
        }
    }
    let mut v = last_changed.expect("relaxed in the final round");
    for _ in 0..n {
        v = graph.edge(pred[v]).source;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let e = pred[v];
        cycle.push(e);
        v = graph.edge(e).source;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Ok(Some(cycle))
}

/// Among the cycles of ratio exactly `p/d` (the maximum) with positive
/// weight, one through the lowest-numbered vertex possible, starting there.
fn canonical_cycle(graph: &DualGraph, s: &Scaled, p: i128, d: i128) -> Result<Option<Vec<usize>>> {
    let n = graph.vertex_count();
    let mut gain = vec![0i128; graph.edges().len()];
    for i in 0..gain.len() {
        if s.usable[i] {
            let a = d.checked_mul(s.q[i]).ok_or(Error::Overflow)?;
            let b = p.checked_mul(s.w[i]).ok_or(Error::Overflow)?;
            gain[i] = a.checked_sub(b).ok_or(Error::Overflow)?;
        }
    }
    // Longest distances; no cycle has positive gain at the maximum ratio.
    let mut dist = vec![0i128; n];
    for _ in 0..=n {
        let mut changed = false;
        for (i, e) in graph.edges().iter().enumerate() {
            if s.usable[i] {
                let cand = dist[e.source].checked_add(gain[i]).ok_or(Error::Overflow)?;
                if cand > dist[e.target] {
                    dist[e.target] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let tight = |i: usize| {
        let e = graph.edge(i);
        s.usable[i] && dist[e.source] + gain[i] == dist[e.target]
    };
    let comp = components(graph, &tight);
    let mut weighted = vec![false; n];
    for (i, e) in graph.edges().iter().enumerate() {
        if tight(i) && s.w[i] > 0 && comp[e.source] == comp[e.target] {
            weighted[comp[e.source]] = true;
        }
    }
    let Some(start) = (0..n).find(|&v| weighted[comp[v]]) else { return Ok(None) };
    let inside = |i: usize| {
        let e = graph.edge(i);
        tight(i) && comp[e.source] == comp[start] && comp[e.target] == comp[start]
    };
    // Shortest closed walk from `start` using at least one weighted edge.
    let state = |v: usize, flag: bool| 2 * v + usize::from(flag);
    let mut pred = vec![(usize::MAX, usize::MAX); 2 * n];
    let mut seen = vec![false; 2 * n];
    seen[state(start, false)] = true;
    let mut queue = VecDeque::from([(start, false)]);
    let goal = state(start, true);
    while let Some((v, flag)) = queue.pop_front() {
        if seen[goal] {
            break;
        }
        for &i in graph.out_edges(v) {
            if !inside(i) {
                continue;
            }
            let t = graph.edge(i).target;
            let f = flag || s.w[i] > 0;
            if seen[state(t, f)] {
                continue;
            }
            seen[state(t, f)] = true;
            pred[state(t, f)] = (i, state(v, flag));
            queue.push_back((t, f));
        }
    }
    if !seen[goal] {
        return Ok(None);
    }
    let mut walk = Vec::new();
    let mut cur = goal;
    while cur != state(start, false) {
        let (i, prev) = pred[cur];
        walk.push(i);
        cur = prev;
    }
    walk.reverse();
    let cycles = decompose_closed_walk(graph, &walk)?;
    let mut pick = cycles
        .iter()
        .find(|c| c.iter().any(|&i| graph.edge(i).source == start) && c.iter().any(|&i| s.w[i] > 0))
        .or_else(|| cycles.iter().find(|c| c.iter().any(|&i| s.w[i] > 0)))
        .cloned()
        .expect("a weighted cycle");
    let lowest = (0..pick.len()).min_by_key(|&k| graph.edge(pick[k]).source).expect("non-empty cycle");
    pick.rotate_left(lowest);
    Ok(Some(pick))
}

fn scaled_ratio(s: &Scaled, cycle: &[usize]) -> (i128, i128) {
    let q: i128 = cycle.iter().map(|&e| s.q[e]).sum();
    let w: i128 = cycle.iter().map(|&e| s.w[e]).sum();
    (q, w)
}

enum Search {
    Done(RatioVerdict),
    Continue { graph_usable: Vec<bool>, zero_cycle: Option<Vec<usize>> },
}

fn prepare(graph: &DualGraph) -> Result<Search> {
    if graph.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_weights(graph)?;
    let usable = |e: usize| graph.edge(e).w != ExtendedCost::PosInf;
    let infinite = |e: usize| graph.edge(e).q == ExtendedCost::PosInf;
    if let Some(cycle) = cycle_through(graph, &usable, &infinite) {
        return Ok(Search::Done(infinite_verdict(graph, cycle)?));
    }
    let zero_w = |e: usize| usable(e) && graph.edge(e).w.is_zero();
    let positive_q = |e: usize| !graph.edge(e).q.is_zero();
    if let Some(cycle) = cycle_through(graph, &zero_w, &positive_q) {
        return Ok(Search::Done(infinite_verdict(graph, cycle)?));
    }
    let finite: Vec<bool> = (0..graph.edges().len()).map(|e| usable(e) && !infinite(e)).collect();
    let zero_cycle = any_cycle(graph, &zero_w);
    Ok(Search::Continue { graph_usable: finite, zero_cycle })
}

fn infinite_verdict(graph: &DualGraph, cycle: Vec<usize>) -> Result<RatioVerdict> {
    let best = CycleReport::from_edges(graph, cycle)?;
    debug_assert!(best.ratio.is_infinite());
    Ok(RatioVerdict { best, classification: Classification::Infinite, iterations: 0 })
}

/// Parametric search; stops early once the ratio reaches `stop_at`.
fn lawler(graph: &DualGraph, stop_at: Option<Rational>) -> Result<RatioVerdict> {
    let (usable, zero_cycle) = match prepare(graph)? {
        Search::Done(v) => return Ok(v),
        Search::Continue { graph_usable, zero_cycle } => (graph_usable, zero_cycle),
    };
    let keep = |e: usize| usable[e];
    let mut cycle = any_cycle(graph, &keep).ok_or(Error::NoCycle)?;
    let s = scale(graph, &usable)?;
    let (mut p, mut d) = scaled_ratio(&s, &cycle);
    if d == 0 {
        // Zero cycle: its ratio is 1.
        p = 1;
        d = 1;
    }
    let reached = |p: i128, d: i128| stop_at.is_some_and(|r| Rational::new(p, d) >= r);
    let mut iterations = 0;
    while !reached(p, d) {
        let Some(better) = improving_cycle(graph, &s, p, d)? else { break };
        let (np, nd) = scaled_ratio(&s, &better);
        debug_assert!(nd > 0 && Rational::new(np, nd) > Rational::new(p, d));
        let g = np.gcd(&nd);
        (p, d) = (np / g, nd / g);
        cycle = better;
        iterations += 1;
    }
    if Rational::new(p, d) < Rational::from_integer(1) && zero_cycle.is_some() {
        cycle = zero_cycle.expect("checked");
    } else if stop_at.is_none() {
        if let Some(c) = canonical_cycle(graph, &s, p, d)? {
            cycle = c;
        }
    }
    let best = CycleReport::from_edges(graph, cycle)?;
    Ok(RatioVerdict { best, classification: Classification::Finite, iterations })
}

/// Maximum ratio over all directed cycles, with a witness.
pub fn max_ratio_cycle(graph: &DualGraph) -> Result<RatioVerdict> {
    lawler(graph, None)
}

/// A cycle with ratio at least `threshold`, if one exists.
pub fn cycle_with_ratio_at_least(graph: &DualGraph, threshold: Rational) -> Result<Option<CycleReport>> {
    let v = lawler(graph, Some(threshold))?;
    let hit = match v.best.ratio.value() {
        None => true,
        Some(r) => r >= threshold,
    };
    Ok(hit.then_some(v.best))
}

/// Enumerates every simple cycle; only for small graphs.
pub fn brute_force_max_ratio(graph: &DualGraph) -> Result<RatioVerdict> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::GraphTooLarge { vertices: n as u128, limit: BRUTE_FORCE_MAX_VERTICES });
    }
    check_weights(graph)?;
    let usable = |e: usize| graph.edge(e).w != ExtendedCost::PosInf;
    let mut best: Option<(CycleRatio, Vec<usize>)> = None;
    let mut count = 0usize;
    let mut on_path = vec![false; n];
    let mut path: Vec<usize> = Vec::new();
    for start in 0..n {
        // Cycles whose smallest vertex is `start`.
        let mut frames: Vec<(usize, usize)> = vec![(start, 0)];
        on_path[start] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let out = graph.out_edges(v);
            if *pos == out.len() {
                frames.pop();
                on_path[v] = false;
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
                count += 1;
                let (q, w) = walk_costs(graph, &path)?;
                let ratio = CycleRatio::of(q, w);
                if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                    best = Some((ratio, path.clone()));
                }
                path.pop();
            } else if t > start && !on_path[t] {
                on_path[t] = true;
                path.push(e);
                frames.push((t, 0));
            }
        }
    }
    let (ratio, cycle) = best.ok_or(Error::NoCycle)?;
    let classification = if ratio.is_infinite() { Classification::Infinite } else { Classification::Finite };
    let best = CycleReport::from_edges(graph, cycle)?;
    Ok(RatioVerdict { best, classification, iterations: count })
}

/// Exact competitive ratio of a table policy.
pub fn evaluate_policy(problem: &LocalProblem, policy: &TablePolicy) -> Result<(DualGraph, RatioVerdict)> {
    let graph = match policy {
        TablePolicy::Deterministic(p) => crate::debruijn::build_graph_det(problem, p)?,
        TablePolicy::Randomized(p) => crate::debruijn::build_graph_rand(problem, p)?,
    };
    let verdict = max_ratio_cycle(&graph)?;
    Ok((graph, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{int, rat};
    use crate::debruijn::Edge;
    use crate::policy::DeterministicPolicy;
    use crate::problem::file_migration;
    use proptest::prelude::*;

    fn edge(source: usize, target: usize, q: i128, w: i128) -> Edge {
        Edge {
            source,
            target,
            input: target,
            adversary: 0,
            q: ExtendedCost::Finite(int(q)),
            w: ExtendedCost::Finite(int(w)),
        }
    }

    #[test]
    fn small_graphs() {
        let g = DualGraph::from_edges(1, vec![edge(0, 0, 3, 1)]).unwrap();
        assert_eq!(max_ratio_cycle(&g).unwrap().ratio(), CycleRatio::Finite(int(3)));
        let g = DualGraph::from_edges(2, vec![edge(0, 1, 1, 1), edge(1, 0, 4, 1)]).unwrap();
        assert_eq!(max_ratio_cycle(&g).unwrap().ratio(), CycleRatio::Finite(rat(5, 2)));
        let g = DualGraph::from_edges(1, vec![edge(0, 0, 1, 0)]).unwrap();
        let v = max_ratio_cycle(&g).unwrap();
        assert_eq!(v.classification, Classification::Infinite);
        let g = DualGraph::from_edges(2, vec![edge(0, 0, 0, 0), edge(1, 1, 0, 0)]).unwrap();
        assert!(matches!(brute_force_max_ratio(&g).unwrap().ratio(), CycleRatio::Unit));
        assert!(matches!(max_ratio_cycle(&g).unwrap().ratio(), CycleRatio::Unit));
        assert!(matches!(max_ratio_cycle(&DualGraph::from_edges(0, vec![]).unwrap()), Err(Error::EmptyGraph)));
    }

    #[test]
    fn zero_cycle_beats_cheap_cycles() {
        let g = DualGraph::from_edges(2, vec![edge(0, 0, 1, 2), edge(1, 1, 0, 0)]).unwrap();
        assert_eq!(max_ratio_cycle(&g).unwrap().ratio(), CycleRatio::Unit);
        let g = DualGraph::from_edges(1, vec![edge(0, 0, 1, 2)]).unwrap();
        assert_eq!(max_ratio_cycle(&g).unwrap().ratio(), CycleRatio::Finite(rat(1, 2)));
    }

    #[test]
    fn infinite_costs() {
        let mut e = edge(0, 0, 0, 1);
        e.q = ExtendedCost::PosInf;
        let g = DualGraph::from_edges(1, vec![e.clone()]).unwrap();
        assert!(max_ratio_cycle(&g).unwrap().ratio().is_infinite());
        let mut blocked = edge(0, 0, 5, 0);
        blocked.w = ExtendedCost::PosInf;
        let g = DualGraph::from_edges(1, vec![blocked, edge(0, 0, 1, 1)]).unwrap();
        assert_eq!(max_ratio_cycle(&g).unwrap().ratio(), CycleRatio::Finite(int(1)));
        let mut neg = edge(0, 0, 0, 1);
        neg.q = ExtendedCost::NegInf;
        let g = DualGraph::from_edges(1, vec![neg.clone(), e]).unwrap();
        assert_eq!(max_ratio_cycle(&g).unwrap_err(), Error::InfinityClash);
        let g = DualGraph::from_edges(1, vec![edge(0, 0, -1, 1)]).unwrap();
        assert!(matches!(max_ratio_cycle(&g), Err(Error::InvalidWeights(_))));
    }

    #[test]
    fn file_migration_verdicts() {
        let p = file_migration(int(1)).unwrap();
        let zero = DeterministicPolicy::constant(&p, 1, 0).unwrap();
        let (_, v) = evaluate_policy(&p, &TablePolicy::Deterministic(zero)).unwrap();
        assert_eq!(v.classification, Classification::Infinite);
        let ftr = DeterministicPolicy::follow_the_request(&p, 1).unwrap();
        let (g, v) = evaluate_policy(&p, &TablePolicy::Deterministic(ftr)).unwrap();
        assert_eq!(v.ratio(), CycleRatio::Finite(int(4)));
        assert_eq!(brute_force_max_ratio(&g).unwrap().ratio(), CycleRatio::Finite(int(4)));
    }

    #[test]
    fn walk_decomposition() {
        let g = DualGraph::from_edges(2, vec![edge(0, 0, 1, 1), edge(0, 1, 2, 1), edge(1, 0, 2, 1)]).unwrap();
        let parts = decompose_closed_walk(&g, &[0, 1, 2, 0]).unwrap();
        assert_eq!(parts, vec![vec![0], vec![1, 2], vec![0]]);
    }

    fn arb_graph() -> impl Strategy<Value = DualGraph> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, 0i128..5, 0i128..4, 1i128..4), 1..(3 * n + 2)).prop_map(move |raw| {
                let edges = raw
                    .into_iter()
                    .map(|(s, t, q, w, d)| Edge {
                        source: s,
                        target: t,
                        input: 0,
                        adversary: 0,
                        q: ExtendedCost::Finite(rat(q, d)),
                        w: ExtendedCost::Finite(if w == 3 { int(0) } else { rat(w, 1) }),
                    })
                    .collect();
                DualGraph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn parametric_search_matches_enumeration(g in arb_graph()) {
            let a = max_ratio_cycle(&g);
            let b = brute_force_max_ratio(&g);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.ratio(), b.ratio());
                    prop_assert_eq!(a.classification, b.classification);
                    let (q, w) = walk_costs(&g, &a.best.edges).unwrap();
                    prop_assert_eq!(CycleRatio::of(q, w), a.ratio());
                    prop_assert!(a.iterations <= b.iterations);
                }
                (Err(Error::NoCycle), Err(Error::NoCycle)) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }

        #[test]
        fn some_part_of_a_walk_is_at_least_as_bad(g in arb_graph(), seed in any::<u64>(), len in 1usize..30) {
            // Random walk from a vertex on a cycle, closed by a path back.
            let Ok(v) = max_ratio_cycle(&g) else { return Ok(()) };
            let start = v.best.vertices[0];
            let mut walk = Vec::new();
            let mut cur = start;
            let mut state = seed;
            for _ in 0..len {
                let out = g.out_edges(cur);
                if out.is_empty() { break; }
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let e = out[(state >> 33) as usize % out.len()];
                walk.push(e);
                cur = g.edge(e).target;
            }
            let all = |_: usize| true;
            let Some(back) = path_within(&g, cur, start, &all) else { return Ok(()) };
            walk.extend(back);
            if walk.is_empty() { return Ok(()) }
            let whole = walk_ratio(&g, &walk).unwrap();
            let parts = decompose_closed_walk(&g, &walk).unwrap();
            let best = parts.iter().map(|c| walk_ratio(&g, c).unwrap()).max().unwrap();
            prop_assert!(best >= whole);
        }
    }
}

//! The dual-weighted transition graph of a policy.
//!
//! A vertex holds the last `W` inputs and the adversary's last `r` outputs.
//! An edge appends one input `x` and one adversary output `b`; it carries
//! the adversary's cost `w` and the policy's cost `q` for that step.
//!
//! When the local cost splits as `v(x̄, ȳ) = S(x̄, y_last) + M(ȳ)` (serving
//! plus switching), the switching term is charged one step late, which lets
//! `W = T + r − 1`. Otherwise `W = T + r` and the policy's cost is exact.

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::cost::{ExtendedCost, Rational};
use crate::error::{Error, Result};
use crate::policy::{DeterministicPolicy, RandomizedPolicy};
use crate::problem::{Aggregation, Alphabet, LocalProblem, Objective};
use crate::window::{checked_pow, WindowSpace};

/// Largest graph the builder will construct.
pub const MAX_VERTICES: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub input: usize,
    pub adversary: usize,
    pub w: ExtendedCost,
    pub q: ExtendedCost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Layout {
    window: WindowSpace,
    outputs: usize,
    horizon_r: usize,
    adversary_states: usize,
}

#[derive(Debug, Clone)]
pub struct DualGraph {
    vertices: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    layout: Option<Layout>,
    alphabets: Option<(Alphabet, Alphabet)>,
}

impl DualGraph {
    /// A graph with arbitrary edges and no window structure.
    pub fn from_edges(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if edges.iter().any(|e| e.source >= vertices || e.target >= vertices) {
            return Err(Error::InvalidArgument("edge endpoint out of range".into()));
        }
        let mut out = vec![Vec::new(); vertices];
        for (i, e) in edges.iter().enumerate() {
            out[e.source].push(i);
        }
        Ok(DualGraph { vertices, edges, out, layout: None, alphabets: None })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }
    /// Indices of the edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Number of input symbols stored per vertex, if structured.
    pub fn input_window(&self) -> Option<usize> {
        self.layout.map(|l| l.window.len())
    }

    /// Input window of vertex `v`, oldest first.
    pub fn vertex_inputs(&self, v: usize) -> Option<Vec<usize>> {
        self.layout.map(|l| l.window.decode(v / l.adversary_states))
    }

    /// Adversary's last `r` outputs at vertex `v`, oldest first.
    pub fn vertex_adversary(&self, v: usize) -> Option<Vec<usize>> {
        self.layout.map(|l| {
            let mut code = v % l.adversary_states;
            let mut out = vec![0; l.horizon_r];
            for slot in out.iter_mut().rev() {
                *slot = code % l.outputs;
                code /= l.outputs;
            }
            out
        })
    }

    /// Vertex with the given input window and adversary outputs.
    pub fn vertex_of(&self, inputs: &[usize], adversary: &[usize]) -> Option<usize> {
        let l = self.layout?;
        if inputs.len() != l.window.len() || adversary.len() != l.horizon_r {
            return None;
        }
        let y = adversary.iter().fold(0, |acc, &b| acc * l.outputs + b);
        Some(l.window.encode(inputs) * l.adversary_states + y)
    }

    /// Edge leaving `source` on `(input, adversary)`.
    pub fn find_edge(&self, source: usize, input: usize, adversary: usize) -> Option<usize> {
        self.out[source]
            .iter()
            .copied()
            .find(|&e| self.edges[e].input == input && self.edges[e].adversary == adversary)
    }

    /// Human-readable label of a vertex, e.g. `011|0`.
    pub fn vertex_label(&self, v: usize) -> String {
        match (&self.alphabets, self.vertex_inputs(v), self.vertex_adversary(v)) {
            (Some((x, y)), Some(i), Some(a)) => format!("{}|{}", x.format_sequence(&i), y.format_sequence(&a)),
            _ => v.to_string(),
        }
    }

    /// JSON dump of vertices and edges with exact costs.
    pub fn to_value(&self) -> Value {
        let vertices: Vec<Value> = (0..self.vertices)
            .map(|v| {
                let mut m = Map::new();
                m.insert("id".into(), json!(v));
                if let (Some((x, y)), Some(i), Some(a)) = (&self.alphabets, self.vertex_inputs(v), self.vertex_adversary(v)) {
                    m.insert("inputs".into(), json!(x.format_sequence(&i)));
                    m.insert("adversary".into(), json!(y.format_sequence(&a)));
                }
                Value::Object(m)
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let (input, adversary) = match &self.alphabets {
                    Some((x, y)) => (json!(x.symbol(e.input)), json!(y.symbol(e.adversary))),
                    None => (json!(e.input), json!(e.adversary)),
                };
                json!({
                    "source": e.source,
                    "target": e.target,
                    "input": input,
                    "adversary": adversary,
                    "w": e.w.to_string(),
                    "q": e.q.to_string(),
                })
            })
            .collect();
        json!({ "vertices": vertices, "edges": edges })
    }
}

/// Input symbols consumed along a closed walk given as edge indices.
pub fn induced_input(graph: &DualGraph, cycle: &[usize]) -> Result<Vec<usize>> {
    if cycle.is_empty() {
        return Err(Error::NotAWalk("empty edge sequence".into()));
    }
    for (k, &e) in cycle.iter().enumerate() {
        if e >= graph.edges.len() {
            return Err(Error::NotAWalk(format!("edge {e} does not exist")));
        }
        let next = cycle[(k + 1) % cycle.len()];
        if next < graph.edges.len() && graph.edges[e].target != graph.edges[next].source {
            return Err(Error::NotAWalk(format!(
                "edge {e} ends at vertex {} but edge {next} starts at vertex {}",
                graph.edges[e].target, graph.edges[next].source
            )));
        }
    }
    Ok(cycle.iter().map(|&e| graph.edges[e].input).collect())
}

#[derive(Debug, Clone)]
enum CostModel {
    /// `q = S[x, y_i] + M[y_{i-r+1}, …, y_{i+1}]`.
    Split { serve: Vec<Rational>, switch: Vec<Rational> },
    /// `q = v[x, y_{i-r}, …, y_i]`.
    Exact { costs: Vec<ExtendedCost> },
}

#[derive(Debug, Clone)]
struct EdgeTemplate {
    source: usize,
    target: usize,
    input: usize,
    adversary: usize,
    w: ExtendedCost,
    /// Concrete code of the `r + 1` inputs the step cost depends on.
    x_code: usize,
}

/// Structure and adversary costs of `G(Π, ·)` for a fixed problem and
/// horizon; policy costs are filled in per candidate.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    horizon: usize,
    layout: Layout,
    alphabets: (Alphabet, Alphabet),
    model: CostModel,
    edges: Vec<EdgeTemplate>,
    /// Policy window codes per edge, `r + 1` of them, oldest first.
    windows: Vec<usize>,
}

fn validate_problem(problem: &LocalProblem, horizon: usize) -> Result<()> {
    if problem.aggregation() != Aggregation::Sum {
        return Err(Error::UnsupportedAggregation(problem.aggregation().to_string()));
    }
    if problem.objective() != Objective::Min {
        return Err(Error::UnsupportedProblem("cycle analysis needs a minimization objective".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidHorizon("T must be at least 1".into()));
    }
    Ok(())
}

/// Splits the local cost into serving and switching terms if possible.
fn split_costs(problem: &LocalProblem, concrete: &[ExtendedCost]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let r = problem.horizon();
    if r == 0 {
        return None;
    }
    let (nx, ny) = (problem.inputs().len(), problem.outputs().len());
    let xs = checked_pow(nx, r + 1)?;
    let ys = checked_pow(ny, r + 1)?;
    let value = |xc: usize, yc: usize| concrete[xc * ys + yc].as_finite();
    // Reference output prefix is all zeros, reference input window is code 0.
    let mut serve = vec![Rational::zero(); xs * ny];
    for xc in 0..xs {
        for y in 0..ny {
            serve[xc * ny + y] = value(xc, y)?;
        }
    }
    let mut switch = vec![Rational::zero(); ys];
    for yc in 0..ys {
        switch[yc] = value(0, yc)? - serve[yc % ny];
    }
    for xc in 0..xs {
        for yc in 0..ys {
            if value(xc, yc)? != serve[xc * ny + yc % ny] + switch[yc] {
                return None;
            }
        }
    }
    Some((serve, switch))
}

impl GraphBuilder {
    pub fn new(problem: &LocalProblem, horizon: usize) -> Result<Self> {
        validate_problem(problem, horizon)?;
        let r = problem.horizon();
        let (nx, ny) = (problem.inputs().len(), problem.outputs().len());
        let concrete = problem.concrete_costs()?;
        let (model, width) = match split_costs(problem, &concrete) {
            Some((serve, switch)) => (CostModel::Split { serve, switch }, horizon + r - 1),
            None => (CostModel::Exact { costs: concrete.clone() }, horizon + r),
        };
        let wanted = (nx as u128)
            .saturating_pow(width.try_into().unwrap_or(u32::MAX))
            .saturating_mul((ny as u128).saturating_pow(r.try_into().unwrap_or(u32::MAX)));
        if wanted > MAX_VERTICES as u128 {
            return Err(Error::GraphTooLarge { vertices: wanted, limit: MAX_VERTICES });
        }
        let window = WindowSpace::new(nx, width, MAX_VERTICES)?;
        let adversary_states = checked_pow(ny, r).ok_or(Error::Overflow)?;
        let vertices = window.size() * adversary_states;
        let layout = Layout { window, outputs: ny, horizon_r: r, adversary_states };
        let policy_space = WindowSpace::new(nx, horizon, crate::policy::MAX_TABLE_ENTRIES)?;
        let ys = checked_pow(ny, r + 1).ok_or(Error::Overflow)?;
        let x_space = WindowSpace::new(nx, r + 1, usize::MAX)?;
        let split = matches!(model, CostModel::Split { .. });

        let mut edges = Vec::with_capacity(vertices * nx * ny);
        let mut windows = Vec::with_capacity(vertices * nx * ny * (r + 1));
        let mut xs = vec![0usize; width + 1];
        for wcode in 0..window.size() {
            xs[..width].copy_from_slice(&window.decode(wcode));
            for x in 0..nx {
                xs[width] = x;
                let x_code = x_space.encode(&xs[width - r..=width]);
                let target_w = window.successor(wcode, x);
                // Policy windows for the outputs the step cost depends on.
                let shift = usize::from(split);
                let window_codes: Vec<usize> = (0..=r)
                    .map(|k| {
                        let end = width + 1 - r + k - 1 + shift;
                        policy_space.encode(&xs[end - horizon..end])
                    })
                    .collect();
                for ycode in 0..adversary_states {
                    for b in 0..ny {
                        let y_window = ycode * ny + b;
                        let target = target_w * adversary_states + y_window % adversary_states;
                        edges.push(EdgeTemplate {
                            source: wcode * adversary_states + ycode,
                            target,
                            input: x,
                            adversary: b,
                            w: concrete[x_code * ys + y_window],
                            x_code,
                        });
                        windows.extend_from_slice(&window_codes);
                    }
                }
            }
        }
        Ok(GraphBuilder {
            horizon,
            layout,
            alphabets: (problem.inputs().clone(), problem.outputs().clone()),
            model,
            edges,
            windows,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn vertex_count(&self) -> usize {
        self.layout.window.size() * self.layout.adversary_states
    }

    /// True if the cost splits into serving and switching terms.
    pub fn is_split(&self) -> bool {
        matches!(self.model, CostModel::Split { .. })
    }

    fn stride(&self) -> usize {
        self.layout.horizon_r + 1
    }

    fn check_policy(&self, horizon: usize, inputs: &Alphabet, outputs: &Alphabet) -> Result<()> {
        if horizon != self.horizon || *inputs != self.alphabets.0 || *outputs != self.alphabets.1 {
            return Err(Error::InvalidArgument("policy horizon or alphabets do not match the graph".into()));
        }
        Ok(())
    }

    /// Policy cost of every edge for a deterministic table.
    pub fn det_costs(&self, table: &[usize]) -> Vec<ExtendedCost> {
        let ny = self.layout.outputs;
        let stride = self.stride();
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let wins = &self.windows[i * stride..(i + 1) * stride];
                let y_code = wins.iter().fold(0, |acc, &c| acc * ny + table[c]);
                match &self.model {
                    CostModel::Split { serve, switch } => {
                        let y_now = table[wins[stride - 2]];
                        ExtendedCost::Finite(serve[e.x_code * ny + y_now] + switch[y_code])
                    }
                    CostModel::Exact { costs } => {
                        let ys = self.layout.adversary_states * ny;
                        costs[e.x_code * ys + y_code]
                    }
                }
            })
            .collect()
    }

    /// Expected policy cost of every edge for a randomized table.
    pub fn rand_costs(&self, table: &[Rational]) -> Result<Vec<ExtendedCost>> {
        let (serve, switch) = match &self.model {
            CostModel::Split { serve, switch } if self.layout.horizon_r == 1 && self.layout.outputs == 2 => (serve, switch),
            _ => {
                return Err(Error::UnsupportedProblem(
                    "randomized analysis needs binary outputs, r = 1 and a serving/switching cost split".into(),
                ))
            }
        };
        Ok(self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let p_now = table[self.windows[2 * i]];
                let p_next = table[self.windows[2 * i + 1]];
                let dist = |p: Rational| [Rational::one() - p, p];
                let (now, next) = (dist(p_now), dist(p_next));
                let mut q = now[0] * serve[e.x_code * 2] + now[1] * serve[e.x_code * 2 + 1];
                for a in 0..2 {
                    for b in 0..2 {
                        q += now[a] * next[b] * switch[a * 2 + b];
                    }
                }
                ExtendedCost::Finite(q)
            })
            .collect())
    }

    /// Assembles a graph from per-edge policy costs.
    pub fn assemble(&self, q: Vec<ExtendedCost>) -> Result<DualGraph> {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .zip(q)
            .map(|(e, q)| Edge { source: e.source, target: e.target, input: e.input, adversary: e.adversary, w: e.w, q })
            .collect();
        if let Some(e) = edges.iter().find(|e| e.q == ExtendedCost::NegInf || e.w == ExtendedCost::NegInf) {
            return Err(Error::InvalidWeights(format!("edge {} -> {} has cost -inf", e.source, e.target)));
        }
        let mut graph = DualGraph::from_edges(self.vertex_count(), edges)?;
        graph.layout = Some(self.layout);
        graph.alphabets = Some(self.alphabets.clone());
        Ok(graph)
    }

    pub fn build_det(&self, policy: &DeterministicPolicy) -> Result<DualGraph> {
        use crate::policy::Policy;
        self.check_policy(policy.horizon(), policy.inputs(), policy.outputs())?;
        self.assemble(self.det_costs(policy.table()))
    }

    pub fn build_rand(&self, policy: &RandomizedPolicy) -> Result<DualGraph> {
        self.check_policy(policy.horizon(), policy.inputs(), policy.outputs())?;
        self.assemble(self.rand_costs(policy.table())?)
    }
}

/// `G(Π, A)` for a deterministic policy.
pub fn build_graph_det(problem: &LocalProblem, policy: &DeterministicPolicy) -> Result<DualGraph> {
    use crate::policy::Policy;
    GraphBuilder::new(problem, policy.horizon())?.build_det(policy)
}

/// `G(Π, A)` with expected policy costs for a randomized policy.
pub fn build_graph_rand(problem: &LocalProblem, policy: &RandomizedPolicy) -> Result<DualGraph> {
    GraphBuilder::new(problem, policy.horizon())?.build_rand(policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{int, rat};
    use crate::problem::file_migration;

    fn c(v: Rational) -> ExtendedCost {
        ExtendedCost::Finite(v)
    }

    #[test]
    fn shape_for_two_step_horizon() {
        let p = file_migration(int(1)).unwrap();
        let a = DeterministicPolicy::follow_the_request(&p, 2).unwrap();
        let g = build_graph_det(&p, &a).unwrap();
        assert_eq!(g.vertex_count(), 8);
        for v in 0..8 {
            assert_eq!(g.out_edges(v).len(), 4);
        }
        for e in g.edges() {
            let src = g.vertex_inputs(e.source).unwrap();
            let mut expect = src[1..].to_vec();
            expect.push(e.input);
            assert_eq!(g.vertex_inputs(e.target).unwrap(), expect);
            assert_eq!(g.vertex_adversary(e.target).unwrap(), vec![e.adversary]);
        }
    }

    #[test]
    fn always_zero_self_loop_on_ones() {
        let p = file_migration(int(1)).unwrap();
        let a = DeterministicPolicy::constant(&p, 1, 0).unwrap();
        let g = build_graph_det(&p, &a).unwrap();
        let v = g.vertex_of(&[1], &[1]).unwrap();
        let e = g.find_edge(v, 1, 1).unwrap();
        assert_eq!(g.edge(e).target, v);
        assert_eq!(g.edge(e).w, ExtendedCost::ZERO);
        assert_eq!(g.edge(e).q, c(int(1)));
        let v0 = g.vertex_of(&[0], &[0]).unwrap();
        let e0 = g.find_edge(v0, 0, 0).unwrap();
        assert_eq!((g.edge(e0).w, g.edge(e0).q), (ExtendedCost::ZERO, ExtendedCost::ZERO));
    }

    #[test]
    fn randomized_formula() {
        let p = file_migration(int(1)).unwrap();
        let half = RandomizedPolicy::new(1, Alphabet::binary(), Alphabet::binary(), vec![rat(1, 2); 2]).unwrap();
        let g = build_graph_rand(&p, &half).unwrap();
        let e = g.find_edge(g.vertex_of(&[0], &[0]).unwrap(), 1, 0).unwrap();
        assert_eq!(g.edge(e).q, c(int(1)));
    }

    #[test]
    fn degenerate_distributions_match_deterministic() {
        let p = file_migration(rat(3, 2)).unwrap();
        for bits in 0..16usize {
            let table: Vec<usize> = (0..4).map(|i| (bits >> i) & 1).collect();
            let a = DeterministicPolicy::new(2, Alphabet::binary(), Alphabet::binary(), table).unwrap();
            let gd = build_graph_det(&p, &a).unwrap();
            let gr = build_graph_rand(&p, &a.to_randomized().unwrap()).unwrap();
            assert_eq!(gd.edges(), gr.edges());
        }
    }

    #[test]
    fn induced_input_checks_successors() {
        let p = file_migration(int(1)).unwrap();
        let a = DeterministicPolicy::follow_the_request(&p, 2).unwrap();
        let g = build_graph_det(&p, &a).unwrap();
        let v01 = g.vertex_of(&[0, 1], &[0]).unwrap();
        let e1 = g.find_edge(v01, 0, 0).unwrap();
        let v10 = g.edge(e1).target;
        let e2 = g.find_edge(v10, 1, 0).unwrap();
        assert_eq!(g.edge(e2).target, v01);
        assert_eq!(induced_input(&g, &[e1, e2]).unwrap(), vec![0, 1]);
        assert!(matches!(induced_input(&g, &[e1, e1]), Err(Error::NotAWalk(_))));
        let v00 = g.vertex_of(&[0, 0], &[0]).unwrap();
        let lp = g.find_edge(v00, 0, 0).unwrap();
        assert_eq!(induced_input(&g, &[lp]).unwrap(), vec![0]);
    }

    #[test]
    fn non_split_problem_uses_longer_windows() {
        let p = crate::problem::load_bundled("min-dom-set").unwrap();
        let a = DeterministicPolicy::constant(&p, 1, 1).unwrap();
        let g = build_graph_det(&p, &a).unwrap();
        assert_eq!(g.input_window(), Some(3));
        assert_eq!(g.vertex_count(), 8 * 4);
        let lb = crate::problem::load_bundled("load-balancing").unwrap();
        let a = DeterministicPolicy::constant(&lb, 1, 0).unwrap();
        assert!(matches!(build_graph_det(&lb, &a), Err(Error::UnsupportedAggregation(_))));
    }

    #[test]
    fn dump_lists_exact_costs() {
        let p = file_migration(rat(1, 2)).unwrap();
        let a = DeterministicPolicy::follow_the_request(&p, 1).unwrap();
        let g = build_graph_det(&p, &a).unwrap();
        let v = g.to_value();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["edges"].as_array().unwrap().len(), 16);
        assert!(v.to_string().contains("3/2"));
    }
}

//! The dual de Bruijn graph of a small policy and its cycle ratios.

use tlsynth::cost::int;
use tlsynth::debruijn::build_graph_det;
use tlsynth::policy::DeterministicPolicy;
use tlsynth::problem::file_migration;
use tlsynth::ratio::{brute_force_max_ratio, max_ratio_cycle};

fn main() -> tlsynth::Result<()> {
    let problem = file_migration(int(1))?;
    let policy = DeterministicPolicy::follow_the_request(&problem, 1)?;
    let graph = build_graph_det(&problem, &policy)?;
    println!("{} vertices, {} edges", graph.vertex_count(), graph.edges().len());
    for e in graph.edges() {
        println!(
            "  {} -> {}  x={} b={}  q={} w={}",
            graph.vertex_label(e.source),
            graph.vertex_label(e.target),
            e.input,
            e.adversary,
            e.q,
            e.w
        );
    }
    let fast = max_ratio_cycle(&graph)?;
    let slow = brute_force_max_ratio(&graph)?;
    println!("parametric search {} after {} steps, enumeration {}", fast.ratio(), fast.iterations, slow.ratio());
    Ok(())
}

//! Exact ratio of a hand-written randomized policy, with its worst cycle.

use tlsynth::cost::{int, parse_rational};
use tlsynth::policy::{RandomizedPolicy, TablePolicy};
use tlsynth::problem::file_migration;
use tlsynth::ratio::evaluate_policy;
use tlsynth::Alphabet;

fn main() -> tlsynth::Result<()> {
    let problem = file_migration(int(1))?;
    let entries = ["0", "0.3309", "0.2711", "1", "0", "0.7289", "0.6691", "1"];
    let table = entries.iter().map(|e| parse_rational(e)).collect::<tlsynth::Result<Vec<_>>>()?;
    let policy = RandomizedPolicy::new(3, Alphabet::binary(), Alphabet::binary(), table)?;
    let (graph, verdict) = evaluate_policy(&problem, &TablePolicy::Randomized(policy))?;
    println!("ratio {} ({:.4})", verdict.ratio(), verdict.ratio().to_f64());
    for &v in &verdict.best.vertices {
        println!("  {}", graph.vertex_label(v));
    }
    println!("repeat input {}", problem.inputs().format_sequence(&verdict.best.input));
    Ok(())
}

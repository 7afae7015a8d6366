//! Randomized policies beat deterministic ones already at T = 2.

use tlsynth::cost::{format_short, int};
use tlsynth::problem::file_migration;
use tlsynth::synthesis::{describe_ratio, synthesize_det, synthesize_rand, SynthesisConfig};

fn main() -> tlsynth::Result<()> {
    let problem = file_migration(int(1))?;
    let config = SynthesisConfig::new(2);
    let det = synthesize_det(&problem, &config)?;
    let rand = synthesize_rand(&problem, &config)?;
    println!("deterministic: {}", describe_ratio(&det.ratio));
    println!("randomized:    {} after {} grid points", describe_ratio(&rand.ratio), rand.grid_points);
    let space = rand.policy.space();
    for code in 0..space.size() {
        let window = problem.inputs().format_sequence(&space.decode(code));
        println!("  P(1 | {window}) = {}", format_short(&rand.policy.probability(code)));
    }
    Ok(())
}

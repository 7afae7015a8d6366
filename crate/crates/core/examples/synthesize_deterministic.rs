//! Optimal deterministic policies for file migration over a few horizons.

use tlsynth::cost::rat;
use tlsynth::policy::{policy_to_json, TablePolicy};
use tlsynth::problem::file_migration;
use tlsynth::synthesis::{describe_ratio, synthesize_det, SynthesisConfig};

fn main() -> tlsynth::Result<()> {
    let problem = file_migration(rat(9, 10))?;
    for t in 1..=4 {
        let result = synthesize_det(&problem, &SynthesisConfig::new(t))?;
        println!(
            "T={t}: ratio {} ({} of {} candidates evaluated, {} ms)",
            describe_ratio(&result.ratio),
            result.stats.fully_evaluated,
            result.stats.examined,
            result.stats.elapsed_ms
        );
    }
    let best = synthesize_det(&problem, &SynthesisConfig::new(2))?;
    println!("{}", policy_to_json(&TablePolicy::Deterministic(best.policies[0].clone())));
    Ok(())
}

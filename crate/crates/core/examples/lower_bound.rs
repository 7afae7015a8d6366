//! Certify that no deterministic policy with a given horizon beats a ratio.

use tlsynth::cost::{format_rational, int, rat};
use tlsynth::problem::file_migration;
use tlsynth::synthesis::{verify_lower_bound, SynthesisConfig};

fn main() -> tlsynth::Result<()> {
    let problem = file_migration(int(1))?;
    for (t, bound) in [(3, int(4)), (4, int(3)), (4, rat(31, 10))] {
        let report = verify_lower_bound(&problem, &SynthesisConfig::new(t), bound)?;
        println!(
            "T={t}, ratio >= {}: {} ({} candidates)",
            format_rational(&bound),
            if report.holds { "holds" } else { "refuted" },
            report.examined
        );
    }
    Ok(())
}

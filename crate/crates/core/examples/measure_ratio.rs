//! Empirical ratios against the offline optimum.

use tlsynth::cost::{int, rat};
use tlsynth::harness::{measure_ratio, Algorithm, GeneratorSpec, Guarantee, MeasureConfig, RUN_RECORD_HEADER};
use tlsynth::policy::mixed_resetting_horizon;
use tlsynth::problem::file_migration;

fn main() -> tlsynth::Result<()> {
    println!("{RUN_RECORD_HEADER}");
    let problem = file_migration(int(1))?;
    let sw = Algorithm::from_name("sliding-window", &problem, Some(6))?;
    let check = Some(Guarantee { c: int(6), d: int(6) });
    for spec in ["blocks:T=6,L=50", "adaptive:L=50,cutoff=1000", "uniform:n=500,p=1/2,seed=1"] {
        let generator: GeneratorSpec = spec.parse()?;
        let r = measure_ratio(&sw, &problem, &generator, &MeasureConfig { trials: 200, seed: 1, check })?;
        println!("{}", r.to_csv_row());
    }

    let problem = file_migration(int(5))?;
    let t = mixed_resetting_horizon(5.0);
    let mixed = Algorithm::MixedResetting { horizon: t };
    for generator in [
        GeneratorSpec::Blocks { block: t, repeats: 50 },
        GeneratorSpec::Uniform { length: 500, p: rat(1, 2), seed: 2 },
    ] {
        let r = measure_ratio(&mixed, &problem, &generator, &MeasureConfig { trials: 1000, seed: 2, check: None })?;
        println!("{}", r.to_csv_row());
    }
    Ok(())
}

//! Traces of the hand-designed algorithms on one input.

use tlsynth::cost::int;
use tlsynth::harness::Algorithm;
use tlsynth::problem::file_migration;

fn main() -> tlsynth::Result<()> {
    let problem = file_migration(int(2))?;
    let x = problem.inputs().parse_sequence("111111000000111000111111111111")?;
    let (opt, _) = problem.offline_opt(&x)?;
    println!("input  {}  OPT {opt}", problem.inputs().format_sequence(&x));
    for name in ["sliding-window", "mixed-resetting", "coin-flip", "reset-wrapper"] {
        let alg = Algorithm::from_name(name, &problem, Some(12))?;
        let trace = alg.run(&problem, &x, 7)?;
        println!("{:<32} {}  cost {}", alg.to_string(), problem.outputs().format_sequence(&trace.outputs), trace.total);
    }
    Ok(())
}

//! Define a problem in TOML, evaluate a solution and compute the offline optimum.

use tlsynth::problem::load_problem;

const PAGING_LIKE: &str = r#"
name = "two-node-migration"
inputs = ["0", "1"]
outputs = ["0", "1"]
r = 1
aggregation = "sum"
objective = "min"
initial_outputs = ["0"]

[parameters]
alpha = "2"

[[rules]]
x = ["*", "0"]
y = ["0", "0"]
cost = "0"

[[rules]]
x = ["*", "1"]
y = ["1", "1"]
cost = "0"

[[rules]]
x = ["*", "0"]
y = ["1", "1"]
cost = "1"

[[rules]]
x = ["*", "1"]
y = ["0", "0"]
cost = "1"

[[rules]]
x = ["*", "*"]
y = ["*", "*"]
cost = "alpha"
"#;

fn main() -> tlsynth::Result<()> {
    let problem = load_problem(PAGING_LIKE)?;
    for w in problem.warnings() {
        println!("warning: {w}");
    }
    let x = problem.inputs().parse_sequence("1110001111")?;
    let stay = vec![0; x.len()];
    println!("staying put costs {}", problem.evaluate(&x, &stay)?.total);
    let (opt, y) = problem.offline_opt(&x)?;
    println!("optimum {opt} with outputs {}", problem.outputs().format_sequence(&y));
    Ok(())
}

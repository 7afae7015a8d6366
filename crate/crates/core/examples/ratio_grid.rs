//! Best ratios over a grid of migration costs and horizons, as CSV.

use tlsynth::cost::rat;
use tlsynth::harness::{emit_table2, TableConfig};

fn main() -> tlsynth::Result<()> {
    let alphas: Vec<_> = (1..=16).map(|k| rat(k, 10)).collect();
    let config = TableConfig { randomized: true, ..TableConfig::default() };
    print!("{}", emit_table2(&alphas, &[1, 2], &config)?);
    Ok(())
}

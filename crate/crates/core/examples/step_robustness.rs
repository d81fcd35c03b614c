//! Shift of the MAVAR estimate caused by a step at different delays.

use mavar::experiment::{run_step_robustness, ExperimentConfig};

fn main() -> mavar::Result<()> {
    let config = ExperimentConfig {
        lengths: vec![1024, 16384],
        seeds_per_cell: 5,
        step_amplitudes: vec![0.0, 1.0, 2.0],
        ..ExperimentConfig::step_robustness()
    };
    let report = run_step_robustness(&config)?;
    print!("{}", report.summary_csv());
    Ok(())
}

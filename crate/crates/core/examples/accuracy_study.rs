//! A reduced accuracy grid comparing MAVAR with the Haar logscale diagram.

use mavar::estimate::Method;
use mavar::experiment::{run_accuracy_experiment, ExperimentConfig};

fn main() -> mavar::Result<()> {
    let config = ExperimentConfig {
        hurst: vec![0.6, 0.7, 0.8, 0.9],
        lengths: vec![4096, 32768],
        seeds_per_cell: 5,
        methods: vec![Method::Mavar, Method::HaarLd],
        ..ExperimentConfig::accuracy()
    };
    let report = run_accuracy_experiment(&config)?;
    print!("{}", report.summary_csv());
    eprintln!("{:.1} s", report.metadata.wall_time_s);
    Ok(())
}

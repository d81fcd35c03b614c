//! Generates a power-law series, adds a step, and writes both to disk.
//!
//! cargo run --release --example generate_series -- [out_dir]

use mavar::series::write_one_column;
use mavar::synth::{apply_contaminant, Contaminant};
use mavar::{gen_lrd, GeneratorSpec};

fn main() -> mavar::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string());
    let spec = GeneratorSpec::with_hurst(4096, 0.8, 42);
    let clean = gen_lrd(&spec, 0.01)?;
    let stepped = apply_contaminant(&clean, &Contaminant::Step { amplitude: 1.0, delay: 2048 })?;

    let clean_path = std::path::Path::new(&dir).join("lrd_h080.txt");
    let step_path = std::path::Path::new(&dir).join("lrd_h080_step.txt");
    write_one_column(&clean, &clean_path)?;
    write_one_column(&stepped, &step_path)?;

    let s = clean.samples();
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / s.len() as f64;
    println!("alpha = {}, H = {}", spec.alpha, spec.hurst());
    println!("{} samples, mean {mean:.2e}, variance {var:.6}", s.len());
    println!("wrote {} and {}", clean_path.display(), step_path.display());
    Ok(())
}

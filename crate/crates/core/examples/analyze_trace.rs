//! MAVAR curve and Hurst estimate for a one-column trace. Without
//! arguments a synthetic H = 0.75 series is analysed instead.
//!
//! cargo run --release --example analyze_trace -- trace.txt 0.008

use mavar::series::{load_series, Format};
use mavar::{estimate_hurst, gen_lrd, mavar_curve, FitOptions, GeneratorSpec, Role};

fn main() -> mavar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let series = match args.as_slice() {
        [path, tau0] => {
            let tau0 = tau0.parse().map_err(|_| mavar::Error::Parse { line: 0, text: tau0.clone() })?;
            load_series(path, Format::OneColumn { tau0 }, Role::Rate)?
        }
        _ => gen_lrd(&GeneratorSpec::with_hurst(1 << 15, 0.75, 1), 1.0)?,
    };

    let curve = mavar_curve(&series)?;
    println!("{:>10} {:>14} {:>8}", "tau [s]", "Mod sigma^2", "terms");
    for p in curve.points.iter().step_by(4) {
        println!("{:>10.4e} {:>14.6e} {:>8}", p.tau, p.value, p.m);
    }

    let (fit, est) = estimate_hurst(&curve, &FitOptions::default())?;
    println!();
    println!("fit over n = {}..={} ({} points)", fit.n_lo, fit.n_hi, fit.points);
    println!("mu = {:.4}, alpha = {:.4}, H = {:.4}, lrd = {}", fit.mu, est.alpha, est.hurst, est.lrd_valid);
    Ok(())
}

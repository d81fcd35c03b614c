//! Four estimators on the same series.

use mavar::estimate::haar::default_octaves;
use mavar::estimate::periodogram::DEFAULT_BAND;
use mavar::estimate::variance_time::default_windows;
use mavar::estimate::{haar_logscale_diagram, periodogram_estimate, variance_time_plot};
use mavar::{estimate_hurst, gen_lrd, mavar_curve, FitOptions, GeneratorSpec};

fn main() -> mavar::Result<()> {
    let n = 1 << 16;
    for hurst in [0.6, 0.75, 0.9] {
        let x = gen_lrd(&GeneratorSpec::with_hurst(n, hurst, 7), 1.0)?;
        let mavar = estimate_hurst(&mavar_curve(&x)?, &FitOptions::default())?.1;
        let vtp = variance_time_plot(&x, &default_windows(n, 1))?.1;
        let pg = periodogram_estimate(&x, DEFAULT_BAND)?;
        let (ld, ld_est) = haar_logscale_diagram(&x, default_octaves(n))?;

        println!("H = {hurst}");
        for e in [mavar, vtp, pg, ld_est] {
            println!("  {:<12} H = {:.4}  alpha = {:+.4}", e.method.name(), e.hurst, e.alpha);
        }
        let counts: Vec<usize> = ld.points.iter().map(|p| p.count).collect();
        println!("  haar octave counts {counts:?}");
    }
    Ok(())
}

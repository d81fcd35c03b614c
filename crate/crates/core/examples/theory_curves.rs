//! Theoretical MAVAR of a power-law spectrum next to an ensemble average of
//! generated series, then the closed form for a sinusoid.

use mavar::synth::{gen_power_law, AmplitudeMode};
use mavar::theory::{mavar_sine, mavar_theoretical, PowerLawModel};
use mavar::{mavar_curve, mavar_fast, TauGrid};

fn main() -> mavar::Result<()> {
    let (len, tau0, alpha) = (1 << 14, 1.0, -0.6);
    let model = PowerLawModel::single(alpha, 1.0, 0.5 / tau0)?;
    let grid = TauGrid::geometric(len, 1.5, Some(len / 30))?;

    let seeds = 16;
    let mut avg = vec![0.0; grid.len()];
    for seed in 0..seeds {
        let x = gen_power_law(&model, len, seed, AmplitudeMode::Rayleigh, false, tau0)?;
        for (a, p) in avg.iter_mut().zip(&mavar_fast(&x, &grid)?.points) {
            *a += p.value / seeds as f64;
        }
    }

    println!("alpha = {alpha}: expected slope mu = {}", -3.0 - alpha);
    println!("{:>6} {:>14} {:>14} {:>8}", "n", "theory", "ensemble", "ratio");
    for (&n, a) in grid.values().iter().zip(&avg) {
        let th = mavar_theoretical(&model, n as f64 * tau0, n)?;
        println!("{n:>6} {th:>14.6e} {a:>14.6e} {:>8.3}", a / th);
    }

    let (amp, f_m) = (1.0, 1.0 / 64.0);
    let x = mavar::TimeSeries::new(
        (0..len).map(|k| amp * (2.0 * std::f64::consts::PI * f_m * k as f64).sin()).collect(),
        tau0,
        mavar::Role::Rate,
    )?;
    let curve = mavar_curve(&x)?;
    println!();
    println!("sine A = {amp}, f_m = {f_m}: zeros at multiples of {} s", 1.0 / f_m);
    for p in curve.points.iter().filter(|p| p.n >= 16 && p.n <= 256) {
        println!("{:>6} {:>14.6e} {:>14.6e}", p.n, p.value, mavar_sine(amp, f_m, p.tau));
    }
    Ok(())
}

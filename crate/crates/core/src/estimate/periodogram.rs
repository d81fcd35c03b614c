//! Periodogram slope estimate.
//!
//! The log-log slope of the periodogram over a band is taken as the
//! spectral exponent `alpha` of the samples themselves (`S_x ~ f^alpha`),
//! so `gamma = -alpha` and `H = (1 - alpha) / 2`. The series role does not
//! change the mapping; reports state the role alongside.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{HurstEstimate, Method};
use crate::error::{Error, Result};
use crate::regression::fit_line;
use crate::series::TimeSeries;

pub const MIN_LEN: usize = 64;

/// Fit band as fractions of the Nyquist frequency.
pub const DEFAULT_BAND: (f64, f64) = (0.01, 0.25);

/// One-sided periodogram of the mean-removed samples at `f_k = k / (N
/// tau0)`, `k = 1..=N/2`. Returns `(frequencies, powers)`.
pub fn periodogram(x: &TimeSeries) -> (Vec<f64>, Vec<f64>) {
    let len = x.len();
    let mean = x.samples().iter().sum::<f64>() / len as f64;
    let mut buf: Vec<Complex64> = x
        .samples()
        .iter()
        .map(|v| Complex64::new(v - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let scale = 2.0 * x.tau0() / len as f64;
    let df = 1.0 / (len as f64 * x.tau0());
    (1..=len / 2)
        .map(|k| (k as f64 * df, buf[k].norm_sqr() * scale))
        .unzip()
}

pub fn periodogram_estimate(x: &TimeSeries, band: (f64, f64)) -> Result<HurstEstimate> {
    x.require_len(MIN_LEN)?;
    let (lo, hi) = band;
    if !(lo > 0.0 && lo < hi && hi <= 1.0) {
        return Err(Error::param("band", format!("need 0 < lo < hi <= 1, got {band:?}")));
    }
    let nyquist = 0.5 / x.tau0();
    let (freqs, powers) = periodogram(x);
    if powers.iter().all(|p| *p == 0.0) {
        return Err(Error::Degenerate("periodogram is identically zero".into()));
    }
    let (lf, lp): (Vec<f64>, Vec<f64>) = freqs
        .iter()
        .zip(&powers)
        .filter(|(f, p)| **f >= lo * nyquist && **f <= hi * nyquist && **p > 0.0)
        .map(|(f, p)| (f.log10(), p.log10()))
        .unzip();
    let line = fit_line(&lf, &lp, None)?;
    let alpha = line.slope;
    let hurst = (1.0 - alpha) / 2.0;
    Ok(HurstEstimate::from_hurst(Method::Periodogram, hurst, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Role;
    use crate::synth::{gen_lrd, GeneratorSpec};

    #[test]
    fn white_ensemble_is_flat() {
        let mut mean = 0.0;
        for seed in 0..10 {
            let x = gen_lrd(&GeneratorSpec::new(4096, 0.0, seed), 1.0).unwrap();
            mean += periodogram_estimate(&x, DEFAULT_BAND).unwrap().alpha / 10.0;
        }
        assert!(mean.abs() < 0.1, "slope {mean}");
    }

    #[test]
    fn lrd_ensemble_slope() {
        let mut mean = 0.0;
        for seed in 0..10 {
            let x = gen_lrd(&GeneratorSpec::new(4096, -0.6, seed), 1.0).unwrap();
            mean += periodogram_estimate(&x, DEFAULT_BAND).unwrap().alpha / 10.0;
        }
        assert!((mean + 0.6).abs() < 0.1, "slope {mean}");
    }

    #[test]
    fn sine_peak_at_its_frequency() {
        let n = 1024;
        let tau0 = 0.01;
        let f_m = 80.0 / (n as f64 * tau0);
        let s = (0..n)
            .map(|k| (2.0 * std::f64::consts::PI * f_m * k as f64 * tau0).sin())
            .collect();
        let x = TimeSeries::new(s, tau0, Role::Rate).unwrap();
        let (f, p) = periodogram(&x);
        let peak = p
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((f[peak] - f_m).abs() < 1e-9);
    }

    #[test]
    fn rejects_degenerate_and_short() {
        let zero = TimeSeries::new(vec![0.0; 128], 1.0, Role::Rate).unwrap();
        assert!(matches!(periodogram_estimate(&zero, DEFAULT_BAND), Err(Error::Degenerate(_))));
        let short = TimeSeries::new(vec![1.0; 32], 1.0, Role::Rate).unwrap();
        assert!(periodogram_estimate(&short, DEFAULT_BAND).is_err());
    }
}

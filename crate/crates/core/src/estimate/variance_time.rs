//! Variance-time plot: variance of non-overlapping block means against
//! block width. For LRD increments the variance decays as `w^(2H - 2)`.

use serde::{Deserialize, Serialize};

use super::{HurstEstimate, Method};
use crate::error::{Error, Result};
use crate::regression::fit_line;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariancePoint {
    pub window: usize,
    pub blocks: usize,
    pub variance: f64,
}

/// Geometric window widths from `lo` up to `N / 4`.
pub fn default_windows(len: usize, lo: usize) -> Vec<usize> {
    let hi = len / 4;
    let mut out: Vec<usize> = Vec::new();
    let mut w = lo.max(1) as f64;
    while (w.round() as usize) <= hi {
        let v = w.round() as usize;
        if out.last() != Some(&v) {
            out.push(v);
        }
        w *= 1.25;
    }
    out
}

/// Sample variance (`n - 1` denominator) of the means of consecutive,
/// non-overlapping blocks of `window` samples. A trailing partial block is
/// dropped.
pub fn aggregated_variance(samples: &[f64], window: usize) -> f64 {
    let means: Vec<f64> = samples
        .chunks_exact(window)
        .map(|c| c.iter().sum::<f64>() / window as f64)
        .collect();
    let k = means.len() as f64;
    let mean = means.iter().sum::<f64>() / k;
    means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1.0)
}

/// Fits `log10 var(w)` against `log10 w`; slope `s` gives `H = 1 + s/2`.
pub fn variance_time_plot(
    y: &TimeSeries,
    windows: &[usize],
) -> Result<(Vec<VariancePoint>, HurstEstimate)> {
    let len = y.len();
    if windows.len() < 2 {
        return Err(Error::InsufficientPoints {
            found: windows.len(),
            needed: 2,
        });
    }
    if let Some(&w) = windows.iter().find(|&&w| w == 0 || w > len / 4) {
        return Err(Error::param(
            "windows",
            format!("window {w} outside [1, N/4 = {}]", len / 4),
        ));
    }
    let curve: Vec<VariancePoint> = windows
        .iter()
        .map(|&w| VariancePoint {
            window: w,
            blocks: len / w,
            variance: aggregated_variance(y.samples(), w),
        })
        .collect();
    if curve.iter().any(|p| p.variance.is_nan() || p.variance <= 0.0) {
        return Err(Error::Degenerate("zero variance in an aggregated series".into()));
    }
    let x: Vec<f64> = curve.iter().map(|p| (p.window as f64).log10()).collect();
    let v: Vec<f64> = curve.iter().map(|p| p.variance.log10()).collect();
    let line = fit_line(&x, &v, None)?;
    let hurst = 1.0 + line.slope / 2.0;
    Ok((curve, HurstEstimate::from_hurst(Method::VarianceTime, hurst, line.slope)))
}

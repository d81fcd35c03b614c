//! Logscale diagram with the Haar wavelet.
//!
//! Octave `j` holds the detail coefficients at scale `2^j`. For a series
//! with `S_x(f) ~ f^-gamma` the mean detail energy grows as `2^(j gamma)`,
//! so the weighted slope of `log2(mean d^2)` against `j` estimates `gamma`
//! and `H = (1 + gamma) / 2`.
//!
//! Haar has a single vanishing moment: polynomial trends of degree one or
//! more leak into the details, so this is only a fair baseline on
//! drift-free input.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{HurstEstimate, Method};
use crate::error::{Error, Result};
use crate::regression::fit_line;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OctavePoint {
    pub octave: u32,
    /// Number of detail coefficients at this octave.
    pub count: usize,
    pub energy: f64,
    /// `log2(energy)` minus the small-sample bias `-1 / (count ln 2)`.
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogscaleDiagram {
    pub points: Vec<OctavePoint>,
    pub slope: f64,
    pub intercept: f64,
}

/// Octaves with at least four detail coefficients.
pub fn available_octaves(len: usize) -> RangeInclusive<u32> {
    let top = len.max(1).ilog2().saturating_sub(2);
    1..=top
}

/// Fit range used when the caller has no preference: from octave 2 (the
/// finest octave is biased by Haar's poor frequency selectivity) to the
/// coarsest available.
pub fn default_octaves(len: usize) -> RangeInclusive<u32> {
    let top = *available_octaves(len).end();
    2.min(top)..=top
}

/// Haar detail energies per octave over the whole available range.
pub fn detail_energies(samples: &[f64]) -> Vec<OctavePoint> {
    let top = *available_octaves(samples.len()).end();
    let mut approx = samples.to_vec();
    let mut out = Vec::new();
    for octave in 1..=top {
        let pairs = approx.len() / 2;
        let mut next = Vec::with_capacity(pairs);
        let mut energy = 0.0;
        for k in 0..pairs {
            let (a, b) = (approx[2 * k], approx[2 * k + 1]);
            let d = (a - b) * FRAC_1_SQRT_2;
            energy += d * d;
            next.push((a + b) * FRAC_1_SQRT_2);
        }
        let energy = energy / pairs as f64;
        out.push(OctavePoint {
            octave,
            count: pairs,
            energy,
            y: energy.log2() + 1.0 / (pairs as f64 * LN_2),
        });
        approx = next;
    }
    out
}

/// Weighted regression of `y_j` on `j` over `octaves`, weights proportional
/// to the coefficient count (variance of `y_j` is roughly `1 / count`).
pub fn haar_logscale_diagram(
    x: &TimeSeries,
    octaves: RangeInclusive<u32>,
) -> Result<(LogscaleDiagram, HurstEstimate)> {
    let avail = available_octaves(x.len());
    let (lo, hi) = (*octaves.start(), *octaves.end());
    if lo < 1 || hi > *avail.end() || hi < lo + 1 {
        return Err(Error::param(
            "octaves",
            format!("{lo}..={hi} not within {}..={} with at least two octaves", avail.start(), avail.end()),
        ));
    }
    let points = detail_energies(x.samples());
    if points.iter().any(|p| p.energy.is_nan() || p.energy <= 0.0) {
        return Err(Error::Degenerate("zero detail energy".into()));
    }
    let used: Vec<&OctavePoint> = points.iter().filter(|p| octaves.contains(&p.octave)).collect();
    let j: Vec<f64> = used.iter().map(|p| p.octave as f64).collect();
    let y: Vec<f64> = used.iter().map(|p| p.y).collect();
    let w: Vec<f64> = used.iter().map(|p| p.count as f64).collect();
    let line = fit_line(&j, &y, Some(&w))?;
    let hurst = (1.0 + line.slope) / 2.0;
    let ld = LogscaleDiagram {
        points,
        slope: line.slope,
        intercept: line.intercept,
    };
    Ok((ld, HurstEstimate::from_hurst(Method::HaarLd, hurst, line.slope)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{gen_lrd, GeneratorSpec};

    #[test]
    fn octave_bounds() {
        assert_eq!(available_octaves(1024), 1..=8);
        assert_eq!(available_octaves(131_072), 1..=15);
        let x = gen_lrd(&GeneratorSpec::new(1024, 0.0, 1), 1.0).unwrap();
        assert!(haar_logscale_diagram(&x, 1..=9).is_err());
        assert!(haar_logscale_diagram(&x, 0..=4).is_err());
        assert!(haar_logscale_diagram(&x, 1..=8).is_ok());
    }

    #[test]
    fn coefficient_counts_halve() {
        let pts = detail_energies(&vec![1.0; 1024]);
        let counts: Vec<usize> = pts.iter().map(|p| p.count).collect();
        assert_eq!(counts, vec![512, 256, 128, 64, 32, 16, 8, 4]);
    }

    #[test]
    fn white_is_flat() {
        let mut mean = 0.0;
        for seed in 0..10 {
            let x = gen_lrd(&GeneratorSpec::new(1 << 14, 0.0, seed), 1.0).unwrap();
            let (_, est) = haar_logscale_diagram(&x, default_octaves(x.len())).unwrap();
            mean += est.slope / 10.0;
        }
        assert!(mean.abs() < 0.15, "slope {mean}");
    }

    #[test]
    fn lrd_slope_is_gamma() {
        let mut mean = 0.0;
        for seed in 0..10 {
            let x = gen_lrd(&GeneratorSpec::with_hurst(1 << 14, 0.8, seed), 1.0).unwrap();
            let (_, est) = haar_logscale_diagram(&x, default_octaves(x.len())).unwrap();
            mean += est.slope / 10.0;
        }
        assert!((mean - 0.6).abs() < 0.15, "slope {mean}");
    }
}

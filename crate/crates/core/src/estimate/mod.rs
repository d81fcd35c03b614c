//! Slope fitting on MAVAR curves and the mapping from slope to Hurst
//! parameter, plus baseline estimators for cross-checks.
//!
//! For `S_x(f) = h f^alpha` the curve follows `tau^mu` with `mu = -3 - alpha`
//! once `n > 4`, so an LRD series (`-1 < alpha < 0`) has `-3 < mu < -2` and
//! `H = mu / 2 + 2`.

pub mod haar;
pub mod periodogram;
pub mod report;
pub mod segments;
pub mod variance_time;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mavar::{MavarCurve, MavarPoint};
use crate::regression::fit_line;

pub use haar::{haar_logscale_diagram, LogscaleDiagram};
pub use periodogram::periodogram_estimate;
pub use report::EstimateReport;
pub use segments::{fit_segments, SegmentedFit};
pub use variance_time::variance_time_plot;

/// Fewest curve points a slope is fitted through.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    Uniform,
    /// Inverse-variance weights from the per-point term count.
    Confidence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Mavar,
    #[serde(rename = "vtp")]
    VarianceTime,
    Periodogram,
    #[serde(rename = "haarld")]
    HaarLd,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Mavar => "mavar",
            Method::VarianceTime => "vtp",
            Method::Periodogram => "periodogram",
            Method::HaarLd => "haarld",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mavar" => Ok(Method::Mavar),
            "vtp" | "variance-time" => Ok(Method::VarianceTime),
            "periodogram" => Ok(Method::Periodogram),
            "haarld" | "haar-ld" | "ld" => Ok(Method::HaarLd),
            other => Err(Error::param("method", format!("unknown method {other:?}"))),
        }
    }
}

/// Which part of a curve a slope is fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Smallest averaging factor used; the power law only holds for `n > 4`.
    pub n_lo: usize,
    /// Keeps `n <= tail_fraction * floor(N/3)`, dropping the right end of the
    /// curve where few terms are averaged. Ignored when `n_hi` is set.
    pub tail_fraction: f64,
    pub n_hi: Option<usize>,
    pub weighting: Weighting,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            n_lo: 5,
            tail_fraction: 0.1,
            n_hi: None,
            weighting: Weighting::Confidence,
        }
    }
}

impl FitOptions {
    pub fn upper_n(&self, len: usize) -> usize {
        self.n_hi
            .unwrap_or_else(|| (self.tail_fraction * (len / 3) as f64).floor() as usize)
    }

    /// Curve points inside the fit range, checked for positivity.
    pub(crate) fn select<'a>(&self, curve: &'a MavarCurve) -> Result<Vec<&'a MavarPoint>> {
        let hi = self.upper_n(curve.len);
        let pts: Vec<&MavarPoint> = curve
            .points
            .iter()
            .filter(|p| p.n >= self.n_lo && p.n <= hi)
            .collect();
        if let Some(p) = pts.iter().find(|p| p.value.is_nan() || p.value <= 0.0) {
            return Err(Error::NonPositive {
                tau: p.tau,
                value: p.value,
            });
        }
        if pts.len() < MIN_FIT_POINTS {
            return Err(Error::InsufficientPoints {
                found: pts.len(),
                needed: MIN_FIT_POINTS,
            });
        }
        Ok(pts)
    }
}

/// A straight line through part of a curve in log10-log10 coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub mu: f64,
    /// log10 of the power-law constant.
    pub intercept: f64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub tau_lo: f64,
    pub tau_hi: f64,
    pub points: usize,
    pub residual_rms: f64,
    /// Weighted sum of squared residuals, used by segment search.
    pub sse: f64,
    pub weighting: Weighting,
}

pub(crate) fn fit_points(pts: &[&MavarPoint], weighting: Weighting) -> Result<SlopeFit> {
    let x: Vec<f64> = pts.iter().map(|p| p.tau.log10()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.value.log10()).collect();
    let w: Vec<f64> = pts.iter().map(|p| p.fit_weight()).collect();
    let line = match weighting {
        Weighting::Uniform => fit_line(&x, &y, None)?,
        Weighting::Confidence => fit_line(&x, &y, Some(&w))?,
    };
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    Ok(SlopeFit {
        mu: line.slope,
        intercept: line.intercept,
        n_lo: first.n,
        n_hi: last.n,
        tau_lo: first.tau,
        tau_hi: last.tau,
        points: pts.len(),
        residual_rms: line.residual_rms,
        sse: line.sse,
        weighting,
    })
}

/// Fits the log-log slope of `curve` over the range chosen by `opts`.
pub fn fit_slope(curve: &MavarCurve, opts: &FitOptions) -> Result<SlopeFit> {
    let pts = opts.select(curve)?;
    fit_points(&pts, opts.weighting)
}

/// A Hurst/exponent estimate from any of the supported methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub method: Method,
    pub hurst: f64,
    /// Exponent of `S_x(f) = h f^alpha`.
    pub alpha: f64,
    /// LRD exponent, `2H - 1`.
    pub gamma: f64,
    /// The slope the method fitted, in that method's own coordinates.
    pub slope: f64,
    /// `0 < gamma < 1`, equivalently `-3 < mu < -2` for MAVAR.
    pub lrd_valid: bool,
}

impl HurstEstimate {
    pub(crate) fn from_hurst(method: Method, hurst: f64, slope: f64) -> Self {
        let gamma = 2.0 * hurst - 1.0;
        HurstEstimate {
            method,
            hurst,
            alpha: -gamma,
            gamma,
            slope,
            lrd_valid: gamma > 0.0 && gamma < 1.0,
        }
    }
}

/// `H = mu / 2 + 2`, `alpha = -3 - mu`. Slopes outside `(-3, -2)` still
/// produce an estimate, flagged as not LRD.
pub fn hurst_from_slope(fit: &SlopeFit) -> HurstEstimate {
    hurst_from_mu(fit.mu)
}

pub fn hurst_from_mu(mu: f64) -> HurstEstimate {
    let hurst = mu / 2.0 + 2.0;
    HurstEstimate {
        method: Method::Mavar,
        hurst,
        alpha: -3.0 - mu,
        gamma: 2.0 * hurst - 1.0,
        slope: mu,
        lrd_valid: mu > -3.0 && mu < -2.0,
    }
}

/// Curve, default fit and estimate in one call.
pub fn estimate_hurst(curve: &MavarCurve, opts: &FitOptions) -> Result<(SlopeFit, HurstEstimate)> {
    let fit = fit_slope(curve, opts)?;
    Ok((fit, hurst_from_slope(&fit)))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::series::Role;

    pub(crate) fn line_curve(len: usize, tau0: f64, slope_at: impl Fn(f64) -> f64) -> MavarCurve {
        let grid = crate::mavar::TauGrid::geometric(len, 1.1, None).unwrap();
        let m1 = (len - 2) as f64;
        let points = grid
            .values()
            .iter()
            .map(|&n| {
                let m = len - 3 * n + 1;
                let tau = n as f64 * tau0;
                MavarPoint {
                    n,
                    tau,
                    value: 10f64.powf(slope_at(tau.log10())),
                    m,
                    conf: (m1 / m as f64).sqrt(),
                }
            })
            .collect();
        MavarCurve {
            points,
            len,
            tau0,
            label: "synthetic".into(),
            role: Role::Rate,
        }
    }

    #[test]
    fn exact_line_recovered() {
        let curve = line_curve(30_000, 0.01, |lt| -2.5 * lt + 0.3);
        for weighting in [Weighting::Uniform, Weighting::Confidence] {
            let fit = fit_slope(&curve, &FitOptions { weighting, ..Default::default() }).unwrap();
            assert!((fit.mu + 2.5).abs() < 1e-12);
            assert!((fit.intercept - 0.3).abs() < 1e-11);
            assert!(fit.residual_rms < 1e-12);
            assert_eq!(fit.n_lo, 5);
            assert!(fit.n_hi <= 1000);
        }
    }

    #[test]
    fn zero_curve_is_rejected() {
        let curve = line_curve(3000, 1.0, |_| f64::NEG_INFINITY);
        assert!(matches!(
            fit_slope(&curve, &FitOptions::default()),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn too_few_points() {
        let curve = line_curve(60, 1.0, |lt| -3.0 * lt);
        assert!(matches!(
            fit_slope(&curve, &FitOptions::default()),
            Err(Error::InsufficientPoints { .. })
        ));
    }

    #[test]
    fn scaling_the_curve_keeps_the_slope() {
        let curve = line_curve(10_000, 1.0, |lt| -2.3 * lt + 0.05 * (7.0 * lt).sin());
        let mut scaled = curve.clone();
        scaled.points.iter_mut().for_each(|p| p.value *= 1000.0);
        let a = fit_slope(&curve, &FitOptions::default()).unwrap();
        let b = fit_slope(&scaled, &FitOptions::default()).unwrap();
        assert!((a.mu - b.mu).abs() < 1e-12);
        assert!((b.intercept - a.intercept - 3.0).abs() < 1e-12);
    }

    #[test]
    fn mapping_examples() {
        let e = hurst_from_mu(-3.0);
        assert_eq!(e.hurst, 0.5);
        assert_eq!(e.alpha, 0.0);
        assert!(!e.lrd_valid);

        let e = hurst_from_mu(-2.824);
        assert!((e.alpha + 0.176).abs() < 1e-12);
        assert!((e.hurst - 0.588).abs() < 1e-12);
        assert!(e.lrd_valid);

        let e = hurst_from_mu(-1.80);
        assert!((e.alpha + 1.20).abs() < 1e-12);
        assert!(!e.lrd_valid);
        assert!((e.gamma - (2.0 * e.hurst - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Mavar, Method::VarianceTime, Method::Periodogram, Method::HaarLd] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
    }
}

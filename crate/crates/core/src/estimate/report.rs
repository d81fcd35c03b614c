//! JSON summary of an analysis.

use serde::{Deserialize, Serialize};

use super::{hurst_from_slope, HurstEstimate, Method, SegmentedFit, SlopeFit, Weighting};
use crate::error::Result;
use crate::series::Role;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub mu: f64,
    #[serde(rename = "H")]
    pub hurst: f64,
    pub alpha: f64,
    pub lrd_valid: bool,
    pub fit_range_tau: [f64; 2],
    pub residual_rms: f64,
}

impl From<&SlopeFit> for SegmentReport {
    fn from(fit: &SlopeFit) -> Self {
        let est = hurst_from_slope(fit);
        SegmentReport {
            mu: fit.mu,
            hurst: est.hurst,
            alpha: est.alpha,
            lrd_valid: est.lrd_valid,
            fit_range_tau: [fit.tau_lo, fit.tau_hi],
            residual_rms: fit.residual_rms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: Method,
    #[serde(rename = "H")]
    pub hurst: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Fitted slope in the method's own coordinates.
    pub mu: f64,
    pub lrd_valid: bool,
    /// Fit range in seconds; `None` for methods not fitted over tau.
    pub fit_range_tau: Option<[f64; 2]>,
    pub residual_rms: Option<f64>,
    pub segments: Vec<SegmentReport>,
    pub breakpoints: Vec<f64>,
    /// Which samples were analysed.
    pub role: Role,
    /// How the slope maps to `H`.
    pub convention: String,
    /// Fit-range policy, stated so the tail exclusion is visible.
    pub fit_policy: Option<String>,
}

impl EstimateReport {
    pub fn mavar(fit: &SlopeFit, segmented: Option<&SegmentedFit>, role: Role) -> Self {
        let est = hurst_from_slope(fit);
        let weighting = match fit.weighting {
            Weighting::Uniform => "uniform",
            Weighting::Confidence => "confidence-weighted",
        };
        EstimateReport {
            method: Method::Mavar,
            hurst: est.hurst,
            alpha: est.alpha,
            gamma: est.gamma,
            mu: fit.mu,
            lrd_valid: est.lrd_valid,
            fit_range_tau: Some([fit.tau_lo, fit.tau_hi]),
            residual_rms: Some(fit.residual_rms),
            segments: segmented
                .map(|s| s.segments.iter().map(SegmentReport::from).collect())
                .unwrap_or_default(),
            breakpoints: segmented.map(|s| s.breakpoints.clone()).unwrap_or_default(),
            role,
            convention: convention(Method::Mavar).into(),
            fit_policy: Some(format!(
                "{weighting} log-log fit over n = {}..={} ({} points)",
                fit.n_lo, fit.n_hi, fit.points
            )),
        }
    }

    pub fn baseline(est: &HurstEstimate, role: Role) -> Self {
        EstimateReport {
            method: est.method,
            hurst: est.hurst,
            alpha: est.alpha,
            gamma: est.gamma,
            mu: est.slope,
            lrd_valid: est.lrd_valid,
            fit_range_tau: None,
            residual_rms: None,
            segments: Vec::new(),
            breakpoints: Vec::new(),
            role,
            convention: convention(est.method).into(),
            fit_policy: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn convention(method: Method) -> &'static str {
    match method {
        Method::Mavar => "mu = -3 - alpha, H = mu/2 + 2",
        Method::VarianceTime => "slope s of log var vs log window, H = 1 + s/2",
        Method::Periodogram => "slope = alpha of S_x(f) ~ f^alpha, H = (1 - alpha)/2",
        Method::HaarLd => "slope = gamma of log2 energy vs octave, H = (1 + gamma)/2",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{fit_slope, tests::line_curve, FitOptions};

    #[test]
    fn json_has_the_documented_keys() {
        let curve = line_curve(30_000, 0.01, |lt| -2.4 * lt);
        let fit = fit_slope(&curve, &FitOptions::default()).unwrap();
        let report = EstimateReport::mavar(&fit, None, Role::Rate);
        let v: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        for key in [
            "method",
            "H",
            "alpha",
            "gamma",
            "mu",
            "lrd_valid",
            "fit_range_tau",
            "residual_rms",
            "segments",
            "role",
            "convention",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["method"], "mavar");
        assert_eq!(v["role"], "rate");
        assert!((v["H"].as_f64().unwrap() - 0.8).abs() < 1e-9);
    }

    #[test]
    fn round_trips() {
        let curve = line_curve(30_000, 0.01, |lt| -2.4 * lt);
        let fit = fit_slope(&curve, &FitOptions::default()).unwrap();
        let report = EstimateReport::mavar(&fit, None, Role::Cumulative);
        let back: EstimateReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
    }
}

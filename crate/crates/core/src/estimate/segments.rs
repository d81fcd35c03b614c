//! Piecewise-linear fits of a log-log curve.
//!
//! A mixture of power-law noises shows up as a broken line whose segment
//! slopes give the individual exponents. Breakpoints are searched
//! exhaustively over the grid points by dynamic programming, so the result
//! is the global least-squares optimum for the chosen segment count.

use serde::{Deserialize, Serialize};

use super::{fit_points, FitOptions, SlopeFit, MIN_FIT_POINTS};
use crate::error::{Error, Result};
use crate::mavar::{MavarCurve, MavarPoint};

pub const MAX_SEGMENTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentedFit {
    pub segments: Vec<SlopeFit>,
    /// Geometric mean of the last tau of one segment and the first tau of
    /// the next.
    pub breakpoints: Vec<f64>,
    pub total_residual: f64,
}

/// Splits the fit range into `k` contiguous segments, each with at least
/// four points, minimising the summed weighted squared residual.
pub fn fit_segments(curve: &MavarCurve, k: usize, opts: &FitOptions) -> Result<SegmentedFit> {
    if !(1..=MAX_SEGMENTS).contains(&k) {
        return Err(Error::param("k", format!("must lie in 1..={MAX_SEGMENTS}, got {k}")));
    }
    let pts = opts.select(curve)?;
    let p = pts.len();
    if p < k * MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            found: p,
            needed: k * MIN_FIT_POINTS,
        });
    }

    // cost[i][j]: fit of pts[i..j]
    let mut cost: Vec<Vec<Option<SlopeFit>>> = vec![vec![None; p + 1]; p + 1];
    for i in 0..p {
        for j in i + MIN_FIT_POINTS..=p {
            cost[i][j] = Some(fit_points(&pts[i..j], opts.weighting)?);
        }
    }

    // best[s][j]: (total sse, split) covering pts[..j] with s segments
    let mut best: Vec<Vec<Option<(f64, usize)>>> = vec![vec![None; p + 1]; k + 1];
    best[0][0] = Some((0.0, 0));
    for s in 1..=k {
        for j in s * MIN_FIT_POINTS..=p {
            let mut choice: Option<(f64, usize)> = None;
            for i in (s - 1) * MIN_FIT_POINTS..=j - MIN_FIT_POINTS {
                let (Some((prev, _)), Some(fit)) = (best[s - 1][i], cost[i][j].as_ref()) else {
                    continue;
                };
                let total = prev + fit.sse;
                if choice.is_none_or(|(c, _)| total < c) {
                    choice = Some((total, i));
                }
            }
            best[s][j] = choice;
        }
    }

    let (total_residual, _) = best[k][p].expect("feasible by the length check");
    let mut bounds = vec![p];
    let mut j = p;
    for s in (1..=k).rev() {
        let (_, i) = best[s][j].expect("reachable state");
        bounds.push(i);
        j = i;
    }
    bounds.reverse();

    let segments: Vec<SlopeFit> = bounds
        .windows(2)
        .map(|w| cost[w[0]][w[1]].expect("segment long enough"))
        .collect();
    let breakpoints = bounds[1..k]
        .iter()
        .map(|&b| breakpoint_tau(pts[b - 1], pts[b]))
        .collect();
    Ok(SegmentedFit {
        segments,
        breakpoints,
        total_residual,
    })
}

fn breakpoint_tau(left: &MavarPoint, right: &MavarPoint) -> f64 {
    (left.tau * right.tau).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{fit_slope, tests::line_curve, Weighting};

    fn opts() -> FitOptions {
        FitOptions {
            n_hi: Some(20_000),
            ..Default::default()
        }
    }

    /// Broken line, slopes -2.8 then -1.8, continuous at tau = 10.
    fn broken(lt: f64) -> f64 {
        if lt <= 1.0 {
            -2.8 * lt
        } else {
            -2.8 - 1.8 * (lt - 1.0)
        }
    }

    #[test]
    fn noiseless_two_segments() {
        let curve = line_curve(65_536, 0.008, broken);
        let fit = fit_segments(&curve, 2, &opts()).unwrap();
        assert!((fit.segments[0].mu + 2.8).abs() < 1e-9);
        assert!((fit.segments[1].mu + 1.8).abs() < 1e-9);
        let bp = fit.breakpoints[0];
        // within one grid step (ratio 1.1) of tau = 10
        assert!(bp / 10.0 < 1.1 && 10.0 / bp < 1.1, "breakpoint {bp}");
        assert!(fit.total_residual < 1e-15);
    }

    #[test]
    fn one_segment_matches_fit_slope() {
        let curve = line_curve(65_536, 0.008, broken);
        for weighting in [Weighting::Uniform, Weighting::Confidence] {
            let o = FitOptions { weighting, ..opts() };
            let seg = fit_segments(&curve, 1, &o).unwrap();
            assert_eq!(seg.segments[0], fit_slope(&curve, &o).unwrap());
            assert!(seg.breakpoints.is_empty());
        }
    }

    #[test]
    fn residual_non_increasing_in_k() {
        let curve = line_curve(65_536, 0.008, |lt| broken(lt) + 0.02 * (9.0 * lt).sin());
        let r: Vec<f64> = (1..=3)
            .map(|k| fit_segments(&curve, k, &opts()).unwrap().total_residual)
            .collect();
        assert!(r[1] <= r[0] && r[2] <= r[1], "{r:?}");
    }

    #[test]
    fn segments_are_contiguous_and_ordered() {
        let curve = line_curve(65_536, 0.008, |lt| broken(lt) + 0.01 * (5.0 * lt).cos());
        let fit = fit_segments(&curve, 3, &opts()).unwrap();
        for w in fit.segments.windows(2) {
            assert!(w[0].tau_hi < w[1].tau_lo);
        }
        for (b, w) in fit.breakpoints.iter().zip(fit.segments.windows(2)) {
            assert!(*b > w[0].tau_hi && *b < w[1].tau_lo);
        }
    }

    #[test]
    fn rejects_bad_k_and_short_curves() {
        let curve = line_curve(65_536, 0.008, broken);
        assert!(fit_segments(&curve, 0, &opts()).is_err());
        assert!(fit_segments(&curve, 4, &opts()).is_err());
        let short = line_curve(90, 1.0, broken);
        assert!(matches!(
            fit_segments(&short, 3, &FitOptions::default()),
            Err(Error::InsufficientPoints { .. })
        ));
    }
}

//! Weighted least-squares straight line.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Weighted sum of squared residuals.
    pub sse: f64,
    /// `sqrt(sse / sum(w))`, the weighted RMS residual.
    pub residual_rms: f64,
}

/// Fits `y = slope * x + intercept` minimising `sum w_i (y_i - fit_i)^2`.
/// `None` weights means all ones.
pub fn fit_line(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> Result<LineFit> {
    if x.len() != y.len() || weights.is_some_and(|w| w.len() != x.len()) {
        return Err(Error::param("fit", "x, y and weights must have equal lengths"));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientPoints {
            found: x.len(),
            needed: 2,
        });
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for i in 0..x.len() {
        sw += w(i);
        sx += w(i) * x[i];
        sy += w(i) * y[i];
    }
    if sw.is_nan() || sw <= 0.0 {
        return Err(Error::param("weights", "weights must sum to a positive value"));
    }
    let (mx, my) = (sx / sw, sy / sw);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..x.len() {
        let dx = x[i] - mx;
        sxx += w(i) * dx * dx;
        sxy += w(i) * dx * (y[i] - my);
    }
    if sxx <= 0.0 {
        return Err(Error::Degenerate("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = (0..x.len())
        .map(|i| w(i) * (y[i] - slope * x[i] - intercept).powi(2))
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        sse,
        residual_rms: (sse / sw).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| -2.5 * v + 1.0).collect();
        let f = fit_line(&x, &y, None).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert!(f.residual_rms < 1e-14);
    }

    #[test]
    fn weights_pull_toward_heavy_points() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 0.0];
        let flat = fit_line(&x, &y, Some(&[1.0, 0.0, 1.0])).unwrap();
        assert!(flat.slope.abs() < 1e-15);
        assert!(fit_line(&x, &y, Some(&[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[1.0], &[1.0], None).is_err());
        assert!(fit_line(&[1.0, 1.0], &[0.0, 2.0], None).is_err());
        assert!(fit_line(&[1.0, 2.0], &[0.0], None).is_err());
    }
}

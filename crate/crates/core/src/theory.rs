//! Closed-form and integrated MAVAR predictions.
//!
//! In the frequency domain MAVAR is the power of `y = x'` passed through
//! the filter
//!
//! ```text
//! |H(n, f)|^2 = 2 sin^6(pi tau f) / ((n pi tau f)^2 sin^2(pi tau f / n)),   tau = n tau0
//! ```
//!
//! so that `Mod sigma_y^2(tau) = integral S_x(f) (2 pi f)^2 |H(n, f)|^2 df`.
//! For a sampled series whose one-sided PSD is `S_x` on `(0, 1/(2 tau0)]`
//! this is exactly the expectation of the finite-sample estimator, which
//! is what makes these values usable as test oracles.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Relative accuracy targeted by [`mavar_theoretical`].
pub const QUAD_REL_TOL: f64 = 1e-6;

/// Filter lobes integrated one panel at a time before the rest of the band
/// is grouped into wider panels.
const SPLIT_LOBES: usize = 20;

/// Upper bound on the number of panels per integral.
const MAX_PANELS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawComponent {
    pub alpha: f64,
    pub h: f64,
}

/// `S_x(f) = sum_i h_i f^alpha_i` for `0 < f <= f_h`, zero above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    components: Vec<PowerLawComponent>,
    f_h: f64,
}

impl PowerLawModel {
    pub fn new(components: Vec<PowerLawComponent>, f_h: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::param("components", "need at least one component"));
        }
        for c in &components {
            crate::synth::validate_alpha(c.alpha)?;
            if !(c.h.is_finite() && c.h > 0.0) {
                return Err(Error::param("h", format!("must be positive and finite, got {}", c.h)));
            }
        }
        if !(f_h.is_finite() && f_h > 0.0) {
            return Err(Error::param("f_h", format!("must be positive and finite, got {f_h}")));
        }
        Ok(PowerLawModel { components, f_h })
    }

    pub fn single(alpha: f64, h: f64, f_h: f64) -> Result<Self> {
        Self::new(vec![PowerLawComponent { alpha, h }], f_h)
    }

    pub fn components(&self) -> &[PowerLawComponent] {
        &self.components
    }

    pub fn f_h(&self) -> f64 {
        self.f_h
    }

    /// One-sided PSD at `f`.
    pub fn psd(&self, f: f64) -> f64 {
        // tolerate round-off in k * df landing a hair above the cutoff
        if f <= 0.0 || f > self.f_h * (1.0 + 1e-12) {
            return 0.0;
        }
        self.components.iter().map(|c| c.h * f.powf(c.alpha)).sum()
    }
}

/// `|H_MA(n, f)|^2` at observation interval `tau`.
///
/// The removable singularities at `f = 0` and `f = k n / tau` evaluate to
/// their limit, zero.
pub fn transfer_mag_sq(n: usize, tau: f64, f: f64) -> f64 {
    let a = PI * tau * f;
    let s = (a / n as f64).sin();
    if s.abs() < 1e-12 {
        // near f = 0 the value tends to 2 (pi tau f)^2, near f = k n / tau to 0
        return if a.abs() < 1.0 { 2.0 * a * a } else { 0.0 };
    }
    let nn = n as f64;
    2.0 * a.sin().powi(6) / ((nn * a).powi(2) * s * s)
}

/// `n -> infinity` limit of [`transfer_mag_sq`] at fixed `tau`.
pub fn transfer_limit_mag_sq(tau: f64, f: f64) -> f64 {
    let a = PI * tau * f;
    if a == 0.0 {
        return 0.0;
    }
    2.0 * a.sin().powi(6) / a.powi(4)
}

/// Expected MAVAR of power-law noise at `tau = n tau0`, by numerical
/// integration of the filtered spectrum over `(0, f_h]`.
pub fn mavar_theoretical(model: &PowerLawModel, tau: f64, n: usize) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0) || n == 0 {
        return Err(Error::param("tau", format!("need tau > 0 and n >= 1, got {tau}, {n}")));
    }
    model
        .components()
        .iter()
        .map(|c| component_mavar(c, model.f_h(), tau, n))
        .sum()
}

fn component_mavar(c: &PowerLawComponent, f_h: f64, tau: f64, n: usize) -> Result<f64> {
    let integrand = |f: f64| {
        let w = 2.0 * PI * f;
        c.h * f.powf(c.alpha) * w * w * transfer_mag_sq(n, tau, f)
    };
    let edges = panel_edges(tau, f_h);
    let mut total = 0.0;
    let mut pieces = Vec::with_capacity(edges.len());
    for w in edges.windows(2) {
        let piece = quad::integrate(integrand, w[0], w[1], QUAD_REL_TOL * 1e-3, 0.0, 200)?;
        total += piece.value;
        pieces.push(piece);
    }
    let error: f64 = pieces.iter().map(|p| p.error).sum();
    if error > QUAD_REL_TOL * total.abs() {
        return Err(Error::Quadrature {
            estimate: total,
            error,
        });
    }
    Ok(total)
}

/// Panel boundaries on `(0, f_h]`: one panel per filter lobe `[k/tau,
/// (k+1)/tau]` for the first [`SPLIT_LOBES`] lobes, then panels spanning
/// several lobes so the count stays bounded.
fn panel_edges(tau: f64, f_h: f64) -> Vec<f64> {
    let lobe = 1.0 / tau;
    let lobes = (f_h / lobe).floor() as usize;
    let mut edges = vec![0.0];
    let direct = lobes.min(SPLIT_LOBES);
    edges.extend((1..=direct).map(|k| k as f64 * lobe));
    if lobes > direct {
        let remaining = lobes - direct;
        let per_panel = remaining.div_ceil(MAX_PANELS - SPLIT_LOBES).max(1);
        let mut k = direct;
        while k < lobes {
            k = (k + per_panel).min(lobes);
            edges.push(k as f64 * lobe);
        }
    }
    let last = *edges.last().expect("non-empty");
    if f_h > last * (1.0 + 1e-12) {
        edges.push(f_h);
    } else {
        *edges.last_mut().expect("non-empty") = f_h;
    }
    edges
}

/// Infinite-average MAVAR of `A sin(2 pi f_m t)` (the `n -> infinity`
/// form): `(2 pi f_m A)^2 sin^6(pi f_m tau) / (pi f_m tau)^4`.
///
/// The `(2 pi f_m)^2` factor converts the amplitude of `x` into that of
/// `y = x'`. Zeros fall at `tau = k / f_m`, with one ripple maximum between
/// consecutive zeros.
pub fn mavar_sine(amplitude: f64, f_m: f64, tau: f64) -> f64 {
    let w = 2.0 * PI * f_m * amplitude;
    w * w * transfer_limit_mag_sq(tau, f_m) / 2.0
}

/// Finite-`n` MAVAR of a sine: the spectral line `A^2/2` at `f_m` through
/// the exact filter.
pub fn mavar_sine_finite(amplitude: f64, f_m: f64, n: usize, tau: f64) -> f64 {
    let w = 2.0 * PI * f_m;
    amplitude * amplitude / 2.0 * w * w * transfer_mag_sq(n, tau, f_m)
}

/// MAVAR of a quadratic drift `C t^2`: `2 C^2 tau^2`. Offset and linear
/// drift do not contribute.
pub fn mavar_quadratic(c: f64, tau: f64) -> f64 {
    2.0 * c * c * tau * tau
}

/// Infinite-average MAVAR of a single step: zero at every `tau`.
///
/// Finite series only show a step through the windows that straddle it;
/// this is the ideal those results converge to as the record grows.
pub fn mavar_step_ideal(_amplitude: f64, _tau: f64) -> f64 {
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::fit_line;

    #[test]
    fn transfer_small_f_behaves_as_f_squared() {
        for (n, tau) in [(1, 1.0), (8, 0.5), (64, 3.0)] {
            let f = 1e-6 / tau;
            let expected = 2.0 * (PI * tau * f).powi(2);
            let got = transfer_mag_sq(n, tau, f);
            assert!((got / expected - 1.0).abs() < 1e-9, "n={n}: {got} vs {expected}");
        }
        assert_eq!(transfer_mag_sq(5, 1.0, 0.0), 0.0);
    }

    #[test]
    fn transfer_n1_is_allan_filter() {
        for i in 1..=100 {
            let tau = 0.7;
            let f = i as f64 * 0.013;
            let a = PI * tau * f;
            let allan = 2.0 * a.sin().powi(4) / (a * a);
            let got = transfer_mag_sq(1, tau, f);
            assert!((got - allan).abs() <= 1e-12 * allan.max(1e-300) + 1e-15, "f={f}");
        }
    }

    #[test]
    fn main_lobe_near_one_third() {
        for n in [5, 8, 16, 64] {
            let tau = 2.0;
            let (mut best_f, mut best) = (0.0, 0.0);
            for i in 1..10_000 {
                let f = i as f64 * 1e-4 / tau;
                let v = transfer_mag_sq(n, tau, f);
                if v > best {
                    best = v;
                    best_f = f;
                }
            }
            let target = 1.0 / (3.0 * tau);
            assert!((best_f / target - 1.0).abs() < 0.10, "n={n}: peak at {best_f}");
        }
    }

    #[test]
    fn limit_values() {
        let tau = 1.3;
        assert!((transfer_limit_mag_sq(tau, 0.5 / tau) - 32.0 / PI.powi(4)).abs() < 1e-14);
        for k in 1..5 {
            assert!(transfer_limit_mag_sq(tau, k as f64 / tau) < 1e-40);
            assert!(transfer_mag_sq(7, tau, k as f64 / tau) < 1e-40);
        }
        assert_eq!(transfer_limit_mag_sq(tau, 0.0), 0.0);
    }

    #[test]
    fn finite_n_approaches_limit() {
        let tau = 1.0;
        let peak = transfer_limit_mag_sq(tau, 0.3087);
        for i in 1..=1000 {
            let f = i as f64 * 1e-3;
            let lim = transfer_limit_mag_sq(tau, f);
            let n16 = transfer_mag_sq(16, tau, f);
            assert!((n16 - lim).abs() <= 0.02 * lim + 1e-300, "f={f}");
        }
        for i in 1..=2000 {
            let f = i as f64 * 1e-3;
            let dev = (transfer_mag_sq(32, tau, f) - transfer_limit_mag_sq(tau, f)).abs();
            assert!(dev < 0.01 * peak, "f={f}");
        }
    }

    #[test]
    fn quadratic_and_step() {
        assert_eq!(mavar_quadratic(0.0, 3.0), 0.0);
        assert_eq!(mavar_quadratic(1.0, 2.0), 8.0);
        assert_eq!(mavar_step_ideal(2.0, 10.0), 0.0);
    }

    #[test]
    fn sine_closed_form() {
        let f_m = 0.5 / PI; // 2 pi f_m = 1, so the amplitude factor drops out
        let a = 1.7;
        let v = mavar_sine(a, f_m, 1.0 / (2.0 * f_m));
        assert!((v - 16.0 * a * a / PI.powi(4)).abs() < 1e-14);
        for k in 1..4 {
            assert!(mavar_sine(a, 0.01, k as f64 / 0.01) < 1e-30);
        }
    }

    #[test]
    fn sine_ripple_period() {
        let f_m = 0.02;
        let mut maxima = Vec::new();
        let step = 0.01;
        let vals: Vec<f64> = (1..50_000).map(|i| mavar_sine(1.0, f_m, i as f64 * step)).collect();
        for i in 1..vals.len() - 1 {
            if vals[i] > vals[i - 1] && vals[i] >= vals[i + 1] {
                maxima.push((i + 1) as f64 * step);
            }
        }
        // sin^6 repeats every 1/f_m in tau (the sine itself every 2/f_m)
        let spacing: Vec<f64> = maxima.windows(2).skip(3).map(|w| w[1] - w[0]).collect();
        assert!(!spacing.is_empty());
        for s in spacing {
            assert!((s - 1.0 / f_m).abs() / (1.0 / f_m) < 0.02, "spacing {s}");
        }
    }

    #[test]
    fn rejects_bad_models() {
        assert!(PowerLawModel::single(-5.0, 1.0, 0.5).is_err());
        assert!(PowerLawModel::single(0.1, 1.0, 0.5).is_err());
        assert!(PowerLawModel::single(-1.0, 0.0, 0.5).is_err());
        assert!(PowerLawModel::single(-1.0, 1.0, 0.0).is_err());
        assert!(PowerLawModel::new(vec![], 0.5).is_err());
    }

    #[test]
    fn white_phase_noise_matches_exact_sum() {
        // unit-variance discrete white noise: S_x = 2 tau0 on (0, 1/(2 tau0)],
        // and the estimator expectation is 3 sigma^2 / (n^3 tau0^2)
        let tau0 = 0.25;
        let model = PowerLawModel::single(0.0, 2.0 * tau0, 0.5 / tau0).unwrap();
        for n in [1, 2, 5, 17, 100] {
            let got = mavar_theoretical(&model, n as f64 * tau0, n).unwrap();
            let exact = 3.0 / ((n as f64).powi(3) * tau0 * tau0);
            assert!((got / exact - 1.0).abs() < 1e-6, "n={n}: {got} vs {exact}");
        }
    }

    #[test]
    fn linear_in_amplitude() {
        let one = PowerLawModel::single(-0.6, 1.0, 0.5).unwrap();
        let two = PowerLawModel::single(-0.6, 2.0, 0.5).unwrap();
        for n in [3, 30, 300] {
            let a = mavar_theoretical(&one, n as f64, n).unwrap();
            let b = mavar_theoretical(&two, n as f64, n).unwrap();
            assert_eq!(b, 2.0 * a);
        }
        let mix = PowerLawModel::new(
            vec![
                PowerLawComponent { alpha: -0.6, h: 1.0 },
                PowerLawComponent { alpha: -1.5, h: 0.1 },
            ],
            0.5,
        )
        .unwrap();
        let single = PowerLawModel::single(-1.5, 0.1, 0.5).unwrap();
        let v = mavar_theoretical(&mix, 40.0, 40).unwrap();
        let parts = mavar_theoretical(&one, 40.0, 40).unwrap()
            + mavar_theoretical(&single, 40.0, 40).unwrap();
        assert!((v - parts).abs() <= 1e-15 * v);
    }

    #[test]
    fn slope_follows_power_law() {
        // n held proportional to tau: tau0 fixed, n over two decades above 4
        for (alpha, mu) in [(0.0, -3.0), (-0.6, -2.4)] {
            let model = PowerLawModel::single(alpha, 1.0, 0.5).unwrap();
            let ns: Vec<usize> = (0..=20).map(|i| (5.0 * 10f64.powf(i as f64 / 10.0)).round() as usize).collect();
            let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log10()).collect();
            let ys: Vec<f64> = ns
                .iter()
                .map(|&n| mavar_theoretical(&model, n as f64, n).unwrap().log10())
                .collect();
            let fit = fit_line(&xs, &ys, None).unwrap();
            assert!((fit.slope - mu).abs() < 0.03, "alpha={alpha}: slope {}", fit.slope);
        }
    }

    #[test]
    fn theoretical_values_are_non_negative() {
        for alpha in [0.0, -1.0, -2.5, -4.5] {
            let model = PowerLawModel::single(alpha, 1.0, 0.5).unwrap();
            for n in [1, 4, 40, 400] {
                assert!(mavar_theoretical(&model, n as f64, n).unwrap() >= 0.0);
            }
        }
    }
}

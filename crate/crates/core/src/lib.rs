//! Long-range dependence and power-law noise analysis with the Modified
//! Allan Variance (MAVAR).
//!
//! The pipeline is: load or synthesise a uniformly sampled series
//! ([`series`], [`synth`]), compute its MAVAR curve over a geometric grid of
//! averaging factors ([`mavar`]), fit the log-log slope `mu` and map it to
//! the Hurst parameter `H = mu/2 + 2` ([`estimate`]). [`theory`] predicts
//! MAVAR curves for power-law spectra and deterministic signals, and
//! [`experiment`] runs seeded Monte Carlo studies of estimator accuracy.
//!
//! ```
//! use mavar::estimate::{estimate_hurst, FitOptions};
//! use mavar::mavar::mavar_curve;
//! use mavar::synth::{gen_lrd, GeneratorSpec};
//!
//! let x = gen_lrd(&GeneratorSpec::with_hurst(1 << 14, 0.8, 42), 1.0).unwrap();
//! let curve = mavar_curve(&x).unwrap();
//! let (fit, est) = estimate_hurst(&curve, &FitOptions::default()).unwrap();
//! assert!((est.hurst - 0.8).abs() < 0.1);
//! assert!(fit.mu < -2.0 && fit.mu > -3.0);
//! ```

pub mod cli;
pub mod error;
pub mod estimate;
pub mod experiment;
pub mod mavar;
pub mod quad;
pub mod regression;
pub mod series;
pub mod synth;
pub mod theory;

pub use error::{Error, Result};
pub use estimate::{estimate_hurst, fit_segments, fit_slope, FitOptions, HurstEstimate};
pub use mavar::{mavar_curve, mavar_fast, mavar_naive, MavarCurve, TauGrid};
pub use series::{Role, TimeSeries};
pub use synth::{gen_lrd, GeneratorSpec};

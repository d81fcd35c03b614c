//! Seeded power-law noise by spectral shaping, plus the deterministic
//! contaminants (offset/drift, sine, step) used to probe estimator
//! robustness.
//!
//! The generator fills the positive-frequency bins `f_k = k / (N tau0)`,
//! `k = 1..=N/2`, with complex coefficients whose mean-square magnitude makes
//! the one-sided PSD of the output equal to the requested `S_x(f)`; the
//! negative half is the complex conjugate so the inverse transform is real.
//! The DC bin is zero. Randomness comes from ChaCha8 seeded with
//! `seed_from_u64`, so outputs are identical across platforms.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Role, TimeSeries};
use crate::theory::PowerLawModel;

/// Smallest length the generator accepts.
pub const MIN_LEN: usize = 8;

/// How coefficient magnitudes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeMode {
    /// Fixed magnitude `sqrt(S_x(f_k) df / 2)`; only the phase is random.
    DeterministicSqrtPsd,
    /// Circular complex Gaussian with the same mean-square magnitude, i.e.
    /// Rayleigh magnitude and uniform phase.
    #[default]
    Rayleigh,
}

impl std::str::FromStr for AmplitudeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rayleigh" => Ok(AmplitudeMode::Rayleigh),
            "deterministic-sqrt-psd" | "deterministic" => Ok(AmplitudeMode::DeterministicSqrtPsd),
            other => Err(Error::param("mode", format!("unknown amplitude mode {other:?}"))),
        }
    }
}

/// Parameters of a single power-law series `S_x(f) = f^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    #[serde(default)]
    pub mode: AmplitudeMode,
    /// Shift and scale to sample mean 0 and variance 1.
    #[serde(default = "default_normalize")]
    pub normalize: bool,
}

fn default_normalize() -> bool {
    true
}

impl GeneratorSpec {
    pub fn new(n: usize, alpha: f64, seed: u64) -> Self {
        GeneratorSpec {
            n,
            alpha,
            seed,
            mode: AmplitudeMode::default(),
            normalize: true,
        }
    }

    /// Spec for Hurst parameter `h` of an LRD series, `alpha = 1 - 2h`.
    pub fn with_hurst(n: usize, hurst: f64, seed: u64) -> Self {
        Self::new(n, alpha_from_hurst(hurst), seed)
    }

    pub fn mode(mut self, mode: AmplitudeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn hurst(&self) -> f64 {
        hurst_from_alpha(self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        validate_alpha(self.alpha)?;
        validate_len(self.n)
    }
}

pub fn alpha_from_hurst(hurst: f64) -> f64 {
    1.0 - 2.0 * hurst
}

pub fn hurst_from_alpha(alpha: f64) -> f64 {
    (1.0 - alpha) / 2.0
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -5.0 && alpha <= 0.0) {
        return Err(Error::param("alpha", format!("must lie in (-5, 0], got {alpha}")));
    }
    Ok(())
}

fn validate_len(n: usize) -> Result<()> {
    if n < MIN_LEN || !n.is_power_of_two() {
        return Err(Error::param(
            "n",
            format!("must be a power of two no smaller than {MIN_LEN}, got {n}"),
        ));
    }
    Ok(())
}

/// Generates `S_x(f) = f^alpha` noise (unit `h`) of length `spec.n`.
pub fn gen_lrd(spec: &GeneratorSpec, tau0: f64) -> Result<TimeSeries> {
    spec.validate()?;
    let model = PowerLawModel::single(spec.alpha, 1.0, 0.5 / tau0)?;
    let series = gen_power_law(&model, spec.n, spec.seed, spec.mode, spec.normalize, tau0)?;
    Ok(series.with_label(format!("lrd alpha={} seed={}", spec.alpha, spec.seed)))
}

/// Generates noise whose one-sided PSD follows an arbitrary power-law
/// mixture. Components above the model cutoff contribute nothing.
///
/// Without normalization the output variance is `integral S_x(f) df` over
/// the sampled band, so results compare directly against
/// [`crate::theory::mavar_theoretical`] for the same model.
pub fn gen_power_law(
    model: &PowerLawModel,
    n: usize,
    seed: u64,
    mode: AmplitudeMode,
    normalize: bool,
    tau0: f64,
) -> Result<TimeSeries> {
    validate_len(n)?;
    if !(tau0.is_finite() && tau0 > 0.0) {
        return Err(Error::param("tau0", format!("must be positive and finite, got {tau0}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let df = 1.0 / (n as f64 * tau0);
    let half = n / 2;

    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..=half {
        let f = k as f64 * df;
        let amp = (model.psd(f) * df / 2.0).sqrt();
        let coef = match mode {
            AmplitudeMode::DeterministicSqrtPsd => {
                let phase = rng.random::<f64>() * 2.0 * PI;
                Complex64::from_polar(amp, phase)
            }
            AmplitudeMode::Rayleigh => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * (amp / SQRT_2)
            }
        };
        if k == half {
            // Nyquist bin is real and carries half a bin of power.
            let re = match mode {
                AmplitudeMode::DeterministicSqrtPsd => amp * coef.re.signum(),
                AmplitudeMode::Rayleigh => coef.re * SQRT_2,
            };
            spectrum[k] = Complex64::new(re, 0.0);
        } else {
            spectrum[k] = coef;
            spectrum[n - k] = coef.conj();
        }
    }

    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    let mut samples: Vec<f64> = spectrum.iter().map(|c| c.re).collect();
    if normalize {
        normalize_unit(&mut samples)?;
    }
    TimeSeries::new(samples, tau0, Role::Rate)
}

/// Shifts and scales to mean 0 and (population) variance 1.
fn normalize_unit(samples: &mut [f64]) -> Result<()> {
    let len = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / len;
    samples.iter_mut().for_each(|v| *v -= mean);
    let var = samples.iter().map(|v| v * v).sum::<f64>() / len;
    if var <= 0.0 {
        return Err(Error::Degenerate("generated series has zero variance".into()));
    }
    let scale = var.sqrt().recip();
    samples.iter_mut().for_each(|v| *v *= scale);
    // second pass removes the residual round-off of the first
    let mean = samples.iter().sum::<f64>() / len;
    samples.iter_mut().for_each(|v| *v -= mean);
    Ok(())
}

/// A deterministic signal superposed on a series. Time is `t_k = k tau0`
/// with `k` counted from zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Contaminant {
    /// `A + B t + C t^2`.
    OffsetDrift {
        #[serde(rename = "A", alias = "a")]
        a: f64,
        #[serde(rename = "B", alias = "b", default)]
        b: f64,
        #[serde(rename = "C", alias = "c", default)]
        c: f64,
    },
    /// `A sin(2 pi f_m t)`.
    Sine {
        #[serde(rename = "A", alias = "a")]
        amplitude: f64,
        #[serde(rename = "f_m", alias = "fm")]
        freq: f64,
    },
    /// `A` added to every sample with index `k >= M`.
    Step {
        #[serde(rename = "A", alias = "a")]
        amplitude: f64,
        #[serde(rename = "M", alias = "m")]
        delay: usize,
    },
}

impl Contaminant {
    pub fn validate(&self, len: usize, tau0: f64) -> Result<()> {
        match *self {
            Contaminant::OffsetDrift { a, b, c } => {
                if ![a, b, c].iter().all(|v| v.is_finite()) {
                    return Err(Error::param("offset-drift", "coefficients must be finite"));
                }
            }
            Contaminant::Sine { amplitude, freq } => {
                let nyquist = 0.5 / tau0;
                if !amplitude.is_finite() || !(freq > 0.0 && freq <= nyquist) {
                    return Err(Error::param(
                        "f_m",
                        format!("must lie in (0, {nyquist}], got {freq}"),
                    ));
                }
            }
            Contaminant::Step { amplitude, delay } => {
                if !amplitude.is_finite() || !(delay > 1 && delay < len) {
                    return Err(Error::param(
                        "M",
                        format!("step delay must lie strictly inside (1, {len}), got {delay}"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn value(&self, k: usize, tau0: f64) -> f64 {
        let t = k as f64 * tau0;
        match *self {
            Contaminant::OffsetDrift { a, b, c } => a + b * t + c * t * t,
            Contaminant::Sine { amplitude, freq } => amplitude * (2.0 * PI * freq * t).sin(),
            Contaminant::Step { amplitude, delay } => {
                if k >= delay {
                    amplitude
                } else {
                    0.0
                }
            }
        }
    }
}

/// Adds `c` sample-wise to `series`.
pub fn apply_contaminant(series: &TimeSeries, c: &Contaminant) -> Result<TimeSeries> {
    c.validate(series.len(), series.tau0())?;
    let tau0 = series.tau0();
    let samples = series
        .samples()
        .iter()
        .enumerate()
        .map(|(k, x)| x + c.value(k, tau0))
        .collect();
    Ok(series.map_samples(samples))
}

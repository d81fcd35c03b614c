//! Evenly spaced time series: construction, text I/O, timestamp binning and
//! rate/cumulative conversion.
//!
//! Two text layouts are understood:
//!
//! * one-column: one decimal value per line, the sampling period supplied
//!   by the caller;
//! * two-column: `time value` rows separated by whitespace or a comma, the
//!   sampling period inferred from the (constant) time spacing.
//!
//! Lines starting with `#` and blank lines are skipped; LF and CRLF endings
//! are both accepted.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest series the MAVAR estimator can evaluate (one term at n = 1).
pub const MIN_SAMPLES: usize = 4;

/// Relative tolerance on the spacing of two-column input.
pub const SPACING_TOLERANCE: f64 = 1e-6;

/// What the samples represent.
///
/// The tag is advisory: the estimators accept either role and only carry it
/// through to reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Cumulative count since the start, the analogue of a time deviation.
    Cumulative,
    /// Count or amount per sampling interval.
    Rate,
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Role::Cumulative => "cumulative",
            Role::Rate => "rate",
        })
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cumulative" | "phase" => Ok(Role::Cumulative),
            "rate" | "frequency" => Ok(Role::Rate),
            other => Err(Error::param("role", format!("unknown role {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    samples: Vec<f64>,
    tau0: f64,
    role: Role,
    label: String,
}

impl TimeSeries {
    /// Builds a series, rejecting a non-positive or non-finite sampling
    /// period and non-finite samples.
    pub fn new(samples: Vec<f64>, tau0: f64, role: Role) -> Result<Self> {
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::param("tau0", format!("must be positive and finite, got {tau0}")));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(
                "samples",
                format!("sample {i} is not finite ({})", samples[i]),
            ));
        }
        Ok(TimeSeries {
            samples,
            tau0,
            role,
            label: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total span covered, `N * tau0`.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.tau0
    }

    /// A copy holding the first `len` samples.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len > self.len() {
            return Err(Error::param(
                "len",
                format!("cannot truncate {} samples to {len}", self.len()),
            ));
        }
        Ok(TimeSeries {
            samples: self.samples[..len].to_vec(),
            tau0: self.tau0,
            role: self.role,
            label: self.label.clone(),
        })
    }

    /// Same metadata, new samples. Used by transforms that keep the layout.
    pub(crate) fn map_samples(&self, samples: Vec<f64>) -> Self {
        debug_assert!(samples.iter().all(|v| v.is_finite()));
        TimeSeries {
            samples,
            tau0: self.tau0,
            role: self.role,
            label: self.label.clone(),
        }
    }

    pub(crate) fn require_len(&self, min: usize) -> Result<()> {
        if self.len() < min {
            return Err(Error::TooShort {
                len: self.len(),
                min,
            });
        }
        Ok(())
    }
}

/// Text layout of a series file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Format {
    /// Values only; the sampling period is supplied.
    OneColumn { tau0: f64 },
    /// `(time, value)` rows; the sampling period is inferred.
    TwoColumn,
}

/// Reads a series file. See the module docs for the accepted layouts.
pub fn load_series(path: impl AsRef<Path>, format: Format, role: Role) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(parse_series(&text, format, role)?.with_label(label))
}

/// Parses series text already in memory.
pub fn parse_series(text: &str, format: Format, role: Role) -> Result<TimeSeries> {
    let rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let series = match format {
        Format::OneColumn { tau0 } => {
            let samples = rows
                .map(|(line, l)| parse_number(line, l))
                .collect::<Result<Vec<_>>>()?;
            TimeSeries::new(samples, tau0, role)?
        }
        Format::TwoColumn => {
            let mut times = Vec::new();
            let mut samples = Vec::new();
            for (line, l) in rows {
                let mut fields = l
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|f| !f.is_empty());
                let (Some(t), Some(v), None) = (fields.next(), fields.next(), fields.next())
                else {
                    return Err(Error::Parse {
                        line,
                        text: l.to_string(),
                    });
                };
                times.push(parse_number(line, t)?);
                samples.push(parse_number(line, v)?);
            }
            let tau0 = infer_spacing(&times)?;
            TimeSeries::new(samples, tau0, role)?
        }
    };
    series.require_len(MIN_SAMPLES)?;
    Ok(series)
}

fn parse_number(line: usize, text: &str) -> Result<f64> {
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line,
            text: text.to_string(),
        })
}

fn infer_spacing(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::TooShort {
            len: times.len(),
            min: MIN_SAMPLES,
        });
    }
    let tau0 = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    for (row, w) in times.windows(2).enumerate() {
        let dt = w[1] - w[0];
        if dt.is_nan() || (dt - tau0).abs() > SPACING_TOLERANCE * tau0.abs() || dt <= 0.0 {
            return Err(Error::Spacing {
                row: row + 2,
                expected: tau0,
                found: dt,
            });
        }
    }
    Ok(tau0)
}

/// Renders samples in the one-column layout, one shortest round-trip
/// decimal per line.
pub fn to_one_column(series: &TimeSeries) -> String {
    let mut out = String::with_capacity(series.len() * 20);
    for v in series.samples() {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn write_one_column(series: &TimeSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_one_column(series)).map_err(|e| Error::io(path, e))
}

/// Counts events per half-open bin `[k tau0, (k+1) tau0)`.
///
/// With `span` the bin count is `ceil(span / tau0)` and later events are
/// dropped; otherwise the bins run just past the last event. Input order
/// does not matter.
pub fn bin_timestamps(timestamps: &[f64], tau0: f64, span: Option<f64>) -> Result<TimeSeries> {
    if !(tau0.is_finite() && tau0 > 0.0) {
        return Err(Error::param("tau0", format!("must be positive and finite, got {tau0}")));
    }
    if let Some(t) = timestamps.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::param("timestamps", format!("negative or non-finite timestamp {t}")));
    }
    let bins = match span {
        Some(span) => {
            if !(span.is_finite() && span >= 0.0) {
                return Err(Error::param("span", format!("must be non-negative, got {span}")));
            }
            (span / tau0).ceil() as usize
        }
        None => {
            let max = timestamps
                .iter()
                .copied()
                .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t))))
                .ok_or_else(|| Error::param("timestamps", "empty timestamp list and no span"))?;
            (max / tau0).floor() as usize + 1
        }
    };
    let mut counts = vec![0.0; bins];
    for &t in timestamps {
        let k = (t / tau0).floor() as usize;
        if let Some(c) = counts.get_mut(k) {
            *c += 1.0;
        }
    }
    TimeSeries::new(counts, tau0, Role::Rate)
}

/// Running sum `x_k = x_{k-1} + tau0 * y_k` with `x_0 = tau0 * y_0`.
///
/// Refuses cumulative input unless `force` is set.
pub fn integrate(series: &TimeSeries, force: bool) -> Result<TimeSeries> {
    if series.role() == Role::Cumulative && !force {
        return Err(Error::AlreadyCumulative);
    }
    let tau0 = series.tau0();
    let mut acc = 0.0;
    let samples = series
        .samples()
        .iter()
        .map(|y| {
            acc += tau0 * y;
            acc
        })
        .collect();
    let mut out = series.map_samples(samples);
    out.role = Role::Cumulative;
    Ok(out)
}

/// Inverse of [`integrate`]: `y_k = (x_k - x_{k-1}) / tau0`, `y_0 = x_0 / tau0`.
pub fn differentiate(series: &TimeSeries) -> TimeSeries {
    let tau0 = series.tau0();
    let x = series.samples();
    let samples = (0..x.len())
        .map(|k| {
            let prev = if k == 0 { 0.0 } else { x[k - 1] };
            (x[k] - prev) / tau0
        })
        .collect();
    let mut out = series.map_samples(samples);
    out.role = Role::Rate;
    out
}

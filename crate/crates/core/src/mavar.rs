//! Modified Allan Variance estimator.
//!
//! For a series `x_0 .. x_{N-1}` sampled every `tau0` and an integer
//! averaging factor `n` (`tau = n tau0`):
//!
//! ```text
//! D_i  = x_{i+2n} - 2 x_{i+n} + x_i                       i = 0 .. N-2n-1
//! W_j  = D_j + D_{j+1} + ... + D_{j+n-1}                  j = 0 .. N-3n
//! Mod sigma_y^2(tau) = sum_j W_j^2 / (2 n^4 tau0^2 (N - 3n + 1))
//! ```
//!
//! This is the usual 1-based estimator shifted to 0-based indices. The
//! fast path keeps `W_j` as a sliding window, `W_{j+1} = W_j - D_j + D_{j+n}`,
//! giving O(N) work per `n`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Role, TimeSeries, MIN_SAMPLES};

/// Ratio of the default geometric grid, about 24 points per decade.
pub const DEFAULT_RATIO: f64 = 1.1;

/// Largest admissible averaging factor for a series of `len` samples.
pub fn max_n(len: usize) -> usize {
    len / 3
}

/// Averaging factors at which the curve is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauGrid {
    values: Vec<usize>,
    ratio: f64,
}

impl TauGrid {
    /// Geometric grid `round(ratio^j)`, deduplicated and capped at `n_max`
    /// (default `floor(N/3)`). The cap itself is always the last point.
    pub fn geometric(len: usize, ratio: f64, n_max: Option<usize>) -> Result<Self> {
        if len < MIN_SAMPLES {
            return Err(Error::TooShort {
                len,
                min: MIN_SAMPLES,
            });
        }
        if !(ratio > 1.0 && ratio <= 2.0) {
            return Err(Error::param("ratio", format!("must lie in (1, 2], got {ratio}")));
        }
        let cap = max_n(len);
        let top = match n_max {
            Some(m) if m == 0 || m > cap => {
                return Err(Error::param("n_max", format!("must lie in [1, {cap}], got {m}")))
            }
            Some(m) => m,
            None => cap,
        };
        let mut values: Vec<usize> = Vec::new();
        let mut j = 0;
        loop {
            let v = ratio.powi(j).round() as usize;
            if v >= top {
                break;
            }
            if values.last() != Some(&v) {
                values.push(v);
            }
            j += 1;
        }
        values.push(top);
        Ok(TauGrid { values, ratio })
    }

    /// Grid from explicit values, which must be strictly increasing and
    /// positive.
    pub fn from_values(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() || values[0] == 0 || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("grid", "values must be positive and strictly increasing"));
        }
        Ok(TauGrid { values, ratio: f64::NAN })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check(&self, len: usize) -> Result<()> {
        let cap = max_n(len);
        match self.values.last() {
            Some(&top) if top <= cap => Ok(()),
            Some(&top) => Err(Error::param(
                "grid",
                format!("n = {top} exceeds floor(N/3) = {cap} for N = {len}"),
            )),
            None => Err(Error::param("grid", "empty grid")),
        }
    }
}

/// Shorthand for [`TauGrid::geometric`].
pub fn make_tau_grid(len: usize, ratio: f64, n_max: Option<usize>) -> Result<TauGrid> {
    TauGrid::geometric(len, ratio, n_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MavarPoint {
    pub n: usize,
    pub tau: f64,
    pub value: f64,
    /// Number of averaged terms, `N - 3n + 1`.
    pub m: usize,
    /// Relative confidence-interval width, `sqrt(m_1 / m)` with `m_1 = N - 2`
    /// the term count at `n = 1`.
    pub conf: f64,
}

impl MavarPoint {
    /// Inverse-variance regression weight, `1 / conf^2`. Decreases with `n`.
    pub fn fit_weight(&self) -> f64 {
        1.0 / (self.conf * self.conf)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MavarCurve {
    pub points: Vec<MavarPoint>,
    /// Length of the analysed series.
    pub len: usize,
    pub tau0: f64,
    pub label: String,
    pub role: Role,
}

impl MavarCurve {
    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.tau)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.value)
    }

    pub fn point(&self, n: usize) -> Option<&MavarPoint> {
        self.points
            .binary_search_by_key(&n, |p| p.n)
            .ok()
            .map(|i| &self.points[i])
    }

    /// Curve CSV: header `n,tau,mavar,m,conf`, shortest round-trip decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,tau,mavar,m,conf\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{},{},{}", p.n, p.tau, p.value, p.m, p.conf);
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Parses the CSV written by [`MavarCurve::to_csv`]. Series length and
    /// `tau0` are recovered from the first row (`N = m + 3n - 1`).
    pub fn from_csv(text: &str, role: Role) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == "n,tau,mavar,m,conf" => {}
            Some((i, h)) => {
                return Err(Error::Parse {
                    line: i + 1,
                    text: h.to_string(),
                })
            }
            None => return Err(Error::InsufficientPoints { found: 0, needed: 1 }),
        }
        let mut points = Vec::new();
        for (i, l) in lines {
            let bad = || Error::Parse {
                line: i + 1,
                text: l.to_string(),
            };
            let f: Vec<&str> = l.trim().split(',').collect();
            if f.len() != 5 {
                return Err(bad());
            }
            points.push(MavarPoint {
                n: f[0].parse().map_err(|_| bad())?,
                tau: f[1].parse().map_err(|_| bad())?,
                value: f[2].parse().map_err(|_| bad())?,
                m: f[3].parse().map_err(|_| bad())?,
                conf: f[4].parse().map_err(|_| bad())?,
            });
        }
        let first = points
            .first()
            .ok_or(Error::InsufficientPoints { found: 0, needed: 1 })?;
        Ok(MavarCurve {
            len: first.m + 3 * first.n - 1,
            tau0: first.tau / first.n as f64,
            label: String::new(),
            role,
            points,
        })
    }
}

fn check_n(len: usize, n: usize) -> Result<()> {
    let cap = max_n(len);
    if n == 0 || n > cap {
        return Err(Error::param(
            "n",
            format!("must lie in [1, {cap}] for N = {len}, got {n}"),
        ));
    }
    Ok(())
}

/// Literal evaluation of the estimator with an explicit inner sum for every
/// window. O(N n) per `n`; meant as a reference for [`mavar_fast`].
pub fn mavar_naive(x: &TimeSeries, n: usize) -> Result<f64> {
    let len = x.len();
    check_n(len, n)?;
    let s = x.samples();
    let m = len - 3 * n + 1;
    let mut outer = 0.0;
    for j in 0..m {
        let mut inner = 0.0;
        for i in j..j + n {
            inner += s[i + 2 * n] - 2.0 * s[i + n] + s[i];
        }
        outer += inner * inner;
    }
    Ok(outer / norm(n, x.tau0(), m))
}

fn norm(n: usize, tau0: f64, m: usize) -> f64 {
    let nf = n as f64;
    2.0 * nf.powi(4) * tau0 * tau0 * m as f64
}

/// MAVAR at a single averaging factor by the sliding-window recurrence.
pub fn mavar_at(x: &TimeSeries, n: usize) -> Result<f64> {
    check_n(x.len(), n)?;
    Ok(sliding(x.samples(), n) / norm(n, x.tau0(), x.len() - 3 * n + 1))
}

/// Sum of squared window sums. `D_i` is formed as `(x_i + x_{i+2n}) - 2
/// x_{i+n}` so that it is bit-symmetric under time reversal, and the window
/// update is compensated to keep the recurrence from drifting.
fn sliding(s: &[f64], n: usize) -> f64 {
    let d = |i: usize| (s[i] + s[i + 2 * n]) - 2.0 * s[i + n];
    let m = s.len() - 3 * n + 1;
    let mut w: f64 = (0..n).map(d).sum();
    let mut comp = 0.0;
    let mut acc = w * w;
    for j in 1..m {
        let delta = d(j + n - 1) - d(j - 1);
        // Neumaier summation of the running window
        let t = w + delta;
        if w.abs() >= delta.abs() {
            comp += (w - t) + delta;
        } else {
            comp += (delta - t) + w;
        }
        w = t;
        let cur = w + comp;
        acc += cur * cur;
    }
    acc
}

/// Evaluates the curve on every grid point.
///
/// Points are independent; they are computed in parallel and returned in
/// grid order.
pub fn mavar_fast(x: &TimeSeries, grid: &TauGrid) -> Result<MavarCurve> {
    use rayon::prelude::*;

    let len = x.len();
    x.require_len(MIN_SAMPLES)?;
    grid.check(len)?;
    let tau0 = x.tau0();
    let m1 = (len - 2) as f64;
    let points = grid
        .values()
        .par_iter()
        .map(|&n| {
            let m = len - 3 * n + 1;
            MavarPoint {
                n,
                tau: n as f64 * tau0,
                value: sliding(x.samples(), n) / norm(n, tau0, m),
                m,
                conf: (m1 / m as f64).sqrt(),
            }
        })
        .collect();
    Ok(MavarCurve {
        points,
        len,
        tau0,
        label: x.label().to_string(),
        role: x.role(),
    })
}

/// Curve on the default 1.1-ratio grid over the full admissible range.
pub fn mavar_curve(x: &TimeSeries) -> Result<MavarCurve> {
    let grid = TauGrid::geometric(x.len(), DEFAULT_RATIO, None)?;
    mavar_fast(x, &grid)
}

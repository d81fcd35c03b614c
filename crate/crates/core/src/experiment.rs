//! Seeded Monte Carlo experiments: estimator accuracy over a grid of `H`
//! and `N`, convergence under truncation, and robustness to a step.
//!
//! Every replicate draws its series from a seed derived from the master
//! seed and the cell indices, so a single cell can be re-run on its own and
//! reports are bit-identical across runs. Cells run in parallel; rows are
//! always emitted in config order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::haar::default_octaves;
use crate::estimate::periodogram::DEFAULT_BAND;
use crate::estimate::variance_time::default_windows;
use crate::estimate::{
    estimate_hurst, haar_logscale_diagram, periodogram_estimate, variance_time_plot, FitOptions,
    Method,
};
use crate::mavar::{mavar_curve, MavarCurve};
use crate::series::TimeSeries;
use crate::synth::{apply_contaminant, gen_lrd, AmplitudeMode, Contaminant, GeneratorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Accuracy,
    Convergence,
    StepRobustness,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Accuracy => "accuracy",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::StepRobustness => "step-robustness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::param("format", format!("expected csv or json, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub hurst: Vec<f64>,
    /// Series lengths; truncation lengths for the convergence experiment.
    pub lengths: Vec<usize>,
    pub seeds_per_cell: usize,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    /// Step amplitudes; 0 is always evaluated as the baseline.
    pub step_amplitudes: Vec<f64>,
    /// Step delays as fractions of `N`.
    pub step_delays: Vec<f64>,
    /// Length generated before truncation (convergence only). Defaults to
    /// the largest entry of `lengths`.
    pub generated_len: Option<usize>,
    pub tau0: f64,
    pub mode: AmplitudeMode,
    pub fit: FitOptions,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    fn base(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            hurst: hurst_grid(),
            lengths: vec![131_072],
            seeds_per_cell: 10,
            master_seed: 1,
            methods: vec![Method::Mavar],
            step_amplitudes: Vec::new(),
            step_delays: Vec::new(),
            generated_len: None,
            tau0: 1.0,
            mode: AmplitudeMode::default(),
            fit: FitOptions::default(),
            output_dir: None,
        }
    }

    /// 11 values of `H` from 0.50 to 1.00, `N = 131072`, 10 seeds.
    pub fn accuracy() -> Self {
        Self::base(ExperimentKind::Accuracy)
    }

    /// `H = 0.75`, 4 seeds, truncation to powers of two 1024..=65536.
    pub fn convergence() -> Self {
        ExperimentConfig {
            hurst: vec![0.75],
            lengths: (10..=16).map(|p| 1usize << p).collect(),
            seeds_per_cell: 4,
            ..Self::base(ExperimentKind::Convergence)
        }
    }

    /// `H = 0.80`, `A` in {0.5, 1, 2}, `M` in {0.05, 0.25, 0.5, 0.75, 0.95} N.
    pub fn step_robustness() -> Self {
        ExperimentConfig {
            hurst: vec![0.8],
            lengths: vec![1024, 131_072],
            step_amplitudes: vec![0.0, 0.5, 1.0, 2.0],
            step_delays: vec![0.05, 0.25, 0.5, 0.75, 0.95],
            ..Self::base(ExperimentKind::StepRobustness)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds_per_cell == 0 {
            return Err(Error::param("seeds_per_cell", "must be at least 1"));
        }
        if self.hurst.is_empty() || self.lengths.is_empty() || self.methods.is_empty() {
            return Err(Error::param("config", "H list, N list and methods must be non-empty"));
        }
        if let Some(h) = self.hurst.iter().find(|h| !(0.5..=1.0).contains(*h)) {
            return Err(Error::param("hurst", format!("{h} outside [0.5, 1.0]")));
        }
        if let Some(n) = self.lengths.iter().find(|n| !n.is_power_of_two() || **n < 64) {
            return Err(Error::param("lengths", format!("{n} is not a power of two >= 64")));
        }
        if let Some(g) = self.generated_len {
            if !g.is_power_of_two() {
                return Err(Error::param("generated_len", format!("{g} is not a power of two")));
            }
        }
        if !(self.tau0.is_finite() && self.tau0 > 0.0) {
            return Err(Error::param("tau0", format!("must be positive, got {}", self.tau0)));
        }
        if self.experiment == ExperimentKind::StepRobustness {
            if self.step_amplitudes.is_empty() || self.step_delays.is_empty() {
                return Err(Error::param("step", "amplitude and delay lists must be non-empty"));
            }
            if let Some(d) = self.step_delays.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
                return Err(Error::param("step_delays", format!("{d} outside (0, 1)")));
            }
            if let Some(a) = self.step_amplitudes.iter().find(|a| !a.is_finite()) {
                return Err(Error::param("step_amplitudes", format!("{a} is not finite")));
            }
        }
        Ok(())
    }

    fn generated_len(&self) -> usize {
        self.generated_len
            .unwrap_or_else(|| *self.lengths.iter().max().expect("validated non-empty"))
    }
}

fn hurst_grid() -> Vec<f64> {
    (0..=10).map(|i| 0.5 + 0.05 * i as f64).collect()
}

/// Seed of one replicate, a SplitMix64-style hash of the master seed and
/// the cell coordinates.
pub fn cell_seed(master: u64, h_index: usize, n_index: usize, replicate: usize) -> u64 {
    let mut z = master;
    for v in [h_index, n_index, replicate] {
        z = splitmix(z ^ splitmix(v as u64 ^ 0xA076_1D64_78BD_642F));
    }
    z
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hurst estimate of `series` by `method` with the library defaults.
pub fn estimate_with(method: Method, series: &TimeSeries, fit: &FitOptions) -> Result<f64> {
    Ok(match method {
        Method::Mavar => estimate_hurst(&mavar_curve(series)?, fit)?.1.hurst,
        Method::VarianceTime => {
            variance_time_plot(series, &default_windows(series.len(), 1))?.1.hurst
        }
        Method::Periodogram => periodogram_estimate(series, DEFAULT_BAND)?.hurst,
        Method::HaarLd => {
            haar_logscale_diagram(series, default_octaves(series.len()))?.1.hurst
        }
    })
}

/// One replicate of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replicate {
    pub replicate: usize,
    pub seed: u64,
    /// `H` estimate; for step cells the estimate on the contaminated series.
    pub estimate: Option<f64>,
    /// Estimate minus `H_true`, or the shift against the step-free baseline.
    pub error: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub method: Method,
    #[serde(rename = "H_true")]
    pub h_true: f64,
    #[serde(rename = "N")]
    pub n: usize,
    /// Step amplitude and delay fraction (step experiment only).
    pub step: Option<(f64, f64)>,
    pub mean_err: f64,
    pub std_err: f64,
    pub mean_abs_err: f64,
    pub replicates: Vec<Replicate>,
    pub flags: Vec<String>,
}

impl CellRow {
    fn from_replicates(
        method: Method,
        h_true: f64,
        n: usize,
        step: Option<(f64, f64)>,
        replicates: Vec<Replicate>,
    ) -> Self {
        let errors: Vec<f64> = replicates.iter().filter_map(|r| r.error).collect();
        let mut flags = Vec::new();
        let failed = replicates.len() - errors.len();
        if failed > 0 {
            flags.push(format!("failed:{failed}"));
        }
        let k = errors.len() as f64;
        let (mean_err, std_err, mean_abs_err) = match errors.len() {
            0 => (f64::NAN, f64::NAN, f64::NAN),
            len => {
                let mean = errors.iter().sum::<f64>() / k;
                let std = if len == 1 {
                    flags.push("single-seed".into());
                    0.0
                } else {
                    (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
                };
                (mean, std, errors.iter().map(|e| e.abs()).sum::<f64>() / k)
            }
        };
        CellRow {
            method,
            h_true,
            n,
            step,
            mean_err,
            std_err,
            mean_abs_err,
            replicates,
            flags,
        }
    }

    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    pub fn estimates(&self) -> Vec<Option<f64>> {
        self.replicates.iter().map(|r| r.estimate).collect()
    }
}

/// Replicate-0 MAVAR curve of one step cell, for plotting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveData {
    #[serde(rename = "N")]
    pub n: usize,
    pub amplitude: f64,
    pub delay: f64,
    pub taus: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub config: ExperimentConfig,
    pub version: String,
    pub wall_time_s: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub rows: Vec<CellRow>,
    pub curves: Vec<CurveData>,
    pub metadata: ReportMetadata,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    /// Per-cell summary. Accuracy and convergence rows read
    /// `method,H_true,N,mean_err,std_err,mean_abs_err,n_ok,flags`; step rows
    /// insert `A,M` after `N` and report shifts against the baseline.
    pub fn summary_csv(&self) -> String {
        let step = self.experiment == ExperimentKind::StepRobustness;
        let mut out = String::new();
        if step {
            out.push_str("method,H_true,N,A,M,mean_shift,std_shift,mean_abs_shift,n_ok,flags\n");
        } else {
            out.push_str("method,H_true,N,mean_err,std_err,mean_abs_err,n_ok,flags\n");
        }
        for r in &self.rows {
            let ok = r.replicates.iter().filter(|x| x.error.is_some()).count();
            let _ = write!(out, "{},{},{},", r.method, r.h_true, r.n);
            if let Some((a, m)) = r.step {
                let _ = write!(out, "{a},{m},");
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.mean_err,
                r.std_err,
                r.mean_abs_err,
                ok,
                r.flags.join(";")
            );
        }
        out
    }

    /// One line per replicate:
    /// `method,H_true,N,A,M,replicate,seed,estimate,error,failure`.
    pub fn replicates_csv(&self) -> String {
        let mut out = String::from("method,H_true,N,A,M,replicate,seed,estimate,error,failure\n");
        for r in &self.rows {
            let (a, m) = r.step.map(|(a, m)| (Some(a), Some(m))).unwrap_or((None, None));
            for x in &r.replicates {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.method,
                    r.h_true,
                    r.n,
                    fmt_opt(a),
                    fmt_opt(m),
                    x.replicate,
                    x.seed,
                    fmt_opt(x.estimate),
                    fmt_opt(x.error),
                    x.failure.as_deref().unwrap_or("").replace([',', '\n'], " ")
                );
            }
        }
        out
    }

    /// `N,A,M,tau,mavar` for every stored curve.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("N,A,M,tau,mavar\n");
        for c in &self.curves {
            for (t, v) in c.taus.iter().zip(&c.values) {
                let _ = writeln!(out, "{},{},{},{t},{v}", c.n, c.amplitude, c.delay);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `<kind>.csv`, `<kind>_replicates.csv` (and `<kind>_curves.csv`
    /// when curves exist) or a single `<kind>.json`. Returns the paths.
    pub fn write(&self, dir: impl AsRef<Path>, format: OutputFormat) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let stem = self.experiment.name();
        let mut files: Vec<(PathBuf, String)> = Vec::new();
        match format {
            OutputFormat::Json => files.push((dir.join(format!("{stem}.json")), self.to_json()?)),
            OutputFormat::Csv => {
                files.push((dir.join(format!("{stem}.csv")), self.summary_csv()));
                files.push((dir.join(format!("{stem}_replicates.csv")), self.replicates_csv()));
                if !self.curves.is_empty() {
                    files.push((dir.join(format!("{stem}_curves.csv")), self.curves_csv()));
                }
            }
        }
        for (path, text) in &files {
            std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
        }
        Ok(files.into_iter().map(|(p, _)| p).collect())
    }
}

/// A row read back from a summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub h_true: f64,
    pub n: usize,
    pub step: Option<(f64, f64)>,
    pub mean_err: f64,
    pub std_err: f64,
    pub mean_abs_err: f64,
    pub n_ok: usize,
    pub flags: Vec<String>,
}

/// Parses the output of [`ExperimentReport::summary_csv`].
pub fn parse_summary_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 1,
        text: String::new(),
    })?;
    let step = header.starts_with("method,H_true,N,A,M,");
    let width = if step { 10 } else { 8 };
    let mut rows = Vec::new();
    for (i, line) in lines {
        let bad = || Error::Parse {
            line: i + 1,
            text: line.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != width {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let off = if step { 2 } else { 0 };
        rows.push(SummaryRow {
            method: f[0].parse().map_err(|_| bad())?,
            h_true: num(f[1])?,
            n: f[2].parse().map_err(|_| bad())?,
            step: if step { Some((num(f[3])?, num(f[4])?)) } else { None },
            mean_err: num(f[3 + off])?,
            std_err: num(f[4 + off])?,
            mean_abs_err: num(f[5 + off])?,
            n_ok: f[6 + off].parse().map_err(|_| bad())?,
            flags: f[7 + off]
                .split(';')
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect(),
        });
    }
    Ok(rows)
}

fn metadata(config: &ExperimentConfig, start: Instant, mut notes: Vec<String>) -> ReportMetadata {
    let hi = config.fit.upper_n(*config.lengths.iter().max().expect("validated"));
    notes.push(format!(
        "MAVAR fits use n >= {} and drop the right tail (n <= {} at the largest N); {:?} weighting",
        config.fit.n_lo, hi, config.fit.weighting
    ));
    ReportMetadata {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
        notes,
    }
}

/// Failures are kept as text in the report rather than aborting the run.
type Outcome<T> = std::result::Result<T, String>;

fn attempt<T>(r: Result<T>) -> Outcome<T> {
    r.map_err(|e| e.to_string())
}

fn spec_for(config: &ExperimentConfig, h: f64, n: usize, seed: u64) -> GeneratorSpec {
    GeneratorSpec::with_hurst(n, h, seed).mode(config.mode)
}

/// Every `(H, N, replicate)` draw is estimated by every method.
pub fn run_accuracy_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let mut jobs = Vec::new();
    for (hi, &h) in config.hurst.iter().enumerate() {
        for (ni, &n) in config.lengths.iter().enumerate() {
            for rep in 0..config.seeds_per_cell {
                jobs.push((hi, h, ni, n, rep));
            }
        }
    }
    let results: Vec<Vec<Replicate>> = jobs
        .par_iter()
        .map(|&(hi, h, ni, n, rep)| {
            let seed = cell_seed(config.master_seed, hi, ni, rep);
            let series = attempt(gen_lrd(&spec_for(config, h, n, seed), config.tau0));
            config
                .methods
                .iter()
                .map(|&m| {
                    let est = series
                        .as_ref()
                        .map_err(Clone::clone)
                        .and_then(|s| attempt(estimate_with(m, s, &config.fit)));
                    replicate(rep, seed, est, h)
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    let k = config.seeds_per_cell;
    for (hi, &h) in config.hurst.iter().enumerate() {
        for (ni, &n) in config.lengths.iter().enumerate() {
            let base = (hi * config.lengths.len() + ni) * k;
            for (mi, &m) in config.methods.iter().enumerate() {
                let reps = (0..k).map(|r| results[base + r][mi].clone()).collect();
                rows.push(CellRow::from_replicates(m, h, n, None, reps));
            }
        }
    }
    Ok(ExperimentReport {
        experiment: ExperimentKind::Accuracy,
        rows,
        curves: Vec::new(),
        metadata: metadata(config, start, Vec::new()),
    })
}

fn replicate(rep: usize, seed: u64, est: Outcome<f64>, reference: f64) -> Replicate {
    match est {
        Ok(e) => Replicate {
            replicate: rep,
            seed,
            estimate: Some(e),
            error: Some(e - reference),
            failure: None,
        },
        Err(err) => Replicate {
            replicate: rep,
            seed,
            estimate: None,
            error: None,
            failure: Some(err),
        },
    }
}

/// One long series per `(H, replicate)`, truncated to each length.
pub fn run_convergence_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let gen_len = config.generated_len();
    let mut jobs = Vec::new();
    for (hi, &h) in config.hurst.iter().enumerate() {
        for rep in 0..config.seeds_per_cell {
            jobs.push((hi, h, rep));
        }
    }
    // results[job][n index][method]
    let results: Vec<Vec<Vec<Replicate>>> = jobs
        .par_iter()
        .map(|&(hi, h, rep)| {
            let seed = cell_seed(config.master_seed, hi, 0, rep);
            let series = attempt(gen_lrd(&spec_for(config, h, gen_len, seed), config.tau0));
            config
                .lengths
                .iter()
                .map(|&n| {
                    let cut = series.as_ref().map_err(Clone::clone).and_then(|s| attempt(s.truncated(n)));
                    config
                        .methods
                        .iter()
                        .map(|&m| {
                            let est = cut
                                .as_ref()
                                .map_err(Clone::clone)
                                .and_then(|s| attempt(estimate_with(m, s, &config.fit)));
                            replicate(rep, seed, est, h)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let k = config.seeds_per_cell;
    let mut rows = Vec::new();
    for (hi, &h) in config.hurst.iter().enumerate() {
        for (ni, &n) in config.lengths.iter().enumerate() {
            for (mi, &m) in config.methods.iter().enumerate() {
                let reps = (0..k).map(|r| results[hi * k + r][ni][mi].clone()).collect();
                rows.push(CellRow::from_replicates(m, h, n, None, reps));
            }
        }
    }
    let notes = vec![format!(
        "series generated at N = {gen_len} and truncated; lengths are powers of two so the \
         generator constraint holds"
    )];
    Ok(ExperimentReport {
        experiment: ExperimentKind::Convergence,
        rows,
        curves: Vec::new(),
        metadata: metadata(config, start, notes),
    })
}

/// `x_k = A u_{k-M} + n_k` for every `(A, M, N)`; each replicate's
/// estimate is compared with the same noise without the step.
pub fn run_step_robustness(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let mut jobs = Vec::new();
    for (hi, &h) in config.hurst.iter().enumerate() {
        for (ni, &n) in config.lengths.iter().enumerate() {
            for rep in 0..config.seeds_per_cell {
                jobs.push((hi, h, ni, n, rep));
            }
        }
    }
    let cells: Vec<(f64, f64)> = config
        .step_amplitudes
        .iter()
        .flat_map(|&a| config.step_delays.iter().map(move |&d| (a, d)))
        .collect();

    struct JobOut {
        // [cell][method]
        reps: Vec<Vec<Replicate>>,
        curves: Vec<Option<MavarCurve>>,
    }

    let results: Vec<JobOut> = jobs
        .par_iter()
        .map(|&(hi, h, _, n, rep)| {
            let seed = cell_seed(config.master_seed, hi, 0, rep);
            let noise = attempt(gen_lrd(&spec_for(config, h, n, seed), config.tau0));
            let baseline: Vec<Outcome<f64>> = config
                .methods
                .iter()
                .map(|&m| {
                    noise
                        .as_ref()
                        .map_err(Clone::clone)
                        .and_then(|s| attempt(estimate_with(m, s, &config.fit)))
                })
                .collect();
            let mut reps = Vec::with_capacity(cells.len());
            let mut curves = Vec::with_capacity(cells.len());
            for &(a, d) in &cells {
                let delay = ((d * n as f64).round() as usize).clamp(2, n - 1);
                let step = Contaminant::Step { amplitude: a, delay };
                let contaminated = noise
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|s| attempt(apply_contaminant(s, &step)));
                curves.push(if rep == 0 && config.methods.contains(&Method::Mavar) {
                    contaminated.as_ref().ok().and_then(|s| mavar_curve(s).ok())
                } else {
                    None
                });
                reps.push(
                    config
                        .methods
                        .iter()
                        .zip(&baseline)
                        .map(|(&m, base)| {
                            let est = contaminated
                                .as_ref()
                                .map_err(Clone::clone)
                                .and_then(|s| attempt(estimate_with(m, s, &config.fit)));
                            match (est, base.clone()) {
                                (Ok(e), Ok(b)) => Replicate {
                                    replicate: rep,
                                    seed,
                                    estimate: Some(e),
                                    error: Some(e - b),
                                    failure: None,
                                },
                                (Err(err), _) | (Ok(_), Err(err)) => Replicate {
                                    replicate: rep,
                                    seed,
                                    estimate: None,
                                    error: None,
                                    failure: Some(err),
                                },
                            }
                        })
                        .collect(),
                );
            }
            JobOut { reps, curves }
        })
        .collect();

    let k = config.seeds_per_cell;
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for (hi, &h) in config.hurst.iter().enumerate() {
        for (ni, &n) in config.lengths.iter().enumerate() {
            let base = (hi * config.lengths.len() + ni) * k;
            for (ci, &(a, d)) in cells.iter().enumerate() {
                for (mi, &m) in config.methods.iter().enumerate() {
                    let reps = (0..k).map(|r| results[base + r].reps[ci][mi].clone()).collect();
                    rows.push(CellRow::from_replicates(m, h, n, Some((a, d)), reps));
                }
                if let Some(c) = &results[base].curves[ci] {
                    curves.push(CurveData {
                        n,
                        amplitude: a,
                        delay: d,
                        taus: c.taus().collect(),
                        values: c.values().collect(),
                    });
                }
            }
        }
    }
    let notes = vec!["shift = estimate with step minus estimate on the same noise without it".into()];
    Ok(ExperimentReport {
        experiment: ExperimentKind::StepRobustness,
        rows,
        curves,
        metadata: metadata(config, start, notes),
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config.experiment {
        ExperimentKind::Accuracy => run_accuracy_experiment(config),
        ExperimentKind::Convergence => run_convergence_experiment(config),
        ExperimentKind::StepRobustness => run_step_robustness(config),
    }
}

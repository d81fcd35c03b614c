//! Command-line front end. `run` returns the process exit status: 0 on
//! success, 1 for bad input or configuration, 2 when the data cannot support
//! an analysis (for example a constant series).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::haar::default_octaves;
use crate::estimate::periodogram::DEFAULT_BAND;
use crate::estimate::variance_time::default_windows;
use crate::estimate::{
    fit_segments, fit_slope, haar_logscale_diagram, periodogram_estimate, variance_time_plot,
    EstimateReport, FitOptions, Method, Weighting,
};
use crate::experiment::{run_experiment, ExperimentConfig, OutputFormat};
use crate::mavar::{mavar_fast, TauGrid};
use crate::series::{load_series, write_one_column, Format, Role, TimeSeries};
use crate::synth::{apply_contaminant, gen_lrd, AmplitudeMode, Contaminant, GeneratorSpec};

pub const OUT_DIR_ENV: &str = "MAVAR_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "mavar", version, about = "Hurst and power-law estimation with the Modified Allan Variance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the MAVAR curve of a trace and estimate H.
    Analyze(AnalyzeArgs),
    /// Write a synthetic power-law series.
    Generate(GenerateArgs),
    /// Estimation error over a grid of H and N.
    Accuracy(ExperimentArgs),
    /// Estimation error as one series is truncated to increasing lengths.
    Convergence(ExperimentArgs),
    /// Estimate shift caused by a step of amplitude A at delay M.
    StepSweep(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
}

impl OutputArgs {
    fn dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Series file: one value per line, or `time value` rows with
    /// `--two-column`.
    pub input: PathBuf,
    /// Sampling period in seconds (one-column input).
    #[arg(long)]
    pub tau0: Option<f64>,
    #[arg(long)]
    pub two_column: bool,
    #[arg(long, default_value = "rate")]
    pub role: Role,
    /// Number of straight segments fitted in addition to the single fit.
    #[arg(long, default_value_t = 1)]
    pub segments: usize,
    /// Comma-separated: mavar, vtp, periodogram, haarld.
    #[arg(long, value_delimiter = ',', default_value = "mavar")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub n_lo: usize,
    #[arg(long)]
    pub n_hi: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub tail_fraction: f64,
    #[arg(long, default_value = "confidence")]
    pub weighting: WeightingArg,
    /// Grid ratio between consecutive averaging factors.
    #[arg(long, default_value_t = crate::mavar::DEFAULT_RATIO)]
    pub ratio: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum WeightingArg {
    Uniform,
    Confidence,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::Uniform => Weighting::Uniform,
            WeightingArg::Confidence => Weighting::Confidence,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator spec as inline JSON or a path to a JSON file. Keys: n (or
    /// N), alpha or hurst (or H), seed, mode, normalize.
    #[arg(long)]
    pub spec: String,
    /// Contaminants as inline JSON or a path: one object or an array.
    #[arg(long)]
    pub contaminants: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub tau0: f64,
    /// Overrides the seed given in `--spec`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; defaults to `generated.txt` in the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Comma-separated H values.
    #[arg(long, value_delimiter = ',')]
    pub hurst: Option<Vec<f64>>,
    /// Comma-separated series (or truncation) lengths.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<usize>>,
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    #[arg(long)]
    pub mode: Option<AmplitudeMode>,
    #[arg(long)]
    pub tau0: Option<f64>,
    /// Step amplitudes (step-sweep).
    #[arg(long, value_delimiter = ',')]
    pub amplitudes: Option<Vec<f64>>,
    /// Step delays as fractions of N (step-sweep).
    #[arg(long, value_delimiter = ',')]
    pub delays: Option<Vec<f64>>,
    /// Generated length before truncation (convergence).
    #[arg(long)]
    pub generated_len: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze(a) => cmd_analyze(&a).map(|_| ()),
        Command::Generate(g) => cmd_generate(&g).map(|_| ()),
        Command::Accuracy(e) => cmd_experiment(ExperimentConfig::accuracy(), &e),
        Command::Convergence(e) => cmd_experiment(ExperimentConfig::convergence(), &e),
        Command::StepSweep(e) => cmd_experiment(ExperimentConfig::step_robustness(), &e),
    }
}

/// Files written by `analyze`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutput {
    pub curve: PathBuf,
    pub estimate: PathBuf,
    pub segments: Option<PathBuf>,
    pub baselines: Option<PathBuf>,
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalyzeOutput> {
    let format = if args.two_column {
        Format::TwoColumn
    } else {
        let tau0 = args
            .tau0
            .ok_or_else(|| Error::param("tau0", "required for one-column input"))?;
        Format::OneColumn { tau0 }
    };
    let series = load_series(&args.input, format, args.role)?;
    check_not_constant(&series)?;

    let opts = FitOptions {
        n_lo: args.n_lo,
        tail_fraction: args.tail_fraction,
        n_hi: args.n_hi,
        weighting: args.weighting.into(),
    };
    let grid = TauGrid::geometric(series.len(), args.ratio, None)?;
    let curve = mavar_fast(&series, &grid)?;

    let dir = args.output.dir();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let stem = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());

    let curve_path = match args.output.format {
        OutputFormat::Csv => {
            let p = dir.join(format!("{stem}.mavar.csv"));
            curve.write_csv(&p)?;
            p
        }
        OutputFormat::Json => {
            let p = dir.join(format!("{stem}.mavar.json"));
            write_text(&p, &serde_json::to_string_pretty(&curve)?)?;
            p
        }
    };

    let fit = fit_slope(&curve, &opts)?;
    let report = EstimateReport::mavar(&fit, None, series.role());
    let estimate_path = dir.join(format!("{stem}.estimate.json"));
    write_text(&estimate_path, &report.to_json()?)?;
    println!(
        "H = {:.4}  mu = {:.4}  alpha = {:.4}  lrd_valid = {}  tau in [{:.4e}, {:.4e}] s",
        report.hurst, report.mu, report.alpha, report.lrd_valid, fit.tau_lo, fit.tau_hi
    );

    let segments_path = if args.segments > 1 {
        let seg = fit_segments(&curve, args.segments, &opts)?;
        let seg_report = EstimateReport::mavar(&fit, Some(&seg), series.role());
        let p = dir.join(format!("{stem}.segments.json"));
        write_text(&p, &seg_report.to_json()?)?;
        for (s, b) in seg_report.segments.iter().zip(
            seg.breakpoints
                .iter()
                .map(Some)
                .chain(std::iter::once(None)),
        ) {
            print!("segment mu = {:.4}  H = {:.4}  alpha = {:.4}", s.mu, s.hurst, s.alpha);
            match b {
                Some(b) => println!("  | break at tau = {b:.4e} s"),
                None => println!(),
            }
        }
        Some(p)
    } else {
        None
    };

    let baselines: Vec<EstimateReport> = args
        .methods
        .iter()
        .filter(|m| **m != Method::Mavar)
        .map(|&m| baseline(m, &series).map(|e| EstimateReport::baseline(&e, series.role())))
        .collect::<Result<_>>()?;
    let baselines_path = if baselines.is_empty() {
        None
    } else {
        for b in &baselines {
            println!("{}: H = {:.4}", b.method, b.hurst);
        }
        let p = dir.join(format!("{stem}.baselines.json"));
        write_text(&p, &serde_json::to_string_pretty(&baselines)?)?;
        Some(p)
    };

    Ok(AnalyzeOutput {
        curve: curve_path,
        estimate: estimate_path,
        segments: segments_path,
        baselines: baselines_path,
    })
}

fn baseline(method: Method, series: &TimeSeries) -> Result<crate::estimate::HurstEstimate> {
    match method {
        Method::Mavar => unreachable!("filtered by caller"),
        Method::VarianceTime => {
            Ok(variance_time_plot(series, &default_windows(series.len(), 1))?.1)
        }
        Method::Periodogram => periodogram_estimate(series, DEFAULT_BAND),
        Method::HaarLd => Ok(haar_logscale_diagram(series, default_octaves(series.len()))?.1),
    }
}

fn check_not_constant(series: &TimeSeries) -> Result<()> {
    let s = series.samples();
    if s.iter().all(|v| *v == s[0]) {
        return Err(Error::Degenerate(format!("all {} samples equal {}", s.len(), s[0])));
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads `arg` as inline JSON when it starts with `{` or `[`, otherwise as
/// a file path.
fn json_arg(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::io(arg, e))
    }
}

/// Generator spec as accepted on the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    #[serde(alias = "N")]
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    #[serde(alias = "H")]
    pub hurst: Option<f64>,
    pub seed: Option<u64>,
    pub mode: Option<AmplitudeMode>,
    pub normalize: Option<bool>,
}

impl SpecJson {
    /// `hurst` is restricted to the LRD range [0.5, 1]; steeper spectra are
    /// requested through `alpha`.
    pub fn resolve(&self) -> Result<GeneratorSpec> {
        if let Some(h) = self.hurst {
            if !(0.5..=1.0).contains(&h) {
                return Err(Error::param("hurst", format!("must lie in [0.5, 1.0], got {h}")));
            }
        }
        let alpha = match (self.alpha, self.hurst) {
            (Some(_), Some(_)) => {
                return Err(Error::param("alpha", "give either alpha or hurst, not both"))
            }
            (Some(a), None) => a,
            (None, Some(h)) => crate::synth::alpha_from_hurst(h),
            (None, None) => return Err(Error::param("alpha", "one of alpha or hurst is required")),
        };
        let n = self.n.ok_or_else(|| Error::param("n", "series length is required"))?;
        let spec = GeneratorSpec::new(n, alpha, self.seed.unwrap_or(0))
            .mode(self.mode.unwrap_or_default())
            .normalize(self.normalize.unwrap_or(true));
        spec.validate()?;
        Ok(spec)
    }
}

/// Sidecar written next to a generated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateMeta {
    pub spec: GeneratorSpec,
    pub hurst: f64,
    pub tau0: f64,
    pub contaminants: Vec<Contaminant>,
    pub version: String,
}

/// Returns the series path; the sidecar is `<path>.meta.json`.
pub fn cmd_generate(args: &GenerateArgs) -> Result<PathBuf> {
    let mut raw: SpecJson = serde_json::from_str(&json_arg(&args.spec)?)?;
    if args.seed.is_some() {
        raw.seed = args.seed;
    }
    let spec = raw.resolve()?;
    let contaminants: Vec<Contaminant> = match &args.contaminants {
        None => Vec::new(),
        Some(c) => {
            let text = json_arg(c)?;
            match serde_json::from_str::<Vec<Contaminant>>(&text) {
                Ok(v) => v,
                Err(_) => vec![serde_json::from_str::<Contaminant>(&text)?],
            }
        }
    };
    let mut series = gen_lrd(&spec, args.tau0)?;
    for c in &contaminants {
        series = apply_contaminant(&series, c)?;
    }

    let path = match &args.out {
        Some(p) => p.clone(),
        None => std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."))
            .join("generated.txt"),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    write_one_column(&series, &path)?;
    let meta = GenerateMeta {
        spec,
        hurst: spec.hurst(),
        tau0: args.tau0,
        contaminants,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    let mut meta_path = path.clone().into_os_string();
    meta_path.push(".meta.json");
    write_text(Path::new(&meta_path), &serde_json::to_string_pretty(&meta)?)?;
    eprintln!("wrote {} samples to {}", series.len(), path.display());
    Ok(path)
}

fn cmd_experiment(mut config: ExperimentConfig, args: &ExperimentArgs) -> Result<()> {
    if let Some(h) = &args.hurst {
        config.hurst = h.clone();
    }
    if let Some(n) = &args.lengths {
        config.lengths = n.clone();
    }
    if let Some(k) = args.seeds {
        config.seeds_per_cell = k;
    }
    if let Some(s) = args.seed {
        config.master_seed = s;
    }
    if let Some(m) = &args.methods {
        config.methods = m.clone();
    }
    if let Some(m) = args.mode {
        config.mode = m;
    }
    if let Some(t) = args.tau0 {
        config.tau0 = t;
    }
    if let Some(a) = &args.amplitudes {
        config.step_amplitudes = a.clone();
    }
    if let Some(d) = &args.delays {
        config.step_delays = d.clone();
    }
    if args.generated_len.is_some() {
        config.generated_len = args.generated_len;
    }
    let dir = args.output.dir();
    config.output_dir = Some(dir.clone());
    let report = run_experiment(&config)?;
    print!("{}", report.summary_csv());
    for p in report.write(&dir, args.output.format)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_accepts_aliases() {
        let s: SpecJson = serde_json::from_str(r#"{"H":0.75,"N":1024,"seed":7}"#).unwrap();
        let g = s.resolve().unwrap();
        assert_eq!((g.n, g.seed), (1024, 7));
        assert!((g.alpha + 0.5).abs() < 1e-12);
        assert_eq!(g.mode, AmplitudeMode::Rayleigh);
        assert!(g.normalize);
    }

    #[test]
    fn spec_json_rejects_out_of_range_hurst() {
        let s: SpecJson = serde_json::from_str(r#"{"H":1.2}"#).unwrap();
        let e = s.resolve().unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("[0.5, 1.0]"));
    }

    #[test]
    fn spec_json_needs_exactly_one_exponent() {
        let both: SpecJson = serde_json::from_str(r#"{"n":64,"alpha":-0.5,"hurst":0.75}"#).unwrap();
        assert!(both.resolve().is_err());
        let none: SpecJson = serde_json::from_str(r#"{"n":64}"#).unwrap();
        assert!(none.resolve().is_err());
        assert!(serde_json::from_str::<SpecJson>(r#"{"n":64,"bogus":1}"#).is_err());
    }

    #[test]
    fn methods_parse_from_flags() {
        let cli = Cli::try_parse_from(["mavar", "analyze", "x.txt", "--tau0", "0.01", "--methods", "mavar,vtp,haarld"]).unwrap();
        let Command::Analyze(a) = cli.command else { panic!() };
        assert_eq!(a.methods, vec![Method::Mavar, Method::VarianceTime, Method::HaarLd]);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["mavar", "analyze"]), 1);
        assert_eq!(run(["mavar", "frobnicate"]), 1);
        assert_eq!(run(["mavar", "--help"]), 0);
    }
}

//! `quantrate`: simulate series, estimate quantile intervals, and run rate,
//! coverage, condition and theory checks from the command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 precondition or verdict
//! failure, 4 resource cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quantrate::estimators::{estimate_quantile_ci, EstimateOptions};
use quantrate::experiments::report::{
    coverage_to_csv, envelope_to_csv, lemma33_to_csv, rate_svg, rate_to_csv, taylor_to_csv, to_json,
};
use quantrate::experiments::{
    check_conditions, run_coverage, run_rate, CoverageConfig, RateExperimentConfig, RateMode, Status,
};
use quantrate::presets::{preset, preset_json};
use quantrate::processes::{simulate, FiniteMarkov, ProcessModel, TimeSeries};
use quantrate::theory::{cf_envelope, lemma33_check, taylor_residual, taylor_window};
use quantrate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "quantrate",
    version,
    about = "Quantile inference and normal-approximation rate experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one series from a model.
    Simulate(SimulateArgs),
    /// Sample quantile with a plug-in confidence interval.
    Estimate(EstimateArgs),
    /// Kolmogorov distance Δn over a grid of n, with its log-log slope.
    Rate(RateArgs),
    /// Empirical coverage of plug-in intervals.
    Coverage(CoverageArgs),
    /// Verdicts for the regularity conditions of a model at p.
    CheckConditions(ConditionArgs),
    /// Exact checks on finite-state chains: contraction bound, cumulant
    /// expansion residual, characteristic-function envelope.
    Theory(TheoryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Model-spec JSON file, or the name of a shipped preset.
    #[arg(long)]
    model: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Read observations (one per line) instead of simulating.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    p: f64,
    /// exact-iid, exact-markov or mc.
    #[arg(long)]
    mode: String,
    /// Comma-separated sample sizes, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Also write a log-log SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct ConditionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    p: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryCheck {
    Lemma33,
    Taylor,
    Envelope,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    check: TheoryCheck,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Interior threshold ε for the contraction bound.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Half-width of the level window around ξp; defaults to the full value range.
    #[arg(long)]
    halfwidth: Option<f64>,
    #[arg(long, default_value_t = 64)]
    t_points: usize,
    /// Largest |t| for the envelope.
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,
    /// Indicator level; defaults to the midpoint of the value gap above ξp.
    #[arg(long)]
    y: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 256)]
    n: usize,
}

fn load_model(arg: &str) -> Result<ProcessModel> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {arg}: {e}")))?;
        ProcessModel::from_json(&text)
    } else if preset_json(arg).is_some() {
        preset(arg)
    } else {
        Err(Error::Config(format!(
            "'{arg}' is neither a readable model file nor a preset name"
        )))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn chain_of(model: &ProcessModel) -> Result<&FiniteMarkov> {
    model
        .as_chain()
        .ok_or_else(|| Error::Precondition("theory checks need a finite_markov model".into()))
}

fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k < 2 {
        return vec![0.5 * (lo + hi)];
    }
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn series_csv(ts: &TimeSeries) -> String {
    let mut s = format!(
        "# quantrate series v1\n# model={}\n# seed={}\nt,value\n",
        ts.model_id, ts.seed
    );
    for (i, v) in ts.values.iter().enumerate() {
        s.push_str(&format!("{i},{v}\n"));
    }
    s
}

fn read_series(path: &Path) -> Result<TimeSeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') || line == "t,value" {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line);
        let v: f64 = field
            .parse()
            .map_err(|_| Error::Config(format!("cannot parse observation '{line}'")))?;
        values.push(v);
    }
    TimeSeries::from_values(values).map_err(|e| Error::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let model = load_model(&a.common.model)?;
            if a.n == 0 {
                return Err(Error::Config("--n must be at least 1".into()));
            }
            let ts = simulate(&model, a.n, a.seed)?;
            let text = match a.common.format {
                Format::Csv => series_csv(&ts),
                Format::Json => to_json(&ts)?,
            };
            emit(&a.common.out, &text)
        }
        Command::Estimate(a) => {
            let model = load_model(&a.common.model)?;
            let ts = match &a.input {
                Some(path) => read_series(path)?,
                None => simulate(&model, a.n, a.seed)?,
            };
            let est = estimate_quantile_ci(&ts, a.p, a.level, &EstimateOptions::default())?;
            let text = match a.common.format {
                Format::Json => to_json(&est)?,
                Format::Csv => format!(
                    "p,n,level,point,f_hat,sigma2_hat,tau2_hat,ci_lo,ci_hi\n{},{},{},{},{},{},{},{},{}\n",
                    est.p, est.n, est.level, est.point, est.f_hat, est.sigma2_hat, est.tau2_hat, est.ci_lo, est.ci_hi
                ),
            };
            emit(&a.common.out, &text)
        }
        Command::Rate(a) => {
            let model = load_model(&a.common.model)?;
            let mut cfg = RateExperimentConfig::new(model, a.p, RateMode::parse(&a.mode)?, a.n_grid);
            cfg.replicates = a.replicates;
            cfg.master_seed = a.seed;
            cfg.threads = a.threads;
            let report = run_rate(&cfg)?;
            if let Some(path) = &a.plot {
                fs::write(path, rate_svg(&report))
                    .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            }
            let text = match a.common.format {
                Format::Csv => rate_to_csv(&report),
                Format::Json => to_json(&report)?,
            };
            emit(&a.common.out, &text)
        }
        Command::Coverage(a) => {
            let model = load_model(&a.common.model)?;
            let mut cfg = CoverageConfig::new(model, a.p, a.level, a.n, a.replicates);
            cfg.master_seed = a.seed;
            cfg.threads = a.threads;
            let report = run_coverage(&cfg)?;
            let text = match a.common.format {
                Format::Csv => coverage_to_csv(&report),
                Format::Json => to_json(&report)?,
            };
            emit(&a.common.out, &text)
        }
        Command::CheckConditions(a) => {
            let model = load_model(&a.common.model)?;
            let report = check_conditions(&model, a.p)?;
            let text = match a.common.format {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    let mut s = "condition,status,margin,detail\n".to_string();
                    for v in &report.verdicts {
                        let margin = v.margin.map(|m| m.to_string()).unwrap_or_default();
                        s.push_str(&format!(
                            "{},{},{},\"{}\"\n",
                            v.condition,
                            v.status.as_str(),
                            margin,
                            v.detail.replace('"', "'")
                        ));
                    }
                    s
                }
            };
            emit(&a.common.out, &text)?;
            if report.verdicts.iter().any(|v| v.status == Status::Fail) {
                return Err(Error::Precondition("at least one condition fails".into()));
            }
            Ok(())
        }
        Command::Theory(a) => {
            let model = load_model(&a.common.model)?;
            let chain = chain_of(&model)?;
            let y = match a.y {
                Some(y) => y,
                None => chain.gap_midpoint_above(a.p)?,
            };
            let text = match a.check {
                TheoryCheck::Lemma33 => {
                    let v = chain.values();
                    let span = v[v.len() - 1] - v[0];
                    let half = a.halfwidth.unwrap_or(span.max(f64::MIN_POSITIVE));
                    let t = linspace(-std::f64::consts::PI, std::f64::consts::PI, a.t_points);
                    let r = lemma33_check(chain, a.p, a.epsilon, half, &t)?;
                    match a.common.format {
                        Format::Csv => lemma33_to_csv(&r),
                        Format::Json => to_json(&r)?,
                    }
                }
                TheoryCheck::Taylor => {
                    let n0 = *a
                        .n_grid
                        .first()
                        .ok_or_else(|| Error::Config("--n-grid is empty".into()))?;
                    let w = taylor_window(n0);
                    let r = taylor_residual(chain, y, &a.n_grid, &linspace(-w, w, a.t_points))?;
                    match a.common.format {
                        Format::Csv => taylor_to_csv(y, &r),
                        Format::Json => to_json(&r)?,
                    }
                }
                TheoryCheck::Envelope => {
                    let r = cf_envelope(chain, y, a.n, &linspace(-a.t_max, a.t_max, a.t_points))?;
                    match a.common.format {
                        Format::Csv => envelope_to_csv(&r),
                        Format::Json => to_json(&r)?,
                    }
                }
            };
            emit(&a.common.out, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

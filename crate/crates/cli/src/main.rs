//! `dominance`: estimate the changepoint of stochastic dominance between two
//! groups from summary statistics, bootstrap its confidence interval, run
//! the simulation series and draw their figures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dominance_core::bootstrap::{bootstrap_ci, BootstrapConfig, DEFAULT_B};
use dominance_core::changepoint::DominanceResult;
use dominance_core::changepoint::{
    classify_dominance, corrected_estimate, plug_in_estimate, Arm, GroupParams, GroupSummary,
};
use dominance_core::report::{
    parse_config, read_csv, render_figures, rows_from_cells, rows_from_sigma, write_csv, Appendix, DesignConfig,
    ReportError, RunManifest, Series,
};
use dominance_core::simulation::{run_full_grid, run_sigma_series};
use dominance_core::Error;

const EXIT_VALIDATION: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "dominance",
    version,
    about = "Changepoint of stochastic dominance between two groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point estimates of the changepoint from two summaries.
    Estimate(EstimateArgs),
    /// Parametric-bootstrap percentile intervals.
    Ci(CiArgs),
    /// Convergence of the series estimator of 1/(1 - alpha) in k.
    SimulateSigma(SimulateArgs),
    /// Bias, coverage and interval width over a design grid.
    SimulateA(SimulateArgs),
    /// Draw small-multiple SVG figures from result CSVs.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SummaryArgs {
    #[arg(long, allow_negative_numbers = true)]
    mean1: f64,
    #[arg(long)]
    sd1: f64,
    #[arg(long)]
    n1: u32,
    #[arg(long, allow_negative_numbers = true)]
    mean2: f64,
    #[arg(long)]
    sd2: f64,
    #[arg(long)]
    n2: u32,
    /// Series truncation (default min(n2 - 2, 500) for the arm with the larger SD).
    #[arg(long)]
    k: Option<u32>,
}

impl SummaryArgs {
    fn summaries(&self) -> Result<(GroupSummary, GroupSummary)> {
        if self.n1 < 3 || self.n2 < 3 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "each arm needs at least 3 observations".to_string(),
            }
            .into());
        }
        for (name, sd) in [("sd1", self.sd1), ("sd2", self.sd2)] {
            if !(sd > 0.0 && sd.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {sd}"),
                }
                .into());
            }
        }
        Ok((
            GroupSummary::from_sd(self.mean1, self.sd1, self.n1)?,
            GroupSummary::from_sd(self.mean2, self.sd2, self.n2)?,
        ))
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    summary: SummaryArgs,
}

#[derive(Debug, Args)]
struct CiArgs {
    #[command(flatten)]
    summary: SummaryArgs,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = DEFAULT_B)]
    b: usize,
    #[arg(long)]
    seed: u64,
    /// Confidence levels to report.
    #[arg(long, value_delimiter = ',', default_value = "0.95,0.9")]
    levels: Vec<f64>,
    /// Also write the bootstrap quantiles to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Design-grid config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if needed).
    #[arg(long, env = "DOMINANCE_OUT_DIR")]
    out_dir: PathBuf,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AppendixArg {
    A,
    B,
    C,
    Fig1,
}

impl From<AppendixArg> for Appendix {
    fn from(a: AppendixArg) -> Self {
        match a {
            AppendixArg::A => Appendix::A,
            AppendixArg::B => Appendix::B,
            AppendixArg::C => Appendix::C,
            AppendixArg::Fig1 => Appendix::Fig1,
        }
    }
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Result CSV files.
    #[arg(long = "input", required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    appendix: AppendixArg,
    #[arg(long, env = "DOMINANCE_OUT_DIR")]
    out_dir: PathBuf,
}

fn arm_name(arm: Arm) -> &'static str {
    match arm {
        Arm::Group1 => "arm 1",
        Arm::Group2 => "arm 2",
    }
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    let (t1, t2) = args.summary.summaries()?;
    let plug_in = plug_in_estimate(t1, t2)?;
    let est = corrected_estimate(t1, t2, args.summary.k)?;
    let larger = est.orientation.larger_sd_arm();
    println!("larger sample SD: {}", arm_name(larger));
    println!("sd ratio (smaller/larger): {}", est.sigma_ratio_hat);
    println!("plug-in estimate: {plug_in}");
    println!("series estimate: {} (k = {})", est.a_hat, est.k);
    println!("sigma series: {}", est.sigma_series);
    let sample = classify_dominance(GroupParams::new(t1.mean, t1.sd())?, GroupParams::new(t2.mean, t2.sd())?);
    match sample {
        DominanceResult::Crossing { larger_above, .. } => println!(
            "dominance: {} is stochastically larger on {{x >= {}}} and smaller on {{x < {}}}",
            arm_name(larger_above),
            est.a_hat,
            est.a_hat
        ),
        // unreachable: equal sample SDs fail above
        other => println!("dominance: {other:?}"),
    }
    Ok(())
}

fn fmt_level(level: f64) -> String {
    let pct = format!("{:.4}", level * 100.0);
    pct.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn ci(args: &CiArgs) -> Result<()> {
    let (t1, t2) = args.summary.summaries()?;
    if args.levels.is_empty() {
        bail!(Error::InvalidParameter {
            name: "levels",
            reason: "at least one level is required".to_string()
        });
    }
    let mut probs = vec![0.5];
    for &level in &args.levels {
        if !(level > 0.0 && level < 1.0) {
            bail!(Error::InvalidParameter {
                name: "levels",
                reason: format!("levels must lie in (0, 1), got {level}")
            });
        }
        let tail = (0.5 * (1.0 - level) * 1e12).round() / 1e12;
        probs.extend([tail, 1.0 - tail]);
    }
    probs.sort_by(f64::total_cmp);
    probs.dedup();
    let cfg = BootstrapConfig {
        b: args.b,
        probs,
        k: args.summary.k,
        seed: args.seed,
    };
    let point = corrected_estimate(t1, t2, args.summary.k)?;
    let boot = bootstrap_ci(t1, t2, &cfg)?;
    println!("series estimate: {} (k = {})", point.a_hat, point.k);
    println!("bootstrap median: {}", boot.median);
    for &level in &args.levels {
        let (lo, hi) = boot.interval(level)?;
        println!("{}% CI: [{lo}, {hi}]", fmt_level(level));
    }
    println!(
        "replicates: {} used, {} degenerate (seed {})",
        boot.replicates().len(),
        boot.n_degenerate,
        args.seed
    );
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(["p", "quantile"])?;
        for (p, q) in &boot.quantiles {
            w.write_record([p.to_string(), q.to_string()])?;
        }
        w.flush()?;
    }
    Ok(())
}

fn series_name(s: Series) -> &'static str {
    match s {
        Series::Sigma => "sigma",
        Series::Changepoint => "changepoint",
    }
}

fn parallelism(arg: Option<usize>) -> usize {
    arg.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn write_outputs(
    out_dir: &Path,
    stem: &str,
    rows: &[dominance_core::report::ResultRow],
    manifest: &RunManifest,
) -> Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let file = fs::File::create(&csv_path).with_context(|| format!("writing {}", csv_path.display()))?;
    write_csv(rows, std::io::BufWriter::new(file))?;
    let manifest_path = out_dir.join(format!("{stem}.manifest.json"));
    fs::write(&manifest_path, manifest.to_json()?).with_context(|| format!("writing {}", manifest_path.display()))?;
    eprintln!("wrote {} rows to {}", rows.len(), csv_path.display());
    Ok(())
}

fn simulate(args: &SimulateArgs, expected: Series) -> Result<()> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let config = parse_config(&text, args.seed)?;
    if config.series() != expected {
        return Err(ReportError::Config {
            field: "series".to_string(),
            message: format!(
                "this subcommand runs the {} series, config declares {}",
                series_name(expected),
                series_name(config.series())
            ),
        }
        .into());
    }
    let threads = parallelism(args.parallelism);
    match config {
        DesignConfig::Sigma(d) => {
            let rows = rows_from_sigma(&run_sigma_series(&d, threads)?);
            let manifest = RunManifest::new(Series::Sigma, args.seed, &text, rows.len());
            write_outputs(&args.out_dir, "sigma_series", &rows, &manifest)
        }
        DesignConfig::Changepoint(d) => {
            let cells = run_full_grid(&d, threads)?;
            let rows = rows_from_cells(&cells);
            let manifest = RunManifest::new(Series::Changepoint, args.seed, &text, rows.len()).with_failures(&cells);
            write_outputs(&args.out_dir, "changepoint", &rows, &manifest)
        }
    }
}

fn report(args: &ReportArgs) -> Result<()> {
    let mut rows = Vec::new();
    for path in &args.inputs {
        let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
        rows.extend(read_csv(file).with_context(|| format!("in {}", path.display()))?);
    }
    let figures = render_figures(&rows, args.appendix.into())?;
    fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    for fig in figures {
        let path = args.out_dir.join(&fig.file_name);
        fs::write(&path, fig.svg).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let core = err.chain().find_map(|e| {
        e.downcast_ref::<Error>()
            .or_else(|| match e.downcast_ref::<ReportError>() {
                Some(ReportError::Core(c)) => Some(c),
                _ => None,
            })
    });
    match core {
        Some(Error::DegenerateRatio | Error::NoChangepoint | Error::AllReplicatesDegenerate { .. }) => EXIT_DEGENERATE,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Ci(a) => ci(a),
        Command::SimulateSigma(a) => simulate(a, Series::Sigma),
        Command::SimulateA(a) => simulate(a, Series::Changepoint),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

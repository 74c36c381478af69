use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cumlomb::core::{
    clsp_variance, estimate_from_scan, fit_trig_poly, observe, sample_instants, snr_to_sigma, FrequencyGrid, Method,
    PeriodicSignal,
};
use cumlomb::error::{Error, Result};
use cumlomb::harness::{report_table, run_experiment, ExperimentConfig};
use cumlomb::io::{parse_scheme, read_series_file, read_signal_file, signal_to_json, write_periodogram, write_series};
use cumlomb::scan::par_scan;
use serde::Serialize;

/// Period finding for irregularly sampled periodic signals.
#[derive(Parser)]
#[command(name = "cumlomb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a light curve and write it as t,y CSV.
    Simulate(SimulateArgs),
    /// Fit a trigonometric polynomial at a known period; writes signal JSON.
    Fit(FitArgs),
    /// Estimate the frequency of a light curve; prints a JSON result.
    Estimate(EstimateArgs),
    /// Asymptotic standard deviations for a signal, scheme and noise level.
    Theory(TheoryArgs),
    /// Run a Monte-Carlo experiment described by a JSON config.
    Mc(McArgs),
}

#[derive(Args)]
struct NoiseArgs {
    /// Noise standard deviation.
    #[arg(long, conflicts_with = "snr_db", required_unless_present = "snr_db")]
    sigma: Option<f64>,
    /// Signal-to-noise ratio in dB (AC power over noise variance).
    #[arg(long = "snr-db", allow_negative_numbers = true)]
    snr_db: Option<f64>,
}

impl NoiseArgs {
    fn sigma(&self, signal: &PeriodicSignal) -> Result<f64> {
        match (self.sigma, self.snr_db) {
            (Some(s), _) if s.is_finite() && s >= 0.0 => Ok(s),
            (Some(s), _) => Err(Error::config(format!("sigma must be finite and non-negative, got {s}"))),
            (None, Some(db)) => Ok(snr_to_sigma(signal, db).map_err(Error::config)?),
            (None, None) => Err(Error::config("give --sigma or --snr-db")),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Signal JSON file, or `reference` for the shipped reference signal.
    #[arg(long)]
    signal: String,
    /// exponential:RATE, gamma:SHAPE,RATE or uniform:LOW,HIGH.
    #[arg(long, default_value = "exponential:5")]
    scheme: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    period: f64,
    #[arg(long, default_value_t = 6)]
    degree: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "clsp")]
    method: Method,
    #[arg(long, default_value_t = 0.2)]
    fmin: f64,
    #[arg(long, default_value_t = 0.52)]
    fmax: f64,
    #[arg(long, default_value_t = 5e-5)]
    mesh: f64,
    /// Number of harmonics.
    #[arg(long = "K", default_value_t = 4)]
    k: usize,
    /// One parabolic step around the best grid point.
    #[arg(long)]
    refine: bool,
    /// Write the criterion on the whole grid as f,lambda CSV.
    #[arg(long = "dump-periodogram")]
    dump_periodogram: Option<PathBuf>,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    signal: String,
    #[arg(long, default_value = "exponential:5")]
    scheme: String,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [300, 600])]
    n: Vec<usize>,
    /// Target the sub-multiple f_star / ell.
    #[arg(long, default_value_t = 1)]
    ell: usize,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write the statistics CSV here instead of after the table.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full outcome, including warnings and checksums, as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn load_signal(spec: &str) -> Result<PeriodicSignal> {
    if spec == "reference" {
        Ok(cumlomb::reference_signal())
    } else {
        read_signal_file(Path::new(spec))
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::data(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_err(e: impl std::fmt::Display) -> Error {
    Error::data(format!("write failed: {e}"))
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(write_err)?;
    writeln!(io::stdout(), "{text}").map_err(write_err)
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let signal = load_signal(&args.signal)?;
    let scheme = parse_scheme(&args.scheme)?;
    if args.n == 0 {
        return Err(Error::config("n must be at least 1"));
    }
    let sigma = args.noise.sigma(&signal)?;
    let times = sample_instants(&scheme, args.n, args.seed);
    let data = observe(&signal, &times, sigma, args.seed.wrapping_add(1))?;
    write_series(open_output(args.output.as_deref())?, &data).map_err(write_err)
}

fn fit(args: FitArgs) -> Result<()> {
    if !(args.period.is_finite() && args.period > 0.0) {
        return Err(Error::config(format!("period must be positive, got {}", args.period)));
    }
    let data = read_series_file(&args.input)?;
    let signal = fit_trig_poly(data.times(), data.values(), 1.0 / args.period, args.degree)?;
    let mut out = open_output(args.output.as_deref())?;
    writeln!(out, "{}", signal_to_json(&signal)).map_err(write_err)
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let grid = FrequencyGrid::new(args.fmin, args.fmax, args.mesh)?;
    let data = read_series_file(&args.input)?;
    cumlomb::core::estimator::check_method(args.method, args.k, data.len())?;
    let scan = par_scan(&data, &grid, args.method, args.k);
    if let Some(path) = &args.dump_periodogram {
        let values: Vec<f64> = scan.iter().map(|v| *v.as_ref().unwrap_or(&f64::NAN)).collect();
        write_periodogram(open_output(Some(path))?, &grid, &values).map_err(write_err)?;
    }
    let result = estimate_from_scan(&data, &grid, args.method, args.k, args.refine, &scan)?;
    print_json(&result)
}

#[derive(Serialize)]
struct Prediction {
    n: usize,
    optimal_sd: f64,
    predicted_clsp_sd: f64,
}

#[derive(Serialize)]
struct TheoryOutput {
    report: cumlomb::core::AsymptoticReport,
    ell: usize,
    predictions: Vec<Prediction>,
}

fn theory(args: TheoryArgs) -> Result<()> {
    let signal = load_signal(&args.signal)?;
    let scheme = parse_scheme(&args.scheme)?;
    let sigma = args.noise.sigma(&signal)?;
    if args.ell == 0 || args.n.contains(&0) {
        return Err(Error::config("n and ell must be positive"));
    }
    let report = clsp_variance(&signal, &scheme, sigma)?;
    let predictions = args
        .n
        .iter()
        .map(|&n| Prediction {
            n,
            optimal_sd: report.optimal_sd(n),
            predicted_clsp_sd: report.predicted_clsp_sd(n, args.ell),
        })
        .collect();
    print_json(&TheoryOutput { report, ell: args.ell, predictions })
}

fn mc(args: McArgs) -> Result<()> {
    let (config, base_dir) = ExperimentConfig::from_file(&args.config)?;
    let exp = config.resolve(base_dir.as_deref())?;
    for w in &exp.warnings {
        eprintln!("warning: {w}");
    }
    let outcome = run_experiment(&exp);
    for (m, err) in exp.methods.iter().zip(&outcome.first_errors) {
        if let Some(err) = err {
            eprintln!("warning: {} failed on some replicates, first error: {err}", m.method.label(m.k));
        }
    }
    let table = report_table(&outcome.stats, outcome.theory.as_ref(), outcome.n, outcome.snr_db);
    let mut stdout = io::stdout().lock();
    write!(stdout, "{}", table.text).map_err(write_err)?;
    match &args.csv {
        Some(path) => std::fs::write(path, &table.csv).map_err(write_err)?,
        None => write!(stdout, "\n{}", table.csv).map_err(write_err)?,
    }
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&outcome).map_err(write_err)?;
        std::fs::write(path, text).map_err(write_err)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Fit(a) => fit(a),
        Command::Estimate(a) => estimate(a),
        Command::Theory(a) => theory(a),
        Command::Mc(a) => mc(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

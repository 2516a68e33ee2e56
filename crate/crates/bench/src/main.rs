use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use starnav::{fit_region, rms_error, starshape::polar_samples, FitConfigd, Scand};
use starnav_bench::{
    export_artifacts, run_episode, run_records, Artifact, BatchSummary, BenchError, Outcome, RunRecord, ScenarioSpec,
    OUT_DIR_ENV,
};

#[derive(Parser)]
#[command(name = "starnav", version, about = "Starshaped roadmap navigation benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Overrides {
    /// Control period in seconds.
    #[arg(long)]
    dt: Option<f64>,
    /// Episode time limit in seconds.
    #[arg(long = "max-time")]
    max_time: Option<f64>,
    /// LiDAR range noise standard deviation in meters.
    #[arg(long)]
    noise: Option<f64>,
    /// Skip wall-clock timing so records are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a starshaped region to a scan file and report segments and RMS error.
    Fit {
        scan_file: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Run one episode.
    Run {
        scenario_file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = OUT_DIR_ENV, default_value = "starnav-out")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run seeds first-seed .. first-seed + N and summarise.
    Batch {
        scenario_file: PathBuf,
        #[arg(long, default_value_t = 30)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, env = OUT_DIR_ENV, default_value = "starnav-out")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Re-render the CSV and SVG of a saved run record.
    Plot {
        record_file: PathBuf,
        #[arg(long, env = OUT_DIR_ENV, default_value = "starnav-out")]
        out: PathBuf,
    },
    /// Print a built-in scenario (forest, utrap, slalom) as JSON.
    Scenario { name: String },
}

fn load_spec(path: &Path, o: &Overrides) -> Result<ScenarioSpec, BenchError> {
    let mut spec = ScenarioSpec::load(path)?;
    if let Some(dt) = o.dt {
        spec.limits.dt = dt;
    }
    if let Some(t) = o.max_time {
        spec.limits.max_sim_time = t;
    }
    if let Some(n) = o.noise {
        spec.scenario.lidar.noise_stddev = n;
    }
    if o.no_timing {
        spec.timing = false;
    }
    spec.validate()?;
    Ok(spec)
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<ExitCode, BenchError> {
    match cli.command {
        Command::Fit { scan_file, order } => {
            let text = std::fs::read_to_string(&scan_file).map_err(|e| BenchError::Io(format!("{}: {e}", scan_file.display())))?;
            let scan: Scand = serde_json::from_str(&text).map_err(|e| BenchError::Parse(e.to_string()))?;
            let cfg = FitConfigd::with_order(order);
            let region = fit_region(scan.origin(), &scan, &cfg)?;
            let rms = rms_error(&region, &polar_samples(scan.origin(), &scan));
            println!("beams {}", scan.len());
            println!("segments {}", region.boundary.segments().len());
            println!("rms {rms:.6}");
            let bps: Vec<String> = region.boundary.breakpoints().iter().map(|b| format!("{b:.4}")).collect();
            println!("breakpoints [{}]", bps.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { scenario_file, seed, out, overrides } => {
            let spec = load_spec(&scenario_file, &overrides)?;
            let seed = seed.unwrap_or(spec.scenario.seed);
            let record = run_episode(&spec, seed)?;
            print_paths(&export_artifacts(Artifact::Record(&record), &out)?);
            println!(
                "seed {} outcome {} time {:.2}s length {:.2}m",
                seed,
                record.outcome.as_str(),
                record.travel_time,
                record.path_length
            );
            Ok(match record.outcome {
                Outcome::Success => ExitCode::SUCCESS,
                Outcome::Timeout | Outcome::NoPath => ExitCode::from(2),
                Outcome::Collision => ExitCode::from(3),
            })
        }
        Command::Batch { scenario_file, seeds, first_seed, out, overrides } => {
            let spec = load_spec(&scenario_file, &overrides)?;
            let list: Vec<u64> = (first_seed..first_seed + seeds).collect();
            let records = run_records(&spec, &list)?;
            let summary = BatchSummary::from_records(&records);
            print_paths(&export_artifacts(Artifact::Summary(&summary, &records), &out)?);
            println!(
                "runs {} success_rate {:.3} travel_time {:.2}±{:.2}s path_length {:.2}±{:.2}m",
                summary.n_runs,
                summary.success_rate,
                summary.travel_time.mean,
                summary.travel_time.stddev,
                summary.path_length.mean,
                summary.path_length.stddev
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { record_file, out } => {
            let text = std::fs::read_to_string(&record_file).map_err(|e| BenchError::Io(format!("{}: {e}", record_file.display())))?;
            let record = RunRecord::from_json(&text)?;
            print_paths(&export_artifacts(Artifact::Record(&record), &out)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenario { name } => {
            let spec = match name.as_str() {
                "forest" => ScenarioSpec::forest(),
                other => {
                    starnav_sim::gen_maze(other)?;
                    ScenarioSpec::maze(other)
                }
            };
            println!("{}", spec.to_json());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};

use itfleet::commands::{
    cmd_fit, cmd_report, cmd_score, cmd_simulate, cmd_synth, FamilyFilter, FitArgs, ReportArgs, ScoreArgs,
    SimulateArgs, SynthArgs,
};
use itfleet::core::sim::BUILTIN_SCENARIOS;
use itfleet::runner::default_jobs;

/// Instrument-transformer fleet ageing, health scoring and maintenance
/// simulation. Every command writes into its own output directory together
/// with a `manifest.json` recording inputs, seeds and output digests.
///
/// Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numerical
/// non-convergence.
#[derive(Parser)]
#[command(name = "itfleet", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kaplan-Meier curves and Weibull laws from an asset register.
    ///
    /// Writes km.csv, law.json (maximum-likelihood and rank-regression
    /// fits with median and B10 summaries) and fleet_summary.{json,csv}.
    Fit {
        /// Asset register CSV (asset_id,voltage_kv,commission_date,failure_date).
        #[arg(long)]
        assets: PathBuf,
        /// Observation cutoff (YYYY-MM-DD); assets still in service are censored here.
        #[arg(long)]
        cutoff: NaiveDate,
        /// Voltage family: all, 110, 150 or 220_380.
        #[arg(long, default_value = "all")]
        family: String,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Asset health index (1-10) of every asset in service at a date.
    ///
    /// Writes ahi.csv.
    Score {
        /// Asset register CSV.
        #[arg(long)]
        assets: PathBuf,
        /// law.json from `fit`, or `reference` for the built-in family laws.
        #[arg(long)]
        laws: String,
        /// Scoring date (YYYY-MM-DD).
        #[arg(long)]
        as_of: NaiveDate,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo maintenance simulation of a fleet under one scenario.
    ///
    /// Writes scenario.json (as run), report.json and kpis.csv.
    Simulate {
        /// Fleet CSV in asset-register format.
        #[arg(long)]
        fleet: PathBuf,
        /// Scenario JSON file or built-in name (see long help).
        #[arg(long, long_help = scenario_help())]
        scenario: String,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for replications [default: available parallelism].
        #[arg(long)]
        jobs: Option<usize>,
        /// Master seed; overrides the scenario's `master_seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Synthetic fleet from a JSON description.
    ///
    /// The description holds `sizes` ({"V110", "V150", "V220_380"}),
    /// `first_year`, `last_year`, `seed` and optionally
    /// `failures` ({"cutoff", "laws"}) to sample failure dates. Writes fleet.csv.
    Synth {
        /// Fleet description JSON.
        #[arg(long)]
        spec: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Year-by-year TOTEX comparison of two simulation reports.
    ///
    /// Writes comparison.csv, comparison.json and stacked per-year cost
    /// series in plotdata/.
    Report {
        /// report.json of scenario A, or the `simulate` output directory holding it.
        #[arg(long)]
        a: PathBuf,
        /// report.json of scenario B, or its directory.
        #[arg(long)]
        b: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn scenario_help() -> String {
    format!("Scenario JSON file (see docs/scenario.schema.json) or a built-in name: {}", BUILTIN_SCENARIOS.join(", "))
}

fn run(command: Command) -> itfleet::Result<itfleet::manifest::RunManifest> {
    match command {
        Command::Fit { assets, cutoff, family, out } => {
            cmd_fit(&FitArgs { assets, cutoff, family: FamilyFilter::parse(&family)?, out })
        }
        Command::Score { assets, laws, as_of, out } => cmd_score(&ScoreArgs { assets, laws, as_of, out }),
        Command::Simulate { fleet, scenario, out, jobs, seed } => {
            cmd_simulate(&SimulateArgs { fleet, scenario, out, jobs: jobs.unwrap_or_else(default_jobs), seed })
        }
        Command::Synth { spec, out } => cmd_synth(&SynthArgs { spec, out }),
        Command::Report { a, b, out } => cmd_report(&ReportArgs { a, b, out }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(m) => {
            for o in &m.outputs {
                println!("{}", o.path);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

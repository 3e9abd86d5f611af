//! Thin command-line front end for the adicheck library.
//!
//! Exit status is nonzero only when the request itself is unusable —
//! unreadable files, malformed JSON, invalid scenarios or arguments.
//! Physics outcomes (failing verdicts, degeneracies, propagation
//! trouble) are part of the report, not process failures.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use adicheck::flow::Gauge;
use adicheck::report::{
    externalize_series, run_scenario, sweep, sweep_to_csv, to_json_string, write_report,
};
use adicheck::scenario::load_scenario;

#[derive(Parser)]
#[command(
    name = "adicheck",
    version,
    about = "Decide whether the adiabatic approximation holds for a \
             time-dependent Hamiltonian over a window [0, T]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full check for one scenario and emit a JSON report.
    Run {
        /// Scenario file (JSON).
        scenario: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write requested series as CSV files into this directory,
        /// leaving file references in the report.
        #[arg(long)]
        series_dir: Option<PathBuf>,
        /// Override the scenario's eigenvector gauge.
        #[arg(long, value_enum)]
        gauge: Option<GaugeArg>,
    },
    /// Re-run one scenario across a list of parameter values and emit a
    /// CSV summary table.
    Sweep {
        /// Scenario file (JSON).
        scenario: PathBuf,
        /// Parameter to vary: T, epsilon, steps, tol, or a model
        /// parameter of the scenario's kind.
        #[arg(long)]
        param: String,
        /// Comma-separated values, e.g. 10,20,40,80.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Write the CSV table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario file without running it.
    Validate {
        /// Scenario file (JSON).
        scenario: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum GaugeArg {
    Aligned,
    Canonical,
}

impl From<GaugeArg> for Gauge {
    fn from(g: GaugeArg) -> Gauge {
        match g {
            GaugeArg::Aligned => Gauge::Aligned,
            GaugeArg::Canonical => Gauge::Canonical,
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            scenario,
            out,
            series_dir,
            gauge,
        } => {
            let mut s = load_scenario(&scenario)
                .with_context(|| format!("loading {}", scenario.display()))?;
            if let Some(g) = gauge {
                s.gauge = g.into();
            }
            let mut report = run_scenario(&s)?;
            if let Some(dir) = &series_dir {
                externalize_series(&mut report, dir)
                    .with_context(|| format!("writing series to {}", dir.display()))?;
            }
            match &out {
                Some(path) => {
                    write_report(&report, path)
                        .with_context(|| format!("writing {}", path.display()))?;
                    let verdict = report
                        .conditions
                        .as_ref()
                        .map(|c| format!("{:?}", c.verdict))
                        .unwrap_or_else(|| "NO_VERDICT".to_string());
                    println!("report written to {} (verdict: {verdict})", path.display());
                }
                None => print!("{}", to_json_string(&report)?),
            }
            for d in &report.diagnostics {
                eprintln!("diagnostic: {d}");
            }
        }
        Command::Sweep {
            scenario,
            param,
            values,
            out,
        } => {
            let s = load_scenario(&scenario)
                .with_context(|| format!("loading {}", scenario.display()))?;
            let table = sweep(&s, &param, &values)?;
            let csv = sweep_to_csv(&table);
            match &out {
                Some(path) => {
                    std::fs::write(path, &csv)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("sweep table written to {}", path.display());
                }
                None => print!("{csv}"),
            }
            for row in &table.rows {
                for d in &row.diagnostics {
                    eprintln!("diagnostic ({} = {}): {d}", table.param, row.value);
                }
            }
        }
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario)
                .with_context(|| format!("validating {}", scenario.display()))?;
            println!(
                "ok: {} model, T = {}, epsilon = {}, steps = {}, gauge = {:?}",
                s.model.kind, s.t_total, s.epsilon, s.steps, s.gauge
            );
        }
    }
    Ok(())
}

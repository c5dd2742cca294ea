use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dgbound::output::{entropy_csv, errors_csv, resolve_output_dir, snapshot_csv, write_file};
use dgbound::scenario::ScenarioConfig;
use dgbound::timeloop::RunStatus;
use dgbound::verify::{run_suite, VerifyOptions, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "dgbound",
    version,
    about = "Entropy-bounded open boundaries for split-form DGSEM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its entropy series, snapshot and errors.
    Run {
        config: PathBuf,
        /// Override the polynomial degree of the configuration.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Run a scenario at several degrees and tabulate the L2 errors.
    Convergence {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        degrees: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, degree } => run(&config, degree),
        Command::Verify { seed, samples } => Ok(verify(seed, samples)),
        Command::Convergence { config, degrees } => convergence(&config, &degrees),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}

fn load(path: &Path, degree: Option<usize>) -> dgbound::Result<ScenarioConfig> {
    let cfg = ScenarioConfig::from_path(path)?;
    let cfg = match degree {
        Some(d) => cfg.with_degree(d),
        None => cfg,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(path: &Path, degree: Option<usize>) -> dgbound::Result<ExitCode> {
    let cfg = load(path, degree)?;
    let scenario = cfg.build()?;
    let outcome = scenario.execute(|r| {
        println!(
            "t = {:>12.6e}  E = {:>14.8e}  margin = {:>11.3e}  min_h = {:.4e}",
            r.t, r.entropy, r.margin, r.min_h
        )
    })?;
    let dir = resolve_output_dir(cfg.output.dir.as_deref());
    let entropy_name = cfg
        .output
        .entropy
        .clone()
        .unwrap_or_else(|| format!("{}_entropy.csv", cfg.name));
    let path = write_file(&dir, &entropy_name, &entropy_csv(&outcome.result.reports))?;
    println!("wrote {}", path.display());
    match outcome.result.status {
        RunStatus::Completed => {
            if let Some(q) = &outcome.result.state {
                let name = cfg
                    .output
                    .snapshot
                    .clone()
                    .unwrap_or_else(|| format!("{}_snapshot.csv", cfg.name));
                let path = write_file(&dir, &name, &snapshot_csv(scenario.disc.as_ref(), q))?;
                println!("wrote {}", path.display());
            }
            if let Some(errors) = &outcome.l2_error {
                let nvar = scenario.initial.nvar;
                let path = write_file(&dir, &format!("{}_errors.csv", cfg.name), &errors_csv(nvar, errors))?;
                println!("wrote {}", path.display());
                println!("l2 error {}", fmt_errors(errors));
            }
            println!("completed at t = {} after {} steps", cfg.t_end, outcome.result.steps);
            Ok(ExitCode::SUCCESS)
        }
        RunStatus::Aborted { time, reason } => {
            eprintln!("aborted at t = {time}: {reason}");
            Ok(ExitCode::from(2))
        }
    }
}

fn verify(seed: u64, samples: usize) -> ExitCode {
    let report = run_suite(&VerifyOptions {
        seed,
        samples,
        ..Default::default()
    });
    for c in &report {
        println!("{c}");
    }
    let failed = report.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", report.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn fmt_errors(errors: &[f64]) -> String {
    errors.iter().map(|e| format!("{e:.6e}")).collect::<Vec<_>>().join(" ")
}

fn convergence(path: &Path, degrees: &[usize]) -> dgbound::Result<ExitCode> {
    let base = load(path, None)?;
    let mut previous: Option<Vec<f64>> = None;
    for &d in degrees {
        let cfg = base.with_degree(d);
        cfg.validate()?;
        let scenario = cfg.build()?;
        if !scenario.has_exact_solution() {
            return Err(dgbound::Error::Config(format!(
                "scenario {} has no exact solution",
                cfg.name
            )));
        }
        let outcome = scenario.execute(|_| {})?;
        match (&outcome.result.status, outcome.l2_error) {
            (RunStatus::Completed, Some(errors)) => {
                let ratios = previous
                    .as_ref()
                    .map(|p| {
                        let r: Vec<String> = p.iter().zip(&errors).map(|(a, b)| format!("{:.2}", a / b)).collect();
                        format!("  ratio {}", r.join(" "))
                    })
                    .unwrap_or_default();
                println!("N = {d:>2}  l2 {}{ratios}", fmt_errors(&errors));
                previous = Some(errors);
            }
            (RunStatus::Aborted { time, reason }, _) => {
                println!("N = {d:>2}  aborted at t = {time}: {reason}");
                previous = None;
            }
            (RunStatus::Completed, None) => unreachable!("exact solution checked above"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

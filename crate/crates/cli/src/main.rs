use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use scuq_core::experiments::{list_experiments, run_with_threads, validate_file};
use scuq_core::{Error, ExperimentConfig};

/// Stochastic collocation surrogates for uncertainty quantification.
#[derive(Parser)]
#[command(name = "scuq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a configuration file.
    Run {
        config: PathBuf,
        /// Output directory (default: the config's `output_dir`, else `out/<experiment>`).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// Number of Monte Carlo samples.
        #[arg(long, value_name = "M")]
        samples: Option<usize>,
        /// Worker threads (default: all cores).
        #[arg(long, value_name = "T", env = "SCUQ_THREADS")]
        threads: Option<usize>,
    },
    /// Check a configuration file without running it.
    Validate { config: PathBuf },
    /// List the available experiments.
    ListExperiments,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::ListExperiments => {
            for (name, description) in list_experiments() {
                println!("{name:<12} {description}");
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match validate_file(&config) {
            Ok(violations) if violations.is_empty() => {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Ok(violations) => {
                for v in violations {
                    eprintln!("{}: {v}", config.display());
                }
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("{}: {e}", config.display());
                ExitCode::from(1)
            }
        },
        Command::Run {
            config,
            out,
            seed,
            samples,
            threads,
        } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(m) = samples {
                cfg.m = m;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            let violations = cfg.violations();
            if !violations.is_empty() {
                for v in violations {
                    eprintln!("{}: {v}", config.display());
                }
                return ExitCode::from(2);
            }
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out").join(cfg.experiment.name()));
            let start = std::time::Instant::now();
            match run_with_threads(&cfg, &dir, cfg.threads) {
                Ok(manifest) => {
                    for c in &manifest.convergence {
                        let fit = c.fit.map(|f| format!("K = {:.4e}, k = {:.3}", f.amplitude, f.exponent));
                        println!("{:<15} {}", c.method.name(), fit.unwrap_or_else(|| "no fit".into()));
                    }
                    println!(
                        "{} files written to {} in {:.1} s",
                        manifest.files.len() + 1,
                        dir.display(),
                        start.elapsed().as_secs_f64()
                    );
                    ExitCode::SUCCESS
                }
                Err(e @ Error::Config(_)) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quantaequiv_cli::emit::{emit_tables, ensure_writable};
use quantaequiv_cli::{run_suite, HarnessError, OutputFormat, SuiteConfig, SUITES};

#[derive(Parser)]
#[command(name = "quantaequiv", version, about = "Verification suites for Weyl and Moyal quantization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and write its report.
    Run {
        suite: String,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to the config's `output.dir`, then `.`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Print the available suites.
    ListSuites,
}

fn configure_threads() -> Result<(), HarnessError> {
    let Ok(value) = std::env::var("QUANTAEQUIV_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| HarnessError::Config(format!("QUANTAEQUIV_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| HarnessError::Config(e.to_string()))
}

fn run(command: Command) -> Result<bool, HarnessError> {
    match command {
        Command::ListSuites => {
            for (name, about) in SUITES {
                println!("{name:<18} {about}");
            }
            Ok(true)
        }
        Command::Run { suite, config, seed, out, format } => {
            if !SUITES.iter().any(|(name, _)| *name == suite) {
                return Err(HarnessError::UnknownSuite(suite));
            }
            let mut config = SuiteConfig::load(&config)?;
            if let Some(named) = &config.suite {
                if *named != suite {
                    return Err(HarnessError::Config(format!("config is for suite `{named}`, not `{suite}`")));
                }
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let dir = out.or_else(|| config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("."));
            let format = format.unwrap_or(config.output.format);
            ensure_writable(&dir)?;
            configure_threads()?;
            let report = run_suite(&suite, &config)?;
            for path in emit_tables(&report, format, &dir)? {
                eprintln!("wrote {}", path.display());
            }
            for check in &report.checks {
                println!("{:<40} {:?}", check.id, check.status);
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;

use config::{Overrides, RunConfig, CACHE_DIR_ENV};
use error::CliResult;

/// Spectral detection of zeta cycles.
#[derive(Parser, Debug)]
#[command(name = "zeta-cycles", version, about)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory holding zeros.csv.
    #[arg(long, global = true, env = CACHE_DIR_ENV, hide_env_values = true)]
    cache_dir: Option<PathBuf>,
    /// Zero cache file; overrides the cache directory.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Detection tolerance on |zeta|.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Family indices, e.g. `0,1,2`.
    #[arg(long, global = true, value_delimiter = ',')]
    family: Option<Vec<usize>>,
    #[arg(long, global = true)]
    l_min: Option<f64>,
    #[arg(long, global = true)]
    l_max: Option<f64>,
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Worker threads; 0 picks automatically.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or extend the zero cache up to t_max.
    Zeros,
    /// Scan circle lengths and refine dips.
    Scan,
    /// Detect at one circle length.
    Detect {
        #[arg(long = "length", short = 'L')]
        length: f64,
    },
    /// Run the identity suite.
    Verify,
    /// Laplacian eigenvalues over the cached zeros.
    Laplacian,
    /// Jets of a global section at the cached zeros.
    Jets {
        /// Section JSON `{grid, f_plus, f_minus}`.
        #[arg(long)]
        section: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<commands::Outcome> {
    let o = cli.opts;
    let flags = Overrides {
        t_max: o.t_max,
        tol: o.tol,
        family_ks: o.family,
        l_min: o.l_min,
        l_max: o.l_max,
        scan_step: o.step,
        cache_path: o.cache,
        output_dir: o.output_dir,
        threads: o.threads,
    };
    let cfg = RunConfig::resolve(o.config.as_deref(), o.cache_dir, &flags)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global()?;
    match cli.command {
        Command::Zeros => commands::zeros(&cfg),
        Command::Scan => commands::scan(&cfg),
        Command::Detect { length } => commands::detect_at(&cfg, length),
        Command::Verify => commands::verify(&cfg),
        Command::Laplacian => commands::laplacian(&cfg),
        Command::Jets { section } => commands::jets(&cfg, &section),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) if outcome.passed => {
            println!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Ok(outcome) => {
            eprintln!("assertion failed: {}", outcome.summary);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

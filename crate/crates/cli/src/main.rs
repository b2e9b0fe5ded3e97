mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zeta_fluct::ZeroCache;

use commands::{CliError, Context, CovParams, ExpsumParams, FluctParams};
use config::RunConfig;

const CSV_SCHEMAS: &str = "\
CSV outputs (each starts with '# key: value' metadata lines):
  samples.csv  k,gamma,t,sigma,f,X[xi=..] (one X column per xi)
  moments.csv  variable,order,empirical,target,deviation,count
  cdf.csv      variable,s,empirical,gaussian,deviation (s = sup holds the KS distance)
  cov.csv      beta,offset,pairs,corr_f,corr_x,target
  expsum.csv   id,K,H,phase,theta,abs_sum,bound,ratio
  phase.csv    beta,x,s,re,im,ratio,target

Exit status: 0 success, 2 usage or input error, 3 insufficient zero coverage.";

#[derive(Parser)]
#[command(name = "zeta-fluct", version, about = "Fluctuations of Riemann zeta zeros", after_long_help = CSV_SCHEMAS)]
struct Cli {
    /// Zero cache directory
    #[arg(long, global = true, env = "ZETA_FLUCT_CACHE")]
    zeros_cache: Option<PathBuf>,

    /// key = value configuration file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for CSV reports
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill the zero cache
    Zeros {
        #[command(subcommand)]
        action: ZerosAction,
    },
    /// Normalized fluctuations f_k and X_k over one window
    Fluct {
        #[arg(long)]
        n: Option<usize>,
        /// Window exponent, 1/2 < theta <= 1
        #[arg(long)]
        theta: Option<f64>,
        /// Shifts xi for the X samples
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<f64>>,
    },
    /// Correlation of fluctuations at index offsets floor((log N)^beta)
    Cov {
        #[arg(long)]
        n: Option<usize>,
        /// Window exponent for the first index, 1/2 < theta <= 1
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        betas: Option<Vec<f64>>,
        #[arg(long, allow_negative_numbers = true)]
        xi: Option<f64>,
    },
    /// Exponential-sum battery against the van der Corput bound
    Expsum {
        /// Prime tuple for a single experiment
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Number of primes in the denominator of the tuple ratio
        #[arg(long)]
        split: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Sum length, at most K
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        per_height: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi: f64,
        /// Exponents for the prime phase sums
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        betas: Option<Vec<f64>>,
        /// Cutoffs x for the prime phase sums
        #[arg(long, value_delimiter = ',')]
        cutoffs: Option<Vec<f64>>,
    },
}

#[derive(Subcommand)]
enum ZerosAction {
    /// Locate all zeros below a height
    Compute {
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Read a zero table, one ordinate per line
    Ingest {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        limit: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let ctx = Context {
        cache: ZeroCache::new(commands::resolve_cache(cli.zeros_cache, &config)),
        out: cli
            .out
            .or_else(|| config.out.clone())
            .unwrap_or_else(|| PathBuf::from(".")),
        config,
    };
    match cli.command {
        Command::Zeros { action } => match action {
            ZerosAction::Compute { t_max } => commands::zeros_compute(&ctx, t_max),
            ZerosAction::Ingest { file, limit } => commands::zeros_ingest(&ctx, file, limit),
        },
        Command::Fluct { n, theta, xi } => commands::fluct(&ctx, FluctParams { n, theta, xi }),
        Command::Cov {
            n,
            theta,
            betas,
            xi,
        } => commands::cov(
            &ctx,
            CovParams {
                n,
                theta,
                betas,
                xi,
            },
        ),
        Command::Expsum {
            primes,
            split,
            k,
            h,
            seed,
            per_height,
            xi,
            betas,
            cutoffs,
        } => commands::expsum(
            &ctx,
            ExpsumParams {
                primes,
                split,
                k,
                h,
                seed,
                per_height,
                xi,
                betas,
                cutoffs,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

//! `cqcap`: divergences, capacities, coding bounds, and code simulations for
//! classical-quantum channels, driven by JSON channel/state files.
//!
//! Exit codes are stable: 0 ok, 2 JSON parse error, 3 dimension mismatch,
//! 4 domain/validation error, 5 materialization guard exceeded,
//! 6 non-commuting channel where a commuting one is required.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cqcap_cli::commands::{self, parse_float_list, Ctx};
use cqcap_cli::report::LogBase;
use cqcap_cli::CliError;

#[derive(Parser)]
#[command(
    name = "cqcap",
    version,
    about = "Generalized relative entropies and capacity bounds for classical-quantum channels"
)]
struct Cli {
    /// Logarithm base for reported values: bits (2) or nats (e).
    #[arg(long, global = true, default_value = "2", value_parser = ["2", "e"])]
    base: String,

    /// Ingest tolerance for hermiticity / trace / positivity of state files.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Seed for optimizer restarts and code sampling.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Worker threads (1 keeps everything sequential; results are identical
    /// for any worker count).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divergences between two states from JSON files.
    Divergence {
        #[arg(long)]
        state_a: PathBuf,
        #[arg(long)]
        state_b: PathBuf,
        /// Comma-separated subset of psi,renyi,relent,chernoff,hoeffding,smax,sinf.
        #[arg(long, default_value = "relent")]
        which: String,
        /// Rényi/ψ order parameter.
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Hoeffding rate parameter.
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        /// Hoeffding rate sweep "start:step:end" (overrides --r).
        #[arg(long)]
        r_sweep: Option<String>,
    },
    /// Channel capacities (optimization over input distributions).
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        /// One of holevo, hoeffding, chernoff, max.
        #[arg(long, default_value = "holevo")]
        which: String,
        /// Hoeffding rate parameter.
        #[arg(long, default_value_t = 0.0)]
        r: f64,
    },
    /// One-shot / n-shot / exponential capacity bounds (CSV).
    Bounds {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Fixed constant c; omitted to scan the 33-point logarithmic grid.
        #[arg(long)]
        c: Option<f64>,
        /// Rate for the exponential-capacity bound row.
        #[arg(long)]
        r: Option<f64>,
        /// Channel uses for the n-shot bound row.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Monte Carlo simulation of random codes against the error bound (CSV).
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        /// Message count M.
        #[arg(long)]
        messages: usize,
        /// Channel uses (product extension).
        #[arg(long, default_value_t = 1)]
        uses: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Exponents t for the bound rows.
        #[arg(long, default_value = "0.25,0.5,0.75")]
        t_list: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Exact one-shot capacity of a commuting channel by exhaustive search.
    Brute {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let base = if cli.base == "e" { LogBase::E } else { LogBase::Two };
    let ctx = Ctx {
        base,
        tol: cli.tol,
        seed: cli.seed,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.max(1))
        .build_global()
        .map_err(|e| CliError::Other(format!("thread pool: {e}")))?;

    match cli.command {
        Command::Divergence {
            state_a,
            state_b,
            which,
            t,
            r,
            r_sweep,
        } => {
            let names: Vec<String> = which.split(',').map(|s| s.trim().to_string()).collect();
            commands::cmd_divergence(&ctx, &state_a, &state_b, &names, t, r, r_sweep.as_deref())
        }
        Command::Capacity { channel, which, r } => {
            commands::cmd_capacity(&ctx, &channel, &which, r)
        }
        Command::Bounds {
            channel,
            epsilon,
            c,
            r,
            n,
        } => commands::cmd_bounds(&ctx, &channel, epsilon, c, r, n),
        Command::Simulate {
            channel,
            messages,
            uses,
            c,
            t_list,
            trials,
        } => {
            let ts = parse_float_list(&t_list)?;
            commands::cmd_simulate(&ctx, &channel, messages, uses, c, &ts, trials, cli.seed)
        }
        Command::Brute {
            channel,
            epsilon,
            m_max,
        } => commands::cmd_brute(&ctx, &channel, epsilon, m_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

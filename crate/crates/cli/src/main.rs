//! Command-line driver for the Plancherel row-distribution library.
//!
//! Subcommands: `exact` (finite-size rational tables), `phi` (Poissonized
//! distributions by series, Toeplitz/Hankel, quadrature, and Fredholm
//! routes), `mc` (Monte Carlo sampling of scaled row lengths), `fredholm`
//! (kernel diagnostics), `tw` (limiting-distribution tables and moments),
//! and `verify` (the cross-route identity suite).
//!
//! Parameters resolve with precedence flags > config file > defaults, where
//! the config file is flat `key = value` lines.  Exit codes: 0 success, 1
//! verification failure, 2 invalid config, 3 numerical failure.

use clap::{Parser, Subcommand};
use plancherel_cli::commands::{self, CliError, Ctx, Route};
use plancherel_cli::config::{resolve_opt, FileConfig};
use plancherel_cli::output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plancherel",
    version,
    about = "Row-length distributions of Plancherel-random Young diagrams"
)]
struct Cli {
    /// Flat key = value config file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the table to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sampling (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Uniform tolerance override for the verification rows.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative tolerance of the Bessel-series Toeplitz entries.
    #[arg(long, global = true)]
    series_rel_tol: Option<f64>,
    /// Relative cutoff for the s-sums of the second-row routes.
    #[arg(long, global = true)]
    s_sum_tol: Option<f64>,
    /// Largest Toeplitz/Hankel order the phi command accepts.
    #[arg(long, global = true)]
    toeplitz_max_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact rational distribution values at finite N.
    Exact {
        /// Row index: 1 or 2.
        #[arg(long)]
        k: Option<u8>,
        /// Permutation size N.
        #[arg(long = "big-n")]
        big_n: Option<u32>,
        /// Single length threshold n (default: the whole table 0..=N).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Poissonized distributions by one route or all routes side by side.
    Phi {
        #[arg(long, value_enum)]
        route: Option<Route>,
        /// Largest matrix order n in the table.
        #[arg(long)]
        n_max: Option<usize>,
        /// Poissonization parameter.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Monte Carlo samples of the scaled row lengths.
    Mc {
        /// Row index: 1 or 2.
        #[arg(long)]
        row: Option<u8>,
        /// Permutation size per sample.
        #[arg(long)]
        n: Option<u64>,
        /// Number of samples.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Tabulate the empirical CDF against the limit law instead of raw
        /// samples.
        #[arg(long)]
        cdf: bool,
    },
    /// Kernel diagnostics: determinant, resolvent trace, spectrum summary.
    Fredholm {
        /// Matrix order n of the kernel.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Deformation parameter in (0, 1].
        #[arg(long)]
        t: Option<f64>,
        /// Quadrature node count (even; default: automatic).
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Limiting-distribution tables from the Painlevé route.
    Tw {
        /// Deformation parameter in (0, 1].
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmin: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xmax: Option<f64>,
        /// Grid spacing.
        #[arg(long)]
        dx: Option<f64>,
        /// Also tabulate the second-row distribution (t = 1 only).
        #[arg(long)]
        second: bool,
        /// Report moments up to this order as header lines.
        #[arg(long)]
        moments: Option<u32>,
    },
    /// Run the identity suite; exit 1 if any residual exceeds tolerance.
    Verify {
        /// Deliberately scale the kernel by 1.001 so the kernel-determinant
        /// row must fail.
        #[arg(long)]
        perturb_kernel: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let config = FileConfig::load(cli.config.as_deref())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let format = match cli.format {
        Some(f) => f,
        None => match config.raw("format") {
            None => Format::Csv,
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "invalid config: format must be csv or json, got `{other}`"
                )))
            }
        },
    };
    let out = cli
        .out
        .or_else(|| config.raw("out").map(PathBuf::from));
    let threads = resolve_opt(cli.threads, &config, "threads")?;
    if let Some(t) = threads {
        if t == 0 || t > 4096 {
            return Err(CliError::Config(format!(
                "invalid config: threads must lie in 1..=4096, got {t}"
            )));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    }
    let tol = resolve_opt(cli.tol, &config, "tol")?;
    if let Some(t) = tol {
        if !t.is_finite() || t < 0.0 {
            return Err(CliError::Config(format!(
                "invalid config: tol must be finite and >= 0, got {t}"
            )));
        }
    }
    let series_rel_tol = resolve_opt(cli.series_rel_tol, &config, "series_rel_tol")?
        .unwrap_or(plancherel::detform::SERIES_REL_TOL);
    let s_sum_tol =
        resolve_opt(cli.s_sum_tol, &config, "s_sum_tol")?.unwrap_or(plancherel::detform::S_SUM_TOL);
    let toeplitz_max_n = resolve_opt(cli.toeplitz_max_n, &config, "toeplitz_max_n")?
        .unwrap_or(plancherel::detform::TOEPLITZ_MAX_N);
    for (name, v) in [("series_rel_tol", series_rel_tol), ("s_sum_tol", s_sum_tol)] {
        if !v.is_finite() || v <= 0.0 || v > 0.1 {
            return Err(CliError::Config(format!(
                "invalid config: {name} must lie in (0, 0.1], got {v}"
            )));
        }
    }

    let ctx = Ctx {
        config,
        format,
        out,
        tol,
        threads,
        series_rel_tol,
        s_sum_tol,
        toeplitz_max_n,
    };
    match cli.command {
        Command::Exact { k, big_n, n } => commands::cmd_exact(&ctx, k, big_n, n),
        Command::Phi {
            route,
            n_max,
            lambda,
        } => commands::cmd_phi(&ctx, route, n_max, lambda),
        Command::Mc {
            row,
            n,
            count,
            seed,
            cdf,
        } => commands::cmd_mc(&ctx, row, n, count, seed, cdf),
        Command::Fredholm {
            n,
            lambda,
            t,
            nodes,
        } => commands::cmd_fredholm(&ctx, n, lambda, t, nodes),
        Command::Tw {
            t,
            xmin,
            xmax,
            dx,
            second,
            moments,
        } => commands::cmd_tw(&ctx, t, xmin, xmax, dx, second, moments),
        Command::Verify { perturb_kernel } => commands::cmd_verify(&ctx, perturb_kernel),
    }
}

//! Command implementations for the `plancherel` binary.
//!
//! Every command resolves its parameters with precedence flags > config file
//! > built-in defaults, echoes the full effective configuration as `# key =
//! value` header lines, and emits one table in CSV or JSON.  Floating-point
//! cells are printed as plain decimals with 17 significant digits so that
//! values round-trip exactly; exact probabilities are printed as reduced
//! fractions `p/q`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing identity, 2 for
//! invalid configuration or I/O problems, 3 for numerical failures reported
//! by the computation routes.

use crate::config::{resolve, resolve_opt, ConfigError, FileConfig};
use crate::output::{emit, fmt17, Format, Table};
use num::{BigInt, BigRational, BigUint, ToPrimitive, Zero};
use plancherel::combinat::{self, ENUMERATION_CAP};
use plancherel::detform;
use plancherel::fredholm::{self, KernelSpec};
use plancherel::painleve;
use plancherel::rsk;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

/// Poisson truncation target for the exact-series route.
const SERIES_TAIL_TARGET: f64 = 1e-13;
/// Largest Poissonization parameter the exact-series route accepts; the
/// partition enumeration behind it grows super-polynomially in `N`.
const SERIES_LAMBDA_CAP: f64 = 9.0;
/// Largest matrix order the kernel routes accept from the command line.
const FREDHOLM_N_CAP: usize = 64;

pub enum CliError {
    /// Invalid configuration (exit 2).
    Config(String),
    /// A computation route failed or refused the request (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn cfg(msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("invalid config: {msg}"))
}

fn num_err(e: impl fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Global knobs shared by every command.
pub struct Ctx {
    pub config: FileConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub threads: Option<usize>,
    pub series_rel_tol: f64,
    pub s_sum_tol: f64,
    pub toeplitz_max_n: usize,
}

impl Ctx {
    fn echo_globals(&self, table: &mut Table) {
        table.echo(
            "format",
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            },
        );
        match self.threads {
            Some(t) => table.echo("threads", t),
            None => table.echo("threads", "default"),
        }
    }

    fn finish(&self, table: &Table) -> Result<(), CliError> {
        emit(&table.render(self.format), self.out.as_deref())
            .map_err(|e| CliError::Config(format!("cannot write output: {e}")))
    }
}

/// Distribution route selector for the `phi` command.
#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Route {
    Series,
    Toeplitz,
    Intermediate,
    Fredholm,
    All,
}

impl Route {
    fn name(self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::Toeplitz => "toeplitz",
            Route::Intermediate => "intermediate",
            Route::Fredholm => "fredholm",
            Route::All => "all",
        }
    }

    fn from_config(s: &str) -> Result<Self, CliError> {
        match s {
            "series" => Ok(Route::Series),
            "toeplitz" => Ok(Route::Toeplitz),
            "intermediate" => Ok(Route::Intermediate),
            "fredholm" => Ok(Route::Fredholm),
            "all" => Ok(Route::All),
            other => Err(cfg(format!(
                "route must be one of series, toeplitz, intermediate, fredholm, all; got `{other}`"
            ))),
        }
    }

    fn uses_series(self) -> bool {
        matches!(self, Route::Series | Route::All)
    }

    fn uses_fredholm(self) -> bool {
        matches!(self, Route::Fredholm | Route::All)
    }
}

/// Exact finite-size distribution values `q⁽ᵏ⁾ₙ,ₙ` as reduced fractions.
pub fn cmd_exact(
    ctx: &Ctx,
    k: Option<u8>,
    big_n: Option<u32>,
    n: Option<u32>,
) -> Result<ExitCode, CliError> {
    let k = resolve(k, &ctx.config, "k", 1u8)?;
    let big_n = resolve(big_n, &ctx.config, "big_n", 8u32)?;
    let n = resolve_opt(n, &ctx.config, "n")?;
    if !(k == 1 || k == 2) {
        return Err(cfg(format!("k must be 1 or 2, got {k}")));
    }
    if big_n > ENUMERATION_CAP {
        return Err(cfg(format!(
            "big_n must be at most {ENUMERATION_CAP}, got {big_n}"
        )));
    }

    let mut table = Table::new(vec!["k", "n", "N", "q"]);
    table.echo("command", "exact");
    table.echo("k", k);
    table.echo("big_n", big_n);
    match n {
        Some(v) => table.echo("n", v),
        None => table.echo("n", "all"),
    }
    ctx.echo_globals(&mut table);

    let rows: Vec<u32> = match n {
        Some(v) => vec![v],
        None => (0..=big_n).collect(),
    };
    for row_n in rows {
        let q = combinat::exact_row_cdf(k, row_n, big_n).map_err(num_err)?;
        table.push_row(vec![
            k.to_string(),
            row_n.to_string(),
            big_n.to_string(),
            q.to_string(),
        ]);
    }
    ctx.finish(&table)?;
    Ok(ExitCode::SUCCESS)
}

/// Smallest Poisson truncation order whose omitted mass is below the target,
/// capped at the exact-enumeration limit.
fn series_truncation(lambda: f64) -> u32 {
    let mut term = (-lambda).exp();
    for m in 0..ENUMERATION_CAP {
        term *= lambda / (m + 1) as f64;
        let denom = 1.0 - lambda / (m + 2) as f64;
        if denom > 0.0 && term / denom <= SERIES_TAIL_TARGET {
            return m + 1;
        }
    }
    ENUMERATION_CAP
}

/// The degenerate second-row value at `n = 0`: only the single-row diagram
/// has an empty second row, so `φ⁽²⁾₀ = e^{−λ} Σ_N λᴺ/(N!)²`.
fn phi2_row_zero(lambda: f64) -> Result<f64, CliError> {
    Ok((-lambda).exp() * detform::a_coeff(0, 0, lambda).map_err(num_err)?)
}

/// Poissonized row distributions by one route or by all routes side by side.
pub fn cmd_phi(
    ctx: &Ctx,
    route: Option<Route>,
    n_max: Option<usize>,
    lambda: Option<f64>,
) -> Result<ExitCode, CliError> {
    let route = match route {
        Some(r) => r,
        None => match ctx.config.raw("route") {
            Some(s) => Route::from_config(s)?,
            None => Route::All,
        },
    };
    let n_max = resolve(n_max, &ctx.config, "n_max", 8usize)?;
    let lambda = resolve(lambda, &ctx.config, "lambda", 1.0f64)?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(cfg(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if route.uses_series() && lambda > SERIES_LAMBDA_CAP {
        return Err(cfg(format!(
            "route {} supports lambda <= {SERIES_LAMBDA_CAP} (exact enumeration); \
             use toeplitz, intermediate, or fredholm for larger lambda",
            route.name()
        )));
    }
    let cap = ctx.toeplitz_max_n.min(detform::TOEPLITZ_MAX_N);
    if n_max > cap {
        return Err(cfg(format!("n_max must be at most {cap}, got {n_max}")));
    }
    if route.uses_fredholm() && n_max > FREDHOLM_N_CAP {
        return Err(cfg(format!(
            "route {} supports n_max <= {FREDHOLM_N_CAP}, got {n_max}",
            route.name()
        )));
    }

    let columns: Vec<&'static str> = match route {
        Route::Series => vec!["n", "lambda", "phi1", "phi2", "tail_bound"],
        Route::Toeplitz | Route::Intermediate | Route::Fredholm => {
            vec!["n", "lambda", "phi1", "phi2"]
        }
        Route::All => vec![
            "n",
            "lambda",
            "phi1_series",
            "phi1_toeplitz",
            "phi1_fredholm",
            "phi2_series",
            "phi2_hankel",
            "phi2_intermediate",
            "phi2_fredholm",
            "dev1",
            "dev2",
        ],
    };
    let mut table = Table::new(columns);
    table.echo("command", "phi");
    table.echo("route", route.name());
    table.echo("n_max", n_max);
    table.echo("lambda", fmt17(lambda));
    table.echo("series_rel_tol", fmt17(ctx.series_rel_tol));
    table.echo("s_sum_tol", fmt17(ctx.s_sum_tol));
    table.echo("toeplitz_max_n", ctx.toeplitz_max_n);
    ctx.echo_globals(&mut table);

    let trunc = series_truncation(lambda);
    let series = |k: u8, n: usize| -> Result<detform::PhiSeries, CliError> {
        let s = detform::phi_series(k, n as u32, lambda, trunc).map_err(num_err)?;
        if s.tail_bound > 1e-9 {
            return Err(CliError::Numerical(format!(
                "series truncation tail {:.3e} exceeds 1e-9 at the N <= {ENUMERATION_CAP} \
                 enumeration cap; reduce lambda",
                s.tail_bound
            )));
        }
        Ok(s)
    };
    let phi2_toeplitz = |n: usize| -> Result<f64, CliError> {
        detform::phi2_hankel_tol(n, lambda, ctx.s_sum_tol).map_err(num_err)
    };
    let phi2_quad = |n: usize| -> Result<f64, CliError> {
        if n == 0 {
            phi2_row_zero(lambda)
        } else {
            detform::phi2_intermediate_tol(n, lambda, ctx.s_sum_tol).map_err(num_err)
        }
    };
    let phi2_kernel = |n: usize| -> Result<f64, CliError> {
        if n == 0 {
            phi2_row_zero(lambda)
        } else {
            fredholm::phi2_fredholm(n, lambda, None).map_err(num_err)
        }
    };

    for n in 0..=n_max {
        let row = match route {
            Route::Series => {
                let s1 = series(1, n)?;
                let s2 = series(2, n)?;
                vec![
                    n.to_string(),
                    fmt17(lambda),
                    fmt17(s1.value),
                    fmt17(s2.value),
                    fmt17(s1.tail_bound.max(s2.tail_bound)),
                ]
            }
            Route::Toeplitz => {
                let p1 = detform::phi1_toeplitz_tol(n, lambda, ctx.series_rel_tol)
                    .map_err(num_err)?;
                let p2 = phi2_toeplitz(n)?;
                vec![n.to_string(), fmt17(lambda), fmt17(p1), fmt17(p2)]
            }
            Route::Intermediate => {
                let p1 = detform::phi1_toeplitz_tol(n, lambda, ctx.series_rel_tol)
                    .map_err(num_err)?;
                let p2 = phi2_quad(n)?;
                vec![n.to_string(), fmt17(lambda), fmt17(p1), fmt17(p2)]
            }
            Route::Fredholm => {
                let p1 = fredholm::phi1_fredholm(n, lambda, None).map_err(num_err)?;
                let p2 = phi2_kernel(n)?;
                vec![n.to_string(), fmt17(lambda), fmt17(p1), fmt17(p2)]
            }
            Route::All => {
                let s1 = series(1, n)?.value;
                let t1 = detform::phi1_toeplitz_tol(n, lambda, ctx.series_rel_tol)
                    .map_err(num_err)?;
                let f1 = fredholm::phi1_fredholm(n, lambda, None).map_err(num_err)?;
                let s2 = series(2, n)?.value;
                let h2 = phi2_toeplitz(n)?;
                let q2 = phi2_quad(n)?;
                let k2 = phi2_kernel(n)?;
                let dev1 = (s1 - t1).abs().max((s1 - f1).abs()).max((t1 - f1).abs());
                let p2 = [s2, h2, q2, k2];
                let mut dev2 = 0.0f64;
                for i in 0..4 {
                    for j in i + 1..4 {
                        dev2 = dev2.max((p2[i] - p2[j]).abs());
                    }
                }
                vec![
                    n.to_string(),
                    fmt17(lambda),
                    fmt17(s1),
                    fmt17(t1),
                    fmt17(f1),
                    fmt17(s2),
                    fmt17(h2),
                    fmt17(q2),
                    fmt17(k2),
                    fmt17(dev1),
                    fmt17(dev2),
                ]
            }
        };
        table.push_row(row);
    }
    ctx.finish(&table)?;
    Ok(ExitCode::SUCCESS)
}

/// Monte Carlo samples of the scaled row lengths, or their empirical CDF
/// against the limiting distribution.
pub fn cmd_mc(
    ctx: &Ctx,
    row: Option<u8>,
    n: Option<u64>,
    count: Option<usize>,
    seed: Option<u64>,
    cdf_flag: bool,
) -> Result<ExitCode, CliError> {
    let row = resolve(row, &ctx.config, "row", 1u8)?;
    let n = resolve(n, &ctx.config, "n", 10_000u64)?;
    let count = resolve(count, &ctx.config, "count", 1_000usize)?;
    let seed = resolve(seed, &ctx.config, "seed", 0u64)?;
    let cdf = cdf_flag || resolve(None, &ctx.config, "cdf", false)?;
    if !(row == 1 || row == 2) {
        return Err(cfg(format!("row must be 1 or 2, got {row}")));
    }
    if n == 0 || n > 10_000_000 {
        return Err(cfg(format!("n must lie in 1..=10000000, got {n}")));
    }
    if count == 0 || count > 10_000_000 {
        return Err(cfg(format!("count must lie in 1..=10000000, got {count}")));
    }

    let set = rsk::sample_scaled(row, n, count, seed).map_err(num_err)?;
    let mean = set.samples.iter().sum::<f64>() / set.samples.len() as f64;

    let mut table = Table::new(if cdf {
        vec!["x", "empirical", "limit"]
    } else {
        vec!["index", "chi"]
    });
    table.echo("command", "mc");
    table.echo("row", row);
    table.echo("n", n);
    table.echo("count", count);
    table.echo("seed", seed);
    table.echo("cdf", cdf);
    ctx.echo_globals(&mut table);
    table.echo("sample_mean", fmt17(mean));

    if cdf {
        let grid: Vec<f64> = (0..=96).map(|i| -8.0 + i as f64 / 8.0).collect();
        let limit = if row == 1 {
            painleve::tw_cdf(1.0, &grid).map_err(num_err)?
        } else {
            painleve::f2_cdf(&grid).map_err(num_err)?.f2
        };
        let emp = rsk::empirical_cdf(&set, &grid).map_err(num_err)?;
        let ks = rsk::ks_distance(&set, &grid, &limit).map_err(num_err)?;
        table.echo("ks", fmt17(ks));
        for i in 0..grid.len() {
            table.push_row(vec![fmt17(grid[i]), fmt17(emp[i]), fmt17(limit[i])]);
        }
    } else {
        for (i, chi) in set.samples.iter().enumerate() {
            table.push_row(vec![i.to_string(), fmt17(*chi)]);
        }
    }
    ctx.finish(&table)?;
    Ok(ExitCode::SUCCESS)
}

/// Kernel diagnostics: determinant, distribution value, resolvent trace, and
/// spectrum summary for one `(n, λ, t)`.
pub fn cmd_fredholm(
    ctx: &Ctx,
    n: Option<usize>,
    lambda: Option<f64>,
    t: Option<f64>,
    nodes: Option<usize>,
) -> Result<ExitCode, CliError> {
    let n = resolve(n, &ctx.config, "n", 4usize)?;
    let lambda = resolve(lambda, &ctx.config, "lambda", 1.0f64)?;
    let t = resolve(t, &ctx.config, "t", 1.0f64)?;
    let nodes = resolve_opt(nodes, &ctx.config, "nodes")?;
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(cfg(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if !t.is_finite() || t <= 0.0 || t > 1.0 {
        return Err(cfg(format!("t must lie in (0, 1], got {t}")));
    }
    if n > 512 {
        return Err(cfg(format!("n must be at most 512, got {n}")));
    }
    if let Some(m) = nodes {
        if m < 16 || m % 2 != 0 || m > 4096 {
            return Err(cfg(format!(
                "nodes must be an even count in 16..=4096, got {m}"
            )));
        }
    }

    let spec = KernelSpec::new(n, lambda, t).map_err(num_err)?;
    let m = nodes.unwrap_or_else(|| fredholm::default_nodes(n, lambda));
    let det = fredholm::fredholm_det(&spec, m).map_err(num_err)?;
    let trace = fredholm::resolvent_trace(&spec, m).map_err(num_err)?;
    let at_t_one = (t - 1.0).abs() < 1e-12;
    let phi1 = if at_t_one {
        Some(det * 0.5f64.powi(n as i32))
    } else {
        None
    };
    let report = fredholm::spectrum(n, lambda, Some(m)).map_err(num_err)?;

    let mut table = Table::new(vec![
        "n",
        "lambda",
        "t",
        "nodes",
        "det",
        "phi1",
        "trace",
        "eig_min",
        "eig_max",
        "near_minus_one",
        "near_plus_one",
    ]);
    table.echo("command", "fredholm");
    table.echo("n", n);
    table.echo("lambda", fmt17(lambda));
    table.echo("t", fmt17(t));
    table.echo("nodes", m);
    ctx.echo_globals(&mut table);

    table.push_row(vec![
        n.to_string(),
        fmt17(lambda),
        fmt17(t),
        m.to_string(),
        fmt17(det),
        phi1.map(fmt17).unwrap_or_default(),
        fmt17(trace),
        fmt17(*report.eigenvalues.first().unwrap_or(&f64::NAN)),
        fmt17(*report.eigenvalues.last().unwrap_or(&f64::NAN)),
        report.near_minus_one.to_string(),
        report.near_plus_one.to_string(),
    ]);
    ctx.finish(&table)?;
    Ok(ExitCode::SUCCESS)
}

/// Limiting distribution tables from the Painlevé route, with optional
/// second-row column and moments.
pub fn cmd_tw(
    ctx: &Ctx,
    t: Option<f64>,
    xmin: Option<f64>,
    xmax: Option<f64>,
    dx: Option<f64>,
    second_flag: bool,
    moments: Option<u32>,
) -> Result<ExitCode, CliError> {
    let t = resolve(t, &ctx.config, "t", 1.0f64)?;
    let xmin = resolve(xmin, &ctx.config, "xmin", -8.0f64)?;
    let xmax = resolve(xmax, &ctx.config, "xmax", 8.0f64)?;
    let dx = resolve(dx, &ctx.config, "dx", 0.0625f64)?;
    let second = second_flag || resolve(None, &ctx.config, "second", false)?;
    let moments = resolve_opt(moments, &ctx.config, "moments")?;
    if !t.is_finite() || t <= 0.0 || t > 1.0 {
        return Err(cfg(format!("t must lie in (0, 1], got {t}")));
    }
    let at_t_one = (1.0 - t) < 1e-12;
    if second && !at_t_one {
        return Err(cfg(format!(
            "the second-row column is defined only at t = 1, got t = {t}"
        )));
    }
    if !xmin.is_finite() || !xmax.is_finite() || xmin >= xmax {
        return Err(cfg(format!(
            "need xmin < xmax, got xmin = {xmin}, xmax = {xmax}"
        )));
    }
    let floor = if at_t_one { -10.0 } else { -40.0 };
    if xmin < floor {
        return Err(cfg(format!(
            "xmin must be at least {floor} for t = {t}, got {xmin}"
        )));
    }
    if xmax > 100.0 {
        return Err(cfg(format!("xmax must be at most 100, got {xmax}")));
    }
    if !dx.is_finite() || dx <= 0.0 {
        return Err(cfg(format!("dx must be positive, got {dx}")));
    }
    let steps = ((xmax - xmin) / dx + 1e-9).floor() as usize;
    if steps == 0 || steps > 200_000 {
        return Err(cfg(format!(
            "grid would hold {} points; need 2..=200001",
            steps + 1
        )));
    }
    if let Some(m) = moments {
        if m > 8 {
            return Err(cfg(format!("moments must be at most 8, got {m}")));
        }
    }

    let grid: Vec<f64> = (0..=steps).map(|i| xmin + i as f64 * dx).collect();
    let mut table = Table::new(if second {
        vec!["x", "f1", "d_f_dt", "f2"]
    } else {
        vec!["x", "f"]
    });
    table.echo("command", "tw");
    table.echo("t", fmt17(t));
    table.echo("xmin", fmt17(xmin));
    table.echo("xmax", fmt17(xmax));
    table.echo("dx", fmt17(dx));
    table.echo("second", second);
    match moments {
        Some(m) => table.echo("moments", m),
        None => table.echo("moments", "none"),
    }
    ctx.echo_globals(&mut table);

    if second {
        let cdf = painleve::f2_cdf(&grid).map_err(num_err)?;
        if let Some(order) = moments {
            table.echo("mass_f1", fmt17(moment(&grid, &cdf.f1, 0)?));
            for k in 1..=order {
                table.echo(format!("moment_{k}_f1").as_str(), fmt17(moment(&grid, &cdf.f1, k)?));
            }
            table.echo("mass_f2", fmt17(moment(&grid, &cdf.f2, 0)?));
            for k in 1..=order {
                table.echo(format!("moment_{k}_f2").as_str(), fmt17(moment(&grid, &cdf.f2, k)?));
            }
        }
        for i in 0..grid.len() {
            table.push_row(vec![
                fmt17(grid[i]),
                fmt17(cdf.f1[i]),
                fmt17(cdf.d_f_dt[i]),
                fmt17(cdf.f2[i]),
            ]);
        }
    } else {
        let f = painleve::tw_cdf(t, &grid).map_err(num_err)?;
        if let Some(order) = moments {
            table.echo("mass_f", fmt17(moment(&grid, &f, 0)?));
            for k in 1..=order {
                table.echo(format!("moment_{k}_f").as_str(), fmt17(moment(&grid, &f, k)?));
            }
        }
        for i in 0..grid.len() {
            table.push_row(vec![fmt17(grid[i]), fmt17(f[i])]);
        }
    }
    ctx.finish(&table)?;
    Ok(ExitCode::SUCCESS)
}

fn moment(grid: &[f64], f: &[f64], order: u32) -> Result<f64, CliError> {
    painleve::distribution_moments(grid, f, order).map_err(num_err)
}

struct VerifyRow {
    name: &'static str,
    params: String,
    lhs: f64,
    rhs: f64,
    residual: f64,
    tol: f64,
}

fn lexicographic_permutation(n: usize, mut index: usize) -> Vec<u32> {
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut block: usize = (1..=n).product();
    let mut out = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        block /= k;
        out.push(pool.remove(index / block));
        index %= block;
    }
    out
}

/// `1 + ½ tr((I − K₀)⁻¹ K₀)` as an explicit hypergeometric-style series in
/// `λ`: the `p`-th term is `λᵖ/(p!)² · C(2p−2, p−1)`.
fn trace_series(lambda: f64) -> f64 {
    let mut acc = 1.0;
    let mut term = lambda;
    let mut p = 1.0f64;
    while term > 1e-18 * acc {
        acc += term;
        term *= lambda * (2.0 * p) * (2.0 * p - 1.0) / ((p + 1.0) * (p + 1.0) * p * p);
        p += 1.0;
    }
    acc
}

/// Cross-checks every identity the library exposes and reports one row per
/// identity; exits 1 when any residual exceeds its tolerance.
pub fn cmd_verify(ctx: &Ctx, perturb_flag: bool) -> Result<ExitCode, CliError> {
    let perturb = perturb_flag || resolve(None, &ctx.config, "perturb_kernel", false)?;
    let lambdas = [0.25f64, 1.0, 4.0];
    let mut rows: Vec<VerifyRow> = Vec::new();
    let tol_of = |base: f64| ctx.tol.unwrap_or(base);
    let push = |rows: &mut Vec<VerifyRow>,
                    name: &'static str,
                    params: String,
                    lhs: f64,
                    rhs: f64,
                    residual: f64,
                    base_tol: f64| {
        rows.push(VerifyRow {
            name,
            params,
            lhs,
            rhs,
            residual,
            tol: tol_of(base_tol),
        });
    };

    let parts = combinat::partitions_of(10).map_err(num_err)?;
    let mut mass = BigUint::zero();
    let mut mismatches = 0u32;
    for mu in &parts {
        let d = combinat::dim_hook(mu);
        if d != combinat::dim_frobenius(mu) {
            mismatches += 1;
        }
        mass += &d * &d;
    }
    let fact = combinat::factorial(10);
    let ratio = BigRational::new(mass.clone().into(), fact.clone().into())
        .to_f64()
        .unwrap_or(f64::NAN);
    push(
        &mut rows,
        "partition_mass",
        "N = 10".into(),
        ratio,
        1.0,
        if mass == fact { 0.0 } else { 1.0 },
        0.0,
    );
    push(
        &mut rows,
        "hook_frobenius",
        "N = 10".into(),
        mismatches as f64,
        0.0,
        mismatches as f64,
        0.0,
    );

    let mut counts = [[0u32; 7]; 2];
    for index in 0..720 {
        let pi = rsk::Permutation::new(lexicographic_permutation(6, index)).map_err(num_err)?;
        let (l1, l2) = rsk::two_row_lengths(&pi);
        for n in 0..=6u32 {
            if l1 <= n {
                counts[0][n as usize] += 1;
            }
            if l2 <= n {
                counts[1][n as usize] += 1;
            }
        }
    }
    let mut cdf_mismatches = 0u32;
    for (ki, &k) in [1u8, 2].iter().enumerate() {
        for n in 0..=6u32 {
            let exact = combinat::exact_row_cdf(k, n, 6).map_err(num_err)?;
            let counted = BigRational::new(
                BigInt::from(counts[ki][n as usize]),
                BigInt::from(720u32),
            );
            if exact != counted {
                cdf_mismatches += 1;
            }
        }
    }
    push(
        &mut rows,
        "exact_cdf_rsk",
        "N = 6, all 720 permutations, k in {1, 2}".into(),
        cdf_mismatches as f64,
        0.0,
        cdf_mismatches as f64,
        0.0,
    );

    for lam in lambdas {
        let trunc = series_truncation(lam);
        let mut worst = (0.0f64, 0.0f64, -1.0f64);
        let mut max_tail = 0.0f64;
        for n in 0..=8usize {
            let s = detform::phi_series(1, n as u32, lam, trunc).map_err(num_err)?;
            let t = detform::phi1_toeplitz_tol(n, lam, ctx.series_rel_tol).map_err(num_err)?;
            max_tail = max_tail.max(s.tail_bound);
            if (s.value - t).abs() > worst.2 {
                worst = (s.value, t, (s.value - t).abs());
            }
        }
        push(
            &mut rows,
            "phi1_series_toeplitz",
            format!("n <= 8, lambda = {lam}"),
            worst.0,
            worst.1,
            worst.2,
            1e-10 + max_tail,
        );
    }

    let kernel_scale = if perturb { 1.001 } else { 1.0 };
    for lam in lambdas {
        let mut worst = (0.0f64, 0.0f64, -1.0f64);
        for n in 0..=8usize {
            let f = fredholm::phi1_fredholm_scaled(n, lam, None, kernel_scale).map_err(num_err)?;
            let t = detform::phi1_toeplitz_tol(n, lam, ctx.series_rel_tol).map_err(num_err)?;
            if (f - t).abs() > worst.2 {
                worst = (f, t, (f - t).abs());
            }
        }
        let params = if perturb {
            format!("n <= 8, lambda = {lam}, kernel_scale = 1.001")
        } else {
            format!("n <= 8, lambda = {lam}")
        };
        push(
            &mut rows,
            "phi1_kernel_det",
            params,
            worst.0,
            worst.1,
            worst.2,
            1e-9,
        );
    }

    for lam in lambdas {
        let trunc = series_truncation(lam);
        let mut worst = (0.0f64, 0.0f64, -1.0f64);
        let mut fd_worst = (0.0f64, 0.0f64, -1.0f64);
        for n in 1..=8usize {
            let vals = [
                detform::phi_series(2, n as u32, lam, trunc).map_err(num_err)?.value,
                detform::phi2_hankel_tol(n, lam, ctx.s_sum_tol).map_err(num_err)?,
                detform::phi2_intermediate_tol(n, lam, ctx.s_sum_tol).map_err(num_err)?,
                fredholm::phi2_fredholm(n, lam, None).map_err(num_err)?,
            ];
            for i in 0..4 {
                for j in i + 1..4 {
                    if (vals[i] - vals[j]).abs() > worst.2 {
                        worst = (vals[i], vals[j], (vals[i] - vals[j]).abs());
                    }
                }
            }
            let fd = fredholm::phi2_fredholm_fd(n, lam, None).map_err(num_err)?;
            if (vals[3] - fd).abs() > fd_worst.2 {
                fd_worst = (vals[3], fd, (vals[3] - fd).abs());
            }
        }
        push(
            &mut rows,
            "phi2_routes",
            format!("n <= 8, lambda = {lam}, series/hankel/quadratic/kernel"),
            worst.0,
            worst.1,
            worst.2,
            1e-8,
        );
        push(
            &mut rows,
            "phi2_t_derivative",
            format!("n <= 8, lambda = {lam}"),
            fd_worst.0,
            fd_worst.1,
            fd_worst.2,
            1e-6,
        );
    }

    for lam in lambdas {
        let spec = KernelSpec::new(0, lam, 1.0).map_err(num_err)?;
        let m = fredholm::default_nodes(0, lam);
        let tr = fredholm::resolvent_trace(&spec, m).map_err(num_err)?;
        let lhs = 1.0 + 0.5 * tr;
        let rhs = trace_series(lam);
        push(
            &mut rows,
            "trace_closed_form",
            format!("n = 0, lambda = {lam}, t = 1"),
            lhs,
            rhs,
            (lhs - rhs).abs(),
            1e-9,
        );
    }

    let mut worst = (0.0f64, 0.0f64, -1.0f64);
    for n in 0..=10usize {
        let spec = KernelSpec::new(n, 0.0, 1.0).map_err(num_err)?;
        let det = fredholm::fredholm_det(&spec, fredholm::default_nodes(n, 0.0)).map_err(num_err)?;
        let target = 2.0f64.powi(n as i32);
        if (det - target).abs() > worst.2 {
            worst = (det, target, (det - target).abs());
        }
    }
    push(
        &mut rows,
        "lambda0_determinant",
        "n <= 10, lambda = 0, t = 1".into(),
        worst.0,
        worst.1,
        worst.2,
        1e-10,
    );

    let report = fredholm::spectrum(10, 0.0, None).map_err(num_err)?;
    push(
        &mut rows,
        "lambda0_spectrum",
        "n = 10, lambda = 0".into(),
        report.near_minus_one as f64,
        10.0,
        (report.near_minus_one as f64 - 10.0).abs(),
        0.0,
    );
    let report = fredholm::spectrum(10, 1.0, None).map_err(num_err)?;
    let low = *report.eigenvalues.first().unwrap_or(&f64::NAN);
    let high = *report.eigenvalues.last().unwrap_or(&f64::NAN);
    let excess = (-1.0 - low).max(high - (1.0 - 1e-6)).max(0.0);
    push(
        &mut rows,
        "spectrum_bounds",
        "n = 10, lambda = 1, eigenvalues in [-1, 1)".into(),
        low,
        high,
        excess,
        1e-8,
    );

    for lam in [1.0f64, 4.0] {
        let mut max_dev = -1.0f64;
        for k in 0..=8usize {
            let dev = fredholm::det_ratio_identity(k, lam, 1.0, None).map_err(num_err)?;
            max_dev = max_dev.max(dev);
        }
        push(
            &mut rows,
            "kappa_ratio",
            format!("k <= 8, lambda = {lam}, t = 1"),
            max_dev,
            0.0,
            max_dev,
            1e-8,
        );
    }

    for t in [0.25f64, 1.0] {
        let vals = fredholm::szego_limit_check(1.0, t, &[20], None).map_err(num_err)?;
        push(
            &mut rows,
            "szego_limit",
            format!("p = 20, lambda = 1, t = {t}"),
            vals[0],
            1.0,
            (vals[0] - 1.0).abs(),
            1e-8,
        );
    }

    for lam in [0.5f64, 1.0, 4.0] {
        let mut max_dev = -1.0f64;
        for n in 1..=10usize {
            let dev = detform::toeplitz_inverse_identity(n, lam).map_err(num_err)?;
            max_dev = max_dev.max(dev);
        }
        push(
            &mut rows,
            "toeplitz_inverse",
            format!("n <= 10, lambda = {lam}"),
            max_dev,
            0.0,
            max_dev,
            1e-10,
        );
    }

    for lam in [1.0f64, 2.0] {
        let mut max_dev = -1.0f64;
        for n in 1..=5usize {
            let dev = fredholm::lemma4_identity(n, lam).map_err(num_err)?;
            max_dev = max_dev.max(dev);
        }
        push(
            &mut rows,
            "ortho_projection",
            format!("n <= 5, lambda = {lam}"),
            max_dev,
            0.0,
            max_dev,
            1e-9,
        );
    }

    let grid: Vec<f64> = (0..=2048).map(|i| -8.0 + i as f64 / 128.0).collect();
    let f = painleve::tw_cdf(1.0, &grid).map_err(num_err)?;
    let mean = painleve::distribution_moments(&grid, &f, 1).map_err(num_err)?;
    let m2 = painleve::distribution_moments(&grid, &f, 2).map_err(num_err)?;
    let var = m2 - mean * mean;
    push(
        &mut rows,
        "tw_mean",
        "t = 1, grid [-8, 8] step 1/128".into(),
        mean,
        -1.7711,
        (mean - (-1.7711)).abs(),
        1e-3,
    );
    push(
        &mut rows,
        "tw_var",
        "t = 1, grid [-8, 8] step 1/128".into(),
        var,
        0.8132,
        (var - 0.8132).abs(),
        1e-3,
    );

    let grid: Vec<f64> = (0..=448).map(|i| -8.0 + i as f64 / 32.0).collect();
    let cdf = painleve::f2_cdf(&grid).map_err(num_err)?;
    let mut min_step = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    for i in 0..grid.len() {
        if i + 1 < grid.len() {
            min_step = min_step.min(cdf.f2[i + 1] - cdf.f2[i]);
        }
        min_gap = min_gap.min(cdf.f2[i] - cdf.f1[i]);
    }
    push(
        &mut rows,
        "f2_monotone",
        "grid [-8, 6] step 1/32".into(),
        min_step,
        0.0,
        (-min_step).max(0.0),
        1e-12,
    );
    push(
        &mut rows,
        "f2_dominates",
        "grid [-8, 6] step 1/32".into(),
        min_gap,
        0.0,
        (-min_gap).max(0.0),
        1e-12,
    );

    let grid: Vec<f64> = (0..=20).map(|i| -6.0 + i as f64 * 0.5).collect();
    let analytic = painleve::f2_cdf(&grid).map_err(num_err)?.d_f_dt;
    let fd = painleve::dfdt_finite_difference(&grid, 1e-3).map_err(num_err)?;
    let mut worst = (0.0f64, 0.0f64, -1.0f64);
    for i in 0..grid.len() {
        if (analytic[i] - fd[i]).abs() > worst.2 {
            worst = (analytic[i], fd[i], (analytic[i] - fd[i]).abs());
        }
    }
    push(
        &mut rows,
        "dfdt_check",
        "x in [-6, 4] step 1/2, offset 1e-3".into(),
        worst.0,
        worst.1,
        worst.2,
        1e-5,
    );

    let failed = rows.iter().filter(|r| !(r.residual <= r.tol)).count();
    let mut table = Table::new(vec![
        "identity",
        "parameters",
        "lhs",
        "rhs",
        "residual",
        "tolerance",
        "pass",
    ]);
    table.echo("command", "verify");
    table.echo("perturb_kernel", perturb);
    match ctx.tol {
        Some(t) => table.echo("tol", fmt17(t)),
        None => table.echo("tol", "per-identity defaults"),
    }
    ctx.echo_globals(&mut table);
    table.echo("identities", rows.len());
    table.echo("passed", rows.len() - failed);
    table.echo("failed", failed);
    for r in &rows {
        table.push_row(vec![
            r.name.to_string(),
            r.params.clone(),
            fmt17(r.lhs),
            fmt17(r.rhs),
            fmt17(r.residual),
            fmt17(r.tol),
            (r.residual <= r.tol).to_string(),
        ]);
    }
    ctx.finish(&table)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

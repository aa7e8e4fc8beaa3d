//! `plandscape`: command-line front end to the profit-landscape library.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use profit_landscape::export::{fmt_f64, write_landscape_long, write_landscape_matrix, write_maxima};
use profit_landscape::strategy::write_trades_csv;
use profit_landscape::{
    find_local_maxima, fit_exponent, fit_gbm, load_scaling_series, load_series, load_universe, measure_scaling,
    measure_scaling_per_stock, measure_scaling_universe, rolling_interval_test, run_backtest, run_backtest_with_values,
    simulate_replicas, spatial_stability_test, stability_report, sweep, synthesize_series, temporal_stability_test,
    with_workers, AlignmentPolicy, FeeSide, GbmParams, GridSpec, Neighborhood, PriceSeries, ScalingPlan, StrategyKind,
    StrategyParams, SyntheticKind, Universe,
};
use serde_json::json;
use tracing_subscriber::EnvFilter;

#[derive(Parser, Debug)]
#[command(
    name = "plandscape",
    version,
    about = "Profit landscapes of threshold trading strategies"
)]
struct Cli {
    /// Worker threads for sweeps and replicas; outputs do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    /// Print summaries as a single JSON object instead of CSV.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one strategy over a price series.
    Backtest {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Write the trade log here.
        #[arg(long)]
        trades: Option<PathBuf>,
        /// Write the daily portfolio value `t,value` here.
        #[arg(long)]
        values: Option<PathBuf>,
    },
    /// Profit over the (p, q) grid, as a matrix CSV.
    Sweep {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Matrix output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the long `p,q,profit` layout here.
        #[arg(long)]
        long: Option<PathBuf>,
    },
    /// Local maxima and global optimum of the landscape.
    Maxima {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Write `k,l,p,q,profit` for every local maximum here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maxima count M(N) over several resolutions, plus its power-law fit.
    Scaling {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long, value_delimiter = ',', default_values_t = profit_landscape::scaling::DEFAULT_RESOLUTIONS)]
        resolutions: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        range_p: f64,
        #[arg(long, default_value_t = 1.0)]
        range_q: f64,
        #[arg(long, value_enum, default_value_t = NeighborhoodArg::Four)]
        neighborhood: NeighborhoodArg,
        /// `N,M_mean` output.
        #[arg(long)]
        out: PathBuf,
        /// Also write `ticker,N,M` for every stock here.
        #[arg(long)]
        per_stock: Option<PathBuf>,
    },
    /// Fit the scaling exponent to an `N,M` CSV.
    Fit {
        /// CSV produced by `scaling`.
        path: PathBuf,
    },
    /// Fit geometric Brownian motion to a price series.
    GbmFit {
        /// Price CSV.
        path: PathBuf,
    },
    /// Simulate geometric-Brownian-motion replicas as price CSVs.
    GbmSim {
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long = "T")]
        len: Option<usize>,
        /// Take the unset parameters from a fit to this price CSV.
        #[arg(long)]
        fit_from: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = profit_landscape::gbm::DEFAULT_REPLICAS)]
        count: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Spatial, temporal or rolling stability of optimal strategies.
    Stability {
        #[arg(long)]
        data_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = AlignArg::Equal)]
        align: AlignArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Number of windows in rolling mode.
        #[arg(long, default_value_t = 4)]
        intervals: usize,
        /// Per-stock detail CSV.
        #[arg(long)]
        detail_out: Option<PathBuf>,
        /// Rolling mode: `tau,tau_prime,profit` output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a closed-form synthetic price series.
    Synth {
        #[arg(long, value_enum)]
        kind: SynthArg,
        #[arg(long)]
        len: usize,
        /// Level, or starting price for linear and geometric series.
        #[arg(long, default_value_t = 100.0)]
        level: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        slope: f64,
        #[arg(long, default_value_t = 1.0)]
        ratio: f64,
        #[arg(long, default_value_t = 0.0)]
        amplitude: f64,
        #[arg(long, default_value_t = 20.0)]
        period: f64,
        /// stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// Price CSV with header `date,close`.
    #[arg(long)]
    csv: PathBuf,
    /// First trading day to keep (1-based).
    #[arg(long)]
    start: Option<usize>,
    /// Last trading day to keep (1-based, inclusive).
    #[arg(long)]
    end: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputSource {
    /// Single price CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Directory of price CSVs, one per ticker.
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InputArgs {
    #[command(flatten)]
    source: InputSource,
    #[arg(long, value_enum, default_value_t = AlignArg::Equal)]
    align: AlignArg,
}

#[derive(Args, Debug)]
struct StrategyArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::S1)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Delay d in trading days.
    #[arg(long = "d", default_value_t = 1)]
    delay: usize,
    /// Buy fraction f_b.
    #[arg(long, default_value_t = 0.5)]
    fb: f64,
    /// Sell fraction f_s.
    #[arg(long, default_value_t = 0.5)]
    fs: f64,
    #[arg(long, default_value_t = 0.001)]
    fee: f64,
    #[arg(long, value_enum, default_value_t = FeeSideArg::Both)]
    fee_side: FeeSideArg,
    #[arg(long, default_value_t = 1)]
    min_volume: u64,
    #[arg(long, default_value_t = 1e6)]
    initial_cash: f64,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Grid resolution N.
    #[arg(long = "N", default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    range_p: f64,
    #[arg(long, default_value_t = 1.0)]
    range_q: f64,
    #[arg(long, value_enum, default_value_t = NeighborhoodArg::Four)]
    neighborhood: NeighborhoodArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StrategyArg {
    /// Buy and hold.
    S0,
    /// Contrarian.
    S1,
    /// Trend following.
    S2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FeeSideArg {
    Both,
    Buy,
    Sell,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NeighborhoodArg {
    Four,
    Eight,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AlignArg {
    /// All series must have the same length.
    Equal,
    /// Keep only dates present in every series.
    Common,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Spatial,
    Temporal,
    /// Spatial and temporal together.
    Both,
    Rolling,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SynthArg {
    Constant,
    Linear,
    Geometric,
    Sinusoid,
}

/// A flag combination the library cannot act on.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl StrategyArgs {
    fn params(&self) -> Result<StrategyParams> {
        let params = StrategyParams {
            kind: match self.strategy {
                StrategyArg::S0 => StrategyKind::BuyAndHold,
                StrategyArg::S1 => StrategyKind::Contrarian,
                StrategyArg::S2 => StrategyKind::TrendFollowing,
            },
            p: self.p,
            q: self.q,
            buy_fraction: self.fb,
            sell_fraction: self.fs,
            delay: self.delay,
            fee: self.fee,
            fee_side: match self.fee_side {
                FeeSideArg::Both => FeeSide::Both,
                FeeSideArg::Buy => FeeSide::BuyOnly,
                FeeSideArg::Sell => FeeSide::SellOnly,
            },
            min_volume: self.min_volume,
            initial_cash: self.initial_cash,
        };
        params.validate()?;
        Ok(params)
    }
}

impl NeighborhoodArg {
    fn get(self) -> Neighborhood {
        match self {
            NeighborhoodArg::Four => Neighborhood::Four,
            NeighborhoodArg::Eight => Neighborhood::Eight,
        }
    }
}

impl AlignArg {
    fn get(self) -> AlignmentPolicy {
        match self {
            AlignArg::Equal => AlignmentPolicy::RequireEqualLength,
            AlignArg::Common => AlignmentPolicy::TruncateToCommon,
        }
    }
}

impl GridArgs {
    fn spec(&self) -> Result<GridSpec> {
        let spec = GridSpec::new(self.n)
            .with_range(self.range_p, self.range_q)
            .with_neighborhood(self.neighborhood.get());
        spec.validate()?;
        Ok(spec)
    }
}

fn ticker_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

impl SeriesArgs {
    fn load(&self) -> Result<PriceSeries> {
        let series = load_series(&self.csv, &ticker_of(&self.csv))?;
        if self.start.is_none() && self.end.is_none() {
            return Ok(series);
        }
        let start = self.start.unwrap_or(1);
        let end = self.end.unwrap_or(series.len());
        if start < 1 || end > series.len() || start >= end {
            return Err(usage(format!(
                "window {start}..{end} does not fit a series of {} days",
                series.len()
            )));
        }
        Ok(series.window(start, end)?)
    }
}

impl InputArgs {
    fn load(&self) -> Result<Universe> {
        let policy = self.align.get();
        match (&self.source.csv, &self.source.data_dir) {
            (Some(csv), _) => Ok(Universe::new(vec![load_series(csv, &ticker_of(csv))?], policy)?),
            (None, Some(dir)) => Ok(load_universe(dir, policy)?),
            (None, None) => Err(usage("one of --csv or --data-dir is required")),
        }
    }
}

/// Buffered file, or stdout when `path` is `None`.
fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_out(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> profit_landscape::Result<()>) -> Result<()> {
    let mut out = open_out(path)?;
    write(&mut out)?;
    out.flush()?;
    Ok(())
}

/// Summary value printed as a CSV field or a JSON member.
enum Val {
    F(f64),
    Opt(Option<f64>),
    U(u64),
    S(String),
}

impl Val {
    fn csv(&self) -> String {
        match self {
            Val::F(x) => fmt_f64(*x),
            Val::Opt(x) => x.map(fmt_f64).unwrap_or_default(),
            Val::U(x) => x.to_string(),
            Val::S(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Val::F(x) => json!(x),
            Val::Opt(x) => json!(x),
            Val::U(x) => json!(x),
            Val::S(s) => json!(s),
        }
    }
}

/// One header line and one value line on stdout, or a JSON object.
fn print_summary(as_json: bool, fields: &[(&str, Val)]) -> Result<()> {
    let mut out = io::stdout().lock();
    if as_json {
        let obj: serde_json::Map<String, serde_json::Value> =
            fields.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        writeln!(out, "{}", serde_json::Value::Object(obj))?;
    } else {
        let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let values: Vec<String> = fields.iter().map(|(_, v)| v.csv()).collect();
        writeln!(out, "{}", header.join(","))?;
        writeln!(out, "{}", values.join(","))?;
    }
    Ok(())
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn strategy_name(kind: StrategyKind) -> &'static str {
    match kind {
        StrategyKind::BuyAndHold => "s0",
        StrategyKind::Contrarian => "s1",
        StrategyKind::TrendFollowing => "s2",
    }
}

fn run(command: Command, as_json: bool) -> Result<()> {
    match command {
        Command::Backtest {
            series,
            strategy,
            trades,
            values,
        } => {
            let params = strategy.params()?;
            let series = series.load()?;
            let result = if values.is_some() {
                run_backtest_with_values(&series, &params)?
            } else {
                run_backtest(&series, &params)?
            };
            if let Some(path) = &trades {
                write_out(Some(path), |w| write_trades_csv(&result.trades, w))?;
            }
            if let Some(path) = &values {
                let daily = result.portfolio_value_series.as_deref().unwrap_or_default();
                let mut out = open_out(Some(path))?;
                writeln!(out, "t,value")?;
                for (i, v) in daily.iter().enumerate() {
                    writeln!(out, "{},{}", i + 1, fmt_f64(*v))?;
                }
                out.flush()?;
            }
            print_summary(
                as_json,
                &[
                    ("ticker", Val::S(series.ticker().to_string())),
                    ("strategy", Val::S(strategy_name(params.kind).into())),
                    ("p", Val::F(params.p)),
                    ("q", Val::F(params.q)),
                    ("profit", Val::F(result.profit)),
                    ("final_cash", Val::F(result.final_cash)),
                    ("final_shares", Val::U(result.final_shares)),
                    ("trades", Val::U(result.trades.len() as u64)),
                ],
            )
        }
        Command::Sweep {
            series,
            strategy,
            grid,
            out,
            long,
        } => {
            let params = strategy.params()?;
            let spec = grid.spec()?;
            let landscape = sweep(&series.load()?, &params, &spec)?;
            if let Some(path) = &long {
                write_out(Some(path), |w| write_landscape_long(&landscape, w))?;
            }
            write_out(out.as_deref(), |w| write_landscape_matrix(&landscape, w))
        }
        Command::Maxima {
            series,
            strategy,
            grid,
            out,
        } => {
            let params = strategy.params()?;
            let spec = grid.spec()?;
            let landscape = sweep(&series.load()?, &params, &spec)?;
            let maxima = find_local_maxima(&landscape);
            if let Some(path) = &out {
                write_out(Some(path), |w| write_maxima(&landscape, &maxima, w))?;
            }
            print_summary(
                as_json,
                &[
                    ("N", Val::U(spec.n as u64)),
                    ("count", Val::U(maxima.count as u64)),
                    ("p_star", Val::F(maxima.global_argmax.0)),
                    ("q_star", Val::F(maxima.global_argmax.1)),
                    ("max_profit", Val::F(maxima.global_max_value)),
                ],
            )
        }
        Command::Scaling {
            input,
            strategy,
            resolutions,
            range_p,
            range_q,
            neighborhood,
            out,
            per_stock,
        } => {
            let params = strategy.params()?;
            let plan = ScalingPlan {
                resolutions,
                range_p,
                range_q,
                neighborhood: neighborhood.get(),
            };
            plan.validate()?;
            let universe = input.load()?;
            let mean = if let Some(path) = &per_stock {
                let stocks = measure_scaling_per_stock(&universe, &params, &plan)?;
                let mut w = open_out(Some(path))?;
                writeln!(w, "ticker,N,M")?;
                for s in &stocks {
                    for (n, m) in s.resolutions.iter().zip(&s.counts) {
                        writeln!(w, "{},{},{}", s.label, n, m)?;
                    }
                }
                w.flush()?;
                measure_scaling_universe(&universe, &params, &plan)?
            } else if universe.len() == 1 {
                measure_scaling(&universe.series()[0], &params, &plan)?
            } else {
                measure_scaling_universe(&universe, &params, &plan)?
            };
            write_out(Some(&out), |w| mean.write_csv(w))?;
            let fit = fit_exponent(&mean)?;
            print_fit(as_json, &fit)
        }
        Command::Fit { path } => {
            let series = load_scaling_series(&path)?;
            print_fit(as_json, &fit_exponent(&series)?)
        }
        Command::GbmFit { path } => {
            let fitted = fit_gbm(&load_series(&path, &ticker_of(&path))?)?;
            if as_json {
                print_json(&json!({"mu": fitted.mu, "sigma": fitted.sigma, "x0": fitted.x0, "T": fitted.len}))
            } else {
                write_out(None, |w| fitted.write_csv(w))
            }
        }
        Command::GbmSim {
            mu,
            sigma,
            x0,
            len,
            fit_from,
            seed,
            count,
            out_dir,
        } => {
            let base = match &fit_from {
                Some(path) => Some(fit_gbm(&load_series(path, &ticker_of(path))?)?),
                None => None,
            };
            let pick = |given: Option<f64>, fitted: Option<f64>, flag: &str| {
                given
                    .or(fitted)
                    .ok_or_else(|| usage(format!("--{flag} is required unless --fit-from is given")))
            };
            let params = GbmParams {
                mu: pick(mu, base.map(|b| b.mu), "mu")?,
                sigma: pick(sigma, base.map(|b| b.sigma), "sigma")?,
                x0: pick(x0, base.map(|b| b.x0), "x0")?,
                len: len
                    .or(base.map(|b| b.len))
                    .ok_or_else(|| usage("--T is required unless --fit-from is given"))?,
            };
            params.validate()?;
            if count == 0 {
                return Err(usage("--count must be at least 1"));
            }
            let replicas = simulate_replicas(&params, seed, count)?;
            std::fs::create_dir_all(&out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
            for s in &replicas.series {
                s.save(&out_dir.join(format!("{}.csv", s.ticker())))?;
            }
            Ok(())
        }
        Command::Stability {
            data_dir,
            align,
            mode,
            strategy,
            grid,
            intervals,
            detail_out,
            out,
        } => {
            let params = strategy.params()?;
            let spec = grid.spec()?;
            let universe = load_universe(&data_dir, align.get())?;
            let report = match mode {
                ModeArg::Spatial => spatial_stability_test(&universe, &params, &spec)?,
                ModeArg::Temporal => temporal_stability_test(&universe, &params, &spec)?,
                ModeArg::Both => stability_report(&universe, &params, &spec)?,
                ModeArg::Rolling => {
                    let rolling = rolling_interval_test(&universe, &params, &spec, intervals)?;
                    if let Some(path) = &out {
                        write_out(Some(path), |w| rolling.write_long_csv(w))?;
                    }
                    if let Some(path) = &detail_out {
                        write_out(Some(path), |w| rolling.write_per_stock_csv(w))?;
                    }
                    return if as_json {
                        // Interval numbers are 1-based here as in the CSV outputs.
                        let best: Vec<_> = rolling
                            .best_later
                            .iter()
                            .map(|b| {
                                json!({"tau": b.tau + 1, "best_tau_prime": b.tau_prime + 1,
                                       "best_profit": b.profit, "buy_hold": b.buy_hold})
                            })
                            .collect();
                        print_json(&json!({
                            "windows": rolling.windows,
                            "interval_matrix": rolling.interval_matrix,
                            "buy_hold": rolling.buy_hold,
                            "best_later": best,
                        }))
                    } else {
                        write_out(None, |w| rolling.write_best_csv(w))
                    };
                }
            };
            if let Some(path) = &detail_out {
                write_out(Some(path), |w| report.write_detail_csv(w))?;
            }
            if as_json {
                print_summary(
                    true,
                    &[
                        ("stocks", Val::U(report.per_stock_rows.len() as u64)),
                        ("mean_buy_hold", Val::F(report.mean_buy_hold)),
                        ("mean_opt", Val::Opt(report.mean_opt)),
                        ("mean_spatial", Val::Opt(report.mean_spatial)),
                        ("mean_temporal", Val::Opt(report.mean_temporal)),
                        ("mean_p_star", Val::Opt(report.mean_p_star)),
                        ("mean_q_star", Val::Opt(report.mean_q_star)),
                    ],
                )
            } else {
                write_out(None, |w| report.write_summary_csv(w))
            }
        }
        Command::Synth {
            kind,
            len,
            level,
            slope,
            ratio,
            amplitude,
            period,
            out,
        } => {
            let kind = match kind {
                SynthArg::Constant => SyntheticKind::Constant { level },
                SynthArg::Linear => SyntheticKind::Linear { start: level, slope },
                SynthArg::Geometric => SyntheticKind::Geometric { start: level, ratio },
                SynthArg::Sinusoid => SyntheticKind::Sinusoid {
                    level,
                    amplitude,
                    period,
                },
            };
            let series = synthesize_series(kind, len)?;
            write_out(out.as_deref(), |w| series.write_csv(w))
        }
    }
}

fn print_fit(as_json: bool, fit: &profit_landscape::ScalingFit) -> Result<()> {
    if as_json {
        print_json(fit)
    } else {
        write_out(None, |w| fit.write_csv(w))
    }
}

/// 2 for bad arguments, 1 for everything that went wrong while running.
fn exit_code(err: &anyhow::Error) -> u8 {
    let is_usage = err.chain().any(|cause| {
        cause.is::<UsageError>()
            || matches!(
                cause.downcast_ref::<profit_landscape::Error>(),
                Some(profit_landscape::Error::InvalidParams(_))
            )
    });
    if is_usage {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_ansi(io::stderr().is_terminal())
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .init();

    let as_json = cli.json;
    let outcome = match cli.workers {
        Some(w) => with_workers(w as usize, move || run(cli.command, as_json))
            .map_err(anyhow::Error::from)
            .and_then(|r| r),
        None => run(cli.command, as_json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            if code == 2 {
                eprintln!("usage error: {err:#}");
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(code)
        }
    }
}

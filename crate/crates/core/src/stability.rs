//! Out-of-sample tests of grid-optimized strategies.
//!
//! * spatial: the per-stock optima are averaged and the averaged thresholds
//!   are applied to every stock;
//! * temporal: thresholds optimized on the first half of each series are
//!   applied to the second half;
//! * rolling: the series is cut into consecutive intervals and the optimum of
//!   each interval is applied to every later one.
//!
//! Every window is simulated as a self-contained series: time restarts at
//! `t = 1` with a fresh portfolio, and look-backs never reach outside it.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::landscape::{max_profit_strategy, GridSpec};
use crate::market_data::{PriceSeries, Universe};
use crate::strategy::{buy_and_hold_profit, run_backtest, StrategyParams};

/// Inclusive 1-based range of trading days.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimeWindow {
    pub start: usize,
    pub end: usize,
}

impl TimeWindow {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn full(series: &PriceSeries) -> Self {
        Self::new(1, series.len())
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizedStrategy {
    pub ticker: String,
    pub p_star: f64,
    pub q_star: f64,
    pub profit_at_opt: f64,
    pub window: TimeWindow,
    pub spec: GridSpec,
}

fn restrict(series: &PriceSeries, window: TimeWindow, delay: usize) -> Result<PriceSeries> {
    if window.start < 1 || window.end > series.len() || window.start >= window.end {
        return Err(Error::InvalidParams(format!(
            "window [{}, {}] outside series {} of length {}",
            window.start,
            window.end,
            series.ticker(),
            series.len()
        )));
    }
    if window.len() <= delay + 1 {
        return Err(Error::SeriesTooShort {
            needed: delay + 2,
            actual: window.len(),
        });
    }
    series.window(window.start, window.end)
}

/// Grid optimum of the strategy on `window` alone.
pub fn optimize_on_window(
    series: &PriceSeries,
    base: &StrategyParams,
    spec: &GridSpec,
    window: TimeWindow,
) -> Result<OptimizedStrategy> {
    let cut = restrict(series, window, base.delay)?;
    let opt = max_profit_strategy(&cut, base, spec)?;
    Ok(OptimizedStrategy {
        ticker: series.ticker().to_string(),
        p_star: opt.p_star,
        q_star: opt.q_star,
        profit_at_opt: opt.profit,
        window,
        spec: *spec,
    })
}

/// Profit of `params` on `window` with a fresh portfolio.
pub fn evaluate_on_window(series: &PriceSeries, params: &StrategyParams, window: TimeWindow) -> Result<f64> {
    let cut = restrict(series, window, params.delay)?;
    Ok(run_backtest(&cut, params)?.profit)
}

/// Splits `1..=len` into `intervals` contiguous windows; the first
/// `len % intervals` windows get one extra day.
pub fn split_windows(len: usize, intervals: usize) -> Vec<TimeWindow> {
    let base = len / intervals;
    let extra = len % intervals;
    let mut start = 1;
    (0..intervals)
        .map(|i| {
            let size = base + usize::from(i < extra);
            let window = TimeWindow::new(start, start + size - 1);
            start += size;
            window
        })
        .collect()
}

/// First half `[1, ⌊T/2⌋]` and second half `[⌊T/2⌋+1, T]`.
pub fn halves(len: usize) -> (TimeWindow, TimeWindow) {
    let mid = len / 2;
    (TimeWindow::new(1, mid), TimeWindow::new(mid + 1, len))
}

/// Per-stock figures behind a [`StabilityReport`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StockRow {
    pub ticker: String,
    /// Buy-and-hold profit over the full series.
    pub buy_hold: f64,
    pub p_star: Option<f64>,
    pub q_star: Option<f64>,
    /// Profit at the stock's own full-period optimum.
    pub profit_opt: Option<f64>,
    /// Profit at the universe-averaged thresholds.
    pub profit_spatial: Option<f64>,
    pub half_p_star: Option<f64>,
    pub half_q_star: Option<f64>,
    /// Second-half profit of the first-half optimum.
    pub profit_temporal: Option<f64>,
    /// Buy-and-hold profit over the second half.
    pub buy_hold_second_half: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StabilityReport {
    pub mean_buy_hold: f64,
    pub mean_opt: Option<f64>,
    pub mean_spatial: Option<f64>,
    pub mean_temporal: Option<f64>,
    pub mean_p_star: Option<f64>,
    pub mean_q_star: Option<f64>,
    pub per_stock_rows: Vec<StockRow>,
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len() as f64;
    values.sum::<f64>() / n
}

fn mean_of(rows: &[StockRow], field: impl Fn(&StockRow) -> Option<f64>) -> Option<f64> {
    let values: Option<Vec<f64>> = rows.iter().map(field).collect();
    values.map(|v| mean(v.into_iter()))
}

impl StabilityReport {
    fn from_rows(rows: Vec<StockRow>) -> Self {
        Self {
            mean_buy_hold: mean(rows.iter().map(|r| r.buy_hold)),
            mean_opt: mean_of(&rows, |r| r.profit_opt),
            mean_spatial: mean_of(&rows, |r| r.profit_spatial),
            mean_temporal: mean_of(&rows, |r| r.profit_temporal),
            mean_p_star: mean_of(&rows, |r| r.p_star),
            mean_q_star: mean_of(&rows, |r| r.q_star),
            per_stock_rows: rows,
        }
    }

    /// Writes `mean_buy_hold,mean_opt,mean_spatial,mean_temporal`; figures
    /// not computed are left empty.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["mean_buy_hold", "mean_opt", "mean_spatial", "mean_temporal"])?;
        writer.write_record([
            fmt_f64(self.mean_buy_hold),
            opt_field(self.mean_opt),
            opt_field(self.mean_spatial),
            opt_field(self.mean_temporal),
        ])?;
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }

    pub fn write_detail_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record([
            "ticker",
            "buy_hold",
            "p_star",
            "q_star",
            "profit_opt",
            "profit_spatial",
            "half_p_star",
            "half_q_star",
            "profit_temporal",
            "buy_hold_second_half",
        ])?;
        for row in &self.per_stock_rows {
            writer.write_record([
                row.ticker.clone(),
                fmt_f64(row.buy_hold),
                opt_field(row.p_star),
                opt_field(row.q_star),
                opt_field(row.profit_opt),
                opt_field(row.profit_spatial),
                opt_field(row.half_p_star),
                opt_field(row.half_q_star),
                opt_field(row.profit_temporal),
                opt_field(row.buy_hold_second_half),
            ])?;
        }
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }

    /// Combines the spatial and temporal halves of the analysis.
    pub fn merge(spatial: StabilityReport, temporal: StabilityReport) -> StabilityReport {
        let rows = spatial
            .per_stock_rows
            .into_iter()
            .zip(temporal.per_stock_rows)
            .map(|(s, t)| StockRow {
                half_p_star: t.half_p_star,
                half_q_star: t.half_q_star,
                profit_temporal: t.profit_temporal,
                buy_hold_second_half: t.buy_hold_second_half,
                ..s
            })
            .collect();
        StabilityReport::from_rows(rows)
    }
}

fn opt_field(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Full-period optimum per stock, then every stock re-run at the mean
/// `(⟨p*⟩, ⟨q*⟩)`.
pub fn spatial_stability_test(universe: &Universe, base: &StrategyParams, spec: &GridSpec) -> Result<StabilityReport> {
    let optima = universe
        .series()
        .par_iter()
        .map(|s| optimize_on_window(s, base, spec, TimeWindow::full(s)))
        .collect::<Result<Vec<_>>>()?;
    let p_mean = mean(optima.iter().map(|o| o.p_star));
    let q_mean = mean(optima.iter().map(|o| o.q_star));
    let averaged = base.with_thresholds(p_mean, q_mean);

    let rows = universe
        .series()
        .par_iter()
        .zip(&optima)
        .map(|(s, opt)| {
            Ok(StockRow {
                ticker: s.ticker().to_string(),
                buy_hold: buy_and_hold_profit(s),
                p_star: Some(opt.p_star),
                q_star: Some(opt.q_star),
                profit_opt: Some(opt.profit_at_opt),
                profit_spatial: Some(run_backtest(s, &averaged)?.profit),
                ..StockRow::default()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport::from_rows(rows))
}

/// First-half optimum per stock evaluated on the second half.
pub fn temporal_stability_test(universe: &Universe, base: &StrategyParams, spec: &GridSpec) -> Result<StabilityReport> {
    let rows = universe
        .series()
        .par_iter()
        .map(|s| {
            if s.len() < 2 * (base.delay + 2) {
                return Err(Error::SeriesTooShort {
                    needed: 2 * (base.delay + 2),
                    actual: s.len(),
                });
            }
            let (first, second) = halves(s.len());
            let opt = optimize_on_window(s, base, spec, first)?;
            let out_of_sample = evaluate_on_window(s, &base.with_thresholds(opt.p_star, opt.q_star), second)?;
            Ok(StockRow {
                ticker: s.ticker().to_string(),
                buy_hold: buy_and_hold_profit(s),
                half_p_star: Some(opt.p_star),
                half_q_star: Some(opt.q_star),
                profit_temporal: Some(out_of_sample),
                buy_hold_second_half: Some(buy_and_hold_profit(&s.window(second.start, second.end)?)),
                ..StockRow::default()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport::from_rows(rows))
}

/// Both tests on the same universe.
pub fn stability_report(universe: &Universe, base: &StrategyParams, spec: &GridSpec) -> Result<StabilityReport> {
    let spatial = spatial_stability_test(universe, base, spec)?;
    let temporal = temporal_stability_test(universe, base, spec)?;
    Ok(StabilityReport::merge(spatial, temporal))
}

/// Interval-by-interval profits of one stock.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StockIntervals {
    pub ticker: String,
    pub optima: Vec<OptimizedStrategy>,
    /// `profits[τ][τ′]` for `τ′ > τ`, `None` elsewhere.
    pub profits: Vec<Vec<Option<f64>>>,
    pub buy_hold: Vec<f64>,
}

/// For one optimization interval, the most profitable later interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestLater {
    pub tau: usize,
    pub tau_prime: usize,
    pub profit: f64,
    /// Mean buy-and-hold profit of interval `tau_prime`.
    pub buy_hold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RollingReport {
    pub windows: Vec<TimeWindow>,
    /// Universe mean of `profits[τ][τ′]`, 0-based, upper triangle only.
    pub interval_matrix: Vec<Vec<Option<f64>>>,
    /// Universe mean buy-and-hold profit per interval.
    pub buy_hold: Vec<f64>,
    /// One entry per `τ` that has a later interval (0-based indices).
    pub best_later: Vec<BestLater>,
    pub per_stock: Vec<StockIntervals>,
}

impl RollingReport {
    /// Writes `tau,tau_prime,profit` with 1-based interval numbers.
    pub fn write_long_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["tau", "tau_prime", "profit"])?;
        for (tau, row) in self.interval_matrix.iter().enumerate() {
            for (tau_prime, value) in row.iter().enumerate() {
                if let Some(v) = value {
                    writer.write_record([(tau + 1).to_string(), (tau_prime + 1).to_string(), fmt_f64(*v)])?;
                }
            }
        }
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }

    /// Writes `tau,best_tau_prime,best_profit,buy_hold` with 1-based interval
    /// numbers.
    pub fn write_best_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["tau", "best_tau_prime", "best_profit", "buy_hold"])?;
        for b in &self.best_later {
            writer.write_record([
                (b.tau + 1).to_string(),
                (b.tau_prime + 1).to_string(),
                fmt_f64(b.profit),
                fmt_f64(b.buy_hold),
            ])?;
        }
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }

    /// Writes `ticker,tau,tau_prime,p_star,q_star,profit,buy_hold` per stock
    /// with 1-based interval numbers; `p_star`, `q_star` are the optimum on
    /// interval `tau` and `buy_hold` belongs to `tau_prime`.
    pub fn write_per_stock_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["ticker", "tau", "tau_prime", "p_star", "q_star", "profit", "buy_hold"])?;
        for stock in &self.per_stock {
            for (tau, row) in stock.profits.iter().enumerate() {
                for (tau_prime, value) in row.iter().enumerate() {
                    if let Some(v) = value {
                        writer.write_record([
                            stock.ticker.clone(),
                            (tau + 1).to_string(),
                            (tau_prime + 1).to_string(),
                            fmt_f64(stock.optima[tau].p_star),
                            fmt_f64(stock.optima[tau].q_star),
                            fmt_f64(*v),
                            fmt_f64(stock.buy_hold[tau_prime]),
                        ])?;
                    }
                }
            }
        }
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }
}

fn rolling_for_stock(
    series: &PriceSeries,
    base: &StrategyParams,
    spec: &GridSpec,
    intervals: usize,
) -> Result<StockIntervals> {
    let windows = split_windows(series.len(), intervals);
    let optima = windows
        .par_iter()
        .map(|&w| optimize_on_window(series, base, spec, w))
        .collect::<Result<Vec<_>>>()?;
    let mut profits = vec![vec![None; intervals]; intervals];
    for (tau, opt) in optima.iter().enumerate() {
        let params = base.with_thresholds(opt.p_star, opt.q_star);
        for tau_prime in tau + 1..intervals {
            profits[tau][tau_prime] = Some(evaluate_on_window(series, &params, windows[tau_prime])?);
        }
    }
    let buy_hold = windows
        .iter()
        .map(|w| series.window(w.start, w.end).map(|s| buy_and_hold_profit(&s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(StockIntervals {
        ticker: series.ticker().to_string(),
        optima,
        profits,
        buy_hold,
    })
}

/// Optimize on each of `intervals` consecutive windows and evaluate on every
/// later window.
pub fn rolling_interval_test(
    universe: &Universe,
    base: &StrategyParams,
    spec: &GridSpec,
    intervals: usize,
) -> Result<RollingReport> {
    if intervals < 2 {
        return Err(Error::InvalidParams(format!(
            "need at least 2 intervals, got {intervals}"
        )));
    }
    let len = universe.series()[0].len();
    for s in universe.series() {
        if s.len() < intervals * (base.delay + 2) {
            return Err(Error::SeriesTooShort {
                needed: intervals * (base.delay + 2),
                actual: s.len(),
            });
        }
    }

    let per_stock = universe
        .series()
        .par_iter()
        .map(|s| rolling_for_stock(s, base, spec, intervals))
        .collect::<Result<Vec<_>>>()?;

    let stocks = per_stock.len() as f64;
    let mut interval_matrix = vec![vec![None; intervals]; intervals];
    for (tau, row) in interval_matrix.iter_mut().enumerate() {
        for (tau_prime, cell) in row.iter_mut().enumerate().skip(tau + 1) {
            let sum: f64 = per_stock.iter().map(|s| s.profits[tau][tau_prime].unwrap_or(0.0)).sum();
            *cell = Some(sum / stocks);
        }
    }
    let buy_hold: Vec<f64> = (0..intervals)
        .map(|tau| per_stock.iter().map(|s| s.buy_hold[tau]).sum::<f64>() / stocks)
        .collect();

    let best_later = (0..intervals - 1)
        .map(|tau| {
            let mut best = tau + 1;
            for tau_prime in tau + 2..intervals {
                if interval_matrix[tau][tau_prime] > interval_matrix[tau][best] {
                    best = tau_prime;
                }
            }
            BestLater {
                tau,
                tau_prime: best,
                profit: interval_matrix[tau][best].unwrap_or(0.0),
                buy_hold: buy_hold[best],
            }
        })
        .collect();

    Ok(RollingReport {
        windows: split_windows(len, intervals),
        interval_matrix,
        buy_hold,
        best_later,
        per_stock,
    })
}

//! Threshold trading strategies and the single-stock portfolio simulator.
//!
//! A strategy watches the log return `R(t) = ln(x(t)/x(t−d))` and compares it
//! against two thresholds: `R > p` is a rise, `R < −q` is a fall. The
//! contrarian rule sells rises and buys falls; the trend-following rule does
//! the opposite. Buy-and-hold is the closed-form benchmark `(x(T)−x(1))/x(1)`.
//!
//! The portfolio holds non-negative cash and a non-negative integer number of
//! shares. Buys spend at most `f_b` of the cash including the fee; sells
//! dispose of `floor(f_s·n)` shares. Computed volumes below `min_volume`
//! cancel the trade.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;

/// Holdings are capped at 2⁵³ shares, the largest count an `f64` represents exactly.
pub const MAX_SHARES: u64 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StrategyKind {
    /// Buy at `t = 1`, hold to `t = T`.
    BuyAndHold,
    /// Sell on rise, buy on fall.
    Contrarian,
    /// Buy on rise, sell on fall.
    TrendFollowing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Signal {
    Buy,
    Sell,
    Hold,
}

/// Which transactions pay the proportional fee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum FeeSide {
    #[default]
    Both,
    BuyOnly,
    SellOnly,
}

/// Full specification of one trading rule `S(p, q; f_b, f_s, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyParams {
    pub kind: StrategyKind,
    /// Rise threshold on the log return.
    pub p: f64,
    /// Fall threshold on the log return (a fall is `R < −q`).
    pub q: f64,
    /// Fraction of cash committed per buy.
    pub buy_fraction: f64,
    /// Fraction of held shares sold per sell.
    pub sell_fraction: f64,
    /// Look-back `d` in trading days.
    pub delay: usize,
    pub fee: f64,
    pub fee_side: FeeSide,
    pub min_volume: u64,
    pub initial_cash: f64,
}

impl Default for StrategyParams {
    fn default() -> Self {
        Self {
            kind: StrategyKind::Contrarian,
            p: 0.0,
            q: 0.0,
            buy_fraction: 0.5,
            sell_fraction: 0.5,
            delay: 1,
            fee: 0.001,
            fee_side: FeeSide::Both,
            min_volume: 1,
            initial_cash: 1e6,
        }
    }
}

impl StrategyParams {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn with_thresholds(mut self, p: f64, q: f64) -> Self {
        self.p = p;
        self.q = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return fail(format!("p must be finite and >= 0, got {}", self.p));
        }
        if !(self.q >= 0.0 && self.q.is_finite()) {
            return fail(format!("q must be finite and >= 0, got {}", self.q));
        }
        if !(0.0..=1.0).contains(&self.buy_fraction) {
            return fail(format!("buy fraction must lie in [0, 1], got {}", self.buy_fraction));
        }
        if !(0.0..=1.0).contains(&self.sell_fraction) {
            return fail(format!("sell fraction must lie in [0, 1], got {}", self.sell_fraction));
        }
        if self.delay < 1 {
            return fail("delay must be >= 1".into());
        }
        if !(self.fee >= 0.0 && self.fee < 1.0) {
            return fail(format!("fee must lie in [0, 1), got {}", self.fee));
        }
        if self.min_volume < 1 {
            return fail("min volume must be >= 1".into());
        }
        if !(self.initial_cash > 0.0 && self.initial_cash.is_finite()) {
            return fail(format!("initial cash must be positive, got {}", self.initial_cash));
        }
        Ok(())
    }

    fn buy_fee(&self) -> f64 {
        match self.fee_side {
            FeeSide::Both | FeeSide::BuyOnly => self.fee,
            FeeSide::SellOnly => 0.0,
        }
    }

    fn sell_fee(&self) -> f64 {
        match self.fee_side {
            FeeSide::Both | FeeSide::SellOnly => self.fee,
            FeeSide::BuyOnly => 0.0,
        }
    }
}

/// Trade decision for log return `r`. Both thresholds are strict.
pub fn signal(kind: StrategyKind, r: f64, p: f64, q: f64) -> Signal {
    let rise = r > p;
    let fall = r < -q;
    match kind {
        StrategyKind::Contrarian if rise => Signal::Sell,
        StrategyKind::Contrarian if fall => Signal::Buy,
        StrategyKind::TrendFollowing if rise => Signal::Buy,
        StrategyKind::TrendFollowing if fall => Signal::Sell,
        _ => Signal::Hold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Buy => "buy",
            Side::Sell => "sell",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortfolioState {
    pub cash: f64,
    pub shares: u64,
}

impl PortfolioState {
    pub fn value(&self, price: f64) -> f64 {
        self.cash + self.shares as f64 * price
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trade {
    /// 1-based trading day.
    pub t: usize,
    pub side: Side,
    pub volume: u64,
    pub price: f64,
    pub cash_after: f64,
    pub shares_after: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestResult {
    pub profit: f64,
    pub final_cash: f64,
    pub final_shares: u64,
    pub trades: Vec<Trade>,
    /// `m(t) + n(t)·x(t)` for `t = 1..T`, when requested.
    pub portfolio_value_series: Option<Vec<f64>>,
}

/// `(x(T) − x(1)) / x(1)`.
pub fn buy_and_hold_profit(series: &PriceSeries) -> f64 {
    (series.last_price() - series.first_price()) / series.first_price()
}

/// Log returns `ln(x(t)/x(t−d))` for `t = d+1..=T`; element `i` belongs to
/// `t = d + 1 + i`.
pub fn log_returns(prices: &[f64], delay: usize) -> Vec<f64> {
    if prices.len() <= delay {
        return Vec::new();
    }
    prices
        .iter()
        .zip(&prices[delay..])
        .map(|(&past, &now)| (now / past).ln())
        .collect()
}

/// Receives trades and daily portfolio values as the simulation advances.
trait Recorder {
    fn trade(&mut self, trade: Trade);
    fn value(&mut self, value: f64);
}

struct Discard;

impl Recorder for Discard {
    #[inline(always)]
    fn trade(&mut self, _: Trade) {}
    #[inline(always)]
    fn value(&mut self, _: f64) {}
}

struct Log {
    trades: Vec<Trade>,
    values: Option<Vec<f64>>,
}

impl Recorder for Log {
    fn trade(&mut self, trade: Trade) {
        self.trades.push(trade);
    }

    fn value(&mut self, value: f64) {
        if let Some(values) = self.values.as_mut() {
            values.push(value);
        }
    }
}

/// A price path with its log returns precomputed for one delay, so that many
/// threshold pairs can be evaluated without recomputing logarithms.
#[derive(Debug, Clone)]
pub struct ReturnPath<'a> {
    prices: &'a [f64],
    returns: Vec<f64>,
    delay: usize,
}

impl<'a> ReturnPath<'a> {
    pub fn new(prices: &'a [f64], delay: usize) -> Result<Self> {
        if delay < 1 {
            return Err(Error::InvalidParams("delay must be >= 1".into()));
        }
        if prices.len() <= delay {
            return Err(Error::SeriesTooShort {
                needed: delay + 1,
                actual: prices.len(),
            });
        }
        Ok(Self {
            prices,
            returns: log_returns(prices, delay),
            delay,
        })
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    pub fn prices(&self) -> &[f64] {
        self.prices
    }

    /// Final profit only. `params.delay` must equal this path's delay and
    /// `params` must already be validated.
    pub fn profit(&self, params: &StrategyParams) -> f64 {
        debug_assert_eq!(params.delay, self.delay);
        let state = self.simulate(params, &mut Discard);
        self.profit_of(&state, params)
    }

    fn profit_of(&self, state: &PortfolioState, params: &StrategyParams) -> f64 {
        let last = self.prices[self.prices.len() - 1];
        (state.value(last) - params.initial_cash) / params.initial_cash
    }

    fn simulate<R: Recorder>(&self, params: &StrategyParams, recorder: &mut R) -> PortfolioState {
        let mut state = PortfolioState {
            cash: params.initial_cash,
            shares: 0,
        };
        let buy_unit_factor = 1.0 + params.buy_fee();
        let sell_unit_factor = 1.0 - params.sell_fee();

        for &price in &self.prices[..self.delay] {
            recorder.value(state.value(price));
        }
        for (i, &r) in self.returns.iter().enumerate() {
            let t = self.delay + 1 + i;
            let price = self.prices[t - 1];
            match signal(params.kind, r, params.p, params.q) {
                Signal::Buy => {
                    let unit_cost = price * buy_unit_factor;
                    let budget = params.buy_fraction * state.cash;
                    let mut volume = (budget / unit_cost).floor() as u64;
                    // The rounded quotient can land on the next integer.
                    if volume > 0 && volume as f64 * unit_cost > budget {
                        volume -= 1;
                    }
                    volume = volume.min(MAX_SHARES - state.shares);
                    if volume >= params.min_volume {
                        state.cash -= volume as f64 * unit_cost;
                        state.shares += volume;
                        recorder.trade(Trade {
                            t,
                            side: Side::Buy,
                            volume,
                            price,
                            cash_after: state.cash,
                            shares_after: state.shares,
                        });
                    }
                }
                Signal::Sell => {
                    let volume = (params.sell_fraction * state.shares as f64).floor() as u64;
                    if volume >= params.min_volume {
                        state.shares -= volume;
                        state.cash += volume as f64 * (price * sell_unit_factor);
                        recorder.trade(Trade {
                            t,
                            side: Side::Sell,
                            volume,
                            price,
                            cash_after: state.cash,
                            shares_after: state.shares,
                        });
                    }
                }
                Signal::Hold => {}
            }
            debug_assert!(state.cash >= 0.0);
            recorder.value(state.value(price));
        }
        state
    }
}

fn run(series: &PriceSeries, params: &StrategyParams, with_values: bool) -> Result<BacktestResult> {
    params.validate()?;
    if params.kind == StrategyKind::BuyAndHold {
        let profit = buy_and_hold_profit(series);
        let final_cash = params.initial_cash * (1.0 + profit);
        let values = with_values.then(|| {
            series
                .prices()
                .iter()
                .map(|&x| params.initial_cash * x / series.first_price())
                .collect()
        });
        return Ok(BacktestResult {
            profit,
            final_cash,
            final_shares: 0,
            trades: Vec::new(),
            portfolio_value_series: values,
        });
    }

    let path = ReturnPath::new(series.prices(), params.delay)?;
    let mut log = Log {
        trades: Vec::new(),
        values: with_values.then(|| Vec::with_capacity(series.len())),
    };
    let state = path.simulate(params, &mut log);
    Ok(BacktestResult {
        profit: path.profit_of(&state, params),
        final_cash: state.cash,
        final_shares: state.shares,
        trades: log.trades,
        portfolio_value_series: log.values,
    })
}

/// Simulates the strategy over the whole series, starting from
/// `initial_cash` and no shares.
///
/// Buy-and-hold is reported by its closed form with an empty trade log; its
/// `final_cash` is the equivalent fractional-share liquidation value.
pub fn run_backtest(series: &PriceSeries, params: &StrategyParams) -> Result<BacktestResult> {
    run(series, params, false)
}

/// Like [`run_backtest`], also recording the daily portfolio value.
pub fn run_backtest_with_values(series: &PriceSeries, params: &StrategyParams) -> Result<BacktestResult> {
    run(series, params, true)
}

/// Writes `t,side,volume,price,cash_after,shares_after`.
pub fn write_trades_csv<W: Write>(trades: &[Trade], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["t", "side", "volume", "price", "cash_after", "shares_after"])?;
    for trade in trades {
        writer.write_record([
            trade.t.to_string(),
            trade.side.as_str().to_string(),
            trade.volume.to_string(),
            crate::export::fmt_f64(trade.price),
            crate::export::fmt_f64(trade.cash_after),
            trade.shares_after.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::{synthesize_series, SyntheticKind};
    use proptest::prelude::*;

    fn s1(p: f64, q: f64) -> StrategyParams {
        StrategyParams::new(StrategyKind::Contrarian).with_thresholds(p, q)
    }

    #[test]
    fn holdings_are_capped() {
        let series = PriceSeries::from_prices("cheap", vec![1.0, 0.5, 0.25, 0.125]).unwrap();
        let params = StrategyParams {
            buy_fraction: 1.0,
            fee: 0.0,
            initial_cash: 1e17,
            ..s1(0.0, 0.0)
        };
        let result = run_backtest(&series, &params).unwrap();
        assert_eq!(result.final_shares, MAX_SHARES);
        assert_eq!(result.trades.len(), 1);
        assert_eq!(result.trades[0].volume, MAX_SHARES);
    }

    #[test]
    fn contrarian_sells_a_rise() {
        assert_eq!(signal(StrategyKind::Contrarian, 0.10, 0.08, 0.04), Signal::Sell);
        assert_eq!(signal(StrategyKind::Contrarian, -0.05, 0.08, 0.04), Signal::Buy);
    }

    #[test]
    fn zero_return_with_zero_thresholds_holds() {
        assert_eq!(signal(StrategyKind::Contrarian, 0.0, 0.0, 0.0), Signal::Hold);
        assert_eq!(signal(StrategyKind::TrendFollowing, 0.0, 0.0, 0.0), Signal::Hold);
    }

    #[test]
    fn trend_following_sells_a_fall() {
        assert_eq!(signal(StrategyKind::TrendFollowing, -0.08, 0.10, 0.07), Signal::Sell);
        assert_eq!(signal(StrategyKind::TrendFollowing, 0.11, 0.10, 0.07), Signal::Buy);
    }

    #[test]
    fn thresholds_are_strict() {
        assert_eq!(signal(StrategyKind::Contrarian, 0.05, 0.05, 0.05), Signal::Hold);
        assert_eq!(signal(StrategyKind::Contrarian, -0.05, 0.05, 0.05), Signal::Hold);
    }

    #[test]
    fn constant_series_never_trades() {
        let series = synthesize_series(SyntheticKind::Constant { level: 50.0 }, 40).unwrap();
        for (p, q) in [(0.0, 0.0), (0.3, 0.0), (0.0, 0.7)] {
            let result = run_backtest(&series, &s1(p, q)).unwrap();
            assert_eq!(result.profit, 0.0);
            assert!(result.trades.is_empty());
        }
    }

    #[test]
    fn buy_and_hold_closed_form() {
        let series = PriceSeries::from_prices("x", vec![100.0, 37.0, 412.0, 200.0]).unwrap();
        let result = run_backtest(&series, &StrategyParams::new(StrategyKind::BuyAndHold)).unwrap();
        assert_eq!(result.profit, 1.0);
        assert!(result.trades.is_empty());
        assert_eq!(
            buy_and_hold_profit(&PriceSeries::from_prices("x", vec![100.0, 150.0]).unwrap()),
            0.5
        );
        assert_eq!(
            buy_and_hold_profit(&PriceSeries::from_prices("x", vec![100.0, 100.0]).unwrap()),
            0.0
        );
    }

    #[test]
    fn five_day_hand_stepped_example() {
        let prices = [100.0_f64, 90.0, 99.0, 110.0, 95.0];
        let series = PriceSeries::from_prices("x", prices.to_vec()).unwrap();
        let params = StrategyParams {
            buy_fraction: 1.0,
            sell_fraction: 1.0,
            ..s1(0.05, 0.05)
        };

        // t=2: ln(0.9) < -0.05, buy everything affordable.
        let unit2 = 90.0 * 1.001;
        let vol2 = (1e6_f64 / unit2).floor();
        let cash2 = 1e6 - vol2 * unit2;
        // t=3: ln(1.1) > 0.05, sell all.
        let cash3 = cash2 + vol2 * (99.0 * 0.999);
        // t=4: rise again but no shares left.
        // t=5: ln(95/110) < -0.05, buy.
        let unit5 = 95.0 * 1.001;
        let vol5 = (cash3 / unit5).floor();
        let cash5 = cash3 - vol5 * unit5;
        let expected = (cash5 + vol5 * 95.0 - 1e6) / 1e6;

        let result = run_backtest(&series, &params).unwrap();
        assert_eq!(vol2, 11100.0);
        assert_eq!(vol5, 11544.0);
        assert_eq!(result.profit, expected);
        assert!((result.profit - 0.096_705_42).abs() < 1e-8);
        let sides: Vec<_> = result.trades.iter().map(|t| (t.t, t.side, t.volume)).collect();
        assert_eq!(
            sides,
            vec![(2, Side::Buy, 11100), (3, Side::Sell, 11100), (5, Side::Buy, 11544)]
        );
    }

    #[test]
    fn odd_share_cannot_be_half_sold() {
        // Buy on the fall leaves an odd holding; selling half of 1 share rounds to 0.
        let series = PriceSeries::from_prices("x", vec![100.0, 50.0, 60.0, 70.0]).unwrap();
        let params = StrategyParams {
            initial_cash: 60.0,
            buy_fraction: 1.0,
            fee: 0.0,
            ..s1(0.1, 0.1)
        };
        let result = run_backtest(&series, &params).unwrap();
        assert_eq!(result.trades.len(), 1);
        assert_eq!(result.final_shares, 1);
    }

    #[test]
    fn too_short_and_invalid_params_are_errors() {
        let series = PriceSeries::from_prices("x", vec![1.0, 2.0]).unwrap();
        let params = StrategyParams {
            delay: 2,
            ..s1(0.1, 0.1)
        };
        assert!(matches!(
            run_backtest(&series, &params),
            Err(Error::SeriesTooShort { .. })
        ));
        for bad in [
            StrategyParams {
                p: -0.1,
                ..s1(0.0, 0.0)
            },
            StrategyParams {
                buy_fraction: 1.5,
                ..s1(0.0, 0.0)
            },
            StrategyParams {
                delay: 0,
                ..s1(0.0, 0.0)
            },
            StrategyParams {
                min_volume: 0,
                ..s1(0.0, 0.0)
            },
            StrategyParams {
                initial_cash: 0.0,
                ..s1(0.0, 0.0)
            },
            StrategyParams {
                fee: -0.01,
                ..s1(0.0, 0.0)
            },
        ] {
            assert!(matches!(run_backtest(&series, &bad), Err(Error::InvalidParams(_))));
        }
    }

    #[test]
    fn value_series_ends_at_profit() {
        let series = synthesize_series(
            SyntheticKind::Sinusoid {
                level: 100.0,
                amplitude: 20.0,
                period: 7.0,
            },
            60,
        )
        .unwrap();
        let result = run_backtest_with_values(&series, &s1(0.05, 0.05)).unwrap();
        let values = result.portfolio_value_series.unwrap();
        assert_eq!(values.len(), series.len());
        assert_eq!(values[0], 1e6);
        assert_eq!((values[values.len() - 1] - 1e6) / 1e6, result.profit);
    }

    #[test]
    fn one_sided_fees() {
        let series = synthesize_series(
            SyntheticKind::Sinusoid {
                level: 100.0,
                amplitude: 20.0,
                period: 9.0,
            },
            80,
        )
        .unwrap();
        let both = run_backtest(&series, &s1(0.05, 0.05)).unwrap();
        let buy_only = run_backtest(
            &series,
            &StrategyParams {
                fee_side: FeeSide::BuyOnly,
                ..s1(0.05, 0.05)
            },
        )
        .unwrap();
        let free = run_backtest(
            &series,
            &StrategyParams {
                fee: 0.0,
                ..s1(0.05, 0.05)
            },
        )
        .unwrap();
        assert!(!both.trades.is_empty());
        assert!(free.profit >= buy_only.profit);
        assert!(buy_only.profit >= both.profit);
    }

    #[test]
    fn trade_log_csv() {
        let series = PriceSeries::from_prices("x", vec![100.0, 90.0, 99.0]).unwrap();
        let result = run_backtest(&series, &s1(0.05, 0.05)).unwrap();
        let mut out = Vec::new();
        write_trades_csv(&result.trades, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,side,volume,price,cash_after,shares_after"));
        assert!(lines.next().unwrap().starts_with("2,buy,5550,"));
        assert_eq!(lines.count(), 1);
    }

    fn price_path() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(1.0..1000.0_f64, 3..40)
    }

    fn params() -> impl Strategy<Value = StrategyParams> {
        (
            prop::bool::ANY,
            0.0..0.5_f64,
            0.0..0.5_f64,
            0.0..=1.0_f64,
            0.0..=1.0_f64,
            1usize..3,
            prop::sample::select(vec![1u64, 10, 100]),
        )
            .prop_map(|(contrarian, p, q, fb, fs, d, min_volume)| StrategyParams {
                kind: if contrarian {
                    StrategyKind::Contrarian
                } else {
                    StrategyKind::TrendFollowing
                },
                p,
                q,
                buy_fraction: fb,
                sell_fraction: fs,
                delay: d,
                min_volume,
                ..StrategyParams::default()
            })
    }

    proptest! {
        #[test]
        fn signals_are_exclusive(r in -2.0..2.0_f64, p in 0.0..1.0_f64, q in 0.0..1.0_f64) {
            let rise = r > p;
            let fall = r < -q;
            prop_assert!(!(rise && fall));
            let s = signal(StrategyKind::Contrarian, r, p, q);
            prop_assert_eq!(s == Signal::Hold, !rise && !fall);
        }

        #[test]
        fn state_stays_non_negative(prices in price_path(), params in params()) {
            let series = PriceSeries::from_prices("x", prices).unwrap();
            let result = run_backtest(&series, &params).unwrap();
            let mut shares = 0u64;
            for trade in &result.trades {
                prop_assert!(trade.cash_after >= 0.0);
                prop_assert!(trade.volume >= params.min_volume);
                match trade.side {
                    Side::Buy => shares += trade.volume,
                    Side::Sell => shares -= trade.volume,
                }
                prop_assert_eq!(shares, trade.shares_after);
            }
            prop_assert!(result.trades.windows(2).all(|w| w[0].t < w[1].t));
            let last = series.last_price();
            let expected = (result.final_cash + result.final_shares as f64 * last - params.initial_cash) / params.initial_cash;
            prop_assert_eq!(result.profit, expected);
        }

        #[test]
        fn fee_never_helps_on_identical_trades(
            prices in prop::collection::vec(10.0..100.0_f64, 3..25),
            params in params(),
            cash in 20.0..400.0_f64,
        ) {
            // Small budgets make whole-share volumes coincide with and without the fee.
            let params = StrategyParams { initial_cash: cash, min_volume: 1, ..params };
            let series = PriceSeries::from_prices("x", prices).unwrap();
            let paid = run_backtest(&series, &params).unwrap();
            let free = run_backtest(&series, &StrategyParams { fee: 0.0, ..params }).unwrap();
            let same = paid.trades.len() == free.trades.len()
                && paid.trades.iter().zip(&free.trades).all(|(a, b)| a.t == b.t && a.side == b.side && a.volume == b.volume);
            prop_assume!(same);
            prop_assert!(free.profit >= paid.profit);
        }

        #[test]
        fn sweep_path_matches_full_backtest(prices in price_path(), params in params()) {
            let series = PriceSeries::from_prices("x", prices).unwrap();
            prop_assume!(series.len() > params.delay);
            let path = ReturnPath::new(series.prices(), params.delay).unwrap();
            prop_assert_eq!(path.profit(&params), run_backtest(&series, &params).unwrap().profit);
        }
    }
}

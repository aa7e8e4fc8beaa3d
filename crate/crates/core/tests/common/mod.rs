//! Independent reference implementations shared by the integration suites.
#![allow(dead_code)]

use std::path::Path;

use profit_landscape::{FeeSide, Neighborhood, PriceSeries, Side, StrategyKind, StrategyParams, Trade};
use rand::Rng;

/// Straight-line re-implementation of the day-by-day simulation: recomputes
/// every log return, walks 1-based days and keeps its own state.
pub fn oracle_backtest(prices: &[f64], params: &StrategyParams) -> (f64, Vec<Trade>) {
    let total_days = prices.len();
    let x = |t: usize| prices[t - 1];
    let buy_fee = if params.fee_side == FeeSide::SellOnly {
        0.0
    } else {
        params.fee
    };
    let sell_fee = if params.fee_side == FeeSide::BuyOnly {
        0.0
    } else {
        params.fee
    };

    let mut cash = params.initial_cash;
    let mut shares: u64 = 0;
    let mut trades = Vec::new();
    let mut t = params.delay + 1;
    while t <= total_days {
        let r = (x(t) / x(t - params.delay)).ln();
        let rise = r > params.p;
        let fall = r < -params.q;
        let wants_buy = match params.kind {
            StrategyKind::Contrarian => fall,
            StrategyKind::TrendFollowing => rise,
            StrategyKind::BuyAndHold => unreachable!(),
        };
        let wants_sell = match params.kind {
            StrategyKind::Contrarian => rise,
            StrategyKind::TrendFollowing => fall,
            StrategyKind::BuyAndHold => unreachable!(),
        };
        assert!(!(wants_buy && wants_sell));

        if wants_buy {
            let per_share = x(t) * (1.0 + buy_fee);
            let allowed = params.buy_fraction * cash;
            let mut n = (allowed / per_share).floor() as u64;
            if n > 0 && (n as f64) * per_share > allowed {
                n -= 1;
            }
            if shares + n > 1u64 << 53 {
                n = (1u64 << 53) - shares;
            }
            if n >= params.min_volume {
                cash -= (n as f64) * per_share;
                shares += n;
                trades.push(Trade {
                    t,
                    side: Side::Buy,
                    volume: n,
                    price: x(t),
                    cash_after: cash,
                    shares_after: shares,
                });
            }
        } else if wants_sell {
            let n = (params.sell_fraction * shares as f64).floor() as u64;
            if n >= params.min_volume {
                shares -= n;
                cash += (n as f64) * (x(t) * (1.0 - sell_fee));
                trades.push(Trade {
                    t,
                    side: Side::Sell,
                    volume: n,
                    price: x(t),
                    cash_after: cash,
                    shares_after: shares,
                });
            }
        }
        assert!(cash >= 0.0);
        t += 1;
    }
    let profit = (cash + shares as f64 * x(total_days) - params.initial_cash) / params.initial_cash;
    (profit, trades)
}

/// Second local-maxima scan: collects the neighborhood explicitly with
/// bounds checks and compares against its maximum.
pub fn oracle_maxima(values: &[f64], n: usize, neighborhood: Neighborhood) -> Vec<(usize, usize)> {
    let at = |k: i64, l: i64| -> Option<f64> {
        if k < 0 || l < 0 || k >= n as i64 || l >= n as i64 {
            None
        } else {
            Some(values[k as usize * n + l as usize])
        }
    };
    let mut out = Vec::new();
    for k in 0..n as i64 {
        for l in 0..n as i64 {
            let mut neighbors = Vec::new();
            let mut complete = true;
            for dk in -1..=1_i64 {
                for dl in -1..=1_i64 {
                    if (dk, dl) == (0, 0) {
                        continue;
                    }
                    if neighborhood == Neighborhood::Four && dk != 0 && dl != 0 {
                        continue;
                    }
                    match at(k + dk, l + dl) {
                        Some(v) => neighbors.push(v),
                        None => complete = false,
                    }
                }
            }
            let center = at(k, l).unwrap();
            let highest = neighbors.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if complete && center > highest {
                out.push((k as usize, l as usize));
            }
        }
    }
    out
}

pub fn random_params<R: Rng>(rng: &mut R) -> StrategyParams {
    StrategyParams {
        kind: if rng.random_bool(0.5) {
            StrategyKind::Contrarian
        } else {
            StrategyKind::TrendFollowing
        },
        p: rng.random_range(0.0..0.6),
        q: rng.random_range(0.0..0.6),
        buy_fraction: rng.random_range(0.0..=1.0),
        sell_fraction: rng.random_range(0.0..=1.0),
        delay: rng.random_range(1..=4),
        fee: if rng.random_bool(0.2) {
            0.0
        } else {
            rng.random_range(0.0..0.01)
        },
        fee_side: match rng.random_range(0..3) {
            0 => FeeSide::Both,
            1 => FeeSide::BuyOnly,
            _ => FeeSide::SellOnly,
        },
        min_volume: [1, 10, 100][rng.random_range(0..3)],
        initial_cash: if rng.random_bool(0.5) {
            1e6
        } else {
            rng.random_range(100.0..1e5)
        },
    }
}

pub fn random_prices<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(1.0..=1000.0)).collect()
}

/// Bounded random walk used as a stored fixture stock.
pub fn fixture_series(len: usize, seed: u64) -> PriceSeries {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut price = 100.0_f64;
    let prices = (0..len)
        .map(|_| {
            let step: f64 = rng.random_range(-0.04..0.04);
            price *= step.exp();
            price
        })
        .collect();
    PriceSeries::from_prices(format!("fixture{seed}"), prices).unwrap()
}

pub fn write_rows(path: &Path, series: &PriceSeries, start: usize, end: usize) {
    // Plain text writer, not the library's, so the truncation oracle does not share code with it.
    let mut body = String::from("date,close\n");
    for t in start..=end {
        body.push_str(&format!(
            "{},{}\n",
            series.dates()[t - 1].format("%Y-%m-%d"),
            series.price_at(t)
        ));
    }
    std::fs::write(path, body).unwrap();
}

//! Profit landscapes of threshold trading strategies.
//!
//! A strategy trades one stock whenever the `d`-day log return leaves the band
//! `[−q, p]`. Sweeping `(p, q)` over a grid gives a profit landscape; the
//! number of its strict local maxima as a function of grid resolution, and
//! how well grid optima carry over to other stocks and later periods, are
//! the quantities this crate measures.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod gbm;
pub mod landscape;
pub mod market_data;
pub mod scaling;
pub mod stability;
pub mod strategy;

pub use error::{Error, Result};
pub use gbm::{fit_gbm, simulate_replica, simulate_replicas, GbmParams, ReplicaSet};
pub use landscape::{
    find_local_maxima, local_maxima, max_profit_strategy, sweep, sweep_with_workers, with_workers, GridOptimum,
    GridSpec, LandscapeGrid, MaximaResult, Neighborhood,
};
pub use market_data::{
    load_series, load_universe, synthesize_series, AlignmentPolicy, PriceSeries, SyntheticKind, Universe,
};
pub use scaling::{
    fit_exponent, load_scaling_series, measure_scaling, measure_scaling_per_stock, measure_scaling_universe,
    ScalingFit, ScalingPlan, ScalingSeries,
};
pub use stability::{
    evaluate_on_window, optimize_on_window, rolling_interval_test, spatial_stability_test, stability_report,
    temporal_stability_test, OptimizedStrategy, RollingReport, StabilityReport, TimeWindow,
};
pub use strategy::{
    buy_and_hold_profit, run_backtest, run_backtest_with_values, signal, BacktestResult, FeeSide, Side, Signal,
    StrategyKind, StrategyParams, Trade,
};

//! Profit landscapes over the `(p, q)` threshold plane.
//!
//! The rectangle `[0, range_p] × [0, range_q]` is divided into `N × N` equal
//! cells and the strategy is evaluated at each cell center. Cell indices are
//! 0-based: cell `(k, l)` sits at `p = (k + ½)·range_p/N`,
//! `q = (l + ½)·range_q/N`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;
use crate::strategy::{buy_and_hold_profit, ReturnPath, StrategyKind, StrategyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum Neighborhood {
    /// Orthogonal neighbors only.
    #[default]
    Four,
    /// Orthogonal and diagonal neighbors.
    Eight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub range_p: f64,
    pub range_q: f64,
    pub neighborhood: Neighborhood,
}

impl GridSpec {
    /// Unit square at resolution `n` with four-neighbor maxima.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            range_p: 1.0,
            range_q: 1.0,
            neighborhood: Neighborhood::Four,
        }
    }

    pub fn with_range(mut self, range_p: f64, range_q: f64) -> Self {
        self.range_p = range_p;
        self.range_q = range_q;
        self
    }

    pub fn with_neighborhood(mut self, neighborhood: Neighborhood) -> Self {
        self.neighborhood = neighborhood;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "grid resolution must be >= 2, got {}",
                self.n
            )));
        }
        if !(self.range_p > 0.0 && self.range_p.is_finite() && self.range_q > 0.0 && self.range_q.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "grid ranges must be positive, got p: {}, q: {}",
                self.range_p, self.range_q
            )));
        }
        Ok(())
    }

    pub fn p_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.range_p / self.n as f64
    }

    pub fn q_center(&self, l: usize) -> f64 {
        (l as f64 + 0.5) * self.range_q / self.n as f64
    }
}

/// Profits at every cell center, stored row-major with `p` along rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeGrid {
    spec: GridSpec,
    base_params: StrategyParams,
    profits: Vec<f64>,
}

impl LandscapeGrid {
    /// Wraps a precomputed row-major matrix.
    pub fn from_profits(spec: GridSpec, base_params: StrategyParams, profits: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if profits.len() != spec.n * spec.n {
            return Err(Error::InvalidParams(format!(
                "expected {} profits for N = {}, got {}",
                spec.n * spec.n,
                spec.n,
                profits.len()
            )));
        }
        if profits.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("landscape contains non-finite profit".into()));
        }
        Ok(Self {
            spec,
            base_params,
            profits,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn base_params(&self) -> &StrategyParams {
        &self.base_params
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn profit(&self, k: usize, l: usize) -> f64 {
        self.profits[k * self.spec.n + l]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.spec.n;
        &self.profits[k * n..(k + 1) * n]
    }

    /// Strategy parameters evaluated at cell `(k, l)`.
    pub fn cell_params(&self, k: usize, l: usize) -> StrategyParams {
        self.base_params
            .with_thresholds(self.spec.p_center(k), self.spec.q_center(l))
    }
}

/// Evaluates the strategy at all `N²` cell centers on the current rayon pool.
/// The result does not depend on the number of worker threads.
pub fn sweep(series: &PriceSeries, base_params: &StrategyParams, spec: &GridSpec) -> Result<LandscapeGrid> {
    spec.validate()?;
    base_params.validate()?;
    let n = spec.n;
    let mut profits = vec![0.0; n * n];

    if base_params.kind == StrategyKind::BuyAndHold {
        profits.fill(buy_and_hold_profit(series));
    } else {
        let path = ReturnPath::new(series.prices(), base_params.delay)?;
        profits.par_chunks_mut(n).enumerate().for_each(|(k, row)| {
            let p = spec.p_center(k);
            for (l, cell) in row.iter_mut().enumerate() {
                *cell = path.profit(&base_params.with_thresholds(p, spec.q_center(l)));
            }
        });
    }
    LandscapeGrid::from_profits(*spec, *base_params, profits)
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers < 1 {
        return Err(Error::InvalidParams("worker count must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// [`sweep`] on a dedicated pool of `workers` threads.
pub fn sweep_with_workers(
    series: &PriceSeries,
    base_params: &StrategyParams,
    spec: &GridSpec,
    workers: usize,
) -> Result<LandscapeGrid> {
    with_workers(workers, || sweep(series, base_params, spec))?
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximaResult {
    /// Number of strict local maxima `M`.
    pub count: usize,
    /// Cells `(k, l)` of the local maxima in row-major order.
    pub locations: Vec<(usize, usize)>,
    pub global_max_value: f64,
    pub global_argmax_cell: (usize, usize),
    /// `(p*, q*)` of the global maximum.
    pub global_argmax: (f64, f64),
}

const FOUR: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
const EIGHT: [(isize, isize); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

/// Interior cells of a row-major `n × n` matrix that strictly exceed every
/// neighbor. Boundary cells never qualify.
pub fn local_maxima(values: &[f64], n: usize, neighborhood: Neighborhood) -> Vec<(usize, usize)> {
    assert_eq!(values.len(), n * n, "matrix is not {n}×{n}");
    let offsets: &[(isize, isize)] = match neighborhood {
        Neighborhood::Four => &FOUR,
        Neighborhood::Eight => &EIGHT,
    };
    let mut found = Vec::new();
    for k in 1..n.saturating_sub(1) {
        for l in 1..n - 1 {
            let center = values[k * n + l];
            let is_max = offsets.iter().all(|&(dk, dl)| {
                let kk = (k as isize + dk) as usize;
                let ll = (l as isize + dl) as usize;
                center > values[kk * n + ll]
            });
            if is_max {
                found.push((k, l));
            }
        }
    }
    found
}

/// Local maxima under the grid's neighborhood, plus the global maximum
/// (ties go to the smallest `k`, then the smallest `l`).
pub fn find_local_maxima(grid: &LandscapeGrid) -> MaximaResult {
    let spec = grid.spec();
    let locations = local_maxima(grid.profits(), spec.n, spec.neighborhood);

    let mut best = 0;
    for (i, &v) in grid.profits().iter().enumerate() {
        if v > grid.profits()[best] {
            best = i;
        }
    }
    let cell = (best / spec.n, best % spec.n);
    MaximaResult {
        count: locations.len(),
        locations,
        global_max_value: grid.profits()[best],
        global_argmax_cell: cell,
        global_argmax: (spec.p_center(cell.0), spec.q_center(cell.1)),
    }
}

/// Best grid strategy `(p*, q*, Π_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptimum {
    pub p_star: f64,
    pub q_star: f64,
    pub profit: f64,
    pub cell: (usize, usize),
}

pub fn max_profit_strategy(series: &PriceSeries, base_params: &StrategyParams, spec: &GridSpec) -> Result<GridOptimum> {
    let grid = sweep(series, base_params, spec)?;
    let maxima = find_local_maxima(&grid);
    Ok(GridOptimum {
        p_star: maxima.global_argmax.0,
        q_star: maxima.global_argmax.1,
        profit: maxima.global_max_value,
        cell: maxima.global_argmax_cell,
    })
}

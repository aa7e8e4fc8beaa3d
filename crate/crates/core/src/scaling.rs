//! Growth of the local-maxima count `M` with grid resolution `N`.
//!
//! Evenly scattered maxima give `M ~ N²`; a smaller exponent means the maxima
//! cluster on a fractal subset of the plane.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use tracing::warn;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::landscape::{find_local_maxima, sweep, GridSpec, Neighborhood};
use crate::market_data::{PriceSeries, Universe};
use crate::strategy::StrategyParams;

pub const DEFAULT_RESOLUTIONS: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];

/// Resolutions to sweep and the grid geometry shared by all of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPlan {
    pub resolutions: Vec<usize>,
    pub range_p: f64,
    pub range_q: f64,
    pub neighborhood: Neighborhood,
}

impl Default for ScalingPlan {
    fn default() -> Self {
        Self {
            resolutions: DEFAULT_RESOLUTIONS.to_vec(),
            range_p: 1.0,
            range_q: 1.0,
            neighborhood: Neighborhood::Four,
        }
    }
}

impl ScalingPlan {
    pub fn new(resolutions: Vec<usize>) -> Self {
        Self {
            resolutions,
            ..Self::default()
        }
    }

    fn grid(&self, n: usize) -> GridSpec {
        GridSpec::new(n)
            .with_range(self.range_p, self.range_q)
            .with_neighborhood(self.neighborhood)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolutions.is_empty() {
            return Err(Error::InvalidParams("no resolutions given".into()));
        }
        if let Some(&n) = self.resolutions.iter().find(|&&n| n < 4) {
            return Err(Error::InvalidParams(format!("resolutions must be >= 4, got {n}")));
        }
        if self.resolutions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams("resolutions must be strictly increasing".into()));
        }
        self.grid(self.resolutions[0]).validate()
    }
}

/// `(N, M)` pairs; `M` may be a mean over several stocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSeries {
    pub resolutions: Vec<usize>,
    pub counts: Vec<f64>,
    pub label: String,
}

impl ScalingSeries {
    pub fn new(resolutions: Vec<usize>, counts: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if resolutions.len() != counts.len() {
            return Err(Error::InvalidParams("resolutions and counts differ in length".into()));
        }
        if resolutions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams("resolutions must be strictly increasing".into()));
        }
        if counts.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidParams("counts must be finite and non-negative".into()));
        }
        Ok(Self {
            resolutions,
            counts,
            label: label.into(),
        })
    }

    /// Writes `N,M_mean`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["N", "M_mean"])?;
        for (n, m) in self.resolutions.iter().zip(&self.counts) {
            writer.write_record([n.to_string(), fmt_f64(*m)])?;
        }
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }

    /// Reads the two-column `N,M` layout written by [`ScalingSeries::write_csv`].
    pub fn read_csv<R: Read>(input: R, label: impl Into<String>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let mut resolutions = Vec::new();
        let mut counts = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let bad = |what: &str| Error::MalformedRow {
                path: "<scaling csv>".into(),
                line: i + 2,
                reason: what.to_string(),
            };
            if record.len() != 2 {
                return Err(bad("expected two columns N,M"));
            }
            resolutions.push(record[0].parse::<usize>().map_err(|_| bad("N is not an integer"))?);
            counts.push(record[1].parse::<f64>().map_err(|_| bad("M is not a number"))?);
        }
        Self::new(resolutions, counts, label)
    }
}

pub fn load_scaling_series(path: &Path) -> Result<ScalingSeries> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    ScalingSeries::read_csv(file, label).map_err(|e| match e {
        Error::MalformedRow { line, reason, .. } => Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason,
        },
        other => other,
    })
}

fn count_maxima(series: &PriceSeries, base: &StrategyParams, spec: &GridSpec) -> Result<usize> {
    Ok(find_local_maxima(&sweep(series, base, spec)?).count)
}

/// `M(N)` for one stock.
pub fn measure_scaling(series: &PriceSeries, base: &StrategyParams, plan: &ScalingPlan) -> Result<ScalingSeries> {
    plan.validate()?;
    let counts = plan
        .resolutions
        .par_iter()
        .map(|&n| count_maxima(series, base, &plan.grid(n)).map(|m| m as f64))
        .collect::<Result<Vec<_>>>()?;
    ScalingSeries::new(plan.resolutions.clone(), counts, series.ticker())
}

/// `M(N)` for every stock separately, in universe order.
pub fn measure_scaling_per_stock(
    universe: &Universe,
    base: &StrategyParams,
    plan: &ScalingPlan,
) -> Result<Vec<ScalingSeries>> {
    plan.validate()?;
    let jobs: Vec<(usize, usize)> = (0..universe.len())
        .flat_map(|i| plan.resolutions.iter().map(move |&n| (i, n)))
        .collect();
    let counts = jobs
        .par_iter()
        .map(|&(i, n)| count_maxima(&universe.series()[i], base, &plan.grid(n)))
        .collect::<Result<Vec<_>>>()?;
    let r = plan.resolutions.len();
    universe
        .series()
        .iter()
        .zip(counts.chunks(r))
        .map(|(s, ms)| {
            ScalingSeries::new(
                plan.resolutions.clone(),
                ms.iter().map(|&m| m as f64).collect(),
                s.ticker(),
            )
        })
        .collect()
}

/// Mean `M(N)` over the universe.
pub fn measure_scaling_universe(
    universe: &Universe,
    base: &StrategyParams,
    plan: &ScalingPlan,
) -> Result<ScalingSeries> {
    let per_stock = measure_scaling_per_stock(universe, base, plan)?;
    let stocks = per_stock.len() as f64;
    let means = (0..plan.resolutions.len())
        .map(|j| per_stock.iter().map(|s| s.counts[j]).sum::<f64>() / stocks)
        .collect();
    ScalingSeries::new(plan.resolutions.clone(), means, "mean")
}

/// Power-law fit `ln M = intercept + exponent·ln N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Resolutions dropped because their count was zero.
    pub excluded: Vec<usize>,
}

impl ScalingFit {
    /// Writes `exponent,intercept,r_squared,points_used`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["exponent", "intercept", "r_squared", "points_used"])?;
        writer.write_record([
            fmt_f64(self.exponent),
            fmt_f64(self.intercept),
            fmt_f64(self.r_squared),
            self.points_used.to_string(),
        ])?;
        writer.flush().map_err(|e| Error::io("<csv writer>", e))
    }
}

/// Unweighted least squares of `ln M` on `ln N`, skipping `M = 0` points.
pub fn fit_exponent(series: &ScalingSeries) -> Result<ScalingFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = Vec::new();
    for (&n, &m) in series.resolutions.iter().zip(&series.counts) {
        if m > 0.0 {
            xs.push((n as f64).ln());
            ys.push(m.ln());
        } else {
            excluded.push(n);
        }
    }
    if !excluded.is_empty() {
        warn!(label = %series.label, ?excluded, "zero maxima counts excluded from the fit");
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints(xs.len()));
    }

    let len = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / len;
    let y_mean = ys.iter().sum::<f64>() / len;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let exponent = sxy / sxx;
    let intercept = y_mean - exponent * x_mean;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let residual = y - (intercept + exponent * x);
        ss_res += residual * residual;
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(ScalingFit {
        exponent,
        intercept,
        r_squared,
        points_used: xs.len(),
        excluded,
    })
}

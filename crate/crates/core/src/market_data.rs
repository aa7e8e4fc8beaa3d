//! Daily closing-price series: loading, validation and synthetic fixtures.
//!
//! Simulation time is the 1-based trading-day index `t = 1..T`. Calendar
//! dates are carried along for I/O only; gaps between dates are invisible to
//! the strategy engine.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate, Weekday};
use rayon::prelude::*;

use crate::error::{Error, Result};

const DATE_FORMAT: &str = "%Y-%m-%d";

/// One stock's closing prices indexed by trading day.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    ticker: String,
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
}

impl PriceSeries {
    /// Builds a validated series. Rows must already be in strictly increasing
    /// date order.
    pub fn new(ticker: impl Into<String>, dates: Vec<NaiveDate>, prices: Vec<f64>) -> Result<Self> {
        if dates.len() != prices.len() {
            return Err(Error::InvalidSeries(format!(
                "{} dates but {} prices",
                dates.len(),
                prices.len()
            )));
        }
        if prices.len() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                actual: prices.len(),
            });
        }
        for (date, &price) in dates.iter().zip(&prices) {
            if !(price > 0.0) || !price.is_finite() {
                return Err(Error::NonPositivePrice {
                    date: date.format(DATE_FORMAT).to_string(),
                    price,
                });
            }
        }
        for pair in dates.windows(2) {
            if pair[1] == pair[0] {
                return Err(Error::DuplicateDate(pair[0].format(DATE_FORMAT).to_string()));
            }
            if pair[1] < pair[0] {
                return Err(Error::InvalidSeries(format!(
                    "dates out of order at {}",
                    pair[1].format(DATE_FORMAT)
                )));
            }
        }
        Ok(Self {
            ticker: ticker.into(),
            dates,
            prices,
        })
    }

    /// Builds a series from prices alone, assigning consecutive weekdays
    /// starting 2000-01-03.
    pub fn from_prices(ticker: impl Into<String>, prices: Vec<f64>) -> Result<Self> {
        let dates = weekday_calendar(prices.len());
        Self::new(ticker, dates, prices)
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    /// Number of trading days `T`.
    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn first_price(&self) -> f64 {
        self.prices[0]
    }

    pub fn last_price(&self) -> f64 {
        self.prices[self.prices.len() - 1]
    }

    /// Price at 1-based trading day `t`.
    pub fn price_at(&self, t: usize) -> f64 {
        self.prices[t - 1]
    }

    /// Rows `start..=end` (1-based, inclusive) as a new series re-indexed
    /// from `t = 1`.
    pub fn window(&self, start: usize, end: usize) -> Result<Self> {
        if start < 1 || end > self.len() || start >= end {
            return Err(Error::InvalidParams(format!(
                "window [{start}, {end}] outside series of length {}",
                self.len()
            )));
        }
        Ok(Self {
            ticker: self.ticker.clone(),
            dates: self.dates[start - 1..end].to_vec(),
            prices: self.prices[start - 1..end].to_vec(),
        })
    }

    pub fn with_ticker(mut self, ticker: impl Into<String>) -> Self {
        self.ticker = ticker.into();
        self
    }

    /// Writes the series in the `date,close` format read by [`load_series`].
    /// Prices use the shortest decimal that round-trips exactly.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["date", "close"])?;
        for (date, price) in self.dates.iter().zip(&self.prices) {
            writer.write_record([date.format(DATE_FORMAT).to_string(), format!("{price}")])?;
        }
        writer.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// `n` consecutive weekdays starting Monday 2000-01-03.
pub fn weekday_calendar(n: usize) -> Vec<NaiveDate> {
    let mut dates = Vec::with_capacity(n);
    let mut day = NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date");
    while dates.len() < n {
        if !matches!(day.weekday(), Weekday::Sat | Weekday::Sun) {
            dates.push(day);
        }
        day = day.succ_opt().expect("date in range");
    }
    dates
}

/// Reads a `date,close` CSV. Rows may appear in any order; the result is
/// sorted by date.
pub fn load_series(path: &Path, ticker: &str) -> Result<PriceSeries> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader.headers()?.clone();
    let header_ok =
        headers.len() == 2 && headers[0].eq_ignore_ascii_case("date") && headers[1].eq_ignore_ascii_case("close");
    if !header_ok {
        return Err(Error::MalformedRow {
            path: path.to_path_buf(),
            line: 1,
            reason: format!(
                "expected header `date,close`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let malformed = |reason: String| Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let record = record.map_err(|e| malformed(e.to_string()))?;
        if record.len() != 2 {
            return Err(malformed(format!("expected 2 fields, found {}", record.len())));
        }
        let date = NaiveDate::parse_from_str(&record[0], DATE_FORMAT)
            .map_err(|e| malformed(format!("bad date `{}`: {e}", &record[0])))?;
        let price: f64 = record[1]
            .parse()
            .map_err(|e| malformed(format!("bad price `{}`: {e}", &record[1])))?;
        if price.is_nan() || price.is_infinite() {
            return Err(malformed(format!("non-finite price `{}`", &record[1])));
        }
        if price <= 0.0 {
            return Err(Error::NonPositivePrice {
                date: date.format(DATE_FORMAT).to_string(),
                price,
            });
        }
        rows.push((date, price));
    }

    rows.sort_by_key(|&(date, _)| date);
    let (dates, prices): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    PriceSeries::new(ticker, dates, prices)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlignmentPolicy {
    #[default]
    RequireEqualLength,
    TruncateToCommon,
}

/// A set of single-stock series analysed side by side.
#[derive(Debug, Clone)]
pub struct Universe {
    series: Vec<PriceSeries>,
    policy: AlignmentPolicy,
}

impl Universe {
    /// Validates ticker uniqueness and applies the alignment policy.
    pub fn new(series: Vec<PriceSeries>, policy: AlignmentPolicy) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::InvalidSeries("universe has no series".into()));
        }
        let mut seen = HashSet::new();
        for s in &series {
            if !seen.insert(s.ticker()) {
                return Err(Error::InvalidSeries(format!("duplicate ticker {}", s.ticker())));
            }
        }
        let series = match policy {
            AlignmentPolicy::RequireEqualLength => {
                let len = series[0].len();
                if let Some(other) = series.iter().find(|s| s.len() != len) {
                    return Err(Error::UnequalLengths(format!(
                        "{} has {} days, {} has {}",
                        series[0].ticker(),
                        len,
                        other.ticker(),
                        other.len()
                    )));
                }
                series
            }
            AlignmentPolicy::TruncateToCommon => truncate_to_common(series)?,
        };
        Ok(Self { series, policy })
    }

    pub fn series(&self) -> &[PriceSeries] {
        &self.series
    }

    pub fn policy(&self) -> AlignmentPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }
}

fn truncate_to_common(series: Vec<PriceSeries>) -> Result<Vec<PriceSeries>> {
    let mut common: BTreeSet<NaiveDate> = series[0].dates().iter().copied().collect();
    for s in &series[1..] {
        let dates: BTreeSet<NaiveDate> = s.dates().iter().copied().collect();
        common = common.intersection(&dates).copied().collect();
    }
    series
        .into_iter()
        .map(|s| {
            let (dates, prices) = s
                .dates()
                .iter()
                .zip(s.prices())
                .filter(|(d, _)| common.contains(d))
                .map(|(&d, &p)| (d, p))
                .unzip();
            PriceSeries::new(s.ticker(), dates, prices)
        })
        .collect()
}

/// Loads every `*.csv` file in `dir` (sorted by file name); the ticker is the
/// file stem.
pub fn load_universe(dir: &Path, policy: AlignmentPolicy) -> Result<Universe> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_csv = path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
        if path.is_file() && is_csv {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::EmptyUniverse(dir.to_path_buf()));
    }
    paths.sort();

    let series = paths
        .par_iter()
        .map(|path| {
            let ticker = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            load_series(path, &ticker)
        })
        .collect::<Result<Vec<_>>>()?;
    Universe::new(series, policy)
}

/// Deterministic closed-form fixture series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SyntheticKind {
    /// `x(t) = level`
    Constant { level: f64 },
    /// `x(t) = start + slope·(t−1)`
    Linear { start: f64, slope: f64 },
    /// `x(t) = start·ratio^(t−1)`
    Geometric { start: f64, ratio: f64 },
    /// `x(t) = level + amplitude·sin(2πt/period)`, with `level > amplitude ≥ 0`
    Sinusoid { level: f64, amplitude: f64, period: f64 },
}

impl SyntheticKind {
    fn value(&self, t: usize) -> f64 {
        let t = t as f64;
        match *self {
            SyntheticKind::Constant { level } => level,
            SyntheticKind::Linear { start, slope } => start + slope * (t - 1.0),
            SyntheticKind::Geometric { start, ratio } => start * ratio.powf(t - 1.0),
            SyntheticKind::Sinusoid {
                level,
                amplitude,
                period,
            } => level + amplitude * (2.0 * std::f64::consts::PI * t / period).sin(),
        }
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        match *self {
            SyntheticKind::Sinusoid {
                level,
                amplitude,
                period,
            } => {
                if !(amplitude >= 0.0 && level > amplitude) {
                    return bad("sinusoid needs level > amplitude >= 0");
                }
                if !(period > 0.0) {
                    return bad("sinusoid period must be positive");
                }
                Ok(())
            }
            SyntheticKind::Geometric { ratio, .. } if !(ratio > 0.0) => bad("geometric ratio must be positive"),
            _ => Ok(()),
        }
    }
}

/// Generates `len` trading days of the given closed form.
pub fn synthesize_series(kind: SyntheticKind, len: usize) -> Result<PriceSeries> {
    if len < 2 {
        return Err(Error::SeriesTooShort { needed: 2, actual: len });
    }
    kind.check()?;
    let prices: Vec<f64> = (1..=len).map(|t| kind.value(t)).collect();
    let ticker = match kind {
        SyntheticKind::Constant { .. } => "constant",
        SyntheticKind::Linear { .. } => "linear",
        SyntheticKind::Geometric { .. } => "geometric",
        SyntheticKind::Sinusoid { .. } => "sinusoid",
    };
    PriceSeries::from_prices(ticker, prices)
}

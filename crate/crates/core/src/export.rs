//! CSV writers for landscapes and maxima.
//!
//! Floats are written with 17 significant digits so every value parses back
//! to the identical `f64`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::landscape::{LandscapeGrid, MaximaResult};

/// Formats with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn finish<W: Write>(mut writer: csv::Writer<W>) -> Result<()> {
    writer.flush().map_err(|e| Error::io("<csv writer>", e))
}

/// Matrix layout: header `p\q,<q centers...>`, then one row per p center.
pub fn write_landscape_matrix<W: Write>(grid: &LandscapeGrid, out: W) -> Result<()> {
    let n = grid.spec().n;
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["p\\q".to_string()];
    header.extend((0..n).map(|l| fmt_f64(grid.spec().q_center(l))));
    writer.write_record(&header)?;
    for k in 0..n {
        let mut row = Vec::with_capacity(n + 1);
        row.push(fmt_f64(grid.spec().p_center(k)));
        row.extend(grid.row(k).iter().map(|&v| fmt_f64(v)));
        writer.write_record(&row)?;
    }
    finish(writer)
}

/// Long layout: `p,q,profit`, p-major.
pub fn write_landscape_long<W: Write>(grid: &LandscapeGrid, out: W) -> Result<()> {
    let n = grid.spec().n;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["p", "q", "profit"])?;
    for k in 0..n {
        let p = fmt_f64(grid.spec().p_center(k));
        for l in 0..n {
            writer.write_record([p.clone(), fmt_f64(grid.spec().q_center(l)), fmt_f64(grid.profit(k, l))])?;
        }
    }
    finish(writer)
}

/// `k,l,p,q,profit` per local maximum; `k`, `l` are 0-based cell indices.
pub fn write_maxima<W: Write>(grid: &LandscapeGrid, maxima: &MaximaResult, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["k", "l", "p", "q", "profit"])?;
    for &(k, l) in &maxima.locations {
        writer.write_record([
            k.to_string(),
            l.to_string(),
            fmt_f64(grid.spec().p_center(k)),
            fmt_f64(grid.spec().q_center(l)),
            fmt_f64(grid.profit(k, l)),
        ])?;
    }
    finish(writer)
}

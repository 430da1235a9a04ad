use std::fs::File;
use std::path::Path;

use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::experiment::ScatterRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecileRow {
    pub decile: usize,
    pub q_min: u64,
    pub q_max: u64,
    pub count: usize,
    /// Fraction within each band, in the order of [`ErrorTable::bands`].
    pub coverage: Vec<f64>,
}

/// Band coverage overall and per `Q(I)` decile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTable {
    pub bands: Vec<f64>,
    pub queries: usize,
    pub overall: Vec<f64>,
    pub deciles: Vec<DecileRow>,
}

pub fn read_scatter(path: &Path) -> Result<Vec<ScatterRecord>> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut out = Vec::new();
    for (i, rec) in reader.deserialize::<ScatterRecord>().enumerate() {
        let rec = rec.map_err(|e| HarnessError::Data(format!("{}: row {}: {e}", path.display(), i + 1)))?;
        let expect = (rec.q_of_i as f64 - rec.est).abs();
        if !rec.est.is_finite() || (rec.abs_error - expect).abs() > 1e-9 * expect.max(1.0) {
            return Err(HarnessError::Data(format!(
                "{}: row {}: abs_error {} inconsistent with q_of_i and est",
                path.display(),
                i + 1,
                rec.abs_error
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

fn check_bands(bands: &[f64]) -> Result<()> {
    if bands.is_empty() || bands.iter().any(|b| !b.is_finite() || *b < 0.0) {
        return Err(HarnessError::Config("bands must be a nonempty list of nonnegative widths".into()));
    }
    Ok(())
}

pub fn summarize_records(records: &[ScatterRecord], bands: &[f64]) -> Result<ErrorTable> {
    check_bands(bands)?;
    let cover = |rs: &[&ScatterRecord]| -> Vec<f64> {
        bands
            .iter()
            .map(|&b| {
                if rs.is_empty() {
                    0.0
                } else {
                    rs.iter().filter(|r| r.abs_error <= b).count() as f64 / rs.len() as f64
                }
            })
            .collect()
    };
    let mut sorted: Vec<&ScatterRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.q_of_i);
    let n = sorted.len();
    let deciles = (0..10)
        .filter_map(|d| {
            let part = &sorted[d * n / 10..(d + 1) * n / 10];
            (!part.is_empty()).then(|| DecileRow {
                decile: d + 1,
                q_min: part[0].q_of_i,
                q_max: part[part.len() - 1].q_of_i,
                count: part.len(),
                coverage: cover(part),
            })
        })
        .collect();
    Ok(ErrorTable { bands: bands.to_vec(), queries: n, overall: cover(&sorted), deciles })
}

/// Coverage table for a `scatter.csv` file.
pub fn summarize_errors(path: &Path, bands: &[f64]) -> Result<ErrorTable> {
    summarize_records(&read_scatter(path)?, bands)
}

impl ErrorTable {
    /// Plain-text rendering, one line per decile.
    pub fn render(&self) -> String {
        let mut s = String::from("decile     Q(I) range        count");
        for b in &self.bands {
            s += &format!("  <={b:<8}");
        }
        s.push('\n');
        let cells = |c: &[f64]| c.iter().map(|f| format!("  {:<10.4}", f)).collect::<String>();
        for d in &self.deciles {
            s += &format!("{:<6} {:>8}..{:<8} {:>8}{}\n", d.decile, d.q_min, d.q_max, d.count, cells(&d.coverage));
        }
        s += &format!("{:<6} {:>18} {:>8}{}\n", "all", "", self.queries, cells(&self.overall));
        s
    }
}

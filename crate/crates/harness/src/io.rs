//! Relation CSV files and the published view bundle.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use relpriv::anonymizer::{stream_rng, MechanismParams, PublishedView, SHUFFLE_STREAM};
use relpriv::model::{DomainDescriptor, Relation, Schema, Tuple, Value};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const VIEW_FILE: &str = "view.csv";
pub const DOMAIN_FILE: &str = "domain.json";
pub const PARAMS_FILE: &str = "params.json";

/// A relation read from disk with its load statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub relation: Relation,
    /// Data rows read, including duplicates and dropped rows.
    pub rows: usize,
    pub duplicates: usize,
    /// Rows skipped for holding the missing-value token.
    pub dropped: usize,
}

/// Reads a CSV file with a header row naming every schema attribute once, in any order.
pub fn load_relation(path: &Path, schema: &Schema) -> Result<Loaded> {
    load_relation_with(path, schema, None)
}

pub fn load_relation_with(path: &Path, schema: &Schema, missing_token: Option<&str>) -> Result<Loaded> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = reader.headers()?.clone();
    // column index of each schema attribute
    let mut columns = vec![None; schema.arity()];
    for (col, name) in header.iter().enumerate() {
        let attr = schema
            .index_of(name)
            .ok_or_else(|| HarnessError::Data(format!("{}: unknown attribute `{name}` in header", path.display())))?;
        if columns[attr].replace(col).is_some() {
            return Err(HarnessError::Data(format!("{}: attribute `{name}` appears twice in header", path.display())));
        }
    }
    let columns: Vec<usize> = columns
        .into_iter()
        .enumerate()
        .map(|(attr, c)| {
            c.ok_or_else(|| {
                let name = &schema.attribute(attr).name;
                HarnessError::Data(format!("{}: header lacks attribute `{name}`", path.display()))
            })
        })
        .collect::<Result<_>>()?;

    let mut out = Loaded { relation: Relation::new(schema.clone()), rows: 0, duplicates: 0, dropped: 0 };
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        out.rows += 1;
        if missing_token.is_some_and(|tok| record.iter().any(|f| f == tok)) {
            out.dropped += 1;
            continue;
        }
        if record.len() != header.len() {
            return Err(HarnessError::Data(format!(
                "{}: row {row} has {} fields, header has {}",
                path.display(),
                record.len(),
                header.len()
            )));
        }
        let values = columns
            .iter()
            .enumerate()
            .map(|(attr, &col)| {
                let a = schema.attribute(attr);
                Value::parse(&record[col], a.kind).ok_or_else(|| HarnessError::Cell {
                    path: path.to_owned(),
                    row,
                    column: a.name.clone(),
                    msg: format!("cannot parse `{}` as {}", &record[col], a.kind),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if !out.relation.insert(Tuple::new(values))? {
            out.duplicates += 1;
        }
    }
    Ok(out)
}

/// Writes tuples under a header of the schema's attribute names.
pub fn write_relation_csv<'a>(path: &Path, schema: &Schema, tuples: impl IntoIterator<Item = &'a Tuple>) -> Result<()> {
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(schema.names())?;
    for t in tuples {
        w.write_record(t.values().iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerInputs {
    pub k: f64,
    pub gamma: f64,
    pub policy: String,
    pub d: f64,
    pub r: f64,
    pub failure_prob: f64,
}

/// Contents of `params.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub n: u64,
    pub m: u64,
    pub expected_view_size: f64,
    pub view_size: u64,
    pub planner: Option<PlannerInputs>,
}

/// Writes `value` as pretty JSON to `path`.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))
}

/// Writes `view.csv` (rows shuffled with the view's seed), `domain.json` and `params.json`.
pub fn write_view_bundle(dir: &Path, view: &PublishedView, params_file: &ParamsFile) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut rows: Vec<Tuple> = view.tuples().collect();
    rows.shuffle(&mut stream_rng(view.seed(), SHUFFLE_STREAM));
    write_relation_csv(&dir.join(VIEW_FILE), view.domain().schema(), &rows)?;
    write_json(&dir.join(DOMAIN_FILE), view.domain())?;
    write_json(&dir.join(PARAMS_FILE), params_file)
}

/// Reads only the `params.json` of a bundle.
pub fn read_params_file(dir: &Path) -> Result<ParamsFile> {
    read_json(&dir.join(PARAMS_FILE))
}

/// Reads a bundle written by [`write_view_bundle`].
pub fn read_view_bundle(dir: &Path) -> Result<(PublishedView, ParamsFile)> {
    let domain: DomainDescriptor = read_json(&dir.join(DOMAIN_FILE))?;
    let params_file: ParamsFile = read_json(&dir.join(PARAMS_FILE))?;
    let loaded = load_relation(&dir.join(VIEW_FILE), domain.schema())?;
    if loaded.duplicates > 0 {
        return Err(HarnessError::Data(format!("{}: duplicate rows", dir.join(VIEW_FILE).display())));
    }
    let params = MechanismParams::new(params_file.alpha, params_file.beta)?;
    let view = PublishedView::new(domain, &loaded.relation, params, params_file.seed)?;
    Ok((view, params_file))
}

pub(crate) fn create_file(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| HarnessError::io(path, e))
}

pub(crate) fn finish(path: &Path, mut w: impl Write) -> Result<()> {
    w.flush().map_err(|e| HarnessError::io(path, e))
}

//! Experiment reports and their JSON/CSV serialization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::stats::summarize;

/// Discard rates at or above this fraction raise a warning flag.
pub const DISCARD_WARN: f64 = 0.01;
/// Discard rates at or above this fraction fail the run.
pub const DISCARD_FAIL: f64 = 0.05;

/// A named numeric table, one row per record.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscardStatus {
    Ok,
    Warning,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub code_version: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    /// Replicates attempted, including discarded ones.
    pub replicates: usize,
    pub mean: f64,
    pub se: f64,
    pub ci99: [f64; 2],
    pub discarded: usize,
    pub discard_status: DiscardStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<f64>,
    /// Named scalar or structured results beyond the headline mean.
    #[serde(default)]
    pub results: BTreeMap<String, Value>,
    /// Invariant checks evaluated by the experiment.
    #[serde(default)]
    pub checks: BTreeMap<String, bool>,
    #[serde(default)]
    pub tables: BTreeMap<String, Table>,
    /// Per-replicate values; written only on request.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
    /// Seconds; kept out of files so that reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            code_version: crate::CODE_VERSION.to_string(),
            parameters: BTreeMap::new(),
            seed,
            replicates: 0,
            mean: f64::NAN,
            se: f64::NAN,
            ci99: [f64::NAN, f64::NAN],
            discarded: 0,
            discard_status: DiscardStatus::Ok,
            theory: None,
            results: BTreeMap::new(),
            checks: BTreeMap::new(),
            tables: BTreeMap::new(),
            values: Vec::new(),
            wall_time: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    /// Fills replicate count, mean, SE and CI from accepted values.
    pub fn with_values(mut self, values: Vec<f64>, discarded: usize) -> Self {
        let s = summarize(&values);
        self.replicates = values.len() + discarded;
        self.mean = s.mean;
        self.se = s.se;
        self.ci99 = [s.ci99.0, s.ci99.1];
        self.discarded = discarded;
        self.discard_status = discard_status(discarded, self.replicates);
        self.values = values;
        self
    }

    /// A single deterministic value (no sampling error).
    pub fn with_exact(mut self, value: f64) -> Self {
        self.replicates = 1;
        self.mean = value;
        self.se = 0.0;
        self.ci99 = [value, value];
        self
    }

    pub fn theory(mut self, t: f64) -> Self {
        self.theory = Some(t);
        self
    }

    pub fn result(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn check(mut self, key: &str, ok: bool) -> Self {
        self.checks.insert(key.to_string(), ok);
        self
    }

    pub fn table(mut self, name: &str, t: Table) -> Self {
        self.tables.insert(name.to_string(), t);
        self
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.values().all(|&ok| ok)
    }

    /// `|mean − theory| ≤ k·SE` (false without a theory value).
    pub fn within_se(&self, k: f64) -> bool {
        self.theory.is_some_and(|t| (self.mean - t).abs() <= k * self.se)
    }
}

pub fn discard_status(discarded: usize, replicates: usize) -> DiscardStatus {
    if replicates == 0 {
        return DiscardStatus::Ok;
    }
    let rate = discarded as f64 / replicates as f64;
    if rate >= DISCARD_FAIL {
        DiscardStatus::Fail
    } else if rate >= DISCARD_WARN {
        DiscardStatus::Warning
    } else {
        DiscardStatus::Ok
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = round12(n.as_f64().expect("f64"));
                if let Some(m) = serde_json::Number::from_f64(x) {
                    *n = m;
                }
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_value),
        Value::Object(m) => m.values_mut().for_each(round_value),
        _ => {}
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::param("format", format!("{other:?} is not json or csv"))),
        }
    }
}

/// Columns of the CSV summary row.
pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "seed",
    "replicates",
    "mean",
    "se",
    "ci99_low",
    "ci99_high",
    "discarded",
    "theory",
    "parameters",
    "code_version",
];

pub fn to_json(r: &ExperimentReport, raw: bool) -> Result<String> {
    let mut v = serde_json::to_value(r)?;
    if !raw {
        if let Value::Object(m) = &mut v {
            m.remove("values");
        }
    }
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{}", round12(x))
    }
}

pub fn to_csv(r: &ExperimentReport, raw: bool) -> Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::param("csv", e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let mut params = serde_json::to_value(&r.parameters)?;
    round_value(&mut params);
    w.write_record([
        r.experiment.clone(),
        r.seed.to_string(),
        r.replicates.to_string(),
        fmt_num(r.mean),
        fmt_num(r.se),
        fmt_num(r.ci99[0]),
        fmt_num(r.ci99[1]),
        r.discarded.to_string(),
        r.theory.map(fmt_num).unwrap_or_default(),
        serde_json::to_string(&params)?,
        r.code_version.clone(),
    ])
    .map_err(csv_err)?;
    for (name, t) in &r.tables {
        w.write_record([format!("# table {name}")]).map_err(csv_err)?;
        w.write_record(&t.columns).map_err(csv_err)?;
        for row in &t.rows {
            w.write_record(row.iter().map(|x| fmt_num(*x))).map_err(csv_err)?;
        }
    }
    if raw && !r.values.is_empty() {
        w.write_record(["# values"]).map_err(csv_err)?;
        for v in &r.values {
            w.write_record([fmt_num(*v)]).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::param("csv", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn emit_report(r: &ExperimentReport, format: Format, path: &Path, raw: bool) -> Result<()> {
    let text = match format {
        Format::Json => to_json(r, raw)?,
        Format::Csv => to_csv(r, raw)?,
    };
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

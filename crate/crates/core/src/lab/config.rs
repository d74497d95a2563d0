//! Experiment parameters: a JSON object, optionally loaded from a file, with
//! command-line overrides layered on top.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, Value>,
    resolved: RefCell<BTreeMap<String, Value>>,
}

impl Config {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        match serde_json::from_str::<Value>(s)? {
            Value::Object(map) => Ok(Config {
                values: map.into_iter().collect(),
                ..Default::default()
            }),
            other => Err(Error::param("config", format!("expected a JSON object, got {other}"))),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&s)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.values.insert(key.to_string(), value.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.set(key, value);
        self
    }

    /// Entries of `other` replace entries of `self`.
    pub fn merge(&mut self, other: &Config) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    /// Parameters actually consumed, with defaults filled in.
    pub fn resolved(&self) -> BTreeMap<String, Value> {
        self.resolved.borrow().clone()
    }

    fn record(&self, key: &str, v: Value) {
        self.resolved.borrow_mut().insert(key.to_string(), v);
    }

    pub fn seed(&self) -> Result<u64> {
        self.u64("seed", DEFAULT_SEED)
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64> {
        let v = match self.values.get(key) {
            None => default,
            Some(v) => v
                .as_u64()
                .or_else(|| v.as_f64().filter(|f| f.fract() == 0.0 && *f >= 0.0 && *f < 2f64.powi(53)).map(|f| f as u64))
                .ok_or_else(|| Error::param(key, format!("expected a non-negative integer, got {v}")))?,
        };
        self.record(key, v.into());
        Ok(v)
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64(key, default as u64)? as usize)
    }

    /// Like [`Config::usize`] but rejects values outside `[lo, hi]`.
    pub fn usize_in(&self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize> {
        let v = self.usize(key, default)?;
        if v < lo || v > hi {
            return Err(Error::param(key, format!("{v} outside [{lo}, {hi}]")));
        }
        Ok(v)
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        let v = match self.values.get(key) {
            None => default,
            Some(v) => v
                .as_f64()
                .filter(|f| f.is_finite())
                .ok_or_else(|| Error::param(key, format!("expected a number, got {v}")))?,
        };
        self.record(key, v.into());
        Ok(v)
    }

    /// A single integer or an array of integers.
    pub fn usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        let bad = |v: &Value| Error::param(key, format!("expected an integer or a list of integers, got {v}"));
        let out: Vec<usize> = match self.values.get(key) {
            None => default.to_vec(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_u64().map(|u| u as usize).ok_or_else(|| bad(v)))
                .collect::<Result<_>>()?,
            Some(v) => vec![v.as_u64().ok_or_else(|| bad(v))? as usize],
        };
        if out.is_empty() {
            return Err(Error::param(key, "empty list"));
        }
        self.record(key, out.clone().into());
        Ok(out)
    }

    pub fn string(&self, key: &str, default: &str) -> Result<String> {
        let v = match self.values.get(key) {
            None => default.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(v) => return Err(Error::param(key, format!("expected a string, got {v}"))),
        };
        self.record(key, v.clone().into());
        Ok(v)
    }

    pub fn bool(&self, key: &str, default: bool) -> Result<bool> {
        let v = match self.values.get(key) {
            None => default,
            Some(Value::Bool(b)) => *b,
            Some(v) => return Err(Error::param(key, format!("expected a boolean, got {v}"))),
        };
        self.record(key, v.into());
        Ok(v)
    }

    /// Fails on the first key that no getter has read.
    pub fn finish(&self, experiment: &str) -> Result<()> {
        let used = self.resolved.borrow();
        match self.values.keys().find(|k| !used.contains_key(*k)) {
            Some(k) => Err(Error::param(k.as_str(), format!("not a parameter of '{experiment}'"))),
            None => Ok(()),
        }
    }
}

//! Coupling profiles, transfer tasks and the JSON interchange format.
//!
//! A profile is serialized as
//!
//! ```json
//! {"n": 5, "couplings": [1.0, 2.0, 2.0, 1.0], "meta": {"fitness": "fit1"}}
//! ```
//!
//! Floats are written with the shortest decimal representation that parses
//! back to the identical `f64`, so save followed by load is exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Exchange couplings `J_1 .. J_{N-1}` of an open chain with `N` sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingProfile {
    #[serde(rename = "n")]
    n_sites: usize,
    couplings: Vec<f64>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    meta: Map<String, Value>,
}

impl CouplingProfile {
    /// Validated constructor: `couplings.len() == n_sites - 1`, every value
    /// finite and non-negative.
    pub fn new(n_sites: usize, couplings: Vec<f64>) -> Result<Self> {
        check_shape(n_sites, &couplings)?;
        if let Some((i, j)) = couplings.iter().enumerate().find(|(_, j)| **j < 0.0) {
            return Err(Error::InvalidProfile(format!(
                "coupling J_{} = {j} is negative",
                i + 1
            )));
        }
        Ok(Self {
            n_sites,
            couplings,
            meta: Map::new(),
        })
    }

    /// Like [`CouplingProfile::new`] but keeps negative couplings. Disorder
    /// realizations with large `sigma` can flip the sign of a bond.
    pub(crate) fn new_signed(n_sites: usize, couplings: Vec<f64>) -> Result<Self> {
        check_shape(n_sites, &couplings)?;
        Ok(Self {
            n_sites,
            couplings,
            meta: Map::new(),
        })
    }

    /// Homogeneous chain with every coupling equal to `j`.
    pub fn uniform(n_sites: usize, j: f64) -> Result<Self> {
        Self::new(n_sites, vec![j; n_sites.saturating_sub(1)])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<Value>) -> Self {
        self.meta.insert(key.into(), value.into());
        self
    }

    /// `J_i == J_{N-i}` for every bond, compared exactly.
    pub fn is_centrosymmetric(&self) -> bool {
        let m = self.couplings.len();
        (0..m / 2).all(|i| self.couplings[i] == self.couplings[m - 1 - i])
    }

    /// Mean of `|J_{i+1} - J_i|` over successive bonds; zero for fewer than two bonds.
    pub fn mean_abs_successive_difference(&self) -> f64 {
        if self.couplings.len() < 2 {
            return 0.0;
        }
        let total: f64 = self
            .couplings
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .sum();
        total / (self.couplings.len() - 1) as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and validates the interchange format, reporting the offending
    /// field path on schema violations.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| schema("$", "expected a JSON object"))?;
        let n = obj
            .get("n")
            .ok_or_else(|| schema("n", "missing field"))?
            .as_u64()
            .ok_or_else(|| schema("n", "expected a positive integer"))?;
        if n == 0 {
            return Err(schema("n", "chain must have at least one site"));
        }
        let n = n as usize;
        let raw = obj
            .get("couplings")
            .ok_or_else(|| schema("couplings", "missing field"))?
            .as_array()
            .ok_or_else(|| schema("couplings", "expected an array of numbers"))?;
        if raw.len() != n - 1 {
            return Err(schema(
                "couplings",
                format!("expected n - 1 = {} entries, found {}", n - 1, raw.len()),
            ));
        }
        let mut couplings = Vec::with_capacity(raw.len());
        for (i, v) in raw.iter().enumerate() {
            let j = v
                .as_f64()
                .ok_or_else(|| schema(format!("couplings[{i}]"), "expected a number"))?;
            if !j.is_finite() {
                return Err(schema(format!("couplings[{i}]"), "value is not finite"));
            }
            if j < 0.0 {
                return Err(schema(format!("couplings[{i}]"), "coupling is negative"));
            }
            couplings.push(j);
        }
        let meta = match obj.get("meta") {
            None | Some(Value::Null) => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(schema("meta", "expected an object")),
        };
        Ok(Self {
            n_sites: n,
            couplings,
            meta,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn check_shape(n_sites: usize, couplings: &[f64]) -> Result<()> {
    if n_sites < 1 {
        return Err(Error::InvalidProfile("chain needs at least one site".into()));
    }
    if couplings.len() != n_sites - 1 {
        return Err(Error::InvalidProfile(format!(
            "expected {} couplings for {n_sites} sites, got {}",
            n_sites - 1,
            couplings.len()
        )));
    }
    if let Some((i, j)) = couplings.iter().enumerate().find(|(_, j)| !j.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "coupling J_{} = {j} is not finite",
            i + 1
        )));
    }
    Ok(())
}

fn schema(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        reason: reason.into(),
    }
}

/// Transfer from site 1 to site N at a fixed arrival time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferTask {
    arrival_time: f64,
}

impl TransferTask {
    pub fn new(arrival_time: f64) -> Result<Self> {
        if !(arrival_time.is_finite() && arrival_time > 0.0) {
            return Err(Error::arg(
                "arrival_time",
                format!("must be a positive finite time, got {arrival_time}"),
            ));
        }
        Ok(Self { arrival_time })
    }

    /// `T = multiple * N`.
    pub fn multiple_of_length(n_sites: usize, multiple: f64) -> Result<Self> {
        Self::new(multiple * n_sites as f64)
    }

    pub fn arrival_time(&self) -> f64 {
        self.arrival_time
    }
}

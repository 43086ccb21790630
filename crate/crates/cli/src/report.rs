//! Suite reports: per-check records and numeric tables.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Saturated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: CheckStatus,
    pub measured: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            status: CheckStatus::Pass,
            measured: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn measure(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.into(), value);
        self
    }

    pub fn tolerance(mut self, key: &str, value: f64) -> Self {
        self.tolerances.insert(key.into(), value);
        self
    }

    /// Marks the check failed unless `ok`; a failure always keeps a witness.
    pub fn verdict(mut self, ok: bool, witness: impl FnOnce() -> serde_json::Value) -> Self {
        if !ok {
            self.status = CheckStatus::Fail;
            self.witness = Some(witness());
        }
        self
    }

    pub fn saturated(mut self) -> Self {
        if self.status == CheckStatus::Pass {
            self.status = CheckStatus::Saturated;
        }
        self
    }

    /// A check that could not run at all.
    pub fn error(id: impl Into<String>, message: impl std::fmt::Display) -> Self {
        Self::new(id).verdict(false, || serde_json::json!({ "error": message.to_string() }))
    }
}

/// A numeric table with string cells, emitted as CSV or JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(id: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            id: id.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentStamp {
    pub version: String,
    pub timestamp: u64,
}

impl EnvironmentStamp {
    pub fn now() -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
    pub environment: EnvironmentStamp,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            seed,
            checks: Vec::new(),
            tables: Vec::new(),
            environment: EnvironmentStamp::now(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn table(&self, id: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The report without its timestamp, for replay comparisons.
    pub fn payload(&self) -> String {
        let mut copy = self.clone();
        copy.environment.timestamp = 0;
        copy.to_json()
    }
}

/// Shortest round-trip formatting, so tables are stable across runs.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

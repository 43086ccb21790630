use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawRecord {
    pub law: String,
    pub sample_id: String,
    pub status: LawStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub seed: u64,
    pub records: Vec<LawRecord>,
}

impl LawReport {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            records: Vec::new(),
        }
    }

    /// Appends a record; the witness is only rendered for failures.
    pub fn record(&mut self, law: &str, sample_id: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.records.push(LawRecord {
            law: law.to_string(),
            sample_id: sample_id.to_string(),
            status: if ok { LawStatus::Pass } else { LawStatus::Fail },
            witness: if ok { None } else { Some(witness()) },
        });
    }

    pub fn merge(&mut self, other: LawReport) {
        self.records.extend(other.records);
    }

    pub fn violations(&self) -> impl Iterator<Item = &LawRecord> {
        self.records.iter().filter(|r| r.status == LawStatus::Fail)
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn count(&self, law_prefix: &str) -> usize {
        self.records
            .iter()
            .filter(|r| r.law.starts_with(law_prefix))
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

//! The verification suites. Each suite is a list of independent jobs that
//! run on the rayon pool; their records are merged in check-id order.

pub mod rieffel;
pub mod weyl;

use rayon::prelude::*;

use crate::report::{CheckRecord, SuiteReport, Table};
use crate::{HarnessError, SuiteConfig};

pub const SUITES: [(&str, &str); 6] = [
    ("weyl-laws", "algebra laws and Poisson axioms on random Weyl elements"),
    ("weyl-sdq", "von Neumann and Dirac defects of the Weyl quantization"),
    ("equivalence-weyl", "functor and equivalence laws, round trips and K0 membership"),
    ("rieffel-sdq", "Moyal oracle and defect orders on the phase-space grid"),
    ("rieffel-morphisms", "star-product defects of affine maps and the Rieffel categories"),
    ("weyl-transform", "truncated Weyl transform against operator products"),
];

/// Records and tables produced by one job.
#[derive(Debug, Default, Clone)]
pub struct Outcome {
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn check(record: CheckRecord) -> Self {
        Self {
            checks: vec![record],
            tables: Vec::new(),
        }
    }

    pub fn merge(&mut self, other: Outcome) {
        self.checks.extend(other.checks);
        self.tables.extend(other.tables);
    }
}

impl From<Vec<CheckRecord>> for Outcome {
    fn from(checks: Vec<CheckRecord>) -> Self {
        Self {
            checks,
            tables: Vec::new(),
        }
    }
}

type Job<'a> = Box<dyn Fn() -> Outcome + Send + Sync + 'a>;

fn run_jobs(jobs: Vec<Job<'_>>) -> Outcome {
    let outcomes: Vec<Outcome> = jobs.par_iter().map(|job| job()).collect();
    let mut all = Outcome::default();
    for o in outcomes {
        all.merge(o);
    }
    all.checks.sort_by(|a, b| a.id.cmp(&b.id));
    all.tables.sort_by(|a, b| a.id.cmp(&b.id));
    all
}

/// A per-job seed, so jobs stay independent of scheduling order.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    // FNV-1a over the tag, folded into the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn run_suite(suite: &str, config: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    config.validate()?;
    let jobs: Vec<Job<'_>> = match suite {
        "weyl-laws" => weyl::laws_jobs(config),
        "weyl-sdq" => weyl::sdq_jobs(config),
        "equivalence-weyl" => weyl::equivalence_jobs(config),
        "rieffel-sdq" => rieffel::sdq_jobs(config),
        "rieffel-morphisms" => rieffel::morphism_jobs(config),
        "weyl-transform" => rieffel::transform_jobs(config),
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    };
    let mut outcome = run_jobs(jobs);
    if suite == "rieffel-morphisms" {
        rieffel::star_defect_table(&mut outcome);
    }
    let mut report = SuiteReport::new(suite, config.seed);
    report.checks = outcome.checks;
    report.tables = outcome.tables;
    Ok(report)
}

/// Counts how many samples violate a law and keeps the first witness.
pub(crate) struct Tally {
    pub samples: usize,
    pub violations: usize,
    pub witness: Option<serde_json::Value>,
}

impl Tally {
    pub fn new() -> Self {
        Self {
            samples: 0,
            violations: 0,
            witness: None,
        }
    }

    pub fn observe(&mut self, ok: bool, witness: impl FnOnce() -> serde_json::Value) {
        self.samples += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn into_record(self, id: &str) -> CheckRecord {
        let witness = self.witness;
        CheckRecord::new(id)
            .measure("samples", self.samples as f64)
            .measure("violations", self.violations as f64)
            .tolerance("violations", 0.0)
            .verdict(self.violations == 0, || witness.unwrap_or(serde_json::Value::Null))
    }
}

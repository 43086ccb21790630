//! The JSON suite configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleCounts {
    /// Random elements for the algebra laws.
    pub elements: usize,
    /// Random triples for the Poisson axioms.
    pub triples: usize,
    /// Random generator pairs for the defect checks.
    pub pairs: usize,
    /// Random chains of four arrows for the categorical checks.
    pub chains: usize,
    /// Random sections for the `K_0` check.
    pub sections: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self {
            elements: 1000,
            triples: 500,
            pairs: 100,
            chains: 25,
            sections: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub points: usize,
    pub extent: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: 256,
            extent: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub schema_version: u32,
    /// Filled from the command line when absent from the file.
    #[serde(default)]
    pub suite: Option<String>,
    pub seed: u64,
    #[serde(default)]
    pub samples: SampleCounts,
    /// `hbar` schedule for convergence studies. The Weyl suites default to
    /// `1, 1/2, ..., 1/32` and the Rieffel suites to `0.4, 0.2, 0.1, 0.05`.
    #[serde(default)]
    pub schedule: Option<Vec<f64>>,
    /// Fixed `hbar` for the single-value numeric checks.
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    #[serde(default)]
    pub grid: GridConfig,
    /// Truncation dimensions for the Weyl transform.
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_hbar() -> f64 {
    0.1
}

fn default_dims() -> Vec<usize> {
    vec![32, 64, 128]
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            suite: None,
            seed,
            samples: SampleCounts::default(),
            schedule: None,
            hbar: default_hbar(),
            grid: GridConfig::default(),
            dims: default_dims(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if let Some(schedule) = &self.schedule {
            if schedule.len() < 4 {
                return fail("schedule needs at least four points".into());
            }
            if schedule.iter().any(|h| !h.is_finite() || *h <= 0.0) {
                return fail("schedule values must be positive".into());
            }
            if schedule.windows(2).any(|w| w[1] >= w[0]) {
                return fail("schedule must be strictly decreasing".into());
            }
        }
        if !self.hbar.is_finite() || self.hbar <= 0.0 {
            return fail(format!("hbar must be positive, got {}", self.hbar));
        }
        if self.grid.points < 32 || !self.grid.points.is_power_of_two() {
            return fail(format!("grid.points must be a power of two >= 32, got {}", self.grid.points));
        }
        if !self.grid.extent.is_finite() || self.grid.extent <= 0.0 {
            return fail(format!("grid.extent must be positive, got {}", self.grid.extent));
        }
        if self.dims.len() < 2 || self.dims.iter().any(|&d| d < 16) || self.dims.windows(2).any(|w| w[1] <= w[0]) {
            return fail("dims must be at least two increasing values >= 16".into());
        }
        let s = &self.samples;
        if [s.elements, s.triples, s.pairs, s.chains, s.sections].contains(&0) {
            return fail("sample counts must be positive".into());
        }
        Ok(())
    }
}

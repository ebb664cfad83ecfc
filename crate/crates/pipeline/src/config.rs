use std::path::PathBuf;

use qagait_core::geometry::{AlignConfig, AugConfig};
use qagait_core::qa::{QaConfig, TemplateSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{PipelineError, Result};
use crate::scan::DEFAULT_DEPTH;
use crate::templates::{fixture_templates, load_templates};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateSource {
    /// The generated set for seed 0, built in memory.
    Fixture,
    Dir(PathBuf),
}

impl TemplateSource {
    pub fn parse(s: &str) -> Self {
        if s == "fixture" {
            Self::Fixture
        } else {
            Self::Dir(PathBuf::from(s))
        }
    }

    pub fn load(&self) -> Result<TemplateSet> {
        match self {
            Self::Fixture => Ok(fixture_templates()),
            Self::Dir(dir) => load_templates(dir),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub qa: QaConfig,
    pub aug: AugConfig,
    pub align: AlignConfig,
    pub workers: usize,
    pub seed: u64,
    pub templates: TemplateSource,
    pub depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            qa: QaConfig::default(),
            aug: AugConfig::default(),
            align: AlignConfig::default(),
            workers: 1,
            seed: 0,
            templates: TemplateSource::Fixture,
            depth: DEFAULT_DEPTH,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.qa.validate()?;
        self.aug.validate()?;
        self.align.validate()?;
        if self.workers == 0 {
            return Err(PipelineError::Usage("workers must be >= 1".into()));
        }
        if self.depth == 0 {
            return Err(PipelineError::Usage("depth must be >= 1".into()));
        }
        Ok(())
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| PipelineError::Usage(format!("worker pool: {e}")))
    }
}

/// Seed for one sequence from the global seed and its dataset path, so
/// results do not depend on scheduling.
pub fn sequence_seed(global: u64, seq_path: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(global.to_le_bytes());
    h.update(seq_path.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

pub fn sequence_rng(global: u64, seq_path: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sequence_seed(global, seq_path))
}

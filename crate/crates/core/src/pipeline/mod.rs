//! Batch front-end over JSON Lines manifests.
//!
//! Every command here is deterministic for a fixed seed regardless of the
//! number of worker threads: records carry their own seeds derived from the
//! global one and results are sorted by record id before being written.

mod analysis;
mod manifest;
mod metrics;
mod synth;

pub use analysis::{
    cmd_ablate_thickness, cmd_attention, cmd_correlate, cmd_sweep, read_metric_column,
    AttentionRow, SweepGrid, SweepRow, ThicknessRow, DEFAULT_A_GRID, DEFAULT_B_GRID,
    DEFAULT_R_GRID, DEFAULT_THICKNESS_RADII,
};
pub use manifest::{Manifest, ManifestRecord};
pub use metrics::{
    cmd_metrics, compute_metrics, errors_sidecar_path, MetricsRow, RecordError, RunSummary,
};
pub use synth::{cmd_synth, SynthSource};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::separability::{load_filter_bank, ConvFilterBank, ProbeConfig};
use crate::treelike::TreelikeConfig;

/// Environment variable consulted when no filter bank path is configured.
pub const FILTER_BANK_ENV: &str = "SEGMETRICS_FILTER_BANK";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub treelike: TreelikeConfig,
    /// Objects per averaged datapoint in correlation reports.
    pub group_size: usize,
    pub probe: ProbeConfig,
    /// Square working resolution; `None` keeps native sizes.
    pub resize_to: Option<usize>,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub filter_bank: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            treelike: TreelikeConfig::default(),
            group_size: 5,
            probe: ProbeConfig::default(),
            resize_to: Some(1024),
            seed: 0,
            jobs: 0,
            filter_bank: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.treelike.validate()?;
        self.probe.validate()?;
        if self.group_size == 0 {
            return Err(Error::InvalidConfig("group size must be >= 1".into()));
        }
        if self.resize_to == Some(0) {
            return Err(Error::InvalidConfig("resize target must be >= 1".into()));
        }
        Ok(())
    }

    /// Filter bank from the configured path, then the environment, then a
    /// seeded random bank of the canonical geometry.
    pub fn load_filter_bank(&self) -> Result<ConvFilterBank> {
        let path = self
            .filter_bank
            .clone()
            .or_else(|| std::env::var_os(FILTER_BANK_ENV).map(PathBuf::from));
        match path {
            Some(p) => load_filter_bank(p),
            None => {
                log::warn!(
                    "no filter bank given (--filter-bank or {FILTER_BANK_ENV}); \
                     using a random bank seeded with {}",
                    self.seed
                );
                Ok(ConvFilterBank::random(self.seed))
            }
        }
    }

    pub(crate) fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
    }
}

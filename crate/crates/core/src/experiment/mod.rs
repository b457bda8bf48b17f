//! Experiment driver: configuration, seeded ensembles, sweeps and artifact
//! output.

mod artifacts;
pub mod config;
mod run;
pub mod seeds;

use std::path::PathBuf;

use thiserror::Error;

pub use artifacts::{distribution_csv, entropy_csv, heatmap_csv, joint_csv, phase_csv, write_artifacts};
pub use config::{ConfigError, RunConfig, RunKind, TOPOLOGICAL, TRIVIAL};
pub use run::{
    pair_fields, run, run_pair_replicate, run_single_replicate, single_field, sweep_cell_config, EntropyTable,
    Heatmap, Manifest, PositionDistribution, RunArtifacts,
};

use crate::error::WalkError;
use crate::topology::TopologyError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl ExperimentError {
    /// 2 for configuration errors, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Walk(_) | ExperimentError::Topology(_) => 3,
            ExperimentError::Io { .. } => 1,
        }
    }
}

//! Run manifests: every artifact-producing run writes a
//! `<prefix>.manifest.json` recording the resolved invocation, grids, seeds,
//! tolerances, table checkpoints, and the data files it produced. Outputs use
//! shortest round-trip float formatting, so re-running the stored `argv`
//! (redirecting `--out` if desired) reproduces the data files byte for byte.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;

pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: u32,
    pub command: String,
    /// Invocation as given, without the program name; self-contained replay.
    pub argv: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub beta_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub length_grid: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub alpha_grid: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub epsilon_grid: Vec<f64>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_algorithm: Option<String>,
    /// Table checkpoint files read or written via `IPDSAW_CACHE_DIR`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checkpoints_used: Vec<String>,
    /// Data files this manifest describes, relative to its directory.
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

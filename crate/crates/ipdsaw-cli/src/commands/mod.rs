//! One module per subcommand; each exposes a clap `Args` struct and a
//! `run(&Args, Ctx)` entry point.

pub mod critical_point;
pub mod free_energy;
pub mod gcurve;
pub mod order;
pub mod partition;
pub mod render;
pub mod sample;
pub mod scan;
pub mod selftest;

use ipdsaw::lattice::ModelKind;
use serde::{Deserialize, Serialize};

/// Reference-law choice as a flag value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelArg {
    /// Uniform law on the L-step paths.
    U,
    /// Kinetic (non-uniform) law: 1/3 per east, 1/2 per repeated vertical step.
    Nu,
}

impl From<ModelArg> for ModelKind {
    fn from(value: ModelArg) -> Self {
        match value {
            ModelArg::U => ModelKind::Uniform,
            ModelArg::Nu => ModelKind::NonUniform,
        }
    }
}

/// One JSON line of a sample dump; the stretch vector appears only when
/// requested, keeping default dumps compact.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleRecord {
    pub model: String,
    pub beta: f64,
    pub length: usize,
    pub horizontal_extension: usize,
    pub touches: u64,
    pub vertical_span: u64,
    pub seed: u64,
    pub sample_index: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stretches: Option<Vec<i64>>,
}

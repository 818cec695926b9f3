//! Shared run context: resolved tolerances, artifact plumbing with atomic
//! writes, table provisioning, and manifest assembly.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context as _;
use ipdsaw::lattice::ModelKind;
use ipdsaw::walk::ReturnTable;

use crate::config::Tolerances;
use crate::manifest::{RunManifest, ARTIFACT_VERSION};
use crate::tables;

/// Write `bytes` to `path` via a sibling temp file and rename.
pub fn atomic_write(path: &std::path::Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| anyhow::anyhow!("path {} has no file name", path.display()))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

/// Per-command manifest fields; commands fill what applies.
#[derive(Default)]
pub struct Meta {
    pub command: &'static str,
    pub model: Option<ModelKind>,
    pub beta_grid: Vec<f64>,
    pub length_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub epsilon_grid: Vec<f64>,
    pub seed: Option<u64>,
    pub rng_algorithm: Option<&'static str>,
}

pub struct Ctx {
    pub tol: Tolerances,
    pub jobs: usize,
    pub cell_budget: u64,
    out: Option<(PathBuf, String)>,
    argv: Vec<String>,
    started: Instant,
    checkpoints: Vec<String>,
    outputs: Vec<String>,
}

impl Ctx {
    pub fn new(
        tol: Tolerances,
        jobs: usize,
        cell_budget: u64,
        out: Option<PathBuf>,
        prefix: Option<String>,
        command_name: &str,
        argv: Vec<String>,
    ) -> Self {
        let out = out.map(|dir| (dir, prefix.unwrap_or_else(|| command_name.to_string())));
        Self {
            tol,
            jobs,
            cell_budget,
            out,
            argv,
            started: Instant::now(),
            checkpoints: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Return table at (β, n_max, k_max), through `IPDSAW_CACHE_DIR` if set.
    pub fn table(&mut self, beta: f64, n_max: usize, k_max: usize) -> anyhow::Result<ReturnTable<f64>> {
        tables::load_or_build(beta, n_max, k_max, self.cell_budget, &mut self.checkpoints)
    }

    pub fn record_checkpoints(&mut self, used: Vec<String>) {
        self.checkpoints.extend(used);
    }

    /// Write `<prefix>.<ext>` atomically under `--out`; no-op without `--out`.
    pub fn write_artifact(&mut self, ext: &str, bytes: &[u8]) -> anyhow::Result<Option<PathBuf>> {
        let Some((dir, prefix)) = &self.out else {
            return Ok(None);
        };
        let name = format!("{prefix}.{ext}");
        let path = dir.join(&name);
        atomic_write(&path, bytes)?;
        self.outputs.push(name);
        Ok(Some(path))
    }

    /// Write `<prefix>.manifest.json` describing this run's outputs.
    pub fn finish(mut self, meta: Meta) -> anyhow::Result<()> {
        let Some((dir, prefix)) = self.out.clone() else {
            return Ok(());
        };
        if self.outputs.is_empty() {
            return Ok(());
        }
        self.checkpoints.sort();
        self.checkpoints.dedup();
        let manifest = RunManifest {
            artifact_version: ARTIFACT_VERSION,
            command: meta.command.to_string(),
            argv: self.argv.clone(),
            model: meta.model.map(|m| m.to_string()),
            beta_grid: meta.beta_grid,
            length_grid: meta.length_grid,
            alpha_grid: meta.alpha_grid,
            epsilon_grid: meta.epsilon_grid,
            tolerances: self.tol,
            seed: meta.seed,
            rng_algorithm: meta.rng_algorithm.map(str::to_string),
            checkpoints_used: self.checkpoints.clone(),
            outputs: self.outputs.clone(),
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut body = serde_json::to_string_pretty(&manifest)?;
        body.push('\n');
        atomic_write(&dir.join(format!("{prefix}.manifest.json")), body.as_bytes())?;
        Ok(())
    }
}

/// A failed numeric gate: exit code 1.
pub fn validation_failure(message: String) -> anyhow::Error {
    anyhow::Error::new(ValidationFailure(message))
}

#[derive(Debug)]
pub struct ValidationFailure(pub String);

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "validation failure: {}", self.0)
    }
}

impl std::error::Error for ValidationFailure {}

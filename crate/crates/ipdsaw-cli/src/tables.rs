//! Return-table provisioning with optional on-disk checkpoints.
//!
//! When `IPDSAW_CACHE_DIR` is set, tables are read from (or built and stored
//! into) `ret-<β bits>-<n_max>-<k_max>.ck` under that directory; otherwise
//! they are built in memory. Checkpoints are exact bit-level snapshots, so a
//! cache hit changes nothing downstream.

use std::path::PathBuf;
use std::{env, fs};

use anyhow::Context;
use ipdsaw::walk::{GeometricLaw, ReturnTable, TableSpec};

pub const CACHE_ENV: &str = "IPDSAW_CACHE_DIR";

fn build(beta: f64, n_max: usize, k_max: usize, cell_budget: u64) -> anyhow::Result<ReturnTable<f64>> {
    let law = GeometricLaw::new(beta)?;
    let spec = TableSpec::new(n_max, k_max).with_cell_budget(cell_budget);
    Ok(ReturnTable::build(law, spec)?)
}

/// Load from the cache directory or build (and store) the table; records any
/// checkpoint file touched in `checkpoints`.
pub fn load_or_build(
    beta: f64,
    n_max: usize,
    k_max: usize,
    cell_budget: u64,
    checkpoints: &mut Vec<String>,
) -> anyhow::Result<ReturnTable<f64>> {
    let Some(dir) = env::var_os(CACHE_ENV) else {
        return build(beta, n_max, k_max, cell_budget);
    };
    let dir = PathBuf::from(dir);
    fs::create_dir_all(&dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
    let file = dir.join(format!("ret-{:016x}-{n_max}-{k_max}.ck", beta.to_bits()));
    if file.exists() {
        match ReturnTable::read_checkpoint_file(&file) {
            Ok(table)
                if table.beta() == beta && table.n_max() == n_max && table.k_max() == k_max =>
            {
                checkpoints.push(file.display().to_string());
                return Ok(table);
            }
            // Stale or foreign checkpoint: fall through and rebuild it.
            _ => {}
        }
    }
    let table = build(beta, n_max, k_max, cell_budget)?;
    let tmp = dir.join(format!(
        ".ret-{:016x}-{n_max}-{k_max}.tmp-{}",
        beta.to_bits(),
        std::process::id()
    ));
    table
        .write_checkpoint_file(&tmp)
        .and_then(|()| fs::rename(&tmp, &file).map_err(ipdsaw::walk::WalkError::from))
        .with_context(|| format!("storing checkpoint {}", file.display()))?;
    checkpoints.push(file.display().to_string());
    Ok(table)
}

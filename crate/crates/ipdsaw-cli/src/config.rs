//! Tolerance configuration: one TOML file governs every numeric gate so a
//! run's acceptance thresholds are auditable; command-line flags override.

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// All tolerances with their defaults.
///
/// ```toml
/// [tolerances]
/// representation = 1e-10   # route agreement |Δ log Z| in `partition`
/// critical_routes = 1e-10  # bisection vs cubic β_c agreement
/// growth = 1e-3            # |𝒲_{L+1}|/|𝒲_L| distance from 1+√2
/// g_zero = 1e-12           # |g(0) + log c_β|
/// excess_floor = 1e-9      # numerical zero for f̃ phase labels
/// ```
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub representation: f64,
    pub critical_routes: f64,
    pub growth: f64,
    pub g_zero: f64,
    pub excess_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            representation: 1e-10,
            critical_routes: 1e-10,
            growth: 1e-3,
            g_zero: 1e-12,
            excess_floor: 1e-9,
        }
    }
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    tolerances: Tolerances,
}

/// Defaults, or the `[tolerances]` section of `path` when given.
pub fn load(path: Option<&Path>) -> anyhow::Result<Tolerances> {
    let Some(path) = path else {
        return Ok(Tolerances::default());
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let parsed: ConfigFile = toml::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    Ok(parsed.tolerances)
}

//! `render`: one record of a sample dump as an SVG figure.

use std::fs;
use std::path::PathBuf;

use anyhow::Context as _;
use ipdsaw::lattice::StretchConfig;

use crate::app::{atomic_write, validation_failure};
use crate::manifest::{RunManifest, ARTIFACT_VERSION};
use crate::svg;

use super::SampleRecord;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// JSONL sample dump (records must carry stretches; see `sample --stretches`).
    #[arg(long)]
    pub input: PathBuf,
    /// Which record of the dump to draw.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Output SVG path.
    #[arg(long)]
    pub output: PathBuf,
}

pub fn run(args: &Args, argv: Vec<String>, tolerances: crate::config::Tolerances) -> anyhow::Result<()> {
    let started = std::time::Instant::now();
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let line = text
        .lines()
        .nth(args.index)
        .ok_or_else(|| {
            validation_failure(format!(
                "dump has fewer than {} records",
                args.index + 1
            ))
        })?;
    let record: SampleRecord = serde_json::from_str(line)
        .with_context(|| format!("parsing record {} of {}", args.index, args.input.display()))?;
    let Some(stretches) = record.stretches else {
        return Err(validation_failure(
            "record has no stretch vector; re-run `sample` with --stretches".to_string(),
        ));
    };
    let config = StretchConfig::new(stretches)
        .map_err(|e| validation_failure(format!("invalid stretch vector in dump: {e}")))?;

    let caption = format!(
        "model {}  β = {}  L = {}  N = {}  touches = {}  span = {}",
        record.model,
        record.beta,
        record.length,
        record.horizontal_extension,
        record.touches,
        record.vertical_span
    );
    let body = svg::render(&config, &caption);
    atomic_write(&args.output, body.as_bytes())?;
    println!("wrote {}", args.output.display());

    // Sidecar manifest next to the figure.
    let file_name = args
        .output
        .file_name()
        .ok_or_else(|| anyhow::anyhow!("output path has no file name"))?
        .to_string_lossy()
        .to_string();
    let manifest = RunManifest {
        artifact_version: ARTIFACT_VERSION,
        command: "render".to_string(),
        argv,
        model: Some(record.model.clone()),
        beta_grid: vec![record.beta],
        length_grid: vec![record.length],
        alpha_grid: Vec::new(),
        epsilon_grid: Vec::new(),
        tolerances,
        seed: Some(record.seed),
        rng_algorithm: None,
        checkpoints_used: Vec::new(),
        outputs: vec![file_name],
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let mut body = serde_json::to_string_pretty(&manifest)?;
    body.push('\n');
    atomic_write(&args.output.with_extension("manifest.json"), body.as_bytes())?;
    Ok(())
}

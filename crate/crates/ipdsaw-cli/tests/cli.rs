//! End-to-end binary tests: exit codes, determinism, manifest replay, and
//! artifact formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ipdsaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipdsaw"))
        .args(args)
        .env_remove("IPDSAW_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn partition_agrees_and_exits_zero() {
    let output = ipdsaw(&["partition", "--length", "10", "--beta", "1.0", "--model", "u"]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("agreement: ok"), "{text}");
    assert!(text.contains("log Z (brute force)"), "{text}");
}

#[test]
fn partition_skips_brute_force_beyond_cutoff() {
    let output = ipdsaw(&["partition", "--length", "20", "--beta", "0.8", "--model", "nu"]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    assert!(stdout(&output).contains("skipped"), "{}", stdout(&output));
}

#[test]
fn usage_error_exits_two() {
    let output = ipdsaw(&["partition", "--length", "10", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_sixty_four() {
    let output = ipdsaw(&["gcurve", "--beta", "1.0", "--cell-budget", "100"]);
    assert_eq!(output.status.code(), Some(64), "{output:?}");
}

#[test]
fn length_cap_refusal_exits_sixty_four() {
    let output = ipdsaw(&[
        "sample", "--length", "300", "--beta", "1.0", "--model", "nu", "--seed", "1",
    ]);
    assert_eq!(output.status.code(), Some(64), "{output:?}");
}

#[test]
fn critical_point_reports_both_routes() {
    let output = ipdsaw(&["critical-point", "--model", "nu"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("1.000696220996"), "{text}");
    assert!(text.contains("cubic"), "{text}");
}

#[test]
fn sample_dump_is_deterministic_and_manifest_replays() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let run = |dir: &Path| {
        let output = ipdsaw(&[
            "sample", "--length", "16", "--beta", "1.1", "--model", "nu", "--seed", "9",
            "--count", "25", "--stretches", "--out", dir.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0), "{output:?}");
    };
    run(dir_a.path());

    // Replay the argv stored in the manifest, redirecting --out.
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir_a.path().join("sample.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["rng_algorithm"], "chacha8");
    assert_eq!(manifest["seed"], 9);
    let argv: Vec<String> = manifest["argv"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let replay_args: Vec<String> = {
        let mut out_flag = false;
        argv.iter()
            .map(|a| {
                if out_flag {
                    out_flag = false;
                    dir_b.path().to_str().unwrap().to_string()
                } else {
                    out_flag = a == "--out";
                    a.clone()
                }
            })
            .collect()
    };
    let output = Command::new(env!("CARGO_BIN_EXE_ipdsaw"))
        .args(&replay_args)
        .env_remove("IPDSAW_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");

    let bytes_a = fs::read(dir_a.path().join("sample.jsonl")).unwrap();
    let bytes_b = fs::read(dir_b.path().join("sample.jsonl")).unwrap();
    assert_eq!(bytes_a, bytes_b, "replayed dump differs");
}

#[test]
fn render_emits_svg_and_requires_stretches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = ipdsaw(&[
        "sample", "--length", "12", "--beta", "1.5", "--model", "nu", "--seed", "3",
        "--count", "2", "--stretches", "--out", out,
    ]);
    assert_eq!(run.status.code(), Some(0));
    let dump = dir.path().join("sample.jsonl");
    let fig = dir.path().join("fig.svg");
    let render = ipdsaw(&[
        "render", "--input", dump.to_str().unwrap(), "--index", "1", "--output",
        fig.to_str().unwrap(),
    ]);
    assert_eq!(render.status.code(), Some(0), "{render:?}");
    let svg = fs::read_to_string(&fig).unwrap();
    assert!(svg.starts_with("<svg"), "{}", &svg[..svg.len().min(80)]);
    assert!(svg.contains("polyline"));
    assert!(dir.path().join("fig.manifest.json").exists());

    // A dump without stretch vectors is a validation failure (exit 1).
    let bare = ipdsaw(&[
        "sample", "--length", "12", "--beta", "1.5", "--model", "nu", "--seed", "3",
        "--count", "1", "--out", out, "--prefix", "bare",
    ]);
    assert_eq!(bare.status.code(), Some(0));
    let fail = ipdsaw(&[
        "render", "--input",
        dir.path().join("bare.jsonl").to_str().unwrap(),
        "--output", fig.to_str().unwrap(),
    ]);
    assert_eq!(fail.status.code(), Some(1), "{fail:?}");
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for (prefix, jobs) in [("j1", "1"), ("j3", "3")] {
        let output = ipdsaw(&[
            "scan", "--model", "nu", "--beta-from", "0.7", "--beta-to", "1.3", "--steps", "5",
            "--n-max", "24", "--k-max", "96", "--jobs", jobs, "--out", out, "--prefix", prefix,
        ]);
        assert_eq!(output.status.code(), Some(0), "{output:?}");
    }
    let a = fs::read(dir.path().join("j1.csv")).unwrap();
    let b = fs::read(dir.path().join("j3.csv")).unwrap();
    assert_eq!(a, b, "--jobs changed scan output");
}

#[test]
fn checkpoint_cache_round_trips() {
    let cache = tempfile::tempdir().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = |prefix: &str| {
        let output = Command::new(env!("CARGO_BIN_EXE_ipdsaw"))
            .args([
                "gcurve", "--beta", "0.9", "--n-max", "24", "--k-max", "96", "--out", out,
                "--prefix", prefix,
            ])
            .env("IPDSAW_CACHE_DIR", cache.path())
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0), "{output:?}");
    };
    run("first");
    assert_eq!(fs::read_dir(cache.path()).unwrap().count(), 1);
    run("second");
    let a = fs::read(dir.path().join("first.csv")).unwrap();
    let b = fs::read(dir.path().join("second.csv")).unwrap();
    assert_eq!(a, b, "checkpoint load changed the curve");
    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("second.manifest.json")).unwrap(),
    )
    .unwrap();
    let used = manifest["checkpoints_used"].as_array().unwrap();
    assert_eq!(used.len(), 1, "{manifest}");
}

#[test]
fn selftest_passes_with_machine_readable_lines() {
    let output = ipdsaw(&["selftest"]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout(&output);
    let mut checks = 0;
    for line in text.lines() {
        let parsed: serde_json::Value = serde_json::from_str(line).expect("JSON line");
        assert_eq!(parsed["pass"], true, "{line}");
        checks += 1;
    }
    assert!(checks >= 8, "only {checks} checks");
}

#[test]
fn config_file_overrides_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("strict.toml");
    fs::write(&config, "[tolerances]\nrepresentation = 1e-300\n").unwrap();
    // Exact agreement at L=2 still satisfies even an absurd tolerance…
    let ok = ipdsaw(&[
        "partition", "--length", "2", "--beta", "1.0", "--model", "u", "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{ok:?}");
    // …but a malformed config is rejected.
    fs::write(&config, "[tolerances]\nno_such_tolerance = 1\n").unwrap();
    let bad = ipdsaw(&[
        "partition", "--length", "2", "--beta", "1.0", "--model", "u", "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1), "{bad:?}");
}

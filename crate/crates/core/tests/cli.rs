use std::fs;
use std::path::{Path, PathBuf};

use ngssk::cli::main_with_args;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["ngssk"];
    full.extend_from_slice(args);
    main_with_args(full)
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn validate_accepts_shipped_configs() {
    for name in ["two_users.toml", "three_users.toml", "bound_nt3.toml", "bound_nt8.toml"] {
        assert_eq!(run(&["validate", "--config", &cfg(name)]), 0, "{name}");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let good = fs::read_to_string(configs().join("two_users.toml")).unwrap();

    let missing = dir.path().join("missing.toml");
    let text: String = good.lines().filter(|l| !l.starts_with("n_active")).map(|l| format!("{l}\n")).collect();
    fs::write(&missing, text).unwrap();
    assert_eq!(run(&["validate", "--config", missing.to_str().unwrap()]), 2);

    let bad_sum = dir.path().join("bad_sum.toml");
    fs::write(&bad_sum, good.replace("[0.8, 0.2]", "[0.8, 0.19]")).unwrap();
    assert_eq!(run(&["validate", "--config", bad_sum.to_str().unwrap()]), 2);

    assert_eq!(run(&["validate", "--config", "/nonexistent/x.toml"]), 2);
    assert_eq!(run(&["figure", "7", "--out", dir.path().to_str().unwrap()]), 2);
    assert_eq!(run(&["simulate", "--config", &cfg("two_users.toml"), "--detector", "psychic"]), 2);
    assert_eq!(run(&["analyze", "--config", &cfg("two_users.toml"), "--snr-grid", "10:0:20"]), 2);
    assert_eq!(run(&["bogus"]), 2);
}

#[test]
fn analyze_stacks_bound_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.csv");
    let mut args = vec!["analyze".to_string()];
    for nt in [8, 5, 4, 3] {
        args.push("--config".into());
        args.push(cfg(&format!("bound_nt{nt}.toml")));
    }
    args.extend(["--snr-grid".into(), "0:10:30".into(), "--out".into(), out.to_string_lossy().into_owned()]);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(run(&refs), 0);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("snr_db,metric,value,ci_low,ci_high,scenario\n"));
    let mut scenarios: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("union_bound"))
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    scenarios.dedup();
    assert_eq!(scenarios, ["Nt8_nt2_M1", "Nt5_nt2_M1", "Nt4_nt2_M1", "Nt3_nt2_M1"]);
}

#[test]
fn simulate_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, seed) in ["5", "5", "6"].iter().enumerate() {
        let out = dir.path().join(format!("sim{i}.csv"));
        let code = run(&[
            "simulate", "--config", &cfg("two_users.toml"), "--detector", "ideal", "--trials", "4000",
            "--seed", seed, "--snr-grid", "0:15:30", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0], outputs[2]);
}

#[test]
fn figure_writes_manifest_and_series() {
    let dir = tempfile::tempdir().unwrap();
    let code = run(&["figure", "4", "--trials", "2000", "--snr-grid", "0:20:40", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig4_manifest.json")).unwrap()).unwrap();
    let series = manifest["series"].as_array().unwrap();
    assert!(!series.is_empty());
    for s in series {
        let file = dir.path().join(s["file"].as_str().unwrap());
        assert!(fs::read_to_string(file).unwrap().lines().count() > 1);
    }
}

#[test]
fn sweep_covers_antenna_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let code = run(&[
        "sweep", "--config", &cfg("two_users.toml"), "--antennas", "3:6", "--trials", "2000",
        "--snr-grid", "30:1:30", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(&out).unwrap();
    for nt in 3..=6 {
        assert!(csv.contains(&format!("Nt{nt}_nt3_M2")), "missing N_t = {nt}");
    }
    assert_eq!(run(&["sweep", "--config", &cfg("two_users.toml"), "--antennas", "6:3"]), 2);
}

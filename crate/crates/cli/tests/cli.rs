use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

const SMALL: [&str; 6] = ["--L", "30", "--nx", "256", "--ny", "4"];

fn waveguide(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waveguide"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("WAVEGUIDE_OUT")
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_ok(o: &Output) {
    assert!(o.status.success(), "{:?}\n{}", o.status, String::from_utf8_lossy(&o.stderr));
}

#[test]
fn threshold_recovers_the_critical_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let o = waveguide(dir.path(), &[&["threshold", "--omega-steps", "3"][..], &SMALL].concat());
    assert_ok(&o);
    let t = json(&dir.path().join("threshold/threshold.json"));
    let w = t["omega_p_numeric"].as_f64().unwrap();
    assert!((w - 1.0 / 3.0).abs() < 1e-4, "{w}");
    let scan = std::fs::read_to_string(dir.path().join("threshold/threshold_scan.csv")).unwrap();
    assert_eq!(scan.lines().count(), 4);
}

#[test]
fn manifest_hashes_match_the_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&waveguide(dir.path(), &[&["spectrum", "--omega", "1", "--a-steps", "3", "--k", "2"][..], &SMALL].concat()));
    let base = dir.path().join("spectrum");
    let m = json(&base.join("manifest.json"));
    assert_eq!(m["command"], "spectrum");
    assert_eq!(m["config"]["nx"], 256);
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    let files = m["files"].as_array().unwrap();
    assert_eq!(files.len(), 3);
    for f in files {
        let bytes = std::fs::read(base.join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), format!("{:x}", Sha256::digest(&bytes)));
    }
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = waveguide(dir.path(), &["spectrum", "--omega", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega must be positive"));
    let o = waveguide(dir.path(), &["evolve", "--p", "5"]);
    assert_eq!(o.status.code(), Some(2));
    // phase guard: dt * max symbol must stay below pi
    let o = waveguide(dir.path(), &[&["evolve", "--dt", "0.5", "--t-final", "1"][..], &SMALL].concat());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_on_an_empty_directory_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = waveguide(dir.path(), &["report"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("report").exists());
}

#[test]
fn report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gs = ["groundstate", "--L", "30", "--nx", "128", "--ny", "8", "--omega-min", "0.2", "--omega-max", "0.8", "--omega-steps", "2"];
    assert_ok(&waveguide(dir.path(), &gs));
    let ev = ["evolve", "--omega", "1", "--delta", "1e-4", "--t-final", "0.5", "--record-every", "50"];
    assert_ok(&waveguide(dir.path(), &[&ev[..], &SMALL].concat()));
    assert_ok(&waveguide(dir.path(), &["report"]));
    let names = ["gap.csv", "orbit.csv", "summary.json"];
    let first: Vec<Vec<u8>> = names.iter().map(|n| std::fs::read(dir.path().join("report").join(n)).unwrap()).collect();
    assert_ok(&waveguide(dir.path(), &["report"]));
    for (n, bytes) in names.iter().zip(&first) {
        assert_eq!(&std::fs::read(dir.path().join("report").join(n)).unwrap(), bytes, "{n}");
    }
    let gap = String::from_utf8(first[0].clone()).unwrap();
    assert_eq!(gap.lines().count(), 3);
    let summary: Value = serde_json::from_slice(&first[2]).unwrap();
    assert_eq!(summary["evolve"]["termination"], "Completed");
    assert_eq!(summary["groundstate"]["frequencies"], 2);
}

#[test]
fn seeded_noise_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let args = ["evolve", "--omega", "0.5", "--t-final", "0.2", "--record-every", "20", "--noise", "1e-3", "--seed", seed];
        assert_ok(&waveguide(dir.path(), &[&args[..], &SMALL].concat()));
        std::fs::read(dir.path().join("evolve/trajectory.csv")).unwrap()
    };
    let a = run("11");
    assert_eq!(run("11"), a);
    assert_ne!(run("12"), a);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small grid\np = 2\nomega = 0.5\nL = 30\nnx = 256\nny = 4\nk = 2\na_steps = 2\n").unwrap();
    let o = waveguide(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap(), "--p", "3"]);
    assert_ok(&o);
    let m = json(&dir.path().join("spectrum/manifest.json"));
    assert_eq!(m["config"]["p"], 3.0);
    assert_eq!(m["config"]["omega"], 0.5);
    assert_eq!(m["config"]["x_halfwidth"], 30.0);

    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    let o = waveguide(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_root_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_waveguide"))
        .args([&["threshold", "--omega-steps", "2", "--tol", "1e-3"][..], &SMALL].concat())
        .env("WAVEGUIDE_OUT", dir.path())
        .output()
        .unwrap();
    assert_ok(&o);
    assert!(dir.path().join("threshold/manifest.json").exists());
}

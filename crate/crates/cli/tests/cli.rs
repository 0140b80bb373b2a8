use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sunit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sunit"))
        .args(args)
        .env_remove("SUNIT_PRECISION_DIGITS")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn report(out: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn reproduce_matches_golden_files() {
    for choice in ["I", "II"] {
        let out = sunit(&["bound", "reproduce", "--choice", choice]);
        assert_eq!(out.status.code(), Some(0));
        let want: Value =
            serde_json::from_str(&golden(&format!("reproduce_{choice}.json"))).unwrap();
        assert_eq!(report(&out), want, "choice {choice}");
    }
}

#[test]
fn reports_keep_their_shape() {
    let out = sunit(&["bound", "reproduce", "--choice", "I"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "command",
            "parameters",
            "results",
            "checks_passed",
            "checks_failed",
            "wall_time_ms"
        ]
    );
    assert_eq!(v["checks_failed"], 0);
}

#[test]
fn tables() {
    let out = sunit(&["table", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        golden("table_n1.json").trim()
    );

    let out = sunit(&["table", "--n", "0", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["P1"], Value::Array(vec![]));

    let out = sunit(&["table", "--n", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), golden("table_n2.csv").trim());
    assert_eq!(text.trim().lines().count(), 7);
}

#[test]
fn eval_choice_i() {
    let out = sunit(&[
        "bound", "eval", "--B", "0.834", "--r0", "1600", "--k", "20", "--ln2C", "7.8", "--n", "45",
        "--m", "1", "--s", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["results"]["N"], 26);
    assert_eq!(v["results"]["base_s"], 45);
}

#[test]
fn eval_rejects_small_k_with_the_inequality() {
    let out = sunit(&[
        "bound", "eval", "--B", "0.834", "--r0", "1600", "--k", "19", "--ln2C", "7.8", "--n", "45",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("(3B-1)^(k+1) > 3r0+4"), "{err}");
}

#[test]
fn verify_exit_codes() {
    let out = sunit(&["verify", "--max-n", "30", "--checks", "order,divisibility"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["checks_failed"], 0);
    assert_eq!(v["checks_passed"], 31 + 30);

    let out = sunit(&["verify", "--checks", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let out = sunit(&["verify", "--max-n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_lengths_at_one_skips_the_combined_bound() {
    let out = sunit(&["verify", "--max-n", "1", "--checks", "lengths"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let suite = &v["results"][0];
    assert!(suite["notices"][0]
        .as_str()
        .unwrap()
        .contains("skipped at n = 1"));
    assert_eq!(
        suite["data"]["rows"][0]["combined_bound_holds"],
        Value::Null
    );
}

#[test]
fn compare_and_negative_control() {
    let out = sunit(&["bound", "compare-evertse", "--m-max", "5", "--s-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let out = sunit(&[
        "bound",
        "compare-evertse",
        "--m-max",
        "1",
        "--s-max",
        "1",
        "--theorem-coeff",
        "3.0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        report(&out)["results"]["theorem_form"]["certificate"]["holds"],
        false
    );
}

#[test]
fn optimize_from_config() {
    let dir = std::env::temp_dir().join(format!("sunit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("box.toml");
    std::fs::write(
        &cfg,
        "B_range = [0.834, 0.836, 0.002]\nr0_range = [1600, 1600, 1]\nln2C_range = [7.8, 7.8, 0.1]\n\
         n_range = [44, 46]\nk_policy = \"minimal\"\nm = 1\ns = 1\ntop = 2\n",
    )
    .unwrap();
    let out = sunit(&["bound", "optimize", cfg.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let ranked = &report(&out)["results"]["ranked"];
    assert_eq!(ranked.as_array().unwrap().len(), 2);

    std::fs::write(&cfg, "B_range = [0.834, 0.836, 0.002]\nbogus = 1\n").unwrap();
    let out = sunit(&["bound", "optimize", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn precision_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_sunit"))
        .args(["bound", "reproduce", "--choice", "II"])
        .env("SUNIT_PRECISION_DIGITS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_sunit"))
        .args(["bound", "reproduce", "--choice", "II"])
        .env("SUNIT_PRECISION_DIGITS", "60")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

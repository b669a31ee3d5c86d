//! End-to-end checks of the command-line surface: pinned output shapes,
//! exit codes, and report determinism.

use std::process::{Command, Output};

fn thetafay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetafay"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn fay_dims_reports_exact_genus4_dimensions() {
    let out = thetafay(&["fay", "dims", "--g", "4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["V+"], 85);
    assert_eq!(v["W+"], 51);
    assert_eq!(v["V-"], 85);
    assert_eq!(v["W-"], 35);
}

#[test]
fn fay_dump_text_format() {
    let out = thetafay(&["fay", "dump", "--g", "1", "--sector", "even"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end(), "3 3\n1 1 1\n1 1 -1\n1 -1 1");
}

#[test]
fn rep_norm_flat_report() {
    let out = thetafay(&["rep", "norm", "--g", "2", "--sector", "even", "--signed", "true"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["norm"], "2");
    assert_eq!(v["group_order"], 720);
    assert!(v["seconds"].as_f64().is_some());
}

#[test]
fn theta_eval_reports_value_and_bound() {
    let out = thetafay(&[
        "theta", "eval", "--g", "2", "-m", "01|10", "--tau-seed", "7", "--tol", "1e-13",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["re"].as_f64().is_some());
    assert!(v["im"].as_f64().is_some());
    assert!(v["trunc_bound"].as_f64().unwrap() <= 1e-13);
}

#[test]
fn verify_all_genus1_passes() {
    let out = thetafay(&["verify", "all", "--g", "1", "--seed", "1"]);
    assert!(out.status.success(), "exit: {:?}", out.status.code());
    let v = stdout_json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["tool"], "thetafay");
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["status"], "pass", "{}", check["name"]);
    }
}

#[test]
fn genus_guard_is_a_usage_error() {
    let out = thetafay(&["verify", "all", "--g", "9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = thetafay(&["theta", "eval", "--g", "5", "-m", "0|0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = thetafay(&["verify", "all", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_checks_exit_one_with_full_report() {
    // an absurd rank threshold forces rank/kernel verdicts to fail but the
    // battery still reports every check
    let out = thetafay(&["verify", "tvg", "--g", "1", "--tol", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic_up_to_wall_time() {
    let a = thetafay(&["verify", "phi", "--g", "2", "--seed", "5"]);
    let b = thetafay(&["verify", "phi", "--g", "2", "--seed", "5"]);
    let strip = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("total_seconds");
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("seconds");
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn group_order_writes_binary_dump() {
    let dir = std::env::temp_dir().join("thetafay-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let dump = dir.join("g2.bin");
    let out = thetafay(&[
        "group", "order", "--g", "2",
        "--dump-file", dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(&dump).unwrap();
    // header: u32 genus, u64 count; then 720 records of 2 bytes (16 bits)
    assert_eq!(bytes.len(), 4 + 8 + 720 * 2);
    assert_eq!(u32::from_le_bytes(bytes[0..4].try_into().unwrap()), 2);
    assert_eq!(u64::from_le_bytes(bytes[4..12].try_into().unwrap()), 720);
    std::fs::remove_file(&dump).ok();
}

#[test]
fn out_flag_writes_report_to_file() {
    let dir = std::env::temp_dir().join("thetafay-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = thetafay(&[
        "verify", "phi", "--g", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "pass");
    std::fs::remove_file(&path).ok();
}

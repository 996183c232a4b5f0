use std::path::PathBuf;
use std::process::{Command, Output};

use solvgroups::pcgroup::examples::symmetric4;
use solvgroups::pcgroup::text::format_presentation;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvgroups")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("solvgroups-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s4_file() -> PathBuf {
    let path = scratch("s4").join("s4.pc");
    std::fs::write(&path, format_presentation(&symmetric4())).unwrap();
    path
}

#[test]
fn cover_of_s4() {
    let path = s4_file();
    let out = run(&["cover", "--group", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("generators 2"));
    assert!(text.contains("|M| = 256"));
    assert!(text.contains("|N| = 8"));

    let out = run(&["--format", "json", "cover", "--group", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["m_order"], 256);
    assert_eq!(v["n_order"], 8);
}

#[test]
fn descendants_of_s4() {
    let path = s4_file();
    let out = run(&["--format", "json", "descendants", "--group", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut orders: Vec<u64> = v["descendants"].as_array().unwrap().iter().map(|d| d["order"].as_u64().unwrap()).collect();
    orders.sort_unstable();
    assert_eq!(orders, [48, 48, 96, 192, 192]);

    let out = run(&["--format", "json", "descendants", "--group", path.to_str().unwrap(), "--stepsize", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 2);
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "--orders", "6,12,18,24"]);
    assert_eq!(out.status.code(), Some(0));

    let bad = scratch("verify").join("reference.txt");
    std::fs::write(&bad, "6 2 1\n12 5 4\n").unwrap();
    let out = run(&["verify", "--orders", "6,12", "--reference", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("MISMATCH"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&["--budget-orbit", "1", "--budget-subspaces", "1", "construct", "--order", "24"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bad_input_exits_1() {
    let path = scratch("bad").join("g.pc");
    std::fs::write(&path, "pc 1\norders 4\n").unwrap();
    let out = run(&["cover", "--group", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_writes_catalog_and_id_finds_entries() {
    let dir = scratch("construct");
    let out = run(&["construct", "--order", "24", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("10 non-nilpotent groups"));
    assert!(dir.join("order_24.json").exists());
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("summary_24.json")).unwrap()).unwrap();
    assert_eq!(summary["non_nilpotent"], 10);

    let out = run(&["id", "--group", s4_file().to_str().unwrap(), "--catalog", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("(24, "));
}

#[test]
fn fclass1_of_order_96() {
    let out = run(&["--format", "json", "fclass1", "--order", "96", "--rank", "32"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["groups"].as_array().unwrap().len(), 2);
}

use serde_json::Value;
use std::process::{Command, Output};

fn brf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brf")).args(args).env_remove("BRF_TOL").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("brf-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn solve_grid_gives_constant_gk() {
    let o = brf(&["solve", "--space", "su3xsu3_so3", "--z1-grid", "0.5,1,2"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.matches("gk_coordinates").count(), 3);
    let v = json(&o);
    let sols = v["solutions"].as_array().unwrap();
    for s in sols {
        let gk: Vec<f64> = s["gk_coordinates"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert!((gk[0] - 1.0).abs() < 1e-10 && (gk[1] - 1.0).abs() < 1e-10 && (gk[2] - 2.0).abs() < 1e-10);
    }
}

#[test]
fn legacy_exact_rationals() {
    let o = brf(&["legacy", "--space", "so8xso7_g2", "--at", "5/6", "--exact"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    for n in ["35892", "21175", "864", "46585"] {
        assert!(text.contains(n), "missing {n}");
    }
}

#[test]
fn group_su2_has_one_solution() {
    let v = json(&brf(&["group", "--algebra", "su2", "--trials", "30"]));
    assert_eq!(v["solutions_found"], 1);
}

#[test]
fn unknown_space_exits_2_with_json() {
    let o = brf(&["analyze", "--space", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "unknown_space");
}

#[test]
fn malformed_spec_exits_2() {
    let d = tmp("bad");
    std::fs::create_dir_all(&d).unwrap();
    let f = d.join("bad.json");
    std::fs::write(&f, "{ not json").unwrap();
    let o = brf(&["analyze", "--spec", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spec_file_is_accepted() {
    let d = tmp("spec");
    std::fs::create_dir_all(&d).unwrap();
    let f = d.join("s.json");
    std::fs::write(&f, r#"{"subgroup": {"constructor": "s1_pq", "p": 1, "q": 2}, "z1": ["1/2", 2]}"#).unwrap();
    let o = brf(&["solve", "--spec", f.to_str().unwrap(), "--exact"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn failed_catalog_check_exits_4() {
    let o = brf(&["catalog-test", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn catalog_test_passes() {
    let o = brf(&["catalog-test", "--exact"]);
    assert!(o.status.success());
}

#[test]
fn output_is_deterministic() {
    let args = ["solve", "--space", "su2xsu3_s1", "--z1-grid", "0.3,1", "--starts", "10", "--seed", "7"];
    assert_eq!(brf(&args).stdout, brf(&args).stdout);
    let g = ["group", "--algebra", "su2+su2", "--trials", "10", "--seed", "3"];
    assert_eq!(brf(&g).stdout, brf(&g).stdout);
}

#[test]
fn out_writes_json_and_markdown() {
    let d = tmp("out");
    let o = brf(&["flow", "--space", "su3xsu3_so3", "--x0", "1.2,1,2", "--t-end", "0.3", "--out", d.to_str().unwrap()]);
    assert!(o.status.success());
    let names: Vec<String> = std::fs::read_dir(&d).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(names.iter().any(|n| n.ends_with(".json")));
    assert!(names.iter().any(|n| n.ends_with(".md")));
    assert!(names.iter().any(|n| n.ends_with(".csv")));
    let _ = std::fs::remove_dir_all(&d);
}

#[test]
fn verify_reports_non_solution() {
    let v = json(&brf(&["verify", "--space", "su3xsu3_so3", "--at", "1", "--x", "1,1,3"]));
    assert_eq!(v["is_brf"], false);
    let v = json(&brf(&["verify", "--space", "su3xsu3_so3", "--at", "1", "--x", "1,1,2", "--exact"]));
    assert_eq!(v["is_brf"], true);
}

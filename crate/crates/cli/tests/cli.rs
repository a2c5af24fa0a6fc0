use assert_cmd::Command;
use predicates::prelude::*;
use std::fs;
use tempfile::TempDir;

fn pgcone(dir: &TempDir) -> Command {
    let mut cmd = Command::cargo_bin("pgcone").unwrap();
    cmd.env("PGCONE_OUT_DIR", dir.path());
    cmd
}

fn json_out(cmd: &mut Command) -> serde_json::Value {
    let out = cmd.arg("--json").assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn plane_build_writes_alist_and_provenance() {
    let dir = TempDir::new().unwrap();
    pgcone(&dir).args(["plane", "build", "--q", "2"]).assert().success().stdout(predicate::str::contains("n = 7"));
    let alist = fs::read_to_string(dir.path().join("pg2_q2.alist")).unwrap();
    assert!(alist.starts_with("7 7\n3 3\n"));
    let prov: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("pg2_q2.provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["tool"], "pgcone");
    assert_eq!(prov["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(prov["matrix_id"].as_str().unwrap().len(), 32);
    assert!(prov["command"].as_array().unwrap().len() >= 4);
}

#[test]
fn config_hash_is_stable_and_sensitive() {
    let hash = |q: &str| {
        let dir = TempDir::new().unwrap();
        pgcone(&dir).args(["plane", "build", "--q", q]).assert().success();
        let prov: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("pg2_q{q}.provenance.json"))).unwrap())
                .unwrap();
        prov["config_hash"].as_str().unwrap().to_string()
    };
    assert_eq!(hash("2"), hash("2"));
    assert_ne!(hash("2"), hash("4"));
}

#[test]
fn out_dir_flag_overrides_env() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    pgcone(&env_dir).args(["plane", "build", "--q", "2", "--out-dir"]).arg(flag_dir.path()).assert().success();
    assert!(flag_dir.path().join("pg2_q2.alist").exists());
    assert!(!env_dir.path().join("pg2_q2.alist").exists());
}

#[test]
fn alist_round_trip_through_cone_member() {
    let dir = TempDir::new().unwrap();
    pgcone(&dir).args(["plane", "build", "--q", "2"]).assert().success();
    let alist = dir.path().join("pg2_q2.alist");
    let v = json_out(pgcone(&dir).args(["cone", "member", "--vector", "0,1,1,1,2,2,1", "--alist"]).arg(&alist));
    assert_eq!(v["member"], true);
    let v = json_out(pgcone(&dir).args(["cone", "member", "--q", "2", "--vector", "0,0,0,0,0,0,-1"]));
    assert_eq!(v["member"], false);
    // a check with another pivot sees -1 before the nonnegativity constraint
    assert_eq!(v["first_violated"], 6);
    assert_eq!(v["violated_kind"]["Check"]["row"], 2);
}

#[test]
fn json_output_carries_provenance() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["cone", "type", "--vector", "2,1,1,0"]));
    assert_eq!(v["counts"][2], serde_json::json!(["2", 1]));
    assert_eq!(v["provenance"]["config_hash"].as_str().unwrap().len(), 64);
    let v = json_out(pgcone(&dir).args(["cone", "minimal", "--q", "2", "--vector", "0,0,1,0,1,1,1"]));
    assert_eq!(v["minimal"], true);
    assert_eq!(v["provenance"]["matrix_id"].as_str().unwrap().len(), 32);
}

#[test]
fn ex3_census_counts_every_certified_switch() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["construct", "ex3", "--q", "2", "--count-all"]));
    assert_eq!((v["pairs"].as_u64(), v["certified"].as_u64()), (Some(21), Some(21)));
    assert!(dir.path().join("ex3_q2_census.provenance.json").exists());
}

#[test]
fn plane_check_passes() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["plane", "check", "--q", "8"]));
    assert_eq!(v["passed"], true);
}

#[test]
fn construct_ex3_q4() {
    let dir = TempDir::new().unwrap();
    pgcone(&dir)
        .args(["construct", "ex3", "--q", "4"])
        .assert()
        .success()
        .stdout(predicate::str::contains("awgnc pseudo-weight: 128/13 (9.846)"))
        .stdout(predicate::str::contains("bound 4(q+2)/3: 8 (8.000)"))
        .stdout(predicate::str::contains("minimal: yes"));
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ex3_q4.json")).unwrap()).unwrap();
    assert_eq!(trace["awgnc_pw"], "128/13");
    assert_eq!(trace["stages"][3]["active_rank"], 20);
}

#[test]
fn construct_ex5_defaults_to_three_points() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["construct", "ex5"]));
    assert_eq!(v["minimal"], true);
    assert_eq!(v["switched"].as_array().unwrap().len(), 3);
    pgcone(&dir).args(["construct", "ex5", "--pair-only"]).assert().code(1);
}

#[test]
fn decode_sweep_q2() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["decode", "sweep", "--q", "2", "--e", "1,3"]));
    assert_eq!(v["rows"][0]["corrected"], 7);
    assert_eq!(v["rows"][1]["patterns"], 35);
    assert_eq!(v["rows"][1]["corrected"], 0);
    let csv = fs::read_to_string(dir.path().join("sweep_q2.csv")).unwrap();
    assert_eq!(csv, "e,patterns,corrected,ties,failures\n1,7,7,0,0\n3,35,0,0,35\n");
}

#[test]
fn rays_enumerate_and_histogram_q2() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["rays", "enumerate", "--q", "2"]));
    assert_eq!(v["count"], 14);
    assert_eq!(v["complete"], true);
    assert_eq!(v["min_awgnc"], "4");
    let rays = dir.path().join("rays_q2.jsonl");
    pgcone(&dir)
        .args(["rays", "histogram", "--rays"])
        .arg(&rays)
        .assert()
        .success()
        .stdout(predicate::str::starts_with("bin_low,bin_high,count\n4,5,7\n"));
    let v = json_out(pgcone(&dir).args(["effective", "awgnc", "--rays"]).arg(&rays));
    assert_eq!(v["rays"].as_array().unwrap().len(), 14);
    assert!(v["rays"].as_array().unwrap().iter().all(|r| r["kind"] == "First"));
}

#[test]
fn budgeted_rays_are_partial() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["rays", "enumerate", "--q", "4", "--max-rays", "500"]));
    assert_eq!(v["complete"], false);
    assert!(v["stop_reason"].is_string());
}

#[test]
fn effectiveness_needs_a_complete_set() {
    let dir = TempDir::new().unwrap();
    pgcone(&dir).args(["rays", "enumerate", "--q", "4", "--max-rays", "500"]).assert().success();
    pgcone(&dir)
        .args(["effective", "bsc", "--rays"])
        .arg(dir.path().join("rays_q4.jsonl"))
        .assert()
        .code(1)
        .stderr(predicate::str::contains("incomplete"));
}

#[test]
fn weights_and_bounds() {
    let dir = TempDir::new().unwrap();
    let v = json_out(pgcone(&dir).args(["weights", "compute", "--vector", "2,1,1,0"]));
    assert_eq!(v["awgnc"], "8/3");
    assert_eq!(v["bec"], 3);
    let v = json_out(pgcone(&dir).args(["weights", "bounds", "--q", "2", "--vector", "0,0,1,0,1,1,1"]));
    let thm5 = v["bounds"].as_array().unwrap().iter().find(|b| b["name"] == "Thm5").unwrap();
    assert_eq!(thm5["value"], "16/3");
    assert_eq!(thm5["applicable"], false);
    assert_eq!(thm5["reason"], "t_2 = 0");
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    pgcone(&dir).arg("frobnicate").assert().code(2);
    pgcone(&dir).args(["plane", "build"]).assert().code(2);
    pgcone(&dir).args(["plane", "build", "--q", "3"]).assert().code(2);
    pgcone(&dir).args(["weights", "compute", "--vector", "1,x"]).assert().code(2);
    pgcone(&dir).args(["decode", "zero-opt", "--q", "2", "--flips", "9"]).assert().code(2);
}

#[test]
fn domain_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    pgcone(&dir).args(["cone", "minimal", "--q", "2", "--vector", "1,0,0,0,0,0,0"]).assert().code(1);
    pgcone(&dir).args(["cone", "minimal", "--q", "2", "--vector", "1,1"]).assert().code(1);
}

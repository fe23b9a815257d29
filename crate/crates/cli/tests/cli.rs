use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_cat0-feas");

fn standard() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/standard.json")
}

fn standard_doc() -> Value {
    serde_json::from_str(&std::fs::read_to_string(standard()).unwrap()).unwrap()
}

/// Keeps only the named instances of the standard configuration.
fn subset(names: &[&str]) -> Value {
    let mut doc = standard_doc();
    let all = doc["instances"].as_array().unwrap().clone();
    doc["instances"] = all.into_iter().filter(|i| names.contains(&i["name"].as_str().unwrap())).collect();
    doc
}

fn write_config(dir: &Path, doc: &Value) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> (i32, String) {
    let o = Command::new(BIN)
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

fn read(p: PathBuf) -> Vec<u8> {
    std::fs::read(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn standard_config_passes_every_command() {
    let tmp = tempfile::tempdir().unwrap();
    for cmd in ["verify-space", "verify-mapping", "run", "certify"] {
        let out = tmp.path().join(cmd);
        let (code, err) = run(cmd, &standard(), &out, &["--jobs", "4"]);
        assert_eq!(code, 0, "{cmd}: {err}");
        let r = report(&out);
        assert_eq!(r["schema"], "1");
        assert_eq!(r["command"], cmd);
        assert_eq!(r["verdict"], "pass");
        assert!(out.join("timings.json").exists());
    }
}

#[test]
fn outputs_are_byte_identical_for_a_seed() {
    let tmp = tempfile::tempdir().unwrap();
    for cmd in ["verify-mapping", "run", "certify"] {
        let (a, b) = (tmp.path().join(format!("{cmd}-a")), tmp.path().join(format!("{cmd}-b")));
        assert_eq!(run(cmd, &standard(), &a, &["--seed", "7"]).0, 0);
        assert_eq!(run(cmd, &standard(), &b, &["--seed", "7", "--jobs", "3"]).0, 0);
        assert_eq!(read(a.join("report.json")), read(b.join("report.json")), "{cmd}");
    }
    for name in ["line-line", "ball-halfspace", "tripod", "disk-balls"] {
        let rel = format!("traces/{name}.csv");
        assert_eq!(read(tmp.path().join("run-a").join(&rel)), read(tmp.path().join("run-b").join(&rel)));
        let rel = format!("certificates/{name}.json");
        assert_eq!(read(tmp.path().join("certify-a").join(&rel)), read(tmp.path().join("certify-b").join(&rel)));
    }
}

#[test]
fn seed_changes_sampled_residuals() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &subset(&["tripod"]));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run("verify-space", &cfg, &a, &["--seed", "1"]);
    run("verify-space", &cfg, &b, &["--seed", "2"]);
    assert_ne!(read(a.join("report.json")), read(b.join("report.json")));
    assert_eq!(report(&a)["seed"], 1);
}

fn csv_rows(path: PathBuf) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn trace_files_match_the_closed_forms() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    assert_eq!(run("run", &standard(), &out, &[]).0, 0);

    let rows = csv_rows(out.join("traces/line-line.csv"));
    assert_eq!(rows[0][1], "3.5");
    assert_eq!(rows[1][1], "0");

    let rows = csv_rows(out.join("traces/ball-halfspace.csv"));
    let res: Vec<f64> = rows.iter().filter(|r| !r[1].is_empty()).map(|r| r[1].parse().unwrap()).collect();
    assert!(res.windows(2).all(|w| w[1] <= w[0]));
    assert!(res[..500].iter().any(|&r| r < 1e-8));

    let r = report(&out);
    let tripod = r["instances"].as_array().unwrap().iter().find(|i| i["name"] == "tripod").unwrap();
    assert_eq!(tripod["trace"]["last_iterate"], json!({"vertex": "O"}));
}

#[test]
fn certificates_record_bounds_as_strings() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &subset(&["line-line"]));
    let out = tmp.path().join("certify");
    assert_eq!(run("certify", &cfg, &out, &[]).0, 0);
    let certs: Vec<Value> = serde_json::from_slice(&read(out.join("certificates/line-line.json"))).unwrap();
    let phi: Vec<&Value> = certs.iter().filter(|c| c["rate"] == "phi_b").collect();
    assert_eq!(phi.len(), 4);
    assert_eq!(phi[0]["bound_n"], "6322");
    assert!(phi.iter().all(|c| c["pass"] == true && c["observed_first_n"] == 1));
}

#[test]
fn too_small_b_is_inconclusive_not_failed() {
    let tmp = tempfile::tempdir().unwrap();
    let mut doc = subset(&["line-line"]);
    doc["instances"][0]["b"] = json!(0.35);
    let cfg = write_config(tmp.path(), &doc);
    let out = tmp.path().join("certify");
    let (code, _) = run("certify", &cfg, &out, &[]);
    assert_eq!(code, 2);
    let r = report(&out);
    assert_eq!(r["verdict"], "inconclusive");
    let certs = r["instances"][0]["certificates"].as_array().unwrap();
    assert!(certs
        .iter()
        .filter(|c| c["rate"] == "phi_b")
        .all(|c| c["verdict"] == "hypothesis-unsatisfied"));
}

#[test]
fn wrong_fixed_point_fails_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let mut doc = subset(&["ball-halfspace"]);
    doc["instances"][0]["fixed_point"] = json!([0.0, 0.0]);
    let cfg = write_config(tmp.path(), &doc);
    let out = tmp.path().join("run");
    assert_eq!(run("run", &cfg, &out, &[]).0, 1);
    let r = report(&out);
    assert_eq!(r["instances"][0]["delta_limit"]["pass"], false);
}

#[test]
fn config_errors_exit_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let (code, _) = run("run", &tmp.path().join("missing.json"), &out, &[]);
    assert_eq!(code, 3);

    let p = tmp.path().join("broken.json");
    std::fs::write(&p, "{\"schema\": \"1\", \"instances\": [").unwrap();
    assert_eq!(run("run", &p, &out, &[]).0, 3);

    let mut doc = subset(&["tripod"]);
    doc["instances"][0]["lambda"] = json!(1.5);
    let (code, err) = run("run", &write_config(tmp.path(), &doc), &out, &[]);
    assert_eq!(code, 3);
    assert!(err.contains("lambda"), "{err}");

    let mut doc = subset(&["tripod"]);
    doc["instances"][0]["eps_grid"] = json!([0.1, 0.5]);
    assert_eq!(run("run", &write_config(tmp.path(), &doc), &out, &[]).0, 3);

    let mut doc = subset(&["tripod"]);
    doc["instances"][0]["start"] = json!({"vertex": "Z"});
    let (code, err) = run("run", &write_config(tmp.path(), &doc), &out, &[]);
    assert_eq!(code, 3);
    assert!(err.contains("tripod"), "{err}");

    let mut doc = subset(&["tripod"]);
    doc["instances"][0]["typo"] = json!(1);
    let (code, err) = run("run", &write_config(tmp.path(), &doc), &out, &[]);
    assert_eq!(code, 3);
    assert!(err.contains("instances[0]"), "{err}");
}

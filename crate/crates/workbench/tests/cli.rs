//! The `indrep` binary end to end: exports, runs, exit codes, error messages.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use workbench::export::{export_corpus, ExportedJob};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indrep"))
}

fn job<'a>(jobs: &'a [ExportedJob], name: &str) -> &'a ExportedJob {
    jobs.iter().find(|j| j.name == name).unwrap()
}

fn run(task: &str, args: &[String], extra: &[&str], out: &Path) -> Output {
    bin().arg(task).args(args).args(extra).arg("-o").arg(out).output().unwrap()
}

fn read(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn decompose_regular_s3() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let out = dir.path().join("r.json");
    let o = run("decompose", &job(&jobs, "S3/1 trivial").args, &[], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(&out);
    let m: Vec<u64> = r["results"]["decompose"]["constituents"].as_array().unwrap().iter().map(|c| c["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(m, vec![1, 1, 2]);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["task"], "decompose");
    assert!(r["results"].get("hecke").is_none());
}

#[test]
fn verify_all_s3_s2_passes() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let out = dir.path().join("r.json");
    let o = run("verify-all", &job(&jobs, "S3/S2 trivial").args, &["--seed", "7"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(&out);
    assert_eq!(r["inputs"]["seed"], 7);
    for c in r["residuals"].as_array().unwrap() {
        let x: f64 = c["max_residual"].as_str().unwrap().parse().unwrap();
        assert!(x < 1e-9, "{c}");
    }
    assert_eq!(r["results"]["oracles"]["averaging_commutant_dim"], 2);
    assert_eq!(r["results"]["hecke"]["commutative"], true);
}

#[test]
fn gt_report_on_exported_chain() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let out = dir.path().join("r.json");
    let o = run("gt-report", &job(&jobs, "S3/1 trivial").args, &[], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(&out);
    let paths = r["results"]["gt"]["paths"].as_array().unwrap();
    let standard: Vec<&Value> = paths.iter().filter(|p| p["sigma"] == "standard").collect();
    assert_eq!(standard.len(), 2);
    assert_eq!(standard[0]["labels"], serde_json::json!(["standard", "sign", "trivial"]));
}

#[test]
fn gt_report_needs_chain() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let o = run("gt-report", &job(&jobs, "S3/S2 trivial").args, &[], &dir.path().join("r.json"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--chain"));
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let out = dir.path().join("r.json");
    let o = run("decompose", &job(&jobs, "S4/V4 sign_b").args, &["--tol", "1e-300"], &out);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(read(&out)["verdict"], "fail");
}

#[test]
fn malformed_group_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let j = job(&jobs, "S3/S2 trivial");
    let group = j.dir.join("group.json");
    let mut g: Value = read(&group);
    g["cayley"][2][1] = Value::String("x".into());
    std::fs::write(&group, g.to_string()).unwrap();
    let o = run("decompose", &j.args, &[], &dir.path().join("r.json"));
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("cayley[2][1]"), "{err}");
    assert!(err.contains("group.json"), "{err}");
}

#[test]
fn malformed_theta_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let j = job(&jobs, "S3/S2 sign");
    let theta = j.dir.join("theta.json");
    let mut t: Value = read(&theta);
    t["matrices"][1].as_array_mut().unwrap().push(serde_json::json!([[0.0, 0.0]]));
    std::fs::write(&theta, t.to_string()).unwrap();
    let o = run("decompose", &j.args, &[], &dir.path().join("r.json"));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(2));
    assert!(err.contains("matrices[1]"), "{err}");
}

#[test]
fn non_homomorphism_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    let j = job(&jobs, "S3/S2 sign");
    let theta = j.dir.join("theta.json");
    let mut t: Value = read(&theta);
    t["matrices"][1] = serde_json::json!([[[1.0, 0.0]]]);
    t["matrices"][0] = serde_json::json!([[[-1.0, 0.0]]]);
    std::fs::write(&theta, t.to_string()).unwrap();
    let o = run("decompose", &j.args, &[], &dir.path().join("r.json"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("homomorphism"));
}

#[test]
fn export_then_reload_matches_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = export_corpus(dir.path()).unwrap();
    assert_eq!(jobs.len(), indrep::corpus::standard_pairs::<f64>().unwrap().len());
    let listing = std::fs::read_to_string(dir.path().join("jobs.txt")).unwrap();
    assert_eq!(listing.lines().count(), jobs.len());
    let o = bin().args(["export-corpus", "-o"]).arg(dir.path().join("again")).output().unwrap();
    assert!(o.status.success());
    for j in &jobs {
        let name = j.dir.file_name().unwrap();
        for f in ["group.json", "irreps.json", "theta.json", "k-irreps.json"] {
            let a = std::fs::read(j.dir.join(f)).unwrap();
            let b = std::fs::read(dir.path().join("again").join(name).join(f)).unwrap();
            assert_eq!(a, b, "{name:?}/{f}");
        }
    }
}

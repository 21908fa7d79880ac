use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_gse-lab"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("GSE_LAB_SEED")
        .output()
        .unwrap_or_else(|e| panic!("failed to run {:?} {:?}: {e}", bin(), args))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    })
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn compute_signature() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", r#"{"probs": [0.5, 0.3, 0.2]}"#);
    let o = run(&["compute", "--probs", &p, "--orders", "0.5,2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(floats(&v["orders"]), vec![0.5, 2.0]);
    let vals = floats(&v["values"]);
    assert!((vals[0] - 1.0809736435470225).abs() < 1e-14);
    assert!((vals[1] - 0.8535836791418975).abs() < 1e-14);

    let u = write(dir.path(), "u4.json", "[0.25, 0.25, 0.25, 0.25]");
    let o = run(&["compute", "--probs", &u, "--orders", "3.7"]);
    assert!((floats(&json(&o)["values"])[0] - 4f64.ln()).abs() < 1e-15);
}

#[test]
fn validation_errors_exit_2_and_name_the_field() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"probs": [0.5, 0.3, 0.1]}"#);
    let o = run(&["compute", "--probs", &bad, "--orders", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("probs"), "{}", stderr(&o));

    let p = write(dir.path(), "p.json", "[0.5, 0.3, 0.2]");
    let o = run(&["compute", "--probs", &p, "--orders", "1,2,1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("orders"));

    let o = run(&["compute", "--probs", &p, "--orders", "-1"]);
    assert_eq!(code(&o), 2);

    let o = run(&["--tol", "0", "compute", "--probs", &p, "--orders", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--tol"));

    let missing = dir.path().join("nope.json");
    let o = run(&["compute", "--probs", missing.to_str().unwrap(), "--orders", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn signature_and_jacobian_reports() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", "[0.2, 0.5, 0.3]");
    let o = run(&["signature", "--probs", &p, "--orders", "0.5,2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(floats(&v["point"]["probs"]), vec![0.5, 0.3, 0.2]);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 2);
    let g = floats(&v["gradients"][1]);
    let euler: f64 = g.iter().zip([0.5, 0.3, 0.2]).map(|(a, b)| a * b).sum();
    assert!(euler.abs() < 1e-14);

    let o = run(&["jacobian", "--probs", &p, "--orders", "0.5,2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["orientation"], "sign-true");
    assert_eq!(v["principal"]["all_positive"], true);
    let o = run(&["jacobian", "--probs", &p, "--orders", "0.5,2", "--orientation", "natural"]);
    assert_eq!(json(&o)["principal"]["all_positive"], false);
}

#[test]
fn verify_sweep() {
    let args = ["verify", "--K", "4", "--orders", "0.5,1.5,3", "--samples", "1000", "--seed", "7"];
    let a = run(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    let v = json(&a);
    assert_eq!(v["principal"]["negative"], 0);
    assert_eq!(v["principal"]["samples"], 1000);
    assert_eq!(v["seed"], 7);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["verify", "--K", "3", "--orders", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("orders"));
}

#[test]
fn verify_reports_negative_minors_with_exit_1() {
    let o = run(&["verify", "--K", "5", "--random-orders", "0.3,5", "--samples", "300", "--principal-only"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert!(v["principal"]["negative"].as_u64().unwrap() > 0);
    assert!(v["all_minors"].is_null());
}

#[test]
fn recover_round_trip_and_refusal() {
    let o = run(&["recover", "--K", "3", "--orders", "0.5,2", "--values", "1.0809736435470225,0.8535836791418975"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["converged"], true);
    let p = floats(&v["distribution"]["probs"]);
    for (a, b) in p.iter().zip([0.5, 0.3, 0.2]) {
        assert!((a - b).abs() < 1e-9);
    }
    assert!(v.get("trace").map_or(true, Value::is_null));

    let o = run(&["recover", "--K", "5", "--orders", "1,2", "--values", "1,1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("witness"), "{}", stderr(&o));
}

#[test]
fn recover_from_file_with_trace() {
    let dir = TempDir::new().unwrap();
    let sig = write(
        dir.path(),
        "sig.json",
        r#"{"K": 3, "orders": [0.5, 2.0], "values": [1.0809736435470225, 0.8535836791418975]}"#,
    );
    let o = run(&["--trace", "recover", "--signature", &sig]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(!v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn recover_multiplicity_and_binary() {
    let h = {
        let p: f64 = 0.35;
        let q: f64 = 0.15;
        let s = 2.0 * p * p + 2.0 * q * q;
        let (wp, wq) = (p * p / s, q * q / s);
        -(2.0 * wp * wp.ln() + 2.0 * wq * wq.ln())
    };
    let o = run(&["recover", "--multiplicity", "2,2", "--orders", "2", "--values", &h.to_string()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["structure"]["counts"], serde_json::json!([2, 2]));
    let a = floats(&v["structure"]["values"]);
    assert!((a[0] - 0.35).abs() < 1e-10 && (a[1] - 0.15).abs() < 1e-10);

    // escort weights of (0.75, 0.25) at order 2 are (0.9, 0.1)
    let h = -(0.9f64 * 0.9f64.ln() + 0.1 * 0.1f64.ln());
    let o = run(&["recover", "--K", "2", "--orders", "2", "--values", &h.to_string()]);
    assert_eq!(code(&o), 0);
    let p = floats(&json(&o)["distribution"]["probs"]);
    assert!((p[0] - 0.75).abs() < 1e-12, "{p:?}");
}

#[test]
fn infeasible_recovery_exits_1() {
    let o = run(&["recover", "--K", "3", "--orders", "0.5,2", "--values", "0.6,0.9", "--max-restarts", "3"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["converged"], false);
    assert!(v["residual_norm"].as_f64().unwrap() > 1e-3);
}

#[test]
fn witness_pair_and_trace() {
    let o = run(&["witness", "--K", "3", "--orders", "2", "--min-sep", "0.05"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert!(v["signature_gap"].as_f64().unwrap() <= 1e-10);
    assert!(v["separation"].as_f64().unwrap() >= 0.05);

    let o = run(&["witness", "--K", "3", "--orders", "0.5,2"]);
    assert_eq!(code(&o), 2);

    let dir = TempDir::new().unwrap();
    let s = write(dir.path(), "s.json", "[0.5, 0.3, 0.2]");
    let o = run(&["witness", "--K", "3", "--orders", "2", "--start", &s, "--steps", "10"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["path"].as_array().unwrap().len(), 11);
}

#[test]
fn gof_from_csv_and_json() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.csv", "label,count\na,50\nb,30\nc,20\n");
    let q = write(dir.path(), "q.json", r#"{"probs": [0.2, 0.5, 0.3]}"#);
    let o = run(&["gof", "--counts", &c, "--null", &q, "--orders", "0.5,1,2", "--B", "999", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["statistic"].as_f64().unwrap(), 0.0);
    assert_eq!(v["p_value"].as_f64().unwrap(), 1.0);
    assert_eq!(v["replicates"], 999);
    assert_eq!(v["method"], "parametric-bootstrap");

    let plain = write(dir.path(), "plain.csv", "20\n50\n30\n");
    let js = write(dir.path(), "c.json", r#"{"counts": [30, 20, 50]}"#);
    let a = run(&["gof", "--counts", &plain, "--null", &q, "--B", "199"]);
    let b = run(&["gof", "--counts", &js, "--null", &q, "--B", "199"]);
    assert_eq!(a.stdout, b.stdout);

    let grouped = write(dir.path(), "g.csv", "a,20\nb,50\na,30\n");
    let flat = write(dir.path(), "f.csv", "50\n50\n");
    let a = run(&["gof", "--counts", &grouped, "--null", &q, "--B", "199"]);
    let b = run(&["gof", "--counts", &flat, "--null", &q, "--B", "199"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let q = write(dir.path(), "q.json", "[0.5, 0.5]");
    let c = write(dir.path(), "c.csv", "10\n-3\n");
    let o = run(&["gof", "--counts", &c, "--null", &q, "--B", "99"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let c = write(dir.path(), "one.csv", "10\n0\n");
    let o = run(&["gof", "--counts", &c, "--null", &q, "--B", "99"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("counts"));
}

#[test]
fn twosample_identical_files() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.csv", "40\n35\n25\n");
    let o = run(&["twosample", "--a", &a, "--b", &a, "--B", "199"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["p_value"].as_f64().unwrap(), 1.0);
    assert_eq!(v["method"], "recentered-bootstrap");
}

#[test]
fn seed_from_environment_and_output_file() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.csv", "40\n35\n25\n");
    let b = write(dir.path(), "b.csv", "30\n30\n20\n20\n");
    let env = Command::new(bin()).args(["twosample", "--a", &a, "--b", &b, "--B", "199"]).env("GSE_LAB_SEED", "9").output().unwrap();
    let flag = run(&["--seed", "9", "twosample", "--a", &a, "--b", &b, "--B", "199"]);
    assert_eq!(env.stdout, flag.stdout);
    assert_eq!(json(&flag)["seed"], 9);
    assert_eq!(json(&run(&["twosample", "--a", &a, "--b", &b, "--B", "199"]))["seed"], 42);

    let out = dir.path().join("r.json");
    let o = run(&["--seed", "9", "--out", out.to_str().unwrap(), "twosample", "--a", &a, "--b", &b, "--B", "199"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), flag.stdout);
}

#[test]
fn reports_round_trip_through_their_readers() {
    use gse_core::gof::TestReport;
    use gse_core::tp::SweepReport;
    use gse_core::witness::CollisionPair;
    use gse_core::GseSignature;

    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", "[0.5, 0.3, 0.2]");
    let o = run(&["compute", "--probs", &p, "--orders", "0.5,1,2"]);
    let s: GseSignature = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(gse_lab::io::to_json(&s).as_bytes(), o.stdout.as_slice());

    let o = run(&["verify", "--K", "3", "--orders", "1,2", "--samples", "50"]);
    let r: SweepReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(gse_lab::io::to_json(&r).as_bytes(), o.stdout.as_slice());

    let o = run(&["witness", "--K", "4", "--orders", "1,2", "--min-sep", "0.02"]);
    let c: CollisionPair = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(gse_lab::io::to_json(&c).as_bytes(), o.stdout.as_slice());

    let a = write(dir.path(), "a.csv", "40\n35\n25\n");
    let o = run(&["twosample", "--a", &a, "--b", &a, "--B", "99"]);
    let t: TestReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(gse_lab::io::to_json(&t).as_bytes(), o.stdout.as_slice());
}

//! End-to-end tests of the `latspec` binary. Expected values come from the
//! library's independent oracle, not from the solver under test.

use std::process::{Command, Output};

use latspec::oracle::{build_truncated, eigenvalues_outside_band};
use latspec::PhysicalParams;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_worked_example_matches_oracle() {
    let o = run(&["solve", "--lambda", "1", "--lambda1", "0", "--mu", "4", "--mu1", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 3);
    let p = PhysicalParams::new(1.0, 0.0, 4.0, 3.0).unwrap();
    let oracle = eigenvalues_outside_band(&build_truncated(&p, 300).unwrap()).values();
    assert_eq!(oracle.len(), 3);
    for (r, o) in recs.iter().zip(&oracle) {
        let obj = r.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["bracket", "embedded", "gamma", "multiplicity", "nu", "origin", "parity"]
        );
        assert!((r["nu"].as_f64().unwrap() - o).abs() < 1e-10);
    }
    assert_eq!(recs[1]["origin"], "ExplicitKappa");
    assert_eq!(recs[1]["parity"], "odd");
}

#[test]
fn normalized_and_physical_flags_agree() {
    // α = 0, δ = 3, σ = 2  ⇔  λ = 1, λ₁ = 0, μ = 4, μ₁ = 3
    let a = run(&["solve", "--alpha", "0", "--delta", "3", "--sigma", "2"]);
    let b = run(&["solve", "--mu", "4", "--mu1", "3"]);
    assert_eq!(stdout(&a), stdout(&b));
    // mixing the two styles is a usage error
    let c = run(&["solve", "--alpha", "0", "--delta", "3", "--sigma", "2", "--mu", "1"]);
    assert_eq!(c.status.code(), Some(2));
}

#[test]
fn classify_alpha_minus_one() {
    let o = run(&["classify", "--alpha", "-1", "--delta", "3", "--sigma", "2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tag"], "AlphaMinusOne");
    assert_eq!(v["case"], "T2-mu-kappa");
    assert_eq!(v["bound_state_count"], 3);
}

#[test]
fn classify_tolerance_flag() {
    // c1 = (δ−1)(σ−1) − 1 = 1e−12 sits on the boundary within tol
    let sigma = (1.0 + 1e-12) / 2.0 + 1.0;
    let s = sigma.to_string();
    let strict = run(&["classify", "--alpha", "0", "--delta", "3", "--sigma", &s]);
    let loose = run(&["classify", "--alpha", "0", "--delta", "3", "--sigma", &s, "--tol", "1e-9"]);
    assert!(strict.status.success() && loose.status.success());
    let a: Value = serde_json::from_str(&stdout(&strict)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&loose)).unwrap();
    assert_eq!(a["tag"], "U1(+,+)");
    assert_ne!(a["tag"], b["tag"]);
}

#[test]
fn sweep_csv_shape() {
    let o = run(&["sweep", "--alpha", "0", "--grid", "-4:4:-4:4:40"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["delta", "sigma", "tag", "count"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1600);
    // row-major, δ fastest, cell centres
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), -3.9);
    assert_eq!(rows[1][1], rows[0][1]);
    let mut tags: Vec<&str> = rows.iter().map(|r| &r[2]).collect();
    tags.sort_unstable();
    tags.dedup();
    assert_eq!(tags.len(), 5, "{tags:?}");
    // all six regions appear for |α + 1| < 1
    let o = run(&["sweep", "--alpha", "-0.5", "--grid", "-4:4:-4:4:40", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut tags: Vec<&str> = v.as_array().unwrap().iter().map(|c| c["tag"].as_str().unwrap()).collect();
    tags.sort_unstable();
    tags.dedup();
    assert_eq!(tags.len(), 6);
}

#[test]
fn eigvec_csv_round_trips_and_is_an_eigenvector() {
    let o = run(&["eigvec", "--mu", "4", "--mu1", "3", "--select", "0", "--window", "40"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["k", "f_k"]);
    let rows: Vec<(i64, f64)> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0].0, -40);
    let f: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let p = PhysicalParams::new(1.0, 0.0, 4.0, 3.0).unwrap();
    let nu = 4.348139347119629;
    let hf = latspec::apply_hamiltonian(&p, &f).unwrap();
    let r: f64 = hf.iter().zip(&f).map(|(a, b)| (a - nu * b).powi(2)).sum::<f64>().sqrt();
    assert!(r < 1e-8, "residual {r}");
}

#[test]
fn eigvec_ambiguous_selection_is_an_error() {
    let args = ["eigvec", "--alpha", "-1", "--delta", "3", "--sigma", "2", "--select", "kappa"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(3));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "selection");
    let mut more = args.to_vec();
    more.extend(["--vector", "1"]);
    assert!(run(&more).status.success());
}

#[test]
fn verify_passes_and_fails_as_a_gate() {
    let ok = run(&["verify", "--mu", "4", "--mu1", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    // a window far shorter than the decay length of the weakly bound
    // state loses it, and verify must say so
    let bad = run(&["verify", "--mu", "0.05", "--window", "5"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn evolve_conserves_probability() {
    let o = run(&[
        "evolve", "--mu", "4", "--mu1", "3", "--window", "30", "--t-max", "5", "--samples", "3",
    ]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["t", "site", "prob"]);
    let rows: Vec<(f64, i64, f64)> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3 * 61);
    for chunk in rows.chunks(61) {
        let total: f64 = chunk.iter().map(|r| r.2).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
    assert_eq!(rows[30], (0.0, 0, 1.0));
}

#[test]
fn domain_error_is_machine_readable() {
    let o = run(&["solve", "--lambda", "-1"]);
    assert_eq!(o.status.code(), Some(3));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "domain");
    assert!(e["error"]["message"].as_str().unwrap().contains("lambda"));
    let o = run(&["sweep", "--alpha", "0", "--grid", "1:2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let o = run(&["solve", "--mu", "4", "--mu1", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("nu,gamma,origin,parity,multiplicity,bracket_lo,bracket_hi,embedded\n"));
    assert_eq!(text.lines().count(), 4);
    // floats round-trip exactly
    let nu: f64 = text.lines().nth(2).unwrap().split(',').next().unwrap().parse().unwrap();
    assert_eq!(nu, 16.0 / 3.0);
}

#[test]
fn empty_result_still_has_header() {
    let o = run(&["solve", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "nu,gamma,origin,parity,multiplicity,bracket_lo,bracket_hi,embedded\n");
}

use std::path::PathBuf;
use std::process::{Command, Output};

use mgh_core::random::random_matchgate_circuit;
use mgh_core::{equal_up_to_phase, parse_circuit, Operator, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mgh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgh"))
        .args(args)
        .env_remove("MGH_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

#[test]
fn classify_swap() {
    let o = mgh(&["classify", "--gate", "SWAP", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["min_level"], 3);
    assert_eq!(v["parity"], "even");
    assert_eq!(v["is_gaussian"], false);
}

#[test]
fn classify_bell_circuit() {
    let path = fixture("bn2.mg");
    let o = mgh(&["classify", "--circuit", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["is_gaussian"], true);
    assert_eq!(v["rotation_det"], 1.0);
    assert_eq!(v["min_level"], 2);
}

#[test]
fn classify_eighth_root_phase() {
    let o = mgh(&["classify", "--gate", "CPHASE(0.7853981633974483)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["min_level"], 5);
    let phi = v["two_qubit"]["phi"].as_f64().unwrap();
    assert!((phi - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn classify_above_bound_is_inconclusive() {
    let o = mgh(&["classify", "--gate", "CPHASE(pi/4)", "--k-max", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("min level: above 4"));
}

#[test]
fn classify_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cz.json");
    std::fs::write(&path, r#"{"n": 2, "re": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,-1]], "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#).unwrap();
    let o = mgh(&["classify", "--matrix", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["min_level"], 3);
}

#[test]
fn bad_gate_is_an_input_error() {
    let o = mgh(&["classify", "--gate", "TOFFOLI"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown gate"));
}

#[test]
fn teleport_swap() {
    let o = mgh(&["teleport", "--gate", "SWAP", "--trials", "5", "--seed", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["report"]["branches"], 16);
    assert_eq!(v["transcript"]["branches"].as_array().unwrap().len(), 16);
    assert!(v["transcript"]["branches"][0].get("corrected").is_none());
}

#[test]
fn teleport_cz_and_pattern_gate() {
    let o = mgh(&["teleport", "--gate", "CZ", "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
    let o = mgh(&["teleport", "--gate", "F(1,*,1)", "-n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS: 64 branches"));
}

#[test]
fn teleport_full_transcript_keeps_states() {
    let o = mgh(&["teleport", "--gate", "CZ", "--trials", "1", "--full", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["transcript"]["branches"][5]["corrected"]["n"], 2);
    assert_eq!(v["transcript"]["gate"]["n"], 2);
}

#[test]
fn teleport_rejects_non_fermionic_gate() {
    let o = mgh(&["teleport", "--gate", "G H I"]);
    // G(H, 1) fails the determinant check but is still fermionic, so it teleports
    assert_eq!(o.status.code(), Some(0));
    // H on the first qubit mixes parities
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h1.json");
    let re = format!("[[{h},0,{h},0],[0,{h},0,{h}],[{h},0,-{h},0],[0,{h},0,-{h}]]");
    let im = "[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]";
    std::fs::write(&path, format!(r#"{{"n": 2, "re": {re}, "im": {im}}}"#)).unwrap();
    let o = mgh(&["teleport", "--matrix", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not fermionic"));
}

#[test]
fn identical_config_gives_identical_json() {
    let args = ["teleport", "--gate", "CPHASE(pi/2)", "--trials", "3", "--seed", "11", "--format", "json"];
    assert_eq!(mgh(&args).stdout, mgh(&args).stdout);
}

#[test]
fn svn_fixtures() {
    let o = mgh(&["svn", fixture("jw2.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let u: Operator = serde_json::from_value(json(&o)["u"].clone()).unwrap();
    assert!(u.max_diff(&Operator::identity(2)) < 1e-12);

    let o = mgh(&["svn", fixture("swap_tuple.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let u: Operator = serde_json::from_value(json(&o)["u"].clone()).unwrap();
    let swap = mgh_core::circuits::gates::swap();
    assert!(equal_up_to_phase(&u, &swap, &Tolerances::default()).unwrap().equal);
}

#[test]
fn svn_sign_flip_still_satisfies_contract() {
    let mut tuple: Value = serde_json::from_str(&std::fs::read_to_string(fixture("jw2.json")).unwrap()).unwrap();
    let op = &mut tuple["ops"][1];
    for part in ["re", "im"] {
        for row in op[part].as_array_mut().unwrap() {
            for x in row.as_array_mut().unwrap() {
                *x = Value::from(-x.as_f64().unwrap());
            }
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flipped.json");
    std::fs::write(&path, tuple.to_string()).unwrap();
    let o = mgh(&["svn", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-12);
    let u: Operator = serde_json::from_value(v["u"].clone()).unwrap();
    assert!(!equal_up_to_phase(&u, &Operator::identity(2), &Tolerances::default()).unwrap().equal);
}

#[test]
fn svn_reports_car_failure() {
    let mut tuple: Value = serde_json::from_str(&std::fs::read_to_string(fixture("jw2.json")).unwrap()).unwrap();
    tuple["ops"][2] = tuple["ops"][0].clone();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, tuple.to_string()).unwrap();
    let o = mgh(&["svn", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pair (1, 3)"));
}

#[test]
fn parse_canonical_round_trip() {
    let o = mgh(&["parse", fixture("bn2.mg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("again.mg");
    std::fs::write(&path, &text).unwrap();
    let again = mgh(&["parse", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn parse_rejects_swap_attempt() {
    let o = mgh(&["parse", fixture("swap_attempt.mg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 1") && err.contains("determinant mismatch"), "{err}");
}

#[test]
fn parse_emits_orthogonal_rotation() {
    let c = random_matchgate_circuit(4, 20, &mut ChaCha8Rng::seed_from_u64(5));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.mg");
    std::fs::write(&path, c.to_text()).unwrap();
    let o = mgh(&["parse", path.to_str().unwrap(), "--emit", "rotation"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = serde_json::from_value(json(&o)["rotation"].clone()).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let dot: f64 = (0..8).map(|k| rows[i][k] * rows[j][k]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-12);
        }
    }
    let m = mgh(&["parse", path.to_str().unwrap(), "--emit", "matrix"]);
    let u: Operator = serde_json::from_slice(&m.stdout).unwrap();
    let direct = mgh_core::circuit_to_operator(&parse_circuit(&c.to_text()).unwrap());
    assert!(u.max_diff(&direct) < 1e-15);
}

#[test]
fn classes_per_level() {
    let o = mgh(&["classes", "--format", "json"]);
    let v = json(&o);
    for l in v["levels"].as_array().unwrap() {
        let k = l["k"].as_u64().unwrap();
        if k >= 3 {
            assert_eq!(l["even"].as_array().unwrap().len(), 1 << (k - 2));
            assert_eq!(l["generalised"].as_array().unwrap().len(), (1 << (k - 3)) + 1);
        }
    }
}

#[test]
fn tolerance_override_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mgh"))
        .args(["classify", "--gate", "SWAP"])
        .env("MGH_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_mgh"))
        .args(["teleport", "--gate", "SWAP", "--trials", "1"])
        .env("MGH_TOL", "1e-20")
        .output()
        .unwrap();
    // no floating-point run gets residuals below 1e-20
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_single_criterion() {
    let o = mgh(&["selftest", "--only", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS] CAR suite"));
    assert_eq!(mgh(&["selftest", "--only", "11"]).status.code(), Some(1));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pellforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellforge")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

#[test]
fn solve_case1_reports_isolated_point() {
    let out = pellforge(&["solve-case1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["isolated"][0], serde_json::json!(["311/64", "61/8", "9/2", "11/4"]));
    assert_eq!(j["values"][0]["b0"], "-3720087/131072");
    assert_eq!(j["parametric"].as_array().unwrap().len(), 2);
}

#[test]
fn signature_errors_exit_2() {
    let out = pellforge(&["build", "--sig", "1,1,2,4,4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3x = q + 2y"));
    assert_eq!(pellforge(&["build", "--sig", "1,2,3"]).status.code(), Some(2));
    assert_eq!(pellforge(&["reduce", "--sig", "x"]).status.code(), Some(2));
    assert_eq!(pellforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pellforge(&["verify"]).status.code(), Some(2));
}

#[test]
fn build_balanced_signature() {
    let out = pellforge(&["build", "--sig", "9,9,9,9,9", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["system"]["eqs"].as_array().unwrap().len(), 27);
    let out = pellforge(&["build", "--sig", "0,1,2,4,5", "--json"]);
    assert_eq!(json(&out)["unknowns"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_family_files() {
    assert_eq!(pellforge(&["verify", "--family", &fixture("case1_final.json")]).status.code(), Some(0));
    let bad = pellforge(&["verify", "--family", &fixture("case1_perturbed.json"), "--json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["pass"], false);
    assert_eq!(pellforge(&["verify", "--family", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn verify_corpus_passes() {
    let out = pellforge(&["verify", "--corpus", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["pass"], true);
    let names: Vec<&str> = j["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.contains(&"case3_lift_19_8"));
}

#[test]
fn pell_records_are_exact_decimal_strings() {
    let out = pellforge(&["pell", "--family", "letter", "--count", "18", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j[1]["x"], "35334750");
    assert_eq!(j[8]["t"], "812111750209");
    assert_eq!(j[17]["t"], "-48926085100653611109021839");
    let same = json(&pellforge(&["pell", "--family", "caseI", "--kappa", "1", "--count", "18", "--json"]));
    assert_eq!(j, same);
}

#[test]
fn rho_command() {
    let out = pellforge(&["rho", "35334750", "132", "-17424"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "5.339264");
    assert_eq!(pellforge(&["rho", "1", "1", "1"]).status.code(), Some(1));
    assert_eq!(pellforge(&["rho", "x", "1", "1"]).status.code(), Some(2));
}

#[test]
fn algdep_recognizes_sqrt2_in_7_adics() {
    // Newton iteration for √2 from 3 (3² ≡ 2 mod 7)
    let k = 30u32;
    let m = num_bigint::BigInt::from(7).pow(k);
    let mut a = num_bigint::BigInt::from(3);
    for _ in 0..6 {
        let inv = (&a * 2u32).modinv(&m).unwrap();
        a = ((&a - (&a * &a - 2u32) * inv) % &m + &m) % &m;
    }
    let out = pellforge(&["algdep", "--value", &a.to_string(), "-p", "7", "-K", "30", "--dmax", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let poly: Vec<&str> = j[0]["poly"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert!(poly == ["-2", "0", "1"] || poly == ["2", "0", "-1"]);
    assert_eq!(j[0]["verified"], true);
}

#[test]
fn case2_reduce_scan_lift_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("rII.json");
    let sys_s = sys.to_str().unwrap();
    assert_eq!(pellforge(&["reduce", "--sig", "1,1,2,6,8", "--target-vars", "4", "-o", sys_s]).status.code(), Some(0));

    let par = pellforge(&["scan", sys_s, "-p", "17", "--json", "--jobs", "2"]);
    let ser = pellforge(&["scan", sys_s, "-p", "17", "--json", "--serial"]);
    assert_eq!(par.status.code(), Some(0));
    assert_eq!(par.stdout, ser.stdout);
    let sols = json(&par);
    let shadow = serde_json::json!({ "coords": [8, 13, 16, 0], "status": "Invertible", "det": 6 });
    assert!(sols.as_array().unwrap().contains(&shadow));

    let fixed = json(&pellforge(&["scan", sys_s, "-p", "17", "--fix", "x2=8", "--fix", "x3=13", "--json"]));
    assert!(fixed.as_array().unwrap().contains(&shadow));

    let lifted = pellforge(&["lift", sys_s, "--seed", "8,13,16,0", "-p", "17", "-K", "64", "--json"]);
    assert_eq!(lifted.status.code(), Some(0));
    let j = json(&lifted);
    assert_eq!(j["residual_valuation"], 64);
    let pt: pellforge::padic::PadicPoint = serde_json::from_value(j["point"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&pt).unwrap(), j["point"]);
    assert_eq!(pt.coords[0].clone() % 17u32, 8.into());

    let rec = pellforge(&["algdep", "--system", sys_s, "--seed", "8,13,16,0", "--var", "q0", "-p", "17", "-K", "64", "--dmax", "4", "--json"]);
    assert_eq!(rec.status.code(), Some(0));
    assert_eq!(json(&rec)[0]["verified"], true);

    assert_eq!(pellforge(&["lift", sys_s, "--seed", "1,1,1,1", "-p", "17"]).status.code(), Some(1));
}

#[test]
fn appendix_trace_has_no_mismatch() {
    let out = pellforge(&["appendix", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let steps = json(&out);
    assert!(steps.as_array().unwrap().iter().all(|s| s["agreement"] != "Mismatch"));
}

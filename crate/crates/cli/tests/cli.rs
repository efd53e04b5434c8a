//! End-to-end tests of the command-line interface: exit codes, output
//! shapes, and the certificate round trip through `family verify`.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("write fixture");
}

#[test]
fn symbol_hilbert_real_negatives() {
    let out = run(&["symbol", "hilbert", "-1", "-1", "--place", "real"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "-1");
}

#[test]
fn symbol_hilbert_finite_and_trivial() {
    let out = run(&["symbol", "hilbert", "2", "5", "--place", "5"]);
    assert_eq!(stdout(&out), "-1");
    let out = run(&["symbol", "hilbert", "1", "7", "--place", "3"]);
    assert_eq!(stdout(&out), "+1");
}

#[test]
fn symbol_rejects_bad_input() {
    assert_eq!(code(&run(&["symbol", "hilbert", "x", "1", "--place", "3"])), 2);
    assert_eq!(code(&run(&["symbol", "hilbert", "1", "1", "--place", "6"])), 2);
    assert_eq!(code(&run(&["symbol", "hilbert", "0", "1", "--place", "3"])), 2);
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn form_invariants_json() {
    let out = run(&["form", "invariants", "1,-1,3"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["dim"], 3);
    assert_eq!(v["det"], "-3");
    assert_eq!(v["signature"][0], 2);
    assert_eq!(v["signature"][1], 1);
    assert_eq!(v["hasse"]["2"], -1);
    assert_eq!(v["hasse"]["3"], -1);
}

#[test]
fn form_witt_at_place() {
    let out = run(&["form", "witt", "1,1,1,1", "--place", "3", "--plain"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2");
    let out = run(&["form", "witt", "1,1,1,1", "--place", "2", "--plain"]);
    assert_eq!(stdout(&out), "0");
}

#[test]
fn form_realize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    write(
        &profile,
        r#"{"dim": 4, "det": "1", "signature": [2, 2], "hasse": {"3": -1}}"#,
    );
    let out = run(&["form", "realize", "--profile", profile.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let entries: Vec<String> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e.as_str().unwrap().to_string())
        .collect();
    assert_eq!(entries.len(), 4);
    // feed the entries back through `form invariants`
    let out2 = run(&["form", "invariants", &entries.join(",")]);
    let v2: serde_json::Value = serde_json::from_str(&stdout(&out2)).expect("json");
    assert_eq!(v2["dim"], 4);
    assert_eq!(v2["det"], "1");
    assert_eq!(v2["hasse"]["3"], -1);
}

#[test]
fn form_realize_rejects_inadmissible() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.json");
    // dimension 1 with a finite Hasse value of -1 is impossible
    write(
        &profile,
        r#"{"dim": 1, "det": "1", "signature": [1, 0], "hasse": {"3": -1}}"#,
    );
    let out = run(&["form", "realize", "--profile", profile.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn herm_check_construct_rank() {
    let dir = tempfile::tempdir().unwrap();
    let constraints = dir.path().join("constraints.json");
    write(
        &constraints,
        r#"{"signatures": {"v1": [2, 1]}, "discs": {"w1": -1}, "balance_place": "w0"}"#,
    );
    let out = run(&[
        "herm",
        "construct",
        "--dim",
        "3",
        "--profile",
        constraints.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let profile = dir.path().join("profile.json");
    write(&profile, &stdout(&out));
    let out = run(&["herm", "check", profile.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = run(&["herm", "rank", profile.to_str().unwrap(), "--place", "w1", "--plain"]);
    assert_eq!(stdout(&out), "1");
}

#[test]
fn herm_check_fails_on_violation() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("bad.json");
    // even signature contribution but a single finite -1: product is -1
    write(
        &profile,
        r#"{"dim": 2, "nonsplit_real_signatures": {"v1": [2, 0]}, "finite_disc_minus": ["w1"], "split_places": []}"#,
    );
    let out = run(&["herm", "check", profile.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn brauer_pair_report() {
    let out = run(&["brauer", "pair", "--d", "3", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["report"]["index_e1"], 3);
    assert_eq!(v["report"]["index_e2"], 3);
    assert_eq!(v["report"]["all_pass"], true);
}

#[test]
fn field_forge_type_ii_quintic() {
    let out = run(&["field", "forge", "--type", "II", "--degree", "5"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["certificate"]["conclusion"], "Sn");
    assert_eq!(v["profile"]["degree"], 5);
}

#[test]
fn field_certify_sn_and_refutation() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    let g = dir.path().join("g.txt");
    write(&f, "-1,-3,0,0,0,1\n"); // x^5 - 3x - 1
    write(&g, "1,0,0,0,1\n"); // x^4 + 1, abelian: never certified
    let out = run(&["field", "certify-sn", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = run(&["field", "certify-sn", g.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    // different degrees are refuted immediately
    let out = run(&[
        "field",
        "arith-equiv",
        f.to_str().unwrap(),
        g.to_str().unwrap(),
        "--bound",
        "100",
    ]);
    assert_eq!(code(&out), 1);
    // a polynomial is trivially equivalent to itself
    let out = run(&[
        "field",
        "arith-equiv",
        f.to_str().unwrap(),
        f.to_str().unwrap(),
        "--bound",
        "100",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn family_build_so_pass_and_fail() {
    let out = run(&["family", "build", "so", "--r", "6", "--s", "2", "--n", "3", "--plain"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("pass"));
    let out = run(&["family", "build", "so", "--r", "5", "--s", "3", "--n", "3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("inner-of-compact fails"));
}

#[test]
fn family_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "family", "build", "su", "--r", "2", "--s", "2", "--n", "3", "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(cert.exists());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).expect("json");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["conclusion"], "Pass");
    let out = run(&["family", "verify", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn family_verify_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "family", "build", "su", "--r", "2", "--s", "2", "--n", "3", "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    // tamper: claim a failing family passes by flipping a local datum
    let text = std::fs::read_to_string(&cert).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["descriptors"][0]["dim"] = serde_json::json!(5);
    write(&cert, &serde_json::to_string(&v).unwrap());
    let out = run(&["family", "verify", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn family_rigidity_decisions() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c1.txt");
    let g = dir.path().join("c2.txt");
    write(&f, "-1,-1,0,1\n"); // x^3 - x - 1: one real root
    write(&g, "-1,-1,0,1\n");
    let out = run(&[
        "family", "rigidity", "--type", "E8C", "--f1", f.to_str().unwrap(), "--f2",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["decision"], "Commensurable");
    let out = run(&[
        "family", "rigidity", "--type", "E7C", "--f1", f.to_str().unwrap(), "--f2",
        g.to_str().unwrap(), "--plain",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("not applicable"));
}

#[test]
fn family_build_generic_and_sl() {
    let out = run(&["family", "build", "generic", "--cartan", "E7", "--base", "complex", "--n", "8", "--plain"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["family", "build", "sl", "--dim", "4", "--base", "real", "--n", "3", "--plain"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // odd dimensions are invalid input
    let out = run(&["family", "build", "sl", "--dim", "5", "--base", "real", "--n", "3"]);
    assert_eq!(code(&out), 2);
}

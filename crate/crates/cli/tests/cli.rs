use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const WORKED: [&str; 7] = [
    "--params",
    "2,5,3",
    "--allow-custom-a",
    "--a",
    "0,1,0,0",
    "--g",
    "-2,0,0,1",
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-ortho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn params_reports_violations_with_exit_two() {
    let ok = run(&["params", "2", "5", "3"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["n"], 12);

    let bad = run(&["params", "2", "7", "3"]);
    assert_eq!(code(&bad), 2);
    let v = json(&bad);
    assert_eq!(v["ok"], false);
    assert!(v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s.as_str().unwrap().contains("order of 2 mod 7 is 3")));

    assert_eq!(code(&run(&["params", "4", "5", "3"])), 2);
    assert_eq!(
        code(&run(&["build", "--params", "2,7,3", "--seed", "00"])),
        2
    );
}

#[test]
fn malformed_input_exits_four() {
    assert_eq!(code(&run(&["build", "--params", "2,5", "--seed", "00"])), 4);
    assert_eq!(
        code(&run(&["build", "--params", "2,5,3", "--seed", "zz"])),
        4
    );
    assert_eq!(code(&run(&["analyze", "--p", "2", "--poly", "1,x"])), 4);
    assert_eq!(
        code(&run(&[
            "verify",
            "--key",
            "/nonexistent/pk.json",
            "--text",
            "m",
            "--sig",
            "/nonexistent"
        ])),
        4
    );
}

#[test]
fn worked_example_transcript() {
    let out = run(&[&["build"], &WORKED[..]].concat());
    assert_eq!(code(&out), 0);
    let t = json(&out);
    let f: Vec<&str> = t["F"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(
        f,
        ["11", "51", "60", "-14", "123", "156", "55", "0", "-3", "2", "6", "3", "1"]
    );
    assert_eq!(t["certificate"], "orthogonal");
    let grades: Vec<&str> = t["basis"]["grades"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["valuation"].as_str().unwrap())
        .collect();
    assert_eq!(grades, ["0", "1/3", "2/3"]);
    assert_eq!(t["basis"]["grid"].as_array().unwrap().len(), 12);
}

#[test]
fn seeded_build_is_deterministic_and_recertifies() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["build", "--params", "3,5,2", "--seed", "0a0b"]);
    let b = run(&["build", "--params", "3,5,2", "--seed", "0a0b"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let file = dir.path().join("t.json");
    let out = run(&[
        "build",
        "--params",
        "3,5,2",
        "--seed",
        "0a0b",
        "--out",
        path(&file),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("F = "));
    let re = run(&["analyze", "--basis", path(&file)]);
    assert_eq!(code(&re), 0);
    assert_eq!(json(&re)["certified"], true);
}

#[test]
fn analyze_power_bases() {
    let phi5 = json(&run(&["analyze", "--p", "2", "--poly", "1,1,1,1,1"]));
    assert_eq!(phi5["power_basis_orthogonal"], true);
    assert_eq!(phi5["digit_certificate"], "orthogonal");

    // ord_7(2) = 3: Φ_7 splits into two cubics mod 2
    let phi7 = json(&run(&["analyze", "--p", "2", "--poly", "1,1,1,1,1,1,1"]));
    assert_eq!(phi7["power_basis_orthogonal"], false);
    assert_eq!(
        phi7["factorization"].as_str().unwrap().matches('(').count(),
        2
    );
    assert!(phi7["digit_certificate"].is_object());

    let sq = json(&run(&["analyze", "--p", "2", "--poly=-2,0,1"]));
    assert_eq!(sq["power_basis_orthogonal"], false);
    assert_eq!(sq["factorization"], "X^2");
}

#[test]
fn keygen_sign_verify_flow() {
    let dir = tempfile::tempdir().unwrap();
    let keys = dir.path().join("keys");
    let mut args = vec!["keygen"];
    args.extend(WORKED);
    args.extend(["--seed", "00", "--out", path(&keys)]);
    assert_eq!(code(&run(&args)), 0);
    let (pk, sk) = (keys.join("pk.json"), keys.join("sk.json"));
    let pk_json: Value = serde_json::from_str(&std::fs::read_to_string(&pk).unwrap()).unwrap();
    assert_eq!(pk_json["m"], 8);
    assert!(pk_json.get("theta").is_none());

    let sig = dir.path().join("sig.json");
    let signed = run(&[
        "sign",
        "--key",
        path(&sk),
        "--text",
        "hi",
        "--seed",
        "01",
        "--out",
        path(&sig),
    ]);
    assert_eq!(code(&signed), 0);
    let again = dir.path().join("sig2.json");
    run(&[
        "sign",
        "--key",
        path(&sk),
        "--text",
        "hi",
        "--seed",
        "01",
        "--out",
        path(&again),
    ]);
    assert_eq!(std::fs::read(&sig).unwrap(), std::fs::read(&again).unwrap());

    let ok = run(&[
        "verify",
        "--key",
        path(&pk),
        "--text",
        "hi",
        "--sig",
        path(&sig),
    ]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["status"], "valid");
    assert_eq!(
        code(&run(&[
            "verify",
            "--key",
            path(&sk),
            "--text",
            "hi",
            "--sig",
            path(&sig)
        ])),
        0
    );

    let msg = dir.path().join("msg");
    std::fs::write(&msg, "hi").unwrap();
    assert_eq!(
        code(&run(&[
            "verify",
            "--key",
            path(&pk),
            "--message",
            path(&msg),
            "--sig",
            path(&sig)
        ])),
        0
    );

    let tampered = run(&[
        "verify",
        "--key",
        path(&pk),
        "--text",
        "hi!",
        "--sig",
        path(&sig),
    ]);
    assert_eq!(code(&tampered), 1);
    assert_eq!(json(&tampered)["valid"], false);

    // the verification equation only sees t modulo the maximal ideal: this
    // message's target shares the residue of H("hi" ‖ r) and is accepted
    assert_eq!(
        code(&run(&[
            "verify",
            "--key",
            path(&pk),
            "--text",
            "m10",
            "--sig",
            path(&sig)
        ])),
        0
    );

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&sig).unwrap()).unwrap();
    v["r"] = Value::String("ff".repeat(32));
    std::fs::write(&sig, v.to_string()).unwrap();
    assert_eq!(
        code(&run(&[
            "verify",
            "--key",
            path(&pk),
            "--text",
            "hi",
            "--sig",
            path(&sig)
        ])),
        1
    );

    std::fs::write(&sig, "{").unwrap();
    assert_eq!(
        code(&run(&[
            "verify",
            "--key",
            path(&pk),
            "--text",
            "hi",
            "--sig",
            path(&sig)
        ])),
        4
    );
}

#[test]
fn keygen_rejects_full_rank_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k");
    let mut args = vec![
        "keygen",
        "--params",
        "2,5,3,12",
        "--allow-custom-a",
        "--a",
        "0,1,0,0",
        "--g",
        "-2,0,0,1",
    ];
    args.extend(["--seed", "00", "--out", path(&out)]);
    let res = run(&args);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("no hash target"));
}

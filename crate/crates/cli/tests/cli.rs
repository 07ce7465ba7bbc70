use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pontryagin_cli::instance;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pontryagin"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn shipped_fixture_files_match_the_built_in_fixtures() {
    for name in ["example1", "example3"] {
        let shipped = std::fs::read_to_string(data(&format!("{name}.json"))).unwrap();
        let emitted = run(&["examples", name]);
        assert_eq!(code(&emitted), 0);
        assert_eq!(String::from_utf8(emitted.stdout).unwrap(), shipped);
        assert!(instance::parse(&shipped).is_ok());
    }
}

#[test]
fn analyze_example1() {
    let o = run(&["analyze", data("example1.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    assert_eq!(
        doc["intervals"][0]["eig"],
        serde_json::json!({"a1": 0, "a2": 2})
    );
    assert_eq!(doc["tolerance"]["rel"].as_f64(), Some(1e-9));
}

#[test]
fn verify_example3_with_witness() {
    let o = run(&[
        "verify",
        "--witness",
        data("example3.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = stdout_json(&o);
    assert_eq!(doc["results"][0]["report"]["slack"], 0);
    assert_eq!(doc["results"][0]["witness"]["q1_injective_on_k"], true);
}

#[test]
fn interval_flag_and_tolerance_flags() {
    let file = data("example1.json");
    let o = run(&[
        "analyze",
        file.to_str().unwrap(),
        "--interval",
        "-inf,+inf",
        "--tol-rel",
        "1e-10",
    ]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    assert_eq!(doc["intervals"][0]["interval"]["lower"], "-inf");
    assert_eq!(doc["intervals"][0]["eig"]["a1"], 2);
    assert_eq!(doc["tolerance"]["rel"].as_f64(), Some(1e-10));
    assert_eq!(
        code(&run(&["analyze", file.to_str().unwrap(), "--tol-rel", "2"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "analyze",
            file.to_str().unwrap(),
            "--interval",
            "3,1"
        ])),
        2
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"schema_version\": \"1.0\",\n  \"gram\": [[[1, 0], [2, 0]], [[0, 0], [-1, 0]]],\n  \"a1\": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]\n}\n",
    )
    .unwrap();
    let o = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(
        msg.contains("line 3") && msg.contains("not Hermitian"),
        "{msg}"
    );

    let o = run(&["analyze", "/nonexistent/file.json"]);
    assert_eq!(code(&o), 2);

    let mislabeled = dir.path().join("mislabeled.json");
    let text = std::fs::read_to_string(data("example1.json"))
        .unwrap()
        .replace("\"eig2\": 2", "\"eig2\": 5");
    std::fs::write(&mislabeled, text).unwrap();
    assert_eq!(code(&run(&["verify", mislabeled.to_str().unwrap()])), 1);

    let o = run(&[
        "analyze",
        data("example1.json").to_str().unwrap(),
        "--interval",
        "0.5000001,2",
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["examples", "nope"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("example1, example3"));
}

#[test]
fn examples_table() {
    let o = run(&["examples"]);
    assert_eq!(code(&o), 0);
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("example3") && !table.contains("MISMATCH"));
}

#[test]
fn hilbert_sweep_to_stdout() {
    let o = run(&["sweep", "--dims", "2", "--kappas", "0", "--seeds", "3"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("d,kplus,kminus,n,lower,upper,eig1,eig2,sig1,sig2,slack")
    );
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let n: i64 = f[3].parse().unwrap();
        let (e1, e2): (i64, i64) = (f[6].parse().unwrap(), f[7].parse().unwrap());
        assert!((e1 - e2).abs() <= n, "{line}");
        assert_eq!(f[2], "0");
    }
    let summary: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["instances"], 9);
}

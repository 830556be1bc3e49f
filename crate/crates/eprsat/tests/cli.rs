//! End-to-end checks of the binary: the documented exit codes, the file
//! artifacts, and the report schema.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eprsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn check_reports_class_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let seg = write(dir.path(), "seg.fol", "forall y1 y2 . R(y1,y2) | ~R(y2,y1)");
    let out = run(&["check", &seg]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "class=SBS s=0 t=2 m=1");

    let eq = write(dir.path(), "eq.fol", "forall y . y = a");
    let out = run(&["check", &eq]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("violations=[ContainsEquality]"));

    let out = run(&["check", dir.path().join("missing.fol").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let bad = write(dir.path(), "bad.fol", "P(a) &");
    let out = run(&["check", &bad]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_exit_codes_cover_all_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.fol", "forall y . P(y) | Q(a)");
    assert_eq!(run(&["solve", &sat]).status.code(), Some(0));

    let unsat = write(dir.path(), "unsat.fol", "forall y . P(y) & ~P(a)");
    assert_eq!(run(&["solve", &unsat]).status.code(), Some(1));

    // The fixed divergence formula: paper-literal UNSAT, oracle SAT.
    let diverge = write(dir.path(), "diverge.fol", "exists x . P(x) & ~P(a)");
    let out = run(&[
        "solve",
        &diverge,
        "--policy",
        "paper-literal",
        "--oracle-check",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("DISAGREE"));
    assert_eq!(
        run(&["solve", &diverge, "--policy", "skolem", "--oracle-check"])
            .status
            .code(),
        Some(0)
    );

    // Instance cap.
    let big = write(
        dir.path(),
        "big.fol",
        "forall y1 y2 . R(y1,y2) | S(a) | S(b)",
    );
    assert_eq!(run(&["solve", &big, "--cap", "3"]).status.code(), Some(4));
}

#[test]
fn solve_json_report_has_the_documented_keys() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.fol", "forall y . P(y) | Q(a)");
    let out = run(&["solve", &sat, "--json", "--oracle-check"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "class",
        "s",
        "t",
        "m",
        "ground_count",
        "prop_var_count",
        "verdict",
        "witness",
        "policy",
        "timings_ms",
        "oracle",
    ] {
        assert!(report.get(key).is_some(), "missing key {key}");
    }
    for key in ["parse", "ground", "translate", "solve"] {
        assert!(
            report["timings_ms"].get(key).is_some(),
            "missing timing {key}"
        );
    }
    assert_eq!(report["verdict"], "SAT");
    assert_eq!(report["oracle"]["agrees"], true);
}

#[test]
fn ground_writes_listing_and_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "m2t2.fol",
        "forall y1 y2 . R(y1,y2) | S(a) | S(b)",
    );
    let base = dir.path().join("out");
    let out = run(&["ground", &file, "--out", base.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let ground = std::fs::read_to_string(dir.path().join("out.ground")).unwrap();
    assert_eq!(ground.lines().count(), 4);
    assert!(ground.starts_with("R(a,a) | S(a) | S(b)\n"));

    let dimacs = std::fs::read_to_string(dir.path().join("out.cnf")).unwrap();
    assert!(dimacs.contains("p cnf "));
    assert!(dimacs.contains("c 1 R(a,a)"));
}

#[test]
fn oracle_emits_model_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "w.fol", "exists x . P(x) & ~P(a)");
    let out = run(&["oracle", &file, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], "SAT");
    assert_eq!(report["bound"], 2);
    assert_eq!(report["model"]["domain_size"], 2);
    assert_eq!(report["model"]["constants"]["a"], 0);
    assert_eq!(report["model"]["relations"]["P"], serde_json::json!([[1]]));
}

#[test]
fn pad_unpad_round_trip_via_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "three.txt", "abc");
    // 3 bytes at k=2: 3^2 = 9, so 512 bytes.
    let out = run(&["pad", &file, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let padded = dir.path().join("three.txt.padded");
    assert_eq!(std::fs::metadata(&padded).unwrap().len(), 512);

    let out = run(&["unpad", padded.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let payload = std::fs::read(dir.path().join("three.txt.padded.payload")).unwrap();
    assert_eq!(payload, b"abc");

    // Budget refusal is exit 4 and reports the exponent.
    let eight = write(dir.path(), "eight.txt", "12345678");
    let out = run(&["pad", &eight, "--k", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2^64"));

    // Malformed padded input is exit 2.
    let not_padded = write(dir.path(), "plain.txt", "hello");
    let out = run(&["unpad", &not_padded, "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_padded_run_matches_plain_run() {
    let dir = tempfile::tempdir().unwrap();
    let text = "P(a) & ~P(a)"; // 12 bytes, so the padded blob is 4 KiB
    let plain = write(dir.path(), "s.fol", text);
    let out = run(&["pipeline", &plain, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let plain_report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();

    let padded_path = dir.path().join("s.fol.padded");
    let out = run(&["pad", &plain, "--out", padded_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let ground_out = dir.path().join("s.ground");
    let out = run(&[
        "pipeline",
        padded_path.to_str().unwrap(),
        "--padded",
        "--json",
        "--out",
        ground_out.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let padded_report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();

    assert_eq!(plain_report["verdict"], padded_report["verdict"]);
    assert_eq!(plain_report["ground_count"], padded_report["ground_count"]);
    assert_eq!(padded_report["padded_length"], 1u64 << text.len());
    assert!(padded_report["ms_per_padded_byte"].is_number());
    assert!(padded_report["timings_ms"]["unpad"].is_number());

    // The emitted ground set is padded out to the input's total length.
    let ground = std::fs::read(&ground_out).unwrap();
    assert_eq!(ground.len() as u64, 1u64 << text.len());
    assert!(ground.ends_with(b"#"));

    // A truncated blob fails at the unpad stage.
    let mut broken = std::fs::read(&padded_path).unwrap();
    broken.pop();
    let broken_path = dir.path().join("broken.padded");
    std::fs::write(&broken_path, &broken).unwrap();
    let out = run(&["pipeline", broken_path.to_str().unwrap(), "--padded"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unpad"));
}

#[test]
fn bench_is_reproducible_modulo_timings() {
    let table = |out: &Output| -> Vec<Vec<String>> {
        stdout(out)
            .lines()
            .skip(1)
            .map(|line| {
                // Timing columns are the last four fields.
                let fields: Vec<&str> = line.rsplitn(5, ',').collect();
                let deterministic = fields.last().unwrap();
                deterministic.split(',').map(str::to_string).collect()
            })
            .collect()
    };
    let a = run(&["bench", "--m", "2", "--t", "1..4", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&["bench", "--m", "2", "--t", "1..4", "--seed", "7"]);
    let rows_a = table(&a);
    let rows_b = table(&b);
    assert_eq!(rows_a, rows_b, "same seed must reproduce the same family");
    assert_eq!(rows_a.len(), 4);

    // ground_count column doubles with each extra universal variable.
    let counts: Vec<&str> = rows_a
        .iter()
        .map(|row| row[row.len() - 3].as_str())
        .collect();
    assert_eq!(counts, vec!["2", "4", "8", "16"]);

    let c = run(&["bench", "--m", "2", "--t", "1..4", "--seed", "8"]);
    assert_ne!(table(&c), rows_a, "different seeds give different families");
}

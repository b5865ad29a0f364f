use std::path::Path;
use std::process::{Command, Output};

use psirh_core::primorial;
use serde_json::Value;

fn psirh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psirh"))
        .args(args)
        .output()
        .expect("spawn psirh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_runtime(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("runtime_seconds"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn identical_runs_are_byte_identical() {
    for format in ["csv", "json"] {
        let args = [
            "scan",
            "--criterion",
            "g",
            "--hi",
            "20000",
            "--format",
            format,
        ];
        let (a, b) = (psirh(&args), psirh(&args));
        assert!(a.status.success());
        assert_eq!(without_runtime(&stdout(&a)), without_runtime(&stdout(&b)));
    }
    let args = ["table1", "--indices", "10,1000", "--format", "csv"];
    assert_eq!(
        without_runtime(&stdout(&psirh(&args))),
        without_runtime(&stdout(&psirh(&args)))
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        psirh(&["scan", "--criterion", "f", "--hi", "1000"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        psirh(&[
            "scan",
            "--criterion",
            "f",
            "--hi",
            "100",
            "--fail-on-exception"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        psirh(&[
            "scan",
            "--criterion",
            "f",
            "--lo",
            "31",
            "--hi",
            "1000",
            "--fail-on-exception"
        ])
        .status
        .code(),
        Some(0)
    );

    let usage = psirh(&["scan", "--lo", "1"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("--lo"));
    assert!(usage.stdout.is_empty());

    let inverted = psirh(&["scan", "--lo", "50", "--hi", "10"]);
    assert_eq!(inverted.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&inverted.stderr).contains("--hi"));

    assert_eq!(psirh(&["scan", "--criterion", "h"]).status.code(), Some(2));
    assert_eq!(psirh(&["nonsense"]).status.code(), Some(2));
    assert_eq!(psirh(&["table2", "--indices", "0"]).status.code(), Some(2));
    assert_eq!(psirh(&["mertens", "--indices", "1"]).status.code(), Some(2));

    let big = psirh(&["scan", "--hi", "1000000000"]);
    assert_eq!(big.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&big.stderr).contains("--hi"));
    assert_eq!(
        psirh(&["table2", "--indices", "20000000"]).status.code(),
        Some(3)
    );
    assert_eq!(psirh(&["props", "--hi", "2000000"]).status.code(), Some(3));
}

#[test]
fn json_and_csv_carry_identical_values() {
    let idx = "10,1000,100000";
    let json = stdout(&psirh(&["table1", "--indices", idx, "--format", "json"]));
    let csv = stdout(&psirh(&["table1", "--indices", idx, "--format", "csv"]));
    let doc: Value = serde_json::from_str(&json).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let columns: Vec<&str> = doc["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], columns.join(","));
    assert_eq!(data.len() - 1, rows.len());

    let expected = primorial::table1(&[10, 1000, 100_000], None).unwrap();
    for ((line, row), lib) in data[1..].iter().zip(rows).zip(&expected) {
        for (cell, col) in line.split(',').zip(&columns) {
            match &row[col] {
                Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap()),
                Value::Null => assert!(cell.is_empty()),
                other => panic!("unexpected {other}"),
            }
        }
        assert_eq!(row["theta_ratio"].as_f64().unwrap(), lib.theta_ratio);
        assert_eq!(row["theta_hi"].as_f64().unwrap(), lib.theta.hi);
        assert_eq!(row["theta_lo"].as_f64().unwrap(), lib.theta.lo);
        assert_eq!(row["ftilde_deviation"].as_f64(), lib.ftilde_deviation);
        assert_eq!(row["k_ratio"].as_f64(), lib.k_ratio);
    }
}

#[test]
fn metadata_header_and_footer() {
    let out = stdout(&psirh(&["table2", "--indices", "3,10"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# command=table2");
    assert_eq!(lines[1], "# parameters=indices=3,10");
    assert!(lines[2].starts_with("# constants_sha256=") && lines[2].len() == 19 + 64);
    assert!(lines[3].starts_with("# version="));
    assert!(lines.last().unwrap().starts_with("# runtime_seconds="));
    assert!(out.ends_with('\n') && !out.contains('\r'));
}

#[test]
fn markdown_tables_lay_indices_out_as_columns() {
    let out = stdout(&psirh(&[
        "table2",
        "--indices",
        "3,10,100",
        "--format",
        "md",
    ]));
    assert!(out.contains("| n | 3 | 10 | 100 |"), "{out}");
    let row = out.lines().find(|l| l.starts_with("| f(N_n)")).unwrap();
    let cells: Vec<f64> = row
        .split('|')
        .map(str::trim)
        .skip(2)
        .filter(|c| !c.is_empty())
        .map(|c| c.parse().unwrap())
        .collect();
    for (got, want) in cells.iter().zip([0.22, -1.67, -4.24]) {
        assert!((got - want).abs() <= 0.01 + 1e-12, "{got} vs {want}");
    }
}

#[test]
fn synthetic_bfiles() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.txt", "1 2\n2 4\n3 6\n");
    let o = psirh(&[
        "oeis-check",
        "--bfile",
        &good,
        "--count",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["agrees"], true);
    assert_eq!(doc["summary"]["compared"], 3);

    let bad = write(dir.path(), "bad.txt", "1 2\n2 4\n3 7\n");
    let o = psirh(&[
        "oeis-check",
        "--bfile",
        &bad,
        "--count",
        "3",
        "--format",
        "json",
        "--fail-on-exception",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["first_mismatch_index"], "3");

    // the leading 1 of the published entry is skipped
    let with_one = write(
        dir.path(),
        "one.txt",
        "# A060735\n1 1\n2 2\n3 4\n4 6\n5 12\n",
    );
    let o = psirh(&[
        "oeis-check",
        "--bfile",
        &with_one,
        "--count",
        "10",
        "--format",
        "json",
    ]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["agrees"], true);
    assert_eq!(doc["summary"]["truncated"], true);
    assert_eq!(doc["summary"]["compared"], 4);

    let sa = write(
        dir.path(),
        "sa.txt",
        "1 1\n2 2\n3 4\n4 6\n5 12\n6 24\n7 36\n8 48\n9 60\n10 120\n",
    );
    let o = psirh(&[
        "oeis-check",
        "--bfile",
        &sa,
        "--sequence",
        "A004394",
        "--count",
        "10",
        "--format",
        "json",
    ]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["summary"]["agrees"], true);

    let broken = write(dir.path(), "broken.txt", "1 2\n2 4\nthree 6\n");
    let o = psirh(&["oeis-check", "--bfile", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let missing = dir.path().join("absent.txt");
    let o = psirh(&["oeis-check", "--bfile", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(psirh(&["oeis-check"]).status.code(), Some(2));
}

#[test]
fn cache_file_is_reused_and_version_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.cache");
    let p = path.to_str().unwrap();
    let cold = psirh(&["table1", "--indices", "10,250000", "--cache", p]);
    assert!(cold.status.success());
    assert!(path.exists());
    let warm = psirh(&["table1", "--indices", "10,250000", "--cache", p]);
    let strip = |o: &Output| {
        without_runtime(&stdout(o))
            .lines()
            .filter(|l| !l.starts_with("# parameters"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&cold), strip(&warm));
    let plain = psirh(&["table1", "--indices", "10,250000"]);
    assert_eq!(strip(&cold), strip(&plain));

    std::fs::write(&path, "psicache v99 stride=100000\n").unwrap();
    assert_eq!(
        psirh(&["table1", "--indices", "10", "--cache", p])
            .status
            .code(),
        Some(2)
    );
}

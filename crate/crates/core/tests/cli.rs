use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn permident(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permident"))
        .args(args)
        .env_remove("PERMIDENT_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn perm_defaults_to_determinantal() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.txt", "# a rank-2 example\n2 2\n1 2\n3 4\n");
    let o = permident(&["perm", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "10\nmethod: determinantal\n");
}

#[test]
fn perm_reports_fallback_for_high_rank() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let o = permident(&["perm", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\nmethod: naive\nfallback: rank 3\n");

    let o = permident(&["perm", "--method", "det", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn perm_json_and_methods_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.txt", "3 3\n2 3 4\n3 5 7\n4 7 10\n");
    for method in ["auto", "naive", "ryser", "det"] {
        let o = permident(&["--format", "json", "perm", "--method", method, s(&f)]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["value"], "536", "{method}");
    }
}

#[test]
fn det_and_hpow() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.txt", "2 2\n1 2\n3 4\n");
    let o = permident(&["det", s(&f)]);
    assert_eq!(stdout(&o), "-2\n");

    let o = permident(&["hpow", s(&f), "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 2\n1 1/2\n1/3 1/4\n");

    // The output is itself a valid matrix file.
    let round = write(&dir, "inv.txt", &stdout(&o));
    let o = permident(&["hpow", s(&round), "-1"]);
    assert_eq!(stdout(&o), "2 2\n1 2\n3 4\n");

    let z = write(&dir, "z.txt", "2 2\n0 1\n1 1\n");
    assert_eq!(permident(&["hpow", s(&z), "-1"]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(permident(&["det", "missing.txt"]).status.code(), Some(2));
    let bad = write(&dir, "bad.txt", "2 2\n1 2\n3\n");
    let o = permident(&["det", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let frac = write(&dir, "frac.txt", "1 1\n1/0\n");
    assert_eq!(permident(&["det", s(&frac)]).status.code(), Some(2));
    assert_eq!(permident(&["hunt", "--n", "two"]).status.code(), Some(2));
    assert_eq!(permident(&["hunt", "--n", "8"]).status.code(), Some(2));
    assert_eq!(
        permident(&["--format", "xml", "det", s(&bad)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn guard_env_is_honored() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let o = Command::new(env!("CARGO_BIN_EXE_permident"))
        .args(["perm", "--method", "ryser", s(&f)])
        .env("PERMIDENT_MAX_N", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn random_main_check() {
    let o = permident(&[
        "check", "main", "--random", "--n", "4", "--trials", "50", "--seed", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("50/50 hold\n"), "{out}");
    assert_eq!(
        out,
        stdout(&permident(&[
            "check", "main", "--random", "--n", "4", "--trials", "50", "--seed", "7"
        ]))
    );
}

#[test]
fn random_checks_for_every_identity() {
    for id in ["main", "cl", "cb", "fn1", "fn", "lemq"] {
        let o = permident(&[
            "--format", "json", "check", id, "--random", "--n", "4", "--trials", "10", "--seed",
            "3",
        ]);
        assert_eq!(o.status.code(), Some(0), "{id}");
        for line in stdout(&o).lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["holds"], true, "{id}: {line}");
            for key in ["identity_name", "n", "lhs", "rhs", "notes"] {
                assert!(v.get(key).is_some(), "{id}: missing {key}");
            }
        }
    }
}

#[test]
fn negative_control_is_not_a_violation() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "i.txt", "3 3\n1 0 0\n0 1 0\n0 0 1\n");
    let o = permident(&["check", "main", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lhs=36 rhs=27 FAILS (rank=3)"), "{out}");
}

#[test]
fn file_checks() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "2 2\n1 2\n3 4\n");
    let o = permident(&["check", "cl", s(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lhs=5/144 rhs=5/144 holds"));

    let uv = write(&dir, "uv.txt", "2 3\n1 2 3\n1 2 3\n");
    let o = permident(&["check", "fn1", s(&uv)]);
    assert!(stdout(&o).contains("lhs=8 rhs=8 holds"), "{}", stdout(&o));
    let o = permident(&["check", "fn", s(&uv)]);
    assert!(
        stdout(&o).contains("lhs=3216 rhs=3216 holds"),
        "{}",
        stdout(&o)
    );

    let x = write(&dir, "x.txt", "1 3\n2 3 5\n");
    let o = permident(&["check", "lemq", s(&x)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("4/4 hold\n"));

    let b = write(&dir, "b.txt", "2 3\n1 0 2\n0 1 1\n");
    let o = permident(&[
        "check",
        "cb",
        s(&a),
        s(&b),
        "--rows",
        "1,2",
        "--cols",
        "1,3",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(permident(&["check", "cb", s(&a)]).status.code(), Some(2));
    assert_eq!(
        permident(&[
            "check",
            "cb",
            s(&a),
            s(&b),
            "--rows",
            "1,1",
            "--cols",
            "1,2"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn hunt_positive_is_clean_and_deterministic() {
    let args = [
        "--format", "json", "hunt", "--n", "3", "--trials", "30", "--signs", "pos", "--seed", "11",
    ];
    let o = permident(&args);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 30);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert!(first["T"].as_str().unwrap().starts_with("3 3\n"));
    assert_eq!(first["seed"], 11);
    assert_eq!(out, stdout(&permident(&args)));
}

#[test]
fn hunt_text_summary() {
    let o = permident(&["hunt", "--n", "1", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("violations: 0\n"));
    assert!(out.contains("equality cases: 5\n"), "{out}");
}

#[test]
fn expected_charpoly_anchor() {
    let o = permident(&[
        "expected-charpoly",
        "--eigs-a",
        "1,-1",
        "--eigs-b",
        "1,-1",
        "--x",
        "0",
    ]);
    assert_eq!(stdout(&o), "-2\n");
    let o = permident(&[
        "expected-charpoly",
        "--eigs-a",
        "1,2",
        "--eigs-b",
        "1",
        "--x",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_csv_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let sidecar = dir.path().join("values.json");
    let o = permident(&[
        "--format",
        "csv",
        "bench",
        "--sizes",
        "3,5",
        "--methods",
        "naive,ryser,det",
        "--seed",
        "1",
        "--values-json",
        s(&sidecar),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,method,wall_time_s,value_digits"));
    assert_eq!(lines.count(), 6);
    let values: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sidecar).unwrap()).unwrap();
    let values = values.as_array().unwrap();
    assert_eq!(values.len(), 6);
    assert_eq!(values[0]["value"], values[1]["value"]);
    assert_eq!(values[1]["value"], values[2]["value"]);
}

#[test]
fn stability_csv_reports_degenerate_epsilon() {
    let o = permident(&[
        "--format",
        "csv",
        "stability",
        "--n",
        "4",
        "--epsilons",
        "1,1/1000,0",
        "--seed",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert!(out.starts_with("epsilon,relative_error\n"));
    assert!(out.ends_with("0,DegenerateDenominator\n"), "{out}");
}

#[test]
fn help_and_version() {
    assert_eq!(permident(&["--help"]).status.code(), Some(0));
    assert_eq!(permident(&["--version"]).status.code(), Some(0));
}

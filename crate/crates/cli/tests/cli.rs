//! End-to-end tests of the binary: exit codes, config-file merging,
//! output schemas, and cross-run determinism.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_besselsum"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn verify_pass_exits_zero_with_json_records() {
    let out = run(&["verify", "theta", "--k", "[1,2,4]", "--y", "[0.5,1.0,1+i]"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 9);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in [
            "identity_id",
            "params",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "residual",
            "budget",
            "verdict",
            "terms_used",
            "elapsed_ms",
        ] {
            assert!(v.get(key).is_some(), "missing `{key}` in {line}");
        }
        assert_eq!(v["identity_id"], "theta");
        assert_eq!(v["verdict"], "pass");
    }
}

#[test]
fn csv_output_has_stable_header() {
    let out = run(&[
        "verify", "theta", "--k", "2", "--y", "1.0", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(
        lines[0],
        "identity_id,params,lhs_re,lhs_im,rhs_re,rhs_im,residual,budget,verdict,terms_used,elapsed_ms"
    );
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split(',').count(), 11);
}

#[test]
fn bad_parameter_exits_two() {
    let out = run(&[
        "verify", "popov", "--k", "bogus", "--z", "0.5", "--t", "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad k"));
}

#[test]
fn missing_parameter_exits_two() {
    let out = run(&["verify", "popov", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing required parameter"), "{err}");
}

#[test]
fn unknown_identity_exits_two() {
    let out = run(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn convergence_guard_exits_three() {
    // the q = 0 Riesz mean of r_4 diverges; the guard must refuse it
    let out = run(&[
        "verify",
        "cn",
        "--k",
        "4",
        "--order",
        "0",
        "--x",
        "7.3",
        "--table-len",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn config_file_supplies_grid_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# theta sweep").unwrap();
    writeln!(f, "k = [1, 2, 4]").unwrap();
    writeln!(f, "y = [0.5, 2.0]").unwrap();
    writeln!(f, "format = csv").unwrap();
    drop(f);

    let out = run(&["sweep", "theta", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_lines(&out).len(), 7); // header + 3*2 points

    // --k overrides the file's list; --format overrides csv
    let out = run(&[
        "sweep",
        "theta",
        "--config",
        path.to_str().unwrap(),
        "--k",
        "8",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 2);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["params"].as_str().unwrap().contains("k=8"), "{line}");
    }
}

#[test]
fn output_file_and_parallel_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.jsonl");
    let par = dir.path().join("par.jsonl");
    let args = |out: &std::path::Path, jobs: &str| {
        vec![
            "sweep".to_string(),
            "popov".to_string(),
            "--k".into(),
            "[2,3]".into(),
            "--z".into(),
            "[0.3,1.5]".into(),
            "--t".into(),
            "[0.8,1.0+0.5i]".into(),
            "--jobs".into(),
            jobs.into(),
            "--output".into(),
            out.display().to_string(),
        ]
    };
    let a = bin().args(args(&seq, "1")).output().unwrap();
    let b = bin().args(args(&par, "4")).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));

    let strip = |path: &std::path::Path| -> Vec<serde_json::Value> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v
            })
            .collect()
    };
    let sa = strip(&seq);
    let sb = strip(&par);
    assert_eq!(sa.len(), 8);
    // byte-level equality of every numeric field, independent of scheduling
    assert_eq!(
        serde_json::to_string(&sa).unwrap(),
        serde_json::to_string(&sb).unwrap()
    );
}

#[test]
fn table_dumps_are_csv() {
    let out = run(&["table", "rk", "--k", "2", "--n-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "n,value");
    assert_eq!(lines[1], "0,1");
    assert_eq!(lines[2], "1,4"); // r_2(1) = 4
    assert_eq!(lines.len(), 7);

    let out = run(&["table", "characters", "--modulus", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "index,n,re,im");
    assert_eq!(lines.len(), 1 + 4 * 5);

    let out = run(&["table", "dchi", "--modulus", "4", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_lines(&out)[0], "n,value");

    let out = run(&["table", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn latsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sdof_curve_marks_isolated_gains() {
    let out = latsec(&["sdof-curve"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("cross,nested_sdof,"));
    let table = rows(&csv);
    assert_eq!(table.len(), 201);
    let at = |x: &str| table.iter().find(|r| r[0] == x).unwrap().clone();
    // rational gains with gamma = 0 carry no nested value
    for x in ["1", "1.5", "2"] {
        assert_eq!(at(x)[1], "0", "cross {x}");
    }
    assert_eq!(at("1.5")[7], "0.166666666667");
    assert_eq!(at("2")[11], "expansion");
}

#[test]
fn sdof_curve_plot_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "cross_min = 0.5\ncross_max = 1.0\ncross_step = 0.05\npairs = [[1, 1], [1, 2]]\n",
    );
    let out = dir.path().join("s.csv");
    let st = latsec(&[
        "sdof-curve",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--plot",
    ]);
    assert_eq!(st.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    for r in rows(&csv) {
        if !r[3].is_empty() {
            assert!(r[3] == "1" || r[3] == "2", "q = {}", r[3]);
        }
    }
    let svg = fs::read_to_string(out.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "trials = 20000\np0_over_b = [64.0]\ntheorem8_p0_over_b = []\n",
    );
    let run = |name: &str| {
        let p = dir.path().join(name);
        let st = latsec(&[
            "simulate",
            "--config",
            &cfg,
            "--seed",
            "11",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(st.status.code(), Some(0));
        fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("scheme,Q,M,P0,b,trials,seed,errors"));
    assert!(text.lines().nth(1).unwrap().ends_with(",true"));
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write(dir.path(), "basis.txt", "2\n1 0\n0.5 1\n");
    let cfg = write(
        dir.path(),
        "c.toml",
        &format!("basis_file = \"{basis}\"\nk = 2\ngrid_den = 5\nmax_f_q = 500\n"),
    );
    let ok = latsec(&["verify", "--config", &cfg]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let csv = String::from_utf8(ok.stdout).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.contains(",true,")));
    let bad = latsec(&["verify", "--config", &cfg, "--broken-tie-break"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(latsec(&["sdof-curve", "--plot"]).status.code(), Some(2));
    assert_eq!(latsec(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(latsec(&["simulate", "--seed", "x"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.toml", "colour = 3\n");
    assert_eq!(
        latsec(&["rate-curve", "--config", &unknown]).status.code(),
        Some(2)
    );
    let bad_grid = write(dir.path(), "g.toml", "cross_min = 2.0\ncross_max = 1.0\n");
    assert_eq!(
        latsec(&["sdof-curve", "--config", &bad_grid]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        latsec(&["mismatch", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn complex_reports_aligned_phase() {
    let out = latsec(&["complex"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let table = rows(&csv);
    let first = &table[0];
    assert_eq!(first[0], "0");
    assert!(first[4].is_empty());
    assert!(first[7].contains("aligned"));
    assert!(table.iter().filter(|r| r[0] != "0").all(|r| r[7] == "ok"));
}

#[test]
fn mismatch_penalty_is_constant() {
    let out = latsec(&["mismatch"]);
    assert_eq!(out.status.code(), Some(0));
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 24);
    for r in table.iter().filter(|r| r[1] == "1") {
        assert_eq!(r[4], "0.5");
    }
}

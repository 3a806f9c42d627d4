//! End-to-end CLI checks against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn fla(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fla"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_prints_accept_and_reject_with_matching_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let build = fla(
        &[
            "build", "--family", "j", "--model", "dfla", "--n", "2", "--ell", "3", "--output",
            "j.mach",
        ],
        dir.path(),
    );
    assert!(build.status.success(), "{build:?}");

    let accept = fla(&["run", "j.mach", "aab"], dir.path());
    assert_eq!(stdout(&accept).trim(), "accept");
    assert_eq!(accept.status.code(), Some(0));

    let reject = fla(&["run", "j.mach", "ab"], dir.path());
    assert_eq!(stdout(&reject).trim(), "reject");
    assert_eq!(reject.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(fla(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        fla(&["landau"], dir.path()).status.code(),
        Some(2),
        "missing --n"
    );
    assert_eq!(
        fla(
            &["build", "--family", "e", "--model", "nfa", "--n", "3"],
            dir.path()
        )
        .status
        .code(),
        Some(2),
        "unsupported family/model pair"
    );
}

#[test]
fn convert_reports_the_period_and_produces_an_equivalent_dfa() {
    let dir = tempfile::tempdir().unwrap();
    fla(
        &[
            "build", "--family", "l", "--model", "fla", "--n", "3", "--ell", "2", "--output",
            "m.mach",
        ],
        dir.path(),
    );
    let conv = fla(
        &["convert", "m.mach", "--to", "dfa", "--output", "c.mach"],
        dir.path(),
    );
    assert!(conv.status.success(), "{conv:?}");
    let text = stdout(&conv);
    assert!(
        text.contains("preperiod:") && text.contains("period:"),
        "{text}"
    );

    fla(&["minimize", "c.mach", "--output", "min.mach"], dir.path());
    fla(
        &[
            "build", "--family", "l", "--model", "dfa", "--n", "3", "--ell", "2", "--output",
            "ref.mach",
        ],
        dir.path(),
    );
    let equiv = fla(&["equiv", "min.mach", "ref.mach"], dir.path());
    assert_eq!(stdout(&equiv).trim(), "equivalent");
    assert_eq!(equiv.status.code(), Some(0));

    fla(
        &[
            "build",
            "--family",
            "l",
            "--model",
            "dfa",
            "--n",
            "2",
            "--ell",
            "3",
            "--output",
            "other.mach",
        ],
        dir.path(),
    );
    let not = fla(&["equiv", "min.mach", "other.mach"], dir.path());
    assert!(stdout(&not).starts_with("not equivalent"));
    assert_eq!(not.status.code(), Some(1));
}

#[test]
fn landau_cross_checks_against_bruteforce() {
    let dir = tempfile::tempdir().unwrap();
    let out = fla(&["landau", "--n", "11", "--bruteforce"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("F(11) = 30"), "{text}");
}

#[test]
fn certify_prints_the_lower_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = fla(
        &["certify", "--set", "l", "--n", "2", "--ell", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).contains("lower bound 6 states"),
        "{}",
        stdout(&out)
    );

    let e = fla(&["certify", "--set", "e", "--n", "4"], dir.path());
    assert_eq!(e.status.code(), Some(0));
    assert!(
        stdout(&e).contains("lower bound 16 states"),
        "{}",
        stdout(&e)
    );
}

#[test]
fn experiment_emits_nine_column_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"format-version":1,"instances":[{"family":"l","n":3,"ell":2},{"family":"e","n":3}],"l-test":6}"#,
    )
    .unwrap();
    let out = fla(
        &["experiment", "--config", "cfg.json", "--format", "csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,n,ell,model,built-states,minimized-states,formula,formula-value,pass"
    );
    for line in lines {
        assert_eq!(line.split(',').count(), 9, "{line}");
        assert!(line.ends_with(",pass"), "{line}");
    }
}

#[test]
fn experiment_default_config_round_trips_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let emit = fla(
        &["experiment", "--emit-default-config", "--output", "d.json"],
        dir.path(),
    );
    assert_eq!(emit.status.code(), Some(0));
    let text_a = stdout(&fla(
        &["experiment", "--config", "d.json", "--format", "csv"],
        dir.path(),
    ));
    let text_b = stdout(&fla(&["experiment", "--format", "csv"], dir.path()));
    assert_eq!(
        text_a, text_b,
        "explicit default config differs from the built-in one"
    );
}

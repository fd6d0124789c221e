//! End-to-end smoke tests of the command-line binary: the exit-code
//! contract (0 all-pass, 1 property violation, 2 usage or input error),
//! deterministic JSON reports, set-file loading, and report merging.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_truthpoint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("terminated by signal")
}

fn tmp(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn passing_paths_exit_zero() {
    assert_eq!(code(&["pool", "check", "--pool", "@core"]), 0);
    assert_eq!(
        code(&["entail", "--pool", "@core", "--set", "truth", "--sentence", "truth"]),
        0
    );
    assert_eq!(code(&["prove", "--pool", "@core", "--sentence", "truth"]), 0);
    assert_eq!(
        code(&["jump", "--pool", "@core", "--kind", "theta", "--set", "truth"]),
        0
    );
    assert_eq!(
        code(&["fixpoint", "--pool", "@core", "--kind", "vb", "--set", ""]),
        0
    );
    assert_eq!(
        code(&["classify", "--pool", "@core", "--kind", "theta", "--set", "tau,negtau"]),
        0
    );
    assert_eq!(
        code(&["categoricity", "--pool", "@sweep", "--theory", "it-minus", "--kind", "theta"]),
        0
    );
    for suite in ["theta-failures", "vb-separation", "mc-separation"] {
        assert_eq!(code(&["suite", suite]), 0, "suite {suite}");
    }
}

#[test]
fn verdict_failures_exit_one() {
    // Non-entailment, an underivable sentence, and a set violating the
    // axiom system are property verdicts, not errors.
    assert_eq!(
        code(&["entail", "--pool", "@core", "--set", "tau", "--sentence", "negtau"]),
        1
    );
    assert_eq!(code(&["prove", "--pool", "@core", "--sentence", "tau"]), 1);
    assert_eq!(
        code(&["axioms", "--pool", "@core", "--theory", "it", "--set", "tau"]),
        1
    );
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(code(&["pool", "check", "--pool", "@no-such-pool"]), 2);
    assert_eq!(code(&["suite", "no-such-suite"]), 2);
    // A statement name outside the pool.
    assert_eq!(
        code(&["fixpoint", "--pool", "@core", "--kind", "theta", "--set", "no-such-name"]),
        2
    );
    // Jumps that are undefined on inconsistent inputs refuse them.
    assert_eq!(
        code(&["jump", "--pool", "@core", "--kind", "ssk", "--set", "tau,negtau"]),
        2
    );
    // Exhaustive enumeration refuses pools over the subset-space cap.
    assert_eq!(code(&["enumerate", "--pool", "@core", "--kind", "vb"]), 2);
}

#[test]
fn json_reports_are_byte_identical_across_runs_and_jobs() {
    let a = tmp("cat-jobs1.json");
    let b = tmp("cat-jobs3.json");
    let sweep = |path: &Path, jobs: &str| {
        code(&[
            "categoricity",
            "--pool",
            "@sweep",
            "--theory",
            "it-star",
            "--kind",
            "theta-star",
            "--jobs",
            jobs,
            "--json",
            path.to_str().unwrap(),
        ])
    };
    assert_eq!(sweep(&a, "1"), 0);
    assert_eq!(sweep(&b, "3"), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let c = tmp("enum-run1.json");
    let d = tmp("enum-run2.json");
    let enumerate = |path: &Path| {
        code(&[
            "enumerate",
            "--pool",
            "@vb-sep",
            "--kind",
            "vb",
            "--json",
            path.to_str().unwrap(),
        ])
    };
    assert_eq!(enumerate(&c), 0);
    assert_eq!(enumerate(&d), 0);
    assert_eq!(fs::read(&c).unwrap(), fs::read(&d).unwrap());
}

#[test]
fn report_merge_follows_the_contract() {
    // Two sampled sweeps over the same pool merge into one report.
    let a = tmp("merge-seed1.json");
    let b = tmp("merge-seed2.json");
    let sample = |path: &Path, seed: &str| {
        code(&[
            "categoricity",
            "--pool",
            "@sweep",
            "--theory",
            "it-minus",
            "--kind",
            "theta",
            "--sample",
            "50",
            "--seed",
            seed,
            "--json",
            path.to_str().unwrap(),
        ])
    };
    assert_eq!(sample(&a, "1"), 0);
    assert_eq!(sample(&b, "2"), 0);
    let merged = tmp("merge-out.json");
    assert_eq!(
        code(&[
            "report",
            "merge",
            a.to_str().unwrap(),
            b.to_str().unwrap(),
            "--json",
            merged.to_str().unwrap(),
        ]),
        0
    );
    let text = fs::read_to_string(&merged).unwrap();
    assert!(text.contains("\"poolHash\""));
    assert!(text.contains("\"categoricity\""));

    // Reports over different pools refuse to merge.
    let other = tmp("merge-other-pool.json");
    assert_eq!(
        code(&[
            "enumerate",
            "--pool",
            "@vb-sep",
            "--kind",
            "vb",
            "--json",
            other.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(
        code(&["report", "merge", a.to_str().unwrap(), other.to_str().unwrap()]),
        2
    );

    // No inputs at all still yields a canonical (empty) report.
    let out = run(&["report", "merge", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"entries\": []"));
}

#[test]
fn set_files_resolve_names_and_codes() {
    let seed = tmp("seed.set");
    fs::write(&seed, "tau\n9\n").unwrap();
    assert_eq!(
        code(&["fixpoint", "--pool", "@core", "--kind", "theta", "--set", seed.to_str().unwrap()]),
        0
    );
}

#[test]
fn prove_writes_a_tree_file() {
    let tree = tmp("truth.tree.json");
    assert_eq!(
        code(&[
            "prove",
            "--pool",
            "@core",
            "--sentence",
            "truth",
            "--tree",
            tree.to_str().unwrap(),
        ]),
        0
    );
    let text = fs::read_to_string(&tree).unwrap();
    assert!(text.contains("\"rule\""));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spinlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .env("SPINLAB_CACHE_DIR", cache)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_exits_zero_on_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let o = spinlab(dir.path(), &["verify", "--xmax", "1000"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.ends_with(",0"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify"][..],
        &["verify", "--xmax", "1"],
        &["bogus"],
        &["--workers", "0", "density", "--xmax", "10"],
        &["type1", "--x", "10", "--chi", "chi8"],
        &["type1", "--x", "10", "--m-norm", "3"],
        &[
            "type2", "--bigm", "5", "--bign", "5", "--omega", "2", "--zeta", "1",
        ],
    ] {
        assert_eq!(spinlab(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn lemma_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = spinlab(
        dir.path(),
        &[
            "lemmas",
            "--trials",
            "40",
            "--seed",
            "3",
            "--fault",
            "swap-sigma-tau",
        ],
    );
    assert_eq!(bad.status.code(), Some(1));
    let good = spinlab(dir.path(), &["lemmas", "--trials", "20", "--seed", "3"]);
    assert_eq!(good.status.code(), Some(0));
}

#[test]
fn density_to_one_hundred() {
    let dir = tempfile::tempdir().unwrap();
    let o = spinlab(dir.path(), &["density", "--xmax", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("delta(16) among p = 1 mod 8,1,5,0.2\n"),
        "{text}"
    );
    assert!(text.contains("delta(16),1,11,"), "{text}");
}

#[test]
fn empty_type_ii_sum_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = spinlab(
        dir.path(),
        &[
            "--format", "json", "type2", "--bigm", "1", "--bign", "1", "--omega", "3", "--zeta",
            "3", "--coeffs", "ones",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["value"], 0);
    assert_eq!(v[0]["terms"], 0);
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = ["a.csv", "b.csv"]
        .iter()
        .map(|name| {
            let out = dir.path().join(name);
            let o = spinlab(
                dir.path(),
                &[
                    "--out",
                    out.to_str().unwrap(),
                    "--workers",
                    "3",
                    "type2",
                    "--bigm",
                    "300",
                    "--bign",
                    "200",
                    "--omega",
                    "1",
                    "--zeta",
                    "5",
                    "--coeffs",
                    "random",
                    "--seed",
                    "17",
                ],
            );
            assert_eq!(o.status.code(), Some(0));
            fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(!runs[0].is_empty());

    let a = spinlab(
        dir.path(),
        &[
            "--format", "json", "lemmas", "--trials", "10", "--seed", "9",
        ],
    );
    let b = spinlab(
        dir.path(),
        &[
            "--format", "json", "lemmas", "--trials", "10", "--seed", "9",
        ],
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compute_with_and_without_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cached = spinlab(
        dir.path(),
        &["compute", "--xmax", "3000", "--oracle-to", "3000"],
    );
    let again = spinlab(
        dir.path(),
        &["compute", "--xmax", "3000", "--oracle-to", "3000"],
    );
    let plain = spinlab(
        dir.path(),
        &[
            "--no-cache",
            "compute",
            "--xmax",
            "3000",
            "--oracle-to",
            "3000",
        ],
    );
    assert_eq!(cached.stdout, plain.stdout);
    assert_eq!(again.stdout, plain.stdout);
    assert!(fs::read_dir(dir.path()).unwrap().count() >= 1);
    assert!(stdout(&plain).lines().any(|l| l.starts_with("73,")));
}

#[test]
fn partial_sum_and_type_i() {
    let dir = tempfile::tempdir().unwrap();
    let o = spinlab(dir.path(), &["partial-sum", "--grid", "100"]);
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "100,0,0.0,5");
    let o = spinlab(
        dir.path(),
        &["--format", "json", "type1", "--x", "1", "--chi", "chi0"],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v[0]["re"].as_i64(), v[0]["terms"].as_u64()),
        (Some(2), Some(1))
    );
}

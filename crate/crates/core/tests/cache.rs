use std::fs;
use std::io::Write;
use std::path::Path;

use spinlab::experiments::{compute_records, write_records_csv, RecordCache, RecordConfig, Routes};
use spinlab::Error;

fn config(dir: &Path, workers: usize) -> RecordConfig {
    RecordConfig {
        routes: Routes {
            spin: true,
            lw: true,
            oracle_to: 1000,
        },
        workers,
        chunk: 64,
        cache_dir: Some(dir.to_path_buf()),
    }
}

fn cache_file(cfg: &RecordConfig) -> std::path::PathBuf {
    RecordCache::path_for(cfg.cache_dir.as_ref().unwrap(), &cfg.routes)
}

#[test]
fn cached_records_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 2);
    let fresh = compute_records(2000, &cfg).unwrap();
    let reopened = RecordCache::open(dir.path(), &cfg.routes).unwrap();
    assert_eq!(reopened.records(), &fresh[..]);
    assert_eq!(reopened.high_water(), 1997);
    let uncached = compute_records(
        2000,
        &RecordConfig {
            cache_dir: None,
            ..cfg.clone()
        },
    )
    .unwrap();
    assert_eq!(uncached, fresh);
}

#[test]
fn resume_computes_only_new_primes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 2);
    compute_records(500, &cfg).unwrap();
    // Plant a marker in a cached row; a recomputation would overwrite it.
    let path = cache_file(&cfg);
    let text = fs::read_to_string(&path).unwrap();
    let row = text
        .lines()
        .find(|l| l.starts_with("97,"))
        .unwrap()
        .to_string();
    let mut fields: Vec<&str> = row.split(',').collect();
    fields[8] = "999";
    fs::write(&path, text.replace(&row, &fields.join(","))).unwrap();

    let recs = compute_records(1500, &cfg).unwrap();
    assert_eq!(recs.iter().find(|r| r.p == 97).unwrap().h, Some(999));
    let fresh = compute_records(
        1500,
        &RecordConfig {
            cache_dir: None,
            ..cfg.clone()
        },
    )
    .unwrap();
    assert_eq!(recs.len(), fresh.len());
    assert_eq!(
        recs.iter().filter(|r| r.p > 500).collect::<Vec<_>>(),
        fresh.iter().filter(|r| r.p > 500).collect::<Vec<_>>()
    );
    // a smaller request is served from the cache
    assert_eq!(compute_records(300, &cfg).unwrap().last().unwrap().p, 293);
}

#[test]
fn incomplete_tail_is_truncated() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 1);
    let recs = compute_records(400, &cfg).unwrap();
    let path = cache_file(&cfg);
    let good = fs::read(&path).unwrap();
    fs::OpenOptions::new()
        .append(true)
        .open(&path)
        .unwrap()
        .write_all(b"401,20,1,3")
        .unwrap();
    let reopened = RecordCache::open(dir.path(), &cfg.routes).unwrap();
    assert_eq!(reopened.records(), &recs[..]);
    assert_eq!(fs::read(&path).unwrap(), good);
}

#[test]
fn corrupt_final_line_is_dropped_and_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 1);
    let recs = compute_records(400, &cfg).unwrap();
    let path = cache_file(&cfg);
    let good = fs::read(&path).unwrap();
    fs::OpenOptions::new()
        .append(true)
        .open(&path)
        .unwrap()
        .write_all(b"garbage,row\n")
        .unwrap();
    let again = compute_records(400, &cfg).unwrap();
    assert_eq!(again, recs);
    assert_eq!(fs::read(&path).unwrap(), good);
}

#[test]
fn mismatched_header_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), 1);
    compute_records(100, &cfg).unwrap();
    let path = cache_file(&cfg);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("e_oracle", "e_other", 1)).unwrap();
    assert!(matches!(compute_records(100, &cfg), Err(Error::Cache(_))));
}

#[test]
fn routes_use_separate_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = config(dir.path(), 1);
    let mut b = a.clone();
    b.routes.lw = false;
    compute_records(200, &a).unwrap();
    compute_records(200, &b).unwrap();
    assert_ne!(cache_file(&a), cache_file(&b));
    assert!(cache_file(&a).exists() && cache_file(&b).exists());
}

#[test]
fn output_is_independent_of_worker_count() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let one = compute_records(5000, &config(dirs[0].path(), 1)).unwrap();
    let four = compute_records(5000, &config(dirs[1].path(), 4)).unwrap();
    assert_eq!(one, four);
    let csv = |recs| {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, recs).unwrap();
        buf
    };
    assert_eq!(csv(&one), csv(&four));
    assert_eq!(
        fs::read(cache_file(&config(dirs[0].path(), 1))).unwrap(),
        fs::read(cache_file(&config(dirs[1].path(), 4))).unwrap()
    );
}

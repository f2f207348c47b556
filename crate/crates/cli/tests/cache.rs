use std::path::PathBuf;

use clap::Parser;

use binhk_cli::{run, Cache, Cli};

fn cli(args: &[&str]) -> Cli {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/catalog.bnd");
    let mut all = vec!["binhk", args[0], "-i", path.to_str().unwrap()];
    all.extend_from_slice(&args[1..]);
    Cli::try_parse_from(all).unwrap()
}

#[test]
fn second_run_touches_no_engine() {
    let dir = tempfile::tempdir().unwrap();
    let c = cli(&["hkf", "--model", "F", "--q", "1..8"]);
    let first = Cache::at(dir.path()).unwrap();
    let a = run(&c, &first).unwrap();
    assert_eq!(first.stats().computed, 8);
    let second = Cache::at(dir.path()).unwrap();
    let b = run(&c, &second).unwrap();
    assert_eq!(a, b);
    assert_eq!(second.stats().computed, 0);
    assert_eq!(second.stats().hits, 8);
}

#[test]
fn sweeps_extend_incrementally() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &cli(&["hkf", "--model", "F", "--q", "1..5"]),
        &Cache::at(dir.path()).unwrap(),
    )
    .unwrap();
    let c = Cache::at(dir.path()).unwrap();
    run(&cli(&["hkf", "--model", "F", "--q", "1..9"]), &c).unwrap();
    assert_eq!((c.stats().hits, c.stats().computed), (5, 4));
}

#[test]
fn ehk_results_are_cached() {
    let dir = tempfile::tempdir().unwrap();
    let c = cli(&["ehk", "--model", "Fermatish"]);
    let a = run(&c, &Cache::at(dir.path()).unwrap()).unwrap();
    let second = Cache::at(dir.path()).unwrap();
    assert_eq!(run(&c, &second).unwrap(), a);
    assert_eq!(second.stats().computed, 0);
}

#[test]
fn version_bump_invalidates() {
    let dir = tempfile::tempdir().unwrap();
    let c = cli(&["hkf", "--model", "N", "--q", "1..6"]);
    run(&c, &Cache::with_version(dir.path(), "a").unwrap()).unwrap();
    let bumped = Cache::with_version(dir.path(), "b").unwrap();
    run(&c, &bumped).unwrap();
    assert_eq!((bumped.stats().hits, bumped.stats().computed), (0, 6));
}

#[test]
fn corrupt_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let c = cli(&["hkf", "--model", "F", "--q", "1..4"]);
    let want = run(&c, &Cache::at(dir.path()).unwrap()).unwrap();
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let p = e.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        std::fs::write(&p, &text[..text.len() / 2]).unwrap();
    }
    let cache = Cache::at(dir.path()).unwrap();
    assert_eq!(run(&c, &cache).unwrap(), want);
    assert_eq!(cache.stats().discarded, 4);
    let clean = Cache::at(dir.path()).unwrap();
    run(&c, &clean).unwrap();
    assert_eq!(clean.stats().hits, 4);
}

#[test]
fn concurrent_runs_share_a_cache() {
    let dir = tempfile::tempdir().unwrap();
    let c = cli(&["hkf", "--model", "F", "--q", "1..12"]);
    let want = run(&c, &Cache::disabled()).unwrap();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..6)
            .map(|_| s.spawn(|| run(&c, &Cache::at(dir.path()).unwrap()).unwrap()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), want);
        }
    });
    // Every entry on disk is complete.
    let files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 12);
    for f in files {
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
        assert!(v["value"].is_string());
    }
    let after = Cache::at(dir.path()).unwrap();
    run(&c, &after).unwrap();
    assert_eq!(after.stats().computed, 0);
}

use std::path::Path;
use std::process::{Command, Output};

use mhgale::sequence::phi_markers_upto;

fn mhgale(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhgale"))
        .args(args)
        .current_dir(dir)
        .env_remove("MHGALE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "--n-max", "10"][..],
        &["bogus"],
        &["gen", "--family", "phi", "--length", "0", "--out", "x"],
        &["run", "--gambler", "builtin-phi", "--n-max", "100", "--eps", "2"],
        &[
            "run",
            "--gambler",
            "builtin-phi",
            "--n-max",
            "100",
            "--checkpoints",
            "geometric:0.5",
        ],
        &["verify", "reconstruction", "--scenario", "bogus", "--n", "100"],
        &["gambler", "build", "--family", "f", "--baseline", "odd"],
        &["analyze", "sets", "--n", "100", "--m", "200"],
    ] {
        let out = mhgale(args, dir.path());
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(code(&mhgale(&["--help"], dir.path())), 0);
}

#[test]
fn gen_then_run_matches_direct_generation() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(
        code(&mhgale(
            &["gen", "--family", "phi", "--seed", "4", "--length", "20000", "--out", "s.seq"],
            p
        )),
        0
    );
    let header = json(&p.join("s.seq.json"));
    assert_eq!(header["family"], "phi");
    assert_eq!(header["length"], 20000);
    let common = ["run", "--gambler", "builtin-phi", "--n-max", "20000", "--s", "0.6"];
    let from_file = [&common[..], &["--seq", "s.seq", "--out", "a.csv"]].concat();
    let direct = [&common[..], &["--seed", "4", "--out", "b.csv"]].concat();
    assert_eq!(code(&mhgale(&from_file, p)), 0);
    assert_eq!(code(&mhgale(&direct, p)), 0);
    let a = std::fs::read_to_string(p.join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read_to_string(p.join("b.csv")).unwrap());
    assert!(a.starts_with("n,log2_capital,log2_s_0.6,pi_1,full_wins,parity_bets,parity_losses\n"));
}

#[test]
fn boundary_rows_are_the_markers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = mhgale(
        &["run", "--gambler", "builtin-phi", "--n-max", "200000", "--out", "r.csv"],
        p,
    );
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(p.join("r.csv")).unwrap();
    let rows: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows, phi_markers_upto(2, 200_000));
    let sidecar = json(&p.join("r.csv.json"));
    assert_eq!(sidecar["config"]["n_max"], 200000);
    assert_eq!(sidecar["result"]["gambler"]["schedule.provenance"], "derived");
    assert_eq!(sidecar["result"]["last"]["parity_losses"], 0);
    assert!(sidecar["result"]["last"]["marker_misses"].is_u64());
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let args = ["report", "--k-max", "4", "--out"];
    assert_eq!(code(&mhgale(&[&args[..], &["one.csv"]].concat(), p)), 0);
    assert_eq!(code(&mhgale(&[&args[..], &["two.csv"]].concat(), p)), 0);
    assert_eq!(
        std::fs::read(p.join("one.csv")).unwrap(),
        std::fs::read(p.join("two.csv")).unwrap()
    );
    let a = mhgale(&["verify", "disjointness", "--samples", "20"], p);
    let b = mhgale(&["verify", "disjointness", "--samples", "20"], p);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exported_tracker_replays_like_the_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(
        code(&mhgale(&["gambler", "build", "--family", "phi", "--out", "t.spec"], p)),
        0
    );
    let base = ["--n-max", "30000", "--checkpoints", "geometric:2"];
    let spec = [
        &["run", "--spec", "t.spec", "--family", "phi"][..],
        &base,
        &["--out", "a.csv"],
    ]
    .concat();
    let builtin = [&["run", "--gambler", "builtin-phi"][..], &base, &["--out", "b.csv"]].concat();
    assert_eq!(code(&mhgale(&spec, p)), 0);
    assert_eq!(code(&mhgale(&builtin, p)), 0);
    assert_eq!(
        std::fs::read(p.join("a.csv")).unwrap(),
        std::fs::read(p.join("b.csv")).unwrap()
    );
}

#[test]
fn tracking_holds_at_two_million() {
    let dir = tempfile::tempdir().unwrap();
    let out = mhgale(
        &[
            "verify", "tracking", "--n", "2000000", "--seeds", "0..2", "--out", "t.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let report = json(&dir.path().join("t.json"));
    assert_eq!(report["result"]["ok"], true);
    assert!(report["result"]["runs"][0]["checked"].as_u64().unwrap() > 100_000);
}

#[test]
fn reconstruction_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let ok = mhgale(
        &[
            "verify",
            "reconstruction",
            "--scenario",
            "residue-split",
            "--n",
            "6561",
            "--seeds",
            "0..3",
        ],
        p,
    );
    assert_eq!(code(&ok), 0);
    let erased = [
        "verify",
        "reconstruction",
        "--scenario",
        "slot-window",
        "--n",
        "2186",
        "--erase",
        "1000",
        "--seeds",
        "0..2",
    ];
    assert_eq!(code(&mhgale(&erased, p)), 1);
}

#[test]
fn sets_report_claims_hold() {
    let dir = tempfile::tempdir().unwrap();
    let out = mhgale(&["analyze", "sets", "--n", "2186", "--out", "s.json"], dir.path());
    assert_eq!(code(&out), 0);
    let doc = json(&dir.path().join("s.json"));
    let verdicts = doc["result"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 2);
    assert!(verdicts.iter().all(|v| v["holds"] == true));
}

#[test]
fn cached_sequences_reproduce_fresh_runs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let args = ["run", "--gambler", "builtin-phi", "--n-max", "20000", "--seed", "4"];
    let fresh = mhgale(&args, p);
    let cached = || {
        Command::new(env!("CARGO_BIN_EXE_mhgale"))
            .args(args)
            .env("MHGALE_CACHE_DIR", p.join("cache"))
            .output()
            .unwrap()
    };
    let first = cached();
    assert!(p.join("cache/phi-h2-L1-seed4-n20000.seq").exists());
    let second = cached();
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(fresh.stdout, second.stdout);
}

use std::path::Path;
use std::process::{Command, Output};

fn beepnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beepnet"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn detnaml_four_nodes() {
    let out = beepnet(&[
        "detnaml",
        "--m",
        "4",
        "--upper-bound",
        "15",
        "--seed",
        "1",
        "--reference",
        "--check-bounds",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut labels: Vec<u64> = stdout(&out)
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    labels.sort_unstable();
    assert_eq!(labels, vec![1, 2, 3, 4]);
    assert!(stderr(&out).contains("totalSlots=40"));
}

#[test]
fn detnaml_nobody() {
    let out = beepnet(&["detnaml", "--m", "0", "--upper-bound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
}

#[test]
fn detnaml_duplicate_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ids");
    std::fs::write(&file, "5\n5\n").unwrap();
    let out = beepnet(&["detnaml", "--ids", path(&file), "--upper-bound", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("duplicate label"));
}

#[test]
fn detnaml_trace_file_parses() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let out = beepnet(&[
        "detnaml",
        "--m",
        "6",
        "--upper-bound",
        "100",
        "--trace",
        path(&trace),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let events = beepnet::engine::read_trace(std::io::BufReader::new(
        std::fs::File::open(&trace).unwrap(),
    ))
    .unwrap();
    assert!(!events.is_empty());
    assert!(beepnet::verify::check_one_label_per_season(&events).passed());
}

#[test]
fn randnaml_verified() {
    let out = beepnet(&["randnaml", "--n", "256", "--seed", "7", "--check-bounds"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("labels are a permutation: pass"));
    assert!(stdout(&out).contains("groupCount=57"));
}

#[test]
fn count_single_node() {
    let out = beepnet(&["count", "--n", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("count=1"));
}

#[test]
fn jittered_empty_group_seed() {
    let out = beepnet(&[
        "randnaml", "--n", "256", "--approx", "jittered", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty group"));
}

#[test]
fn invalid_arguments_exit_two() {
    assert_eq!(
        beepnet(&["detnaml", "--upper-bound", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(beepnet(&["randnaml", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        beepnet(&["sweep", "--n", "100", "--seeds", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(beepnet(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        beepnet(&["detnaml", "--ids", "/nonexistent/ids", "-N", "9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_rows_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("energy.csv");
    let out = beepnet(&[
        "sweep",
        "--n",
        "100,10000,1000000,100000000,10000000000",
        "--seeds",
        "10",
        "--csv",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = beepnet(&[
        "sweep",
        "--from",
        "100",
        "--to",
        "100",
        "--points",
        "1",
        "--seeds",
        "1",
        "--csv",
        path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,N,M,seed,maxAwake,boundValue");
    assert_eq!(lines.iter().filter(|l| l.starts_with("n,")).count(), 1);
    assert_eq!(lines.len(), 1 + 50 + 1);
    assert!(lines[50].starts_with("10000000000,100000000000000000000,67,9,"));
}

#[test]
fn sweep_randnaml_to_stdout() {
    let out = beepnet(&[
        "sweep",
        "--algorithm",
        "count",
        "--n",
        "16",
        "--seeds",
        "3",
        "--seed",
        "0",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("n,u,N,groupCount,seed,totalSlots,maxAwake,failures\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn summary_csv_appends() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("runs.csv");
    for seed in ["1", "2"] {
        beepnet(&[
            "detnaml",
            "--m",
            "3",
            "-N",
            "50",
            "--seed",
            seed,
            "--csv",
            path(&csv),
        ]);
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("M,N,seed,totalSlots,maxAwake,wStl,wStn,wOther,failures\n"));
}

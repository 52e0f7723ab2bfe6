use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantorprod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_refine_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("mid.txt");
    let o = run(&["construct", "middle-alpha", "--alpha", "1/3", "--out", path(&spec)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let a = run(&["refine", "--construction", path(&spec), "--depth", "4"]);
    let b = run(&["refine", "--construction", path(&spec), "--depth", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("left_lo,left_hi,right_lo,right_hi\n"));
    assert_eq!(csv.lines().count(), 1 + 16);
    let t = run(&["thickness", "--construction", path(&spec), "--depth", "5"]);
    assert_eq!(stdout(&t).trim(), "1/1");
}

#[test]
fn product_of_two_block_pair() {
    let dir = tempfile::tempdir().unwrap();
    let (k, l) = (dir.path().join("k.txt"), dir.path().join("l.txt"));
    for (which, p) in [("k", &k), ("l", &l)] {
        let o = run(&["construct", "t15-two", "--params", "M=2,N=2", "--which", which, "--out", path(p)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["product", "--a", path(&k), "--b", path(&l), "--depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text, "left_num,left_den,right_num,right_den\n-250,49,100,49\n121,49,625,49\n");
}

#[test]
fn region_map_writes_csv() {
    let o = run(&["region-map", "--condition", "cond465", "--range", "1/2:1:1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("M_num,M_den,N_num,N_den,verdict\n"));
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = run(&["verify", "--scenario", "thm4-twoComponents", "--csv", path(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: match"));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("depth,components,"));
    // outside the hypothesis region
    let o = run(&["verify", "--scenario", "thm2-countable", "--params", "M=3,N=3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("condthm0"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "--scenario", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["thickness"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_construction_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.txt");
    std::fs::write(&spec, "version=1\nsubdivision 0 1\n level 0:1/3 2/3\nend\n").unwrap();
    let o = run(&["refine", "--construction", path(&spec)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

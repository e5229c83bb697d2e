use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn embedmine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_embedmine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn star_file(dir: &TempDir, leaves: usize) -> PathBuf {
    let body = format!("0 0 {} 0{}\n", 1 + 2 * leaves, " 0 -1".repeat(leaves));
    write(dir, "star.txt", &body)
}

// a(b, c) with a=0, b=1, c=2
const ABC: &str = "0 0 5 0 1 -1 2 -1\n";

#[test]
fn mine_lists_every_pattern_of_one_tree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "abc.txt", ABC);
    let o = embedmine(&["mine", s(&f), "--minsup", "1", "--no-report"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "0\t1\n1\t1\n2\t1\n0 1\t1\n0 1 -1 2\t1\n0 2\t1\n"
    );
}

#[test]
fn report_is_json_on_stderr() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "abc.txt", ABC);
    let o = embedmine(&["mine", s(&f), "--minsup", "1"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(report["pattern_count"], 6);
    assert_eq!(report["params"]["minsup"], 1);
}

#[test]
fn zero_minsup_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "abc.txt", ABC);
    assert_eq!(embedmine(&["mine", s(&f), "--minsup", "0"]).status.code(), Some(2));
    assert_eq!(embedmine(&["mine", s(&f)]).status.code(), Some(2));
}

#[test]
fn parse_error_names_file_and_line() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "0 0 3 0 1 -1\n1 1 5 0 x -1 2 -1\n");
    let o = embedmine(&["mine", s(&f), "--minsup", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.txt") && err.contains("line 2"), "{err}");
}

#[test]
fn missing_file_exits_one() {
    let o = embedmine(&["mine", "/nonexistent/data.txt", "--minsup", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn count_overflow_exits_four() {
    let dir = TempDir::new().unwrap();
    let f = star_file(&dir, 70);
    let o = embedmine(&["mine", s(&f), "--minsup", "1", "--no-report"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("overflow"));
}

#[test]
fn verify_random_batch_agrees() {
    let o = embedmine(&["verify", "--minsup", "2", "--random", "5", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("OK")).count(), 5);
}

#[test]
fn verify_reports_injected_fault() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "abc.txt", ABC);
    let o = embedmine(&["verify", s(&f), "--minsup", "1", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).starts_with("MISMATCH"));
}

#[test]
fn verify_accepts_empty_dataset() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "empty.txt", "");
    let o = embedmine(&["verify", s(&f), "--minsup", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 patterns"));
}

#[test]
fn bench_shows_star_compression() {
    let n = 12u64;
    let dir = TempDir::new().unwrap();
    let f = star_file(&dir, n as usize - 1);
    let o = embedmine(&["bench", s(&f), "--minsup", "1"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    let occ = &rows[0];
    let base = &rows[1];
    assert_eq!(occ["engine"], "occlist");
    assert_eq!(base["engine"], "scopelist");
    assert_eq!(occ["pattern_count"], base["pattern_count"]);
    assert_eq!(occ["largest_pattern_size"], n);
    // the full star: one entry per occ-list, one element per embedding
    assert_eq!(occ["largest_pattern_entries"], 1);
    assert_eq!(base["largest_pattern_entries"], 1);
    // peak structures over the whole run
    let occ_peak = occ["peak_entries"].as_u64().unwrap();
    let base_peak = base["peak_entries"].as_u64().unwrap();
    assert!(occ_peak < base_peak, "{occ_peak} vs {base_peak}");
}

#[test]
fn lower_thresholds_find_more_patterns() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("gen.txt");
    let g = embedmine(&[
        "gen", "--n-labels", "4", "--master-size", "30", "--max-fanout", "3", "--max-depth", "4",
        "--n-trees", "40", "--seed", "2", "-o", s(&data),
    ]);
    assert!(g.status.success());
    let o = embedmine(&["bench", s(&data), "--minsup", "60,30,15", "--skip-baseline"]);
    assert!(o.status.success());
    let counts: Vec<u64> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["pattern_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts.len(), 3);
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
}

#[test]
fn gen_then_mine_round_trip() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("gen.txt");
    let g = embedmine(&[
        "gen", "--n-labels", "5", "--master-size", "40", "--max-fanout", "4", "--max-depth", "5",
        "--n-trees", "25", "--seed", "9", "-o", s(&data),
    ]);
    assert!(g.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("gen.txt.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["params"]["seed"], 9);
    assert_eq!(meta["rng"], "chacha8");
    assert_eq!(std::fs::read_to_string(&data).unwrap().lines().count(), 25);

    let o = embedmine(&["mine", s(&data), "--minsup", "20", "--no-report", "--show-per-tree"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(!out.is_empty());
    for line in out.lines() {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 3);
        let occ: u64 = cols[1].parse().unwrap();
        let trees: u64 = cols[2].parse().unwrap();
        assert!(occ >= 20 && trees <= occ && trees <= 25);
    }
}

#[test]
fn dictionary_names_labels() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "abc.txt", ABC);
    let dict = write(&dir, "dict.txt", "0\ta\n1\tb\n2\tc\n");
    let o = embedmine(&["mine", s(&f), "--minsup", "1", "--no-report", "--dict", s(&dict)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a\t1\nb\t1\nc\t1\na b\t1\na b -1 c\t1\na c\t1\n");
}

#[test]
fn sort_by_support_is_descending() {
    let dir = TempDir::new().unwrap();
    // a(b, b, c), a, c
    let f = write(&dir, "d.txt", "0 0 7 0 1 -1 1 -1 2 -1\n1 1 1 0\n2 2 1 2\n");
    let o = embedmine(&["mine", s(&f), "--minsup", "1", "--no-report", "--sort-by-support"]);
    assert!(o.status.success());
    let supports: Vec<u64> = stdout(&o)
        .lines()
        .map(|l| l.rsplit('\t').next().unwrap().parse().unwrap())
        .collect();
    assert!(supports.windows(2).all(|w| w[0] >= w[1]), "{supports:?}");
    assert_eq!(supports[0], 2);
}

#[test]
fn output_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "abc.txt", ABC);
    let out = dir.path().join("out.txt");
    let o = embedmine(&["mine", s(&f), "--minsup", "1", "--no-report", "-o", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let direct = embedmine(&["mine", s(&f), "--minsup", "1", "--no-report"]);
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K3: &str = "0 1\n1 2\n0 2\n";
const SIX_CYCLE: &str = "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";

fn g2recon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2recon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Writes the square of `graph` and returns its path.
fn square_of(dir: &TempDir, graph: &str) -> PathBuf {
    let input = write(dir, "graph.txt", graph);
    let out = dir.path().join("g2.mtx");
    let run = g2recon(&["square", s(&input), "-o", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    out
}

#[test]
fn square_of_triangle() {
    let dir = TempDir::new().unwrap();
    let out = square_of(&dir, K3);
    let text = fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "%%MatrixMarket matrix coordinate integer symmetric");
    assert_eq!(lines[1], "3 3 6");
    let mut entries = lines[2..].to_vec();
    entries.sort();
    assert_eq!(entries, ["1 1 2", "2 1 1", "2 2 2", "3 1 1", "3 2 1", "3 3 2"]);
}

#[test]
fn self_loop_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "loop.txt", "0 1\n0 0\n");
    let run = g2recon(&["square", s(&input), "-o", s(&dir.path().join("x.mtx"))]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("line 2"));
}

#[test]
fn reconstruct_triangle() {
    let dir = TempDir::new().unwrap();
    let g2 = square_of(&dir, K3);
    let (out, report) = (dir.path().join("k3.txt"), dir.path().join("k3.json"));
    let run = g2recon(&["reconstruct", s(&g2), "-o", s(&out), "--report", s(&report)]);
    assert_eq!(run.status.code(), Some(0));
    let r = json(&report);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["cne"], 0.0);
    assert_eq!(r["square_matches"], true);
    assert_eq!(r["edges"], 3);
    let text = fs::read_to_string(&out).unwrap();
    let edges: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(edges, ["0 1", "0 2", "1 2"]);
}

#[test]
fn corrupted_square_is_inconsistent() {
    let dir = TempDir::new().unwrap();
    // K3 with one common-neighbor count removed
    let g2 = write(
        &dir,
        "bad.mtx",
        "%%MatrixMarket matrix coordinate integer symmetric\n3 3 6\n1 1 2\n2 1 1\n3 1 1\n2 2 2\n3 2 0\n3 3 2\n",
    );
    let run = g2recon(&["reconstruct", s(&g2), "-o", s(&dir.path().join("x.txt"))]);
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains("inconsistent"));
}

#[test]
fn six_cycle_reports_several_co_squares() {
    let dir = TempDir::new().unwrap();
    let g2 = square_of(&dir, SIX_CYCLE);
    let truth = dir.path().join("graph.txt");
    let (out, report) = (dir.path().join("r.txt"), dir.path().join("r.json"));
    let run = g2recon(&[
        "reconstruct",
        s(&g2),
        "-o",
        s(&out),
        "--report",
        s(&report),
        "--truth",
        s(&truth),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let r = json(&report);
    assert_eq!(r["cne"], 0.0);
    assert_eq!(r["disconnected_or_bipartite"], true);
    let found: u64 = r["cosquare"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["solutions_found"].as_u64().unwrap())
        .max()
        .unwrap();
    assert!(found >= 2, "{found}");
    assert_eq!(r["metrics"]["cne"], 0.0);
}

#[test]
fn zero_budget_exits_with_capacity_code() {
    let dir = TempDir::new().unwrap();
    let g2 = square_of(&dir, SIX_CYCLE);
    let (out, report) = (dir.path().join("r.txt"), dir.path().join("r.json"));
    let run = g2recon(&[
        "reconstruct",
        s(&g2),
        "-o",
        s(&out),
        "--report",
        s(&report),
        "--cosquare-budget",
        "0",
    ]);
    assert_eq!(run.status.code(), Some(4));
    assert!(json(&report)["unresolved_cells"].as_u64().unwrap() > 0);
    assert!(out.exists());
}

#[test]
fn evaluate_identical_and_empty() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", K3);
    let run = g2recon(&["evaluate", s(&g), s(&g)]);
    assert_eq!(run.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&run.stdout).unwrap();
    for key in ["fpr", "fnr", "rae", "cne"] {
        assert_eq!(r["metrics"][key], 0.0, "{key}");
    }

    let empty = write(&dir, "empty.txt", "# vertices: 3\n");
    let out = dir.path().join("m.json");
    let run = g2recon(&["evaluate", s(&g), s(&empty), "-o", s(&out)]);
    assert_eq!(run.status.code(), Some(0));
    let m = &json(&out)["metrics"];
    assert_eq!(
        (m["fnr"].as_f64(), m["rae"].as_f64(), m["cne"].as_f64()),
        (Some(1.0), Some(1.0), Some(1.0))
    );
    assert_eq!(m["false_negatives"], 3);
}

#[test]
fn sweep_rows_and_summary() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", K3);
    let (csv, summary) = (dir.path().join("s.csv"), dir.path().join("s.json"));
    let run = g2recon(&[
        "sweep",
        s(&g),
        "--rhos",
        "0",
        "--seeds",
        "1",
        "-o",
        s(&csv),
        "--summary",
        s(&summary),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("method,rho,seed,fpr,fnr,rae,cne,runtime_ms,unresolved_cells")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().any(|r| r.starts_with("pipeline,0.0,0,")));
    assert!(rows.iter().any(|r| r.starts_with("baseline,0.0,0,")));
    assert_eq!(json(&summary)["schema_version"], 1);

    // no seeds: header only
    let run = g2recon(&["sweep", s(&g), "--rhos", "1", "--seeds", "0", "-o", s(&csv)]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 1);
}

#[test]
fn knowledge_round_trip() {
    let dir = TempDir::new().unwrap();
    let graph = "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n0 3\n6 0\n";
    let g2 = square_of(&dir, graph);
    let truth = dir.path().join("graph.txt");
    let k = dir.path().join("k.json");
    let run = g2recon(&[
        "sample-knowledge",
        s(&truth),
        "--rho",
        "0.5",
        "--seed",
        "3",
        "-o",
        s(&k),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let kj = json(&k);
    assert_eq!(kj["schema_version"], 1);
    assert_eq!(kj["vertices"], 7);

    let (out, report) = (dir.path().join("r.mtx"), dir.path().join("r.json"));
    let run = g2recon(&[
        "reconstruct",
        s(&g2),
        "--knowledge",
        s(&k),
        "--truth",
        s(&truth),
        "--format",
        "mtx",
        "-o",
        s(&out),
        "--report",
        s(&report),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(json(&report)["metrics"]["cne"], 0.0);
    assert!(fs::read_to_string(&out)
        .unwrap()
        .starts_with("%%MatrixMarket matrix coordinate pattern symmetric"));

    let eval = g2recon(&["evaluate", s(&truth), s(&out)]);
    assert_eq!(eval.status.code(), Some(0));
    let m: Value = serde_json::from_slice(&eval.stdout).unwrap();
    assert_eq!(m["metrics"]["cne"], 0.0);
}

#[test]
fn identical_runs_give_identical_reports() {
    let dir = TempDir::new().unwrap();
    let g2 = square_of(&dir, "0 1\n1 2\n2 3\n3 0\n0 2\n3 4\n4 5\n");
    let mut reports = Vec::new();
    for i in 0..2 {
        let (out, report) = (
            dir.path().join(format!("r{i}.txt")),
            dir.path().join(format!("r{i}.json")),
        );
        let run = g2recon(&["reconstruct", s(&g2), "-o", s(&out), "--report", s(&report)]);
        assert_eq!(run.status.code(), Some(0));
        let mut r = json(&report);
        // the only field allowed to differ is when each run started
        r["manifest"]["started_unix"] = Value::Null;
        reports.push((r, fs::read_to_string(&out).unwrap()));
    }
    assert_eq!(reports[0], reports[1]);
}

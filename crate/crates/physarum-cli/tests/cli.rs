//! End-to-end tests of the `physarum` binary: golden stdout, exit codes,
//! file outputs, and cross-invocation determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_physarum"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn data_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn triangle_file(dir: &Path) -> PathBuf {
    let path = dir.join("triangle.txt");
    std::fs::write(&path, "p sp 3 3 1 2\n1 2 10\n1 3 3\n3 2 4\n").unwrap();
    path
}

/// Blanks a CSV column so timing fields don't break byte comparisons.
fn mask_column(csv: &str, index: usize) -> String {
    csv.lines()
        .map(|line| {
            let mut fields: Vec<&str> = line.split(',').collect();
            if index < fields.len() {
                fields[index] = "-";
            }
            fields.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn gen_complete_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let result = run(&[
        "gen",
        "complete",
        "--n",
        "50",
        "--seed",
        "1",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    assert_eq!(stdout(&result), "nodes: 50\nedges: 1225\n");
    let contents = std::fs::read_to_string(&out).unwrap();
    assert!(contents.starts_with("p sp 50 1225 1 2\n"));
    assert_eq!(contents.lines().count(), 1226);
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let result = run(&[
            "gen",
            "complete",
            "--n",
            "5",
            "--wmax",
            "10000",
            "--seed",
            "42",
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&result), 0);
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same seed must produce byte-identical edge lists"
    );
}

#[test]
fn gen_small_world_ring_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw.txt");
    let result = run(&[
        "gen",
        "sw",
        "--n",
        "50",
        "--degree",
        "6",
        "--beta",
        "0",
        "--seed",
        "1",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    assert_eq!(stdout(&result), "nodes: 50\nedges: 150\n");
}

#[test]
fn gen_rejects_single_node() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let result = run(&["gen", "complete", "--n", "1", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&result), 2);
    assert!(!out.exists(), "no partial output on failure");
}

#[test]
fn solve_triangle_golden() {
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    let result = run(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--criterion",
        "k=10",
    ]);
    assert_eq!(code(&result), 0);
    assert_eq!(
        stdout(&result),
        "path: 1 3 2\nlength: 7\niterations: 11\nterminated_by: criterion\n"
    );
}

#[test]
fn solve_trace_conforms_to_schema() {
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    let trace = dir.path().join("t.jsonl");
    let result = run(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--criterion",
        "eps=1e-3",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    let contents = std::fs::read_to_string(&trace).unwrap();
    assert!(!contents.is_empty());
    for (i, line) in contents.lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["iteration"], i as u64 + 1);
        assert!(v["dpath_length"].is_number());
        assert!(v["dpath_nodes"].is_array());
        assert!(v["sum_abs_delta_D"].is_number());
        assert!(v["elapsed_ns"].is_u64());
    }
}

#[test]
fn solve_budget_exhaustion_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    let result = run(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--criterion",
        "k=10",
        "--budget",
        "3",
    ]);
    assert_eq!(code(&result), 4);
    assert!(stdout(&result).contains("terminated_by: budget"));
}

#[test]
fn solve_rejects_bad_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    for spec in ["k=0", "eps=0", "eps=-2", "nope=1"] {
        let result = run(&[
            "solve",
            "--graph",
            graph.to_str().unwrap(),
            "--criterion",
            spec,
        ]);
        assert_eq!(code(&result), 2, "criterion {spec}");
    }
}

#[test]
fn solve_missing_file_exits_3() {
    let result = run(&[
        "solve",
        "--graph",
        "/nonexistent/g.txt",
        "--criterion",
        "k=5",
    ]);
    assert_eq!(code(&result), 3);
}

#[test]
fn solve_requires_exactly_one_graph_source() {
    let result = run(&["solve", "--criterion", "k=5"]);
    assert_eq!(code(&result), 2);
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    let result = run(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--complete",
        "5",
        "--criterion",
        "k=5",
    ]);
    assert_eq!(code(&result), 2);
}

#[test]
fn solve_generated_graph_with_terminal_overrides() {
    let result = run(&[
        "solve",
        "--complete",
        "6",
        "--seed",
        "3",
        "--source",
        "3",
        "--sink",
        "5",
        "--criterion",
        "k=5",
    ]);
    assert_eq!(code(&result), 0);
    let text = stdout(&result);
    let path_line = text.lines().next().unwrap();
    assert!(path_line.starts_with("path: 3 "));
    assert!(path_line.ends_with(" 5"));
}

#[test]
fn solve_sioux_falls_matches_reference_length() {
    let result = run(&[
        "solve",
        "--tntp",
        data_file("siouxfalls_net.tntp").to_str().unwrap(),
        "--sink",
        "24",
        "--criterion",
        "k=30",
    ]);
    assert_eq!(code(&result), 0);
    let text = stdout(&result);
    assert!(text.contains("length: 15"), "{text}");
    assert!(text.contains("terminated_by: criterion"));
}

#[test]
fn bench_is_deterministic_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (name, jobs) in [("a", "1"), ("b", "4"), ("c", "1")] {
        let prefix = dir.path().join(name);
        let result = run(&[
            "bench",
            "--sizes",
            "5,8",
            "--count",
            "4",
            "--criteria",
            "eps=1e-2,k=5",
            "--seed",
            "7",
            "--jobs",
            jobs,
            "-o",
            prefix.to_str().unwrap(),
        ]);
        assert_eq!(code(&result), 0);
        let success =
            std::fs::read_to_string(dir.path().join(format!("{name}.success.csv"))).unwrap();
        let runtime =
            std::fs::read_to_string(dir.path().join(format!("{name}.runtime.csv"))).unwrap();
        // stdout mirrors the success CSV
        assert_eq!(stdout(&result), success);
        outputs.push((mask_column(&success, 5), mask_column(&runtime, 2)));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn bench_config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("suite.json");
    let by_config = dir.path().join("from-config");
    let by_flags = dir.path().join("from-flags");
    std::fs::write(
        &config,
        format!(
            r#"{{"sizes": [5], "count": 3, "criteria": ["k=5"], "seed": 11, "out": "{}"}}"#,
            by_config.display()
        ),
    )
    .unwrap();
    let result = run(&["bench", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&result), 0);
    let result = run(&[
        "bench",
        "--sizes",
        "5",
        "--count",
        "3",
        "--criteria",
        "k=5",
        "--seed",
        "11",
        "-o",
        by_flags.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    let a = std::fs::read_to_string(dir.path().join("from-config.success.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("from-flags.success.csv")).unwrap();
    assert_eq!(mask_column(&a, 5), mask_column(&b, 5));

    // explicit flags override config values
    let overridden = dir.path().join("override");
    let result = run(&[
        "bench",
        "--config",
        config.to_str().unwrap(),
        "--sizes",
        "6",
        "-o",
        overridden.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    let c = std::fs::read_to_string(dir.path().join("override.success.csv")).unwrap();
    assert!(c.lines().nth(1).unwrap().starts_with("6,k=5,"));
}

#[test]
fn bench_rejects_unknown_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("suite.json");
    std::fs::write(&config, r#"{"sizez": [5]}"#).unwrap();
    let result = run(&["bench", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&result), 2);
}

#[test]
fn tpoint_triangle_golden() {
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    let csv = dir.path().join("tp.csv");
    let result = run(&[
        "tpoint",
        "--graph",
        graph.to_str().unwrap(),
        "--repeats",
        "2",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 0);
    let text = stdout(&result);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tpoint_iteration: 1"));
    assert_eq!(lines.next(), Some("confirmed: true"));
    assert!(lines.next().unwrap().starts_with("time_to_tpoint_s: "));

    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        table.lines().next(),
        Some("repeat,tpoint_iteration,time_to_tpoint_s,confirmed")
    );
    assert_eq!(table.lines().count(), 3);
    assert!(table.lines().nth(1).unwrap().starts_with("0,1,"));
    assert!(table.lines().nth(2).unwrap().starts_with("1,1,"));
}

#[test]
fn tpoint_short_budget_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let graph = triangle_file(dir.path());
    let result = run(&[
        "tpoint",
        "--graph",
        graph.to_str().unwrap(),
        "--budget",
        "20",
        "--window",
        "50",
    ]);
    assert_eq!(code(&result), 4);
}

#[test]
fn two_node_tpoint() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("two.txt");
    std::fs::write(&graph, "p sp 2 1 1 2\n1 2 5\n").unwrap();
    let result = run(&["tpoint", "--graph", graph.to_str().unwrap()]);
    assert_eq!(code(&result), 0);
    assert!(stdout(&result).starts_with("tpoint_iteration: 1\n"));
}

//! End-to-end tests of the `bcm-bench` binary: subcommands, exit codes, and
//! file outputs.

use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcm-bench"))
        .args(args)
        .output()
        .expect("spawn bcm-bench")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn sweep_writes_deterministic_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let run = |out: &Path| {
        let output = bench(&[
            "sweep",
            "--n",
            "8",
            "--loads-per-node",
            "5",
            "--reps",
            "2",
            "--seed",
            "11",
            "--iters",
            "auto",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "sweep failed: {output:?}");
    };
    run(&out_a);
    run(&out_b);
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "rerun with identical config must be byte-identical");

    let agg_a = std::fs::read(dir.path().join("a_agg.csv")).unwrap();
    let agg_b = std::fs::read(dir.path().join("b_agg.csv")).unwrap();
    assert_eq!(agg_a, agg_b);

    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(bcm_bench::sweep::RUNS_CSV_HEADER));
    // 1 cell x 2 algorithms x 2 mobility models x 2 reps = 8 run rows.
    assert_eq!(text.lines().count(), 9);
    let agg = String::from_utf8(agg_a).unwrap();
    assert!(agg.starts_with(bcm_bench::sweep::AGG_CSV_HEADER));
}

#[test]
fn sweep_accepts_a_config_file_with_cli_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("experiment.conf");
    let out = dir.path().join("r.csv");
    std::fs::write(
        &config_path,
        "n = 8\nloads_per_node = 4\nreps = 5\nseed = 3\nalg = greedy\nmobility = full\n",
    )
    .unwrap();
    let output = bench(&[
        "sweep",
        "--config",
        config_path.to_str().unwrap(),
        "--reps",
        "1", // overrides the file's 5
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2, "one run row expected:\n{text}");
    assert!(text.lines().nth(1).unwrap().contains(",greedy,full,"));
}

#[test]
fn sweep_writes_traces_and_graphs_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let traces = dir.path().join("traces");
    let graphs = dir.path().join("graphs");
    let output = bench(&[
        "sweep",
        "--n",
        "6",
        "--loads-per-node",
        "4",
        "--reps",
        "1",
        "--alg",
        "sorted_greedy",
        "--mobility",
        "full",
        "--track-continuous",
        "--seed",
        "2",
        "--out",
        out.to_str().unwrap(),
        "--trace-dir",
        traces.to_str().unwrap(),
        "--graph-dir",
        graphs.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");

    let trace_file = traces.join("trace_n6_L24_sorted_greedy_full_rep0.csv");
    let trace = std::fs::read_to_string(&trace_file).unwrap();
    assert!(trace.starts_with(bcm_bench::io::TRACE_CSV_HEADER));
    // Continuous tracking on: the deviation column is populated.
    assert!(!trace.lines().nth(1).unwrap().ends_with(','));

    let graph_file = graphs.join("graph_n6_L24_rep0.txt");
    let graph = bcm_bench::io::read_graph(&graph_file).unwrap();
    assert_eq!(graph.vertex_count(), 6);
}

#[test]
fn invalid_configuration_exits_with_code_2() {
    let cases: &[&[&str]] = &[
        &["sweep", "--n", "1", "--out", "/tmp/unused.csv"],
        &["sweep", "--reps", "0", "--out", "/tmp/unused.csv"],
        &["sweep", "--alg", "quicksort", "--out", "/tmp/unused.csv"],
        &[
            "sweep",
            "--weight-lo",
            "10",
            "--weight-hi",
            "5",
            "--out",
            "/tmp/unused.csv",
        ],
        &[
            "bounds",
            "--initial-disc",
            "10",
            "--n",
            "16",
            "--eps",
            "1",
            "--d",
            "4",
            "--lambda",
            "1.5",
        ],
    ];
    for args in cases {
        let output = bench(args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "expected exit 2 for {args:?}, got {:?}\nstderr: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        );
    }
    // clap usage errors share the same exit code.
    let output = bench(&["sweep", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unwritable_output_path_exits_with_code_3() {
    let output = bench(&[
        "sweep",
        "--n",
        "4",
        "--loads-per-node",
        "2",
        "--reps",
        "1",
        "--out",
        "/nonexistent-dir/results.csv",
    ]);
    assert_eq!(
        output.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn bounds_table_prints_the_expected_values() {
    let output = bench(&[
        "bounds",
        "--initial-disc",
        "100",
        "--n",
        "128",
        "--eps",
        "1",
        "--d",
        "4",
        "--lambda",
        "0.5",
        "--delta",
        "1",
        "--m",
        "3",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    // sqrt(12 ln 128) + 1
    assert!(text.contains("8.630489"), "{text}");
    // Vacuous tail probability at delta = 1.
    assert!(text.contains("2.000000"), "{text}");
    // m/(m+1) at m = 3.
    assert!(text.contains("0.750000"), "{text}");
}

#[test]
fn binpack_emits_csv_with_both_algorithms() {
    let output = bench(&[
        "binpack", "--m", "16,32", "--bins", "2", "--reps", "50", "--seed", "5",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with(bcm_bench::binpack_bench::BINPACK_CSV_HEADER));
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains(",greedy,"));
    assert!(text.contains(",sorted_greedy,"));
}

#[test]
fn timing_reports_both_algorithms() {
    let output = bench(&["timing", "--m", "1024", "--reps", "10"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("greedy"));
    assert!(text.contains("sorted_greedy"));
    assert!(text.contains("sorting overhead"));
}

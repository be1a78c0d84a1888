//! End-to-end runs of the `tsp2opt` binary: exit codes, file round-trips,
//! and the stdout fields other tooling greps for.

use std::fs;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tsp2opt"));
    cmd.args(args);
    for (key, value) in env {
        cmd.env(key, value);
    }
    let out = cmd.output().expect("spawning the binary");
    (
        out.status.code().expect("no exit code"),
        String::from_utf8(out.stdout).expect("stdout utf-8"),
        String::from_utf8(out.stderr).expect("stderr utf-8"),
    )
}

fn field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|line| line.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        .unwrap_or_else(|| panic!("missing `{key}=` in:\n{stdout}"))
}

const CROSSING_SQUARE: &str = "NAME: crossing-square
MODE: FLOAT
N: 4
WEIGHTS:
0 2.8284271247461903 2 2
2.8284271247461903 0 2 2
2 2 0 2.8284271247461903
2 2 2.8284271247461903 0
";

#[test]
fn gen_solve_verify_round_trip_on_the_tight_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout, _) = run(&["gen", "--family", "paper-lb", "--k", "2", "--out", out]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("n=8, optimal length 4, 2-optimal length 8 (ratio 2)"));

    let inst = dir.path().join("paper-lb-k2.inst");
    let opt = dir.path().join("paper-lb-k2-optimal.tour");
    let tprime = dir.path().join("paper-lb-k2-two-optimal.tour");
    for path in [&inst, &opt, &tprime] {
        assert!(path.exists(), "missing {}", path.display());
    }

    for tour in [&opt, &tprime] {
        let (code, stdout, _) = run(&[
            "verify",
            "--instance",
            inst.to_str().unwrap(),
            "--tour",
            tour.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stdout}");
        assert!(stdout.contains("metric: yes"));
        assert!(stdout.contains("two_optimal: yes"));
    }

    // The distinguished 2-optimal start is a fixed point of the engine.
    let init = format!("file:{}", tprime.display());
    let solved = dir.path().join("noop.tour");
    let (code, stdout, _) = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--init",
        &init,
        "--out",
        solved.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(field(&stdout, "moves"), "0");
    assert_eq!(field(&stdout, "length"), "8");
    assert_eq!(
        fs::read_to_string(&solved).unwrap(),
        fs::read_to_string(&tprime).unwrap()
    );

    // Both exact solvers find the short tour.
    for algo in ["heldkarp", "brute"] {
        let (code, stdout, _) = run(&[
            "solve",
            "--instance",
            inst.to_str().unwrap(),
            "--algo",
            algo,
            "--out",
            dir.path().join(format!("{algo}.tour")).to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stdout}");
        assert_eq!(field(&stdout, "length"), "4", "algo {algo}");
    }
}

#[test]
fn gen_random_families_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let (code, stdout, _) = run(&[
            "gen",
            "--family",
            "random-euclidean",
            "--n",
            "6",
            "--count",
            "2",
            "--seed",
            "3",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stdout}");
    }
    for idx in ["000", "001"] {
        let name = format!("euclid-n6-s3-{idx}.inst");
        let left = fs::read_to_string(a.path().join(&name)).unwrap();
        let right = fs::read_to_string(b.path().join(&name)).unwrap();
        assert_eq!(left, right, "{name} differs between identical runs");
        assert!(left.contains("MODE: FLOAT"));
    }

    let (code, stdout, _) = run(&[
        "gen",
        "--family",
        "random-metric",
        "--n",
        "5",
        "--seed",
        "9",
        "--out",
        a.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    let text = fs::read_to_string(a.path().join("metric-n5-s9-000.inst")).unwrap();
    assert!(text.contains("MODE: EXACT"));
}

#[test]
fn verify_flags_non_two_optimal_tours() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("square.inst");
    let tour = dir.path().join("identity.tour");
    fs::write(&inst, CROSSING_SQUARE).unwrap();
    fs::write(&tour, "0 1 2 3\n").unwrap();
    let (code, stdout, _) = run(&[
        "verify",
        "--instance",
        inst.to_str().unwrap(),
        "--tour",
        tour.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("metric: yes"));
    assert!(stdout.contains("two_optimal: NO (improving 2-change at positions (0, 2)"));
}

#[test]
fn verify_rejects_mismatched_tour() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("square.inst");
    let tour = dir.path().join("short.tour");
    fs::write(&inst, CROSSING_SQUARE).unwrap();
    fs::write(&tour, "0 1 2\n").unwrap();
    let (code, stdout, _) = run(&[
        "verify",
        "--instance",
        inst.to_str().unwrap(),
        "--tour",
        tour.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{stdout}");
    assert!(stdout.contains("tour: INVALID"));
}

#[test]
fn certify_exit_codes_and_kv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run(&["gen", "--family", "paper-lb", "--k", "2", "--out", out]);
    let inst = dir.path().join("paper-lb-k2.inst");
    let opt = dir.path().join("paper-lb-k2-optimal.tour");
    let tprime = dir.path().join("paper-lb-k2-two-optimal.tour");

    let (code, stdout, _) = run(&[
        "certify",
        "--instance",
        inst.to_str().unwrap(),
        "--opt-tour",
        opt.to_str().unwrap(),
        "--tour",
        tprime.to_str().unwrap(),
        "--kv",
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(field(&stdout, "ratio"), "2");
    assert_eq!(field(&stdout, "packing_lhs"), "1");
    assert_eq!(field(&stdout, "disjoint"), "true");
    assert_eq!(field(&stdout, "violation_pair"), "none");
    assert_eq!(field(&stdout, "all_ok"), "true");

    // A candidate with crossed section blocks admits an improving 2-change,
    // which certify surfaces as an overlapping pair.
    let bad = dir.path().join("bad.tour");
    fs::write(&bad, "0 1 4 2 3 5 6 7\n").unwrap();
    let (code, stdout, _) = run(&[
        "certify",
        "--instance",
        inst.to_str().unwrap(),
        "--opt-tour",
        opt.to_str().unwrap(),
        "--tour",
        bad.to_str().unwrap(),
        "--kv",
    ]);
    assert_eq!(code, 1, "{stdout}");
    assert_eq!(field(&stdout, "disjoint"), "false");
    assert_ne!(field(&stdout, "violation_pair"), "none");

    let (code, stdout, _) = run(&[
        "certify",
        "--instance",
        inst.to_str().unwrap(),
        "--opt-tour",
        opt.to_str().unwrap(),
        "--tour",
        tprime.to_str().unwrap(),
        "--grid-check",
        "200",
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("grid check at resolution 200"));
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn usage_and_io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.inst");
    let tour = dir.path().join("t.tour");
    fs::write(&tour, "0 1 2 3\n").unwrap();

    let cases: Vec<Vec<String>> = vec![
        vec!["verify".into(), "--instance".into(), missing.display().to_string(), "--tour".into(), tour.display().to_string()],
        vec!["gen".into(), "--family".into(), "paper-lb".into()],
        vec!["gen".into(), "--family".into(), "paper-lb".into(), "--k".into(), "1".into()],
        vec!["gen".into(), "--family".into(), "random-euclidean".into()],
        vec!["solve".into(), "--instance".into(), missing.display().to_string(), "--algo".into(), "bogus".into()],
        vec!["bench".into(), "--family".into(), "paper-lb".into(), "--csv".into(), dir.path().join("x.csv").display().to_string()],
    ];
    for case in &cases {
        let args: Vec<&str> = case.iter().map(String::as_str).collect();
        let (code, stdout, stderr) = run(&args);
        assert_eq!(code, 2, "args {case:?}\nstdout: {stdout}\nstderr: {stderr}");
    }

    // Malformed inputs are usage errors, not failed checks.
    let inst = dir.path().join("square.inst");
    fs::write(&inst, CROSSING_SQUARE).unwrap();
    let garbled = dir.path().join("garbled.inst");
    fs::write(&garbled, CROSSING_SQUARE.replace("2.8284271247461903 0 2 2", "2.8284271247461903 0 2")).unwrap();
    let (code, _, stderr) = run(&["verify", "--instance", garbled.to_str().unwrap(), "--tour", tour.to_str().unwrap()]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("error:"));

    let repeated = dir.path().join("repeated.tour");
    fs::write(&repeated, "0 1 2 2\n").unwrap();
    let (code, _, stderr) = run(&["verify", "--instance", inst.to_str().unwrap(), "--tour", repeated.to_str().unwrap()]);
    assert_eq!(code, 2, "{stderr}");

    let (code, _, stderr) = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--epsilon=-1",
        "--out",
        dir.path().join("e.tour").to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("--epsilon"));

    // The exact solvers refuse instances beyond their size limits.
    let big = dir.path().to_str().unwrap();
    run(&["gen", "--family", "random-euclidean", "--n", "11", "--out", big]);
    let big_inst = dir.path().join("euclid-n11-s0-000.inst");
    let (code, _, stderr) = run(&[
        "solve",
        "--instance",
        big_inst.to_str().unwrap(),
        "--algo",
        "brute",
        "--out",
        dir.path().join("b.tour").to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("brute"));
}

#[test]
fn solve_epsilon_controls_termination() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("square.inst");
    fs::write(&inst, CROSSING_SQUARE).unwrap();
    let out = dir.path().join("s.tour");

    // The only improving 2-change gains about 1.657; a higher threshold
    // leaves the start untouched.
    let (code, stdout, _) = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--epsilon",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(field(&stdout, "moves"), "0");

    let (code, stdout, _) = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(field(&stdout, "moves"), "1");
    let length: f64 = field(&stdout, "length").parse().unwrap();
    assert!((length - 8.0).abs() < 1e-9, "length {length}");
    assert_eq!(fs::read_to_string(&out).unwrap(), "0 2 1 3\n");
}

#[test]
fn bench_writes_sorted_csv_with_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("lb.csv");
    // Sizes passed out of order still come out sorted by instance_id.
    let (code, stdout, _) = run(&[
        "bench", "--family", "paper-lb", "--k", "3", "--k", "2",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("wrote 2 rows"));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "instance_id,family,n,seed,opt_len,two_opt_len,ratio,bound,moves,scan_policy,wall_time_ms"
    );
    assert!(lines[1].starts_with("paper-lb-k2,paper-lb,8,0,4,8,2,2,0,first,"));
    assert!(lines[2].starts_with("paper-lb-k3,paper-lb,18,0,6,18,3,3,0,first,"));

    let csv = dir.path().join("rand.csv");
    let (code, stdout, _) = run_env(
        &[
            "bench", "--family", "random-metric", "--n", "6", "--count", "2",
            "--seed", "5", "--starts", "1", "--scan", "best",
            "--csv", csv.to_str().unwrap(),
        ],
        &[("TSP2OPT_WORKERS", "3")],
    );
    assert_eq!(code, 0, "{stdout}");
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted, "rows must be sorted by instance_id");
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 11, "row {row}");
        assert_eq!(cols[1], "random-metric");
        assert_eq!(cols[2], "6");
        assert_eq!(cols[3], "5");
        assert_eq!(cols[9], "best");
        // Exact mode: the ratio field is a rational, never below 1.
        assert!(!cols[6].starts_with('-'), "row {row}");
    }

    let (code, _, stderr) = run_env(
        &[
            "bench", "--family", "random-metric", "--n", "6",
            "--csv", dir.path().join("w.csv").to_str().unwrap(),
        ],
        &[("TSP2OPT_WORKERS", "0")],
    );
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn bench_csv_is_reproducible_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let strip_time = |text: &str| -> Vec<String> {
        text.lines()
            .map(|line| line.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    let mut outputs = Vec::new();
    for (name, workers) in [("a.csv", "1"), ("b.csv", "4")] {
        let csv = dir.path().join(name);
        let (code, stdout, _) = run_env(
            &[
                "bench", "--family", "random-euclidean", "--n", "9", "--count", "3",
                "--seed", "11", "--starts", "2", "--csv", csv.to_str().unwrap(),
            ],
            &[("TSP2OPT_WORKERS", workers)],
        );
        assert_eq!(code, 0, "{stdout}");
        outputs.push(strip_time(&fs::read_to_string(&csv).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    // Float columns carry at most 12 significant digits.
    for line in &outputs[0][1..] {
        for cell in line.split(',').skip(4).take(4) {
            let digits = cell.chars().filter(char::is_ascii_digit).count()
                - if cell.starts_with("0.") { 1 } else { 0 };
            assert!(digits <= 12, "cell {cell} in {line}");
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn refine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refine"))
        .args(args)
        .output()
        .expect("run refine")
}

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dfl_prints_loss_and_sorted_gradients() {
    let out = refine(&["dfl", "--kb", &data("chair.json"), "--fd-check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# loss: -0.6124207591547405");
    assert_eq!(lines[1], "# valuation[0]: 0.6124207591547405");
    assert_eq!(lines[2], "atom,grad,flagged");
    assert!(lines[3].starts_with("cushion(o2),-0.766"));
    assert_eq!(lines.len(), 3 + 10 + 1);
    assert!(lines[13].starts_with("# fd max_abs_err: "));
    assert!(lines[13].ends_with("(checked 10, excluded 0)"));
}

#[test]
fn sat_writes_per_iteration_and_summary_csv() {
    let out_path = scratch("run.csv");
    let out = refine(&[
        "sat",
        "--cnf",
        &data("uf20-91"),
        "--logic",
        "lukasiewicz,godel",
        "--method",
        "ilr,adam",
        "--clauses",
        "20",
        "--max-iters",
        "50",
        "--seeds",
        "1,2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(&out_path).unwrap();
    assert!(csv.starts_with("instance,method,logic,param,iteration,satisfaction,l1_norm,seed\n"));
    let summary = fs::read_to_string(scratch("run_summary.csv")).unwrap();
    // 3 instances x 2 seeds x 2 methods x 2 logics, plus the header.
    assert_eq!(summary.lines().count(), 1 + 3 * 2 * 2 * 2);
    assert_eq!(stdout(&out).lines().count(), 1 + 3 * 2 * 2 * 2);
}

#[test]
fn analyze_fraction_prints_an_estimate() {
    let out = refine(&[
        "analyze",
        "fraction",
        "--aggregator",
        "lukasiewicz",
        "--n",
        "3",
        "--samples",
        "20000",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let f: f64 = stdout(&out).trim().parse().unwrap();
    assert!((f - 1.0 / 6.0).abs() < 0.02, "{f}");
}

#[test]
fn gen_cnf_writes_a_parseable_instance() {
    let path = scratch("gen.cnf");
    let out = refine(&[
        "gen-cnf",
        "--vars",
        "10",
        "--clauses",
        "30",
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let inst = refine_bench::dimacs::parse_dimacs(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((inst.num_vars, inst.clauses.len()), (10, 30));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.cnf");
    fs::write(&bad, "p cnf 3 1\n1 x 0\n").unwrap();
    let out_path = scratch("never.csv");
    let out = refine(&[
        "sat",
        "--cnf",
        bad.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = refine(&[
        "sat",
        "--cnf",
        &data("uf20-91"),
        "--logic",
        "yager:2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = refine(&[
        "dfl",
        "--kb",
        &data("chair.json"),
        "--config",
        "no-such-logic",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = refine(&["analyze", "fraction", "--aggregator", "median"]);
    assert_eq!(out.status.code(), Some(3));

    let out = refine(&["dfl", "--kb", &scratch("missing.json").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));

    let kb = scratch("broken.json");
    fs::write(&kb, "{ not json").unwrap();
    let out = refine(&["dfl", "--kb", kb.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

use std::fs;
use std::process::{Command, Output};

fn sbm_ppm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbm-ppm"))
        .args(args)
        .env("SBM_PPM_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn project_prints_labels_and_objective() {
    let dir = tempfile::tempdir().unwrap();
    let scores = dir.path().join("c.txt");
    fs::write(&scores, "5 0\n4 0\n0 3\n1 0\n").unwrap();
    let text = stdout(&sbm_ppm(&[
        "project",
        scores.to_str().unwrap(),
        "--capacities",
        "2,2",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# objective 12");
    assert_eq!(&lines[2..], ["0", "0", "1", "1"]);
}

#[test]
fn grid_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let svg = dir.path().join("grid.svg");
    let out = sbm_ppm(&[
        "grid",
        "--n",
        "60",
        "--k",
        "3",
        "--alpha-range",
        "0:20:20",
        "--beta-range",
        "1",
        "--trials",
        "2",
        "--init",
        "random",
        "--out",
        csv.to_str().unwrap(),
    ]);
    stdout(&out);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("alpha,beta,success_count"));
    stdout(&sbm_ppm(&[
        "plot",
        csv.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn converge_is_deterministic() {
    let args = [
        "converge",
        "--n",
        "300",
        "--k",
        "3",
        "--alpha",
        "25",
        "--beta",
        "2",
        "--repeats",
        "2",
        "--seed",
        "9",
    ];
    let a = stdout(&sbm_ppm(&args));
    assert_eq!(a, stdout(&sbm_ppm(&args)));
    assert!(a.starts_with("run_id,iteration,frobenius_distance"));
}

#[test]
fn real_reports_best_run() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let labels = dir.path().join("l.txt");
    fs::write(&graph, "1 2\n2 3\n3 1\n4 5\n5 6\n6 4\n3 4\n").unwrap();
    fs::write(&labels, "0\n0\n0\n1\n1\n1\n").unwrap();
    let text = stdout(&sbm_ppm(&[
        "real",
        graph.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--repeats",
        "3",
    ]));
    assert_eq!(text.lines().count(), 4);
    assert!(text
        .lines()
        .skip(1)
        .any(|l| l.ends_with(",1") && l.contains(",0,")));
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "1 2\n2 oops\n").unwrap();
    let out = sbm_ppm(&["real", graph.to_str().unwrap(), "--capacities", "1,1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert!(!sbm_ppm(&["grid", "--trials", "0"]).status.success());
}

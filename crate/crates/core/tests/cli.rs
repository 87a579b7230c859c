use std::fs;
use std::process::{Command, Output};

const EXE: &str = env!("CARGO_BIN_EXE_qutrit-dephasing");

fn run(args: &[&str]) -> Output {
    Command::new(EXE).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn state_dump_has_nine_rows_of_eighteen() {
    let out = run(&["state", "horodecki", "--a", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.split(',').count() == 18));
    let first: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
    assert!((first - 2.0 / 21.0).abs() < 1e-15);
}

#[test]
fn state_rejects_out_of_range_parameter() {
    let out = run(&["state", "horodecki", "--a", "6"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn witness_classifies_dumped_states() {
    let dir = tempfile::tempdir().unwrap();
    for (args, class) in [
        (vec!["state", "horodecki", "--a", "2.5"], "separable-compatible"),
        (vec!["state", "horodecki", "--a", "3.5"], "bound"),
        (vec!["state", "horodecki", "--a", "4.5"], "free"),
        (vec!["state", "upb"], "bound"),
    ] {
        let path = dir.path().join("rho.csv");
        fs::write(&path, run(&args).stdout).unwrap();
        let out = run(&["witness", path.to_str().unwrap()]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.contains(&format!("class = {class}")), "{args:?}: {text}");
    }
}

#[test]
fn witness_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "1,0,0\n").unwrap();
    assert!(!run(&["witness", path.to_str().unwrap()]).status.success());
    assert!(!run(&["witness", "/nonexistent/rho.csv"]).status.success());
}

#[test]
fn run_writes_config_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let cfg = dir.path().join("scenario.cfg");
    fs::write(
        &cfg,
        format!(
            "initial_state = horodecki\na = 4\nbath.kind = spin\nbath.L = 50\nbath.g = 0.5\nbath.T = 15\n\
             sweep = t 0 0.1 11\noutputs = R, N, absF1, absF3\noutput_path = {}\n",
            csv.display()
        ),
    )
    .unwrap();
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "t,R,N,absF1,absF3");
    assert_eq!(body.len(), 12);
}

#[test]
fn run_reports_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "initial_state = horodecki\nsweep = t 1 1 5\noutputs = R\n").unwrap();
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn preset_errors_and_seed_override() {
    let out = run(&["preset", "fig9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));

    let a = run(&["preset", "fig1", "--seed", "3", "--out", "-"]);
    let b = run(&["preset", "fig1", "--seed", "4", "--out", "-"]);
    assert!(a.status.success() && b.status.success());
    assert!(stdout(&a).contains("# seed = 3"));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn preset_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5d.csv");
    let out = run(&["preset", "fig5d", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "t,T,R,N"));
}

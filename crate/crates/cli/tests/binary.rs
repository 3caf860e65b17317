use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_phasefluct");

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("PHASEFLUCT_THREADS", n),
        None => cmd.env_remove("PHASEFLUCT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Column `name` of the single data row printed by `point`.
fn point_value(o: &Output, name: &str) -> String {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    row[i].to_string()
}

fn num(o: &Output, name: &str) -> f64 {
    point_value(o, name).parse().unwrap()
}

#[test]
fn point_at_zero_time() {
    let o = run(&["point", "--process", "fwm", "--alpha-sq", "1", "--theta", "0", "--g", "1", "--t", "0"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!((num(&o, "U") - 0.5).abs() <= 1e-9);
    assert!(num(&o, "d").abs() <= 1e-9);
    assert!(num(&o, "rel_err_U") <= 1e-9);
    assert_eq!(point_value(&o, "error"), "");
}

#[test]
fn point_fwm_short_time() {
    let o = run(&["point", "--process", "fwm", "--formalism", "bp", "--alpha-sq", "1", "--theta", "0", "--t", "0.01"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(num(&o, "rel_err_U") <= 1e-3);
    assert_eq!(point_value(&o, "validity_flag"), "0");
}

#[test]
fn point_swm_witness() {
    let o = run(&["point", "--process", "swm", "--alpha-sq", "1", "--g", "1", "--t", "0.005"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(num(&o, "d") < 0.0);
    assert!((num(&o, "d_formula") + 3e-4).abs() < 1e-15);
}

#[test]
fn q_at_singular_phase_is_undef() {
    let pi_half = std::f64::consts::FRAC_PI_2.to_string();
    let o = run(&["point", "--process", "shg", "--theta", &pi_half, "--t", "0.01"], None);
    assert_eq!(point_value(&o, "Q_formula"), "undef");
}

fn sweep_to(path: &Path, threads: Option<&str>) -> Output {
    run(
        &[
            "sweep",
            "--process",
            "shg",
            "--alpha-sq",
            "1,2",
            "--theta",
            "0,0.5,1",
            "--t-min",
            "0.001",
            "--t-max",
            "0.02",
            "--t-count",
            "5",
            "--output",
            path.to_str().unwrap(),
        ],
        threads,
    )
}

#[test]
fn sweep_cardinality_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(sweep_to(&a, Some("1")).status.code(), Some(0));
    assert_eq!(sweep_to(&b, Some("4")).status.code(), Some(0));
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ba, bb);
    let text = String::from_utf8(ba).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 31);
    assert_eq!(lines[0], phasefluct_cli::COLUMNS.join(","));
    // lexicographic (alpha_sq, theta, t)
    let keys: Vec<(f64, f64, f64)> = lines[1..]
        .iter()
        .map(|l| {
            let f: Vec<f64> = l.split(',').skip(2).take(4).map(|x| x.parse().unwrap()).collect();
            (f[0], f[1], f[3])
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn log_grid_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.csv");
    let o = run(
        &[
            "sweep", "--process", "fwm", "--t-min", "1e-3", "--t-max", "1e-1", "--t-count", "5", "--t-scale", "log",
            "--output", path.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let gt: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(6).unwrap().parse().unwrap()).collect();
    assert_eq!(gt.len(), 5);
    for w in gt.windows(2) {
        assert!((w[1] / w[0] - 10f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.toml");
    std::fs::write(&cfg, "process = \"fwm\"\nalpha_sq = [1.0]\ntheta = [0.0]\ng = 1.0\nt = [0.01]\n").unwrap();
    let o = run(&["point", "--config", cfg.to_str().unwrap(), "--process", "shg"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(point_value(&o, "process"), "shg");
    assert_eq!(num(&o, "t"), 0.01);
}

#[test]
fn exit_codes() {
    let o = run(&["sweep", "--process", "fwm", "--t-min", "0", "--t-max", "1", "--t-count", "0"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t.count"));

    let o = run(&["point", "--process", "fivewave", "--t", "0.01"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("process"));

    assert_eq!(run(&["point", "--process", "fwm", "--t", "0.01", "--config", "/nonexistent.toml"], None).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--process", "fwm", "--t", "0.01"], Some("zero")).status.code(), Some(2));
    assert_eq!(run(&["bogus"], None).status.code(), Some(2));

    // pump cutoff far too small for the coherent state
    let o = run(&["point", "--process", "shg", "--alpha-sq", "4", "--t", "0.01", "--cutoffs", "3,3"], None);
    assert_eq!(o.status.code(), Some(3));

    // sweep keeps going and records the failure
    let o = run(&["sweep", "--process", "shg", "--alpha-sq", "1,4", "--t", "0.01", "--cutoffs", "12,3"], None);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().ends_with(','));
    assert!(text.lines().nth(2).unwrap().contains("undef"));
}

#[test]
fn taylor_check_all_processes() {
    let o = run(&["taylor-check"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    for p in ["fwm", "swm", "shg"] {
        let line = text.lines().find(|l| l.starts_with(p)).unwrap();
        assert!(line.ends_with("pass"));
        let diff: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(diff <= 1e-9);
    }
}

#[test]
fn verify_filtered_to_shg() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let o = run(&["verify", "--process", "shg", "--output", report.to_str().unwrap()], None);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.contains(".shg.")));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert_eq!(csv.lines().count(), checks.len() + 1);
    assert!(csv.lines().skip(1).all(|l| l.contains(",shg,pass,")));
}

#[test]
fn corrupted_coefficient_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("corrupt.toml");
    std::fs::write(&cfg, "[coefficients.shg]\nwitness = 3.0\n").unwrap();
    let o = run(&["verify", "--process", "shg", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failing = text.lines().last().unwrap();
    assert!(failing.contains("c2.shg.d"), "{failing}");
    assert!(failing.contains("c4.shg.d_ratio"), "{failing}");
    assert!(!failing.contains("c2.shg.U"), "{failing}");
}

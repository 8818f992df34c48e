use std::process::{Command, Output};

fn telegame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telegame"))
        .args(args)
        .output()
        .expect("telegame runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn channel_reports_parameters() {
    let out = telegame(&["channel", "--alpha", "2"]);
    assert_eq!(exit_code(&out), 0);
    let s = stdout(&out);
    for field in [
        "alpha=2",
        "beta=1.5",
        "gamma=1",
        "delta=1.5",
        "kappa=1.5",
        "physical=true",
        "exchange_symmetric=true",
    ] {
        assert!(s.contains(field), "missing {field} in {s}");
    }
}

#[test]
fn channel_rejects_alpha_below_half() {
    let out = telegame(&["channel", "--alpha", "0.4"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(exit_code(&telegame(&["channel", "--alpha", "nan"])), 2);
}

#[test]
fn malformed_arguments_exit_2() {
    assert_eq!(exit_code(&telegame(&["channel"])), 2);
    assert_eq!(exit_code(&telegame(&["channel", "--alpha", "two"])), 2);
    assert_eq!(exit_code(&telegame(&["bogus"])), 2);
    assert_eq!(exit_code(&telegame(&["sweep", "--steps", "1"])), 2);
    assert_eq!(
        exit_code(&telegame(&[
            "sweep",
            "--alpha-min",
            "3",
            "--alpha-max",
            "2"
        ])),
        2
    );
}

#[test]
fn default_sweep_is_stable_csv() {
    let a = telegame(&["sweep"]);
    let b = telegame(&[
        "sweep",
        "--alpha-min",
        "0.5",
        "--alpha-max",
        "12",
        "--steps",
        "200",
    ]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(!s.contains('\r'));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "alpha,f_tr,f_ab,f_ac,f_coop");
    assert_eq!(lines.len(), 201);
    let first_alpha = |l: &str| l.split(',').next().unwrap().parse::<f64>().unwrap();
    assert_eq!(first_alpha(lines[1]), 0.5);
    assert_eq!(first_alpha(lines[200]), 12.0);
    for l in &lines[1..] {
        let cells: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 5);
        assert!((cells[4] - (cells[2] + cells[3]) / 2.0).abs() < 1e-11);
    }
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let out = telegame(&["sweep", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), telegame(&["sweep"]).stdout);
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("fig.csv");
    let out = telegame(&["sweep", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn threshold_text_and_json() {
    let out = telegame(&["threshold"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).starts_with("alpha_th=5.76"));

    let out = telegame(&["threshold", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let alpha_th = v["alpha_th"].as_f64().unwrap();
    assert!((5.70..=5.82).contains(&alpha_th));
    assert!(v["residual"].as_f64().unwrap().abs() <= 1e-9);
    assert!(v["iterations"].as_u64().unwrap() >= 1);
    assert!(v["f_at_threshold"].as_f64().unwrap() > 0.5);
}

#[test]
fn threshold_rejects_bad_tolerance() {
    assert_eq!(exit_code(&telegame(&["threshold", "--tol", "0"])), 2);
    assert_eq!(exit_code(&telegame(&["threshold", "--tol", "-1"])), 2);
}

#[test]
fn loose_tolerance_needs_fewer_iterations() {
    let it = |tol: &str| {
        let out = telegame(&["threshold", "--tol", tol, "--json"]);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["iterations"].as_u64().unwrap()
    };
    assert!(it("1e-3") < it("1e-12"));
}

#[test]
fn simulate_is_deterministic_and_consistent() {
    let args = [
        "simulate", "--alpha", "2", "--shots", "20000", "--seed", "3", "--json",
    ];
    let a = telegame(&args);
    assert_eq!(exit_code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, telegame(&args).stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["consistent"], true);
    assert_eq!(v["shots"], 20000);
    assert!((v["f_tr"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-14);

    let other_seed = telegame(&[
        "simulate", "--alpha", "2", "--shots", "20000", "--seed", "4", "--json",
    ]);
    assert_ne!(a.stdout, other_seed.stdout);
}

#[test]
fn simulate_ignores_thread_count() {
    let run = |threads: &str| {
        telegame(&[
            "simulate",
            "--alpha",
            "10",
            "--shots",
            "5000",
            "--seed",
            "1",
            "--threads",
            threads,
        ])
        .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn simulate_rejects_bad_input() {
    assert_eq!(
        exit_code(&telegame(&["simulate", "--alpha", "2", "--shots", "0"])),
        2
    );
    assert_eq!(exit_code(&telegame(&["simulate", "--alpha", "0.1"])), 2);
    assert_eq!(
        exit_code(&telegame(&[
            "simulate",
            "--alpha",
            "2",
            "--ensemble-std",
            "-1"
        ])),
        2
    );
}

#[test]
fn verify_passes() {
    let out = telegame(&["verify"]);
    let s = stdout(&out);
    assert_eq!(exit_code(&out), 0, "{s}");
    let passes = s.lines().filter(|l| l.starts_with("PASS")).count();
    assert!(passes >= 10, "{s}");
    assert!(!s.lines().any(|l| l.starts_with("FAIL")));
}

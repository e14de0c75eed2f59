use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path, seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_aimflow"));
    cmd.args(args).current_dir(dir).env_remove("FITTS_SEED");
    if let Some(s) = seed_env {
        cmd.env("FITTS_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> Output {
    let out = run(args, dir, None);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn simulate_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "simulate",
        "--distance",
        "0.2",
        "--width",
        "0.002",
        "--cprime",
        "6",
        "--trials",
        "200",
        "--duration",
        "2",
        "--out",
        out,
    ];
    v.extend_from_slice(extra);
    v
}

#[test]
fn predict_prints_movement_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(
        &[
            "predict",
            "--distance",
            "0.32",
            "--width",
            "0.01",
            "--cprime",
            "5",
            "--intercept",
            "0.3",
        ],
        dir.path(),
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("MT = 1.3 s"));
}

#[test]
fn usage_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["predict", "--distance", "0.32"],
        vec![
            "predict",
            "--distance",
            "0.32",
            "--width",
            "0.01",
            "--cprime",
            "5",
            "--intercept",
            "0.3",
            "--bogus",
        ],
        vec!["frobnicate"],
        vec![
            "anova", "--table", "x.csv", "--design", "threeway", "--out", "y.csv",
        ],
    ] {
        let out = run(&args, dir.path(), None);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn runtime_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["pvp", "--in", "missing.csv", "--out", "p.csv"],
        dir.path(),
        None,
    );
    assert!(!out.status.success());
    std::fs::write(dir.path().join("bad.csv"), "trial_id,t,x\n").unwrap();
    let out = run(
        &["pvp", "--in", "bad.csv", "--out", "p.csv"],
        dir.path(),
        None,
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no trials"));
}

#[test]
fn seed_precedence_flag_env_default() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let read = |name: &str| std::fs::read(d.join(name)).unwrap();
    assert!(run(&simulate_args("default.csv", &[]), d, None)
        .status
        .success());
    assert!(run(&simulate_args("zero.csv", &["--seed", "0"]), d, None)
        .status
        .success());
    assert!(run(&simulate_args("env.csv", &[]), d, Some("9"))
        .status
        .success());
    assert!(run(&simulate_args("flag9.csv", &["--seed", "9"]), d, None)
        .status
        .success());
    assert!(
        run(&simulate_args("both.csv", &["--seed", "0"]), d, Some("9"))
            .status
            .success()
    );
    assert_eq!(read("default.csv"), read("zero.csv"));
    assert_eq!(read("env.csv"), read("flag9.csv"));
    assert_ne!(read("env.csv"), read("default.csv"));
    assert_eq!(read("both.csv"), read("zero.csv"));
}

#[test]
fn full_pipeline_recovers_rate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        &[
            "simulate",
            "--distance",
            "0.2",
            "--width",
            "0.002",
            "--cprime",
            "6",
            "--tau",
            "0.3",
            "--k",
            "0.12",
            "--dt",
            "0.01",
            "--trials",
            "1000",
            "--duration",
            "2",
            "--seed",
            "7",
            "--out",
            "t.csv",
        ],
        d,
    );
    ok(
        &[
            "pvp", "--in", "t.csv", "--rate", "auto", "--out", "p.csv", "--svg", "p.svg",
        ],
        d,
    );
    ok(
        &[
            "fit",
            "--pvp",
            "p.csv",
            "--traj",
            "t.csv",
            "--report",
            "r.json",
            "--threshold",
            "0.025",
            "--distance",
            "0.2",
            "--width",
            "0.002",
            "--bootstrap",
            "200",
        ],
        d,
    );
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("r.json")).unwrap()).unwrap();
    let c = report["second_phase"]["c_prime"].as_f64().unwrap();
    assert!((5.7..=6.3).contains(&c), "{c}");
    assert_eq!(report["unimodality"]["sign_changes"], 1);
    assert_eq!(
        report["provenance"]["config_hash"].as_str().unwrap().len(),
        64
    );
    let svg = std::fs::read_to_string(d.join("p.svg")).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("<line"));
    let profile = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert!(profile.starts_with("t,sigma,var,dsigma_dt,n_trials\n"));
}

#[test]
fn anova_and_report_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("t.csv"),
        "a,b,value\nx,p,1\nx,p,1.5\nx,q,2\nx,q,2.5\ny,p,3\ny,p,3.5\ny,q,5\ny,q,5.5\n",
    )
    .unwrap();
    ok(
        &[
            "anova", "--table", "t.csv", "--design", "twoway", "--out", "e.csv",
        ],
        d,
    );
    let text = std::fs::read_to_string(d.join("e.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "effect,F,df1,df2,p,eta_sq");
    assert!(rows[1].starts_with("A,") && rows[2].starts_with("B,") && rows[3].starts_with("A:B,"));

    std::fs::create_dir(d.join("reports")).unwrap();
    for (i, dist) in ["0.03", "0.126", "0.51"].iter().enumerate() {
        let traj = format!("t{i}.csv");
        let prof = format!("p{i}.csv");
        ok(
            &[
                "simulate",
                "--distance",
                dist,
                "--width",
                "0.002",
                "--cprime",
                "5",
                "--trials",
                "300",
                "--duration",
                "2.5",
                "--seed",
                "3",
                "--out",
                &traj,
            ],
            d,
        );
        ok(&["pvp", "--in", &traj, "--out", &prof], d);
        ok(
            &[
                "fit",
                "--pvp",
                &prof,
                "--traj",
                &traj,
                "--report",
                &format!("reports/r{i}.json"),
                "--distance",
                dist,
                "--width",
                "0.002",
                "--bootstrap",
                "0",
            ],
            d,
        );
    }
    ok(&["report", "--in", "reports", "--out", "summary.json"], d);
    let s: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["conditions"].as_array().unwrap().len(), 3);
    let slope = s["fitts"]["slope"].as_f64().unwrap();
    assert!((slope - 0.2).abs() < 0.02, "{slope}");
    let c = s["mean_c_prime"].as_f64().unwrap();
    assert!((c - 5.0).abs() < 0.25, "{c}");
}

#[test]
fn strict_mode_rejects_corrupt_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut csv = String::from("trial_id,t,x\n");
    for k in 0..4 {
        for j in 0..20 {
            let x = if k == 2 && j == 5 {
                "oops".to_string()
            } else {
                format!("{}", (j as f64) * 0.01 * (k + 1) as f64)
            };
            csv += &format!("{k},{},{x}\n", j as f64 * 0.01);
        }
    }
    std::fs::write(d.join("t.csv"), csv).unwrap();
    let out = run(
        &["pvp", "--in", "t.csv", "--out", "p.csv", "--strict"],
        d,
        None,
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 47"));
    let out = run(&["pvp", "--in", "t.csv", "--out", "p.csv"], d, None);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dropped"));
    let profile = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert!(profile.lines().nth(1).unwrap().ends_with(",3"));
}

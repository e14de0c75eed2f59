//! Acceptance suite. Each criterion is one test and writes a single
//! `criterion N: PASS|FAIL|SKIP` line to stderr, bypassing output capture.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use aimflow::channel::{
    batch_mmse_oracle, information_bound_check, information_bound_from_estimates, simulate_traces,
    simulate_traces_scaled, theoretical_distortion, ChannelSpec, SourceSpec,
};
use aimflow::fitts::{sigma_from_width, TaskCondition};
use aimflow::io::{parse_trajectory_csv, ParseMode};
use aimflow::pvp::{
    analyze, compute_pvp, detect_stationary_onset, find_phase_split, fit_second_phase,
    resample_and_sync, time_to_spread, unimodality_check, Analysis, StartDetection, TargetRate,
    VarianceProfile,
};
use aimflow::rng::GaussianStream;
use aimflow::sim::{simulate_ensemble, SimulationConfig};
use aimflow::stats::{f_sf, linear_regression, one_way_anova, pearson, two_way_anova};

fn line(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let msg = format!("criterion {n}: {verdict}  {detail}\n");
    let _ = std::io::stderr().write_all(msg.as_bytes());
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

fn corr(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}

fn config(d: f64, w: f64, c: f64, seed: u64) -> SimulationConfig<f64> {
    SimulationConfig::new(TaskCondition::new(d, w).unwrap(), c, 0.01, 1000, 3.0, seed)
}

fn simulate(d: f64, w: f64, c: f64, seed: u64) -> (SimulationConfig<f64>, Analysis<f64>) {
    let cfg = config(d, w, c, seed);
    let e = simulate_ensemble(&cfg).unwrap();
    (cfg, analyze(&e, 0.025).unwrap())
}

#[test]
fn criterion_01_distortion_law() {
    let start = Instant::now();
    let sigma0_sq = 1.0;
    let src = SourceSpec::new(sigma0_sq).unwrap();
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for (k, &snr) in [0.5, 1.0, 3.0].iter().enumerate() {
        let ch = ChannelSpec::<f64>::new(snr, 1.0).unwrap();
        let traces = simulate_traces(100_000, 10, &ch, &src, 1000 + k as u64).unwrap();
        for n in 1..=10 {
            let sq: Vec<f64> = traces.iter().map(|t| t.residual(n).powi(2)).collect();
            let se = (var(&sq) / sq.len() as f64).sqrt();
            let want = theoretical_distortion(sigma0_sq, snr, 1.0, n).unwrap();
            let z = (mean(&sq) - want) / se;
            worst = worst.max(z.abs());
            if z.abs() > 3.0 {
                fails.push(format!("P/N={snr} n={n} z={z:.2}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = fails.is_empty() && secs < 60.0;
    line(
        1,
        pass,
        &format!("30 cells, max |z| = {worst:.2} SE, {secs:.1} s {fails:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_optimality_equality() {
    let ch = ChannelSpec::new(1.0, 1.0).unwrap();
    let src = SourceSpec::new(1.0).unwrap();
    let traces = simulate_traces(100_000, 6, &ch, &src, 2002).unwrap();
    let exact = information_bound_check(&traces, &ch).unwrap();
    let sources: Vec<f64> = traces.iter().map(|t| t.source_value).collect();
    let scaled: Vec<f64> = traces.iter().map(|t| 1.1 * t.final_estimate()).collect();
    let off = information_bound_from_estimates(&sources, &scaled, 6, &ch, 3.0).unwrap();
    let per_step = information_bound_check(
        &simulate_traces_scaled(100_000, 6, &ch, &src, 2002, 1.1).unwrap(),
        &ch,
    )
    .unwrap();
    let pass = exact.slack.abs() <= 0.05 && off.slack > 0.1;
    line(
        2,
        pass,
        &format!(
            "slack {:.4} bits (I >= {:.4}, nC = {}); decoder output x1.1: slack {:.3}; per-step gain x1.1: slack {:.4}",
            exact.slack, exact.lower_bound, exact.budget, off.slack, per_step.slack
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_incremental_equals_batch() {
    let ch = ChannelSpec::new(1.0, 1.0).unwrap();
    let sigma0 = 1.0;
    let src = SourceSpec::new(sigma0 * sigma0).unwrap();
    let traces = simulate_traces(10_000, 5, &ch, &src, 3003).unwrap();
    let sources: Vec<f64> = traces.iter().map(|t| t.source_value).collect();
    let mut worst: f64 = 0.0;
    for i in 1..=5 {
        let outputs: Vec<Vec<f64>> = traces.iter().map(|t| t.outputs()[..i].to_vec()).collect();
        let batch = batch_mmse_oracle(&sources, &outputs).unwrap();
        let gap = traces
            .iter()
            .zip(&batch.estimates)
            .map(|(t, b)| (t.steps[i - 1].estimate - b).abs())
            .sum::<f64>()
            / traces.len() as f64;
        worst = worst.max(gap);
    }
    let pass = worst < 1e-2 * sigma0;
    line(
        3,
        pass,
        &format!("max mean |recursive - batch| over n <= 5: {worst:.2e} sigma0"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_lemma_conditions() {
    let n = 6;
    let p = 1.0;
    let ch = ChannelSpec::new(p, 1.0).unwrap();
    let src = SourceSpec::new(1.0).unwrap();
    let traces = simulate_traces(100_000, n, &ch, &src, 4004).unwrap();
    let m = traces.len() as f64;
    let col = |f: &dyn Fn(&aimflow::channel::SchemeTrace<f64>) -> f64| {
        traces.iter().map(f).collect::<Vec<f64>>()
    };
    let mut fails = Vec::new();
    let mut checks = 0;
    let mut worst: f64 = 0.0;
    let mut check = |name: String, z: f64| {
        checks += 1;
        worst = worst.max(z.abs());
        if z.abs() > 3.0 {
            fails.push(format!("{name} z={z:.2}"));
        }
    };

    for i in 0..n {
        // Var of a sample variance is (m4 - s^4)/m for zero-mean inputs.
        let x = col(&|t| t.steps[i].input);
        let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
        check(
            format!("power[{}]", i + 1),
            (var(&x) - p) / (var(&x2) / m).sqrt(),
        );
    }
    let se_corr = 1.0 / m.sqrt();
    for i in 1..=n {
        let resid = col(&|t| t.residual(i));
        for j in 1..=i {
            let y = col(&|t| t.steps[j - 1].output);
            check(format!("corr(e{i},Y{j})"), corr(&resid, &y) / se_corr);
        }
    }
    let incr = |i: usize| {
        col(&|t| {
            let prev = if i == 1 { 0.0 } else { t.steps[i - 2].estimate };
            t.steps[i - 1].estimate - prev
        })
    };
    for i in 1..=n {
        for j in i + 1..=n {
            check(
                format!("corr(dA{i},dA{j})"),
                corr(&incr(i), &incr(j)) / se_corr,
            );
        }
    }
    let mut moments = |name: String, a: Vec<f64>| {
        let mu = mean(&a);
        let s2 = a.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / m;
        let skew = a.iter().map(|x| (x - mu).powi(3)).sum::<f64>() / m / s2.powf(1.5);
        let kurt = a.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / m / (s2 * s2) - 3.0;
        check(format!("skew({name})"), skew / (6.0 / m).sqrt());
        check(format!("kurt({name})"), kurt / (24.0 / m).sqrt());
    };
    for i in 1..=n {
        moments(format!("A{i}"), col(&|t| t.steps[i - 1].estimate));
        moments(format!("e{i}"), col(&|t| t.residual(i)));
    }
    let pass = fails.is_empty();
    line(
        4,
        pass,
        &format!("{checks} checks, max |z| = {worst:.2} SE {fails:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_05_local_fitts_law() {
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, &c) in [3.0, 5.0, 8.0].iter().enumerate() {
        let (_, a) = simulate(0.2, 0.002, c, 500 + k as u64);
        let ok = (a.fit.c_prime - c).abs() <= 0.05 * c && a.fit.r_sq > 0.98;
        pass &= ok;
        parts.push(format!(
            "C'={c}: {:.3} (r2 {:.4})",
            a.fit.c_prime, a.fit.r_sq
        ));
    }
    line(5, pass, &parts.join(", "));
    assert!(pass);
}

fn two_bump() -> VarianceProfile<f64> {
    let t: Vec<f64> = (0..200).map(|i| i as f64 / 199.0).collect();
    let s = t
        .iter()
        .map(|&x| (-((x - 0.3) / 0.08).powi(2)).exp() + (-((x - 0.7) / 0.08).powi(2)).exp())
        .collect();
    VarianceProfile::from_sigma(t, s, 1000).unwrap()
}

#[test]
fn criterion_06_unimodality_pipeline() {
    let mut counts = Vec::new();
    let mut pass = true;
    let mut excluded = Vec::new();
    let mut runs = vec![
        (0.2, 0.002, 3.0),
        (0.2, 0.002, 5.0),
        (0.2, 0.002, 8.0),
        (0.3, 0.005, 6.0),
    ];
    runs.extend([2.0f64, 4.0, 6.0, 8.0].map(|id| (0.002 * (id.exp2() - 1.0), 0.002, 5.0)));
    for (k, &(d, w, c)) in runs.iter().enumerate() {
        let cfg = config(d, w, c, 600 + k as u64);
        let profile = compute_pvp(&simulate_ensemble(&cfg).unwrap()).unwrap();
        let changes = unimodality_check(&profile, 0.025).unwrap().sign_changes;
        if cfg.second_phase_steps().unwrap() == 0 {
            // sigma0 is already below the endpoint spread, so there is no
            // homing phase: the profile rises and plateaus.
            excluded.push(format!("D/W={:.0} ({changes} changes)", d / w));
            continue;
        }
        pass &= changes == 1;
        counts.push(changes);
    }
    let bumps = unimodality_check(&two_bump(), 0.025).unwrap().sign_changes;
    pass &= bumps == 3;
    line(
        6,
        pass,
        &format!(
            "sign changes per ensemble {counts:?}; two-bump profile {bumps}; no homing phase, not counted: {excluded:?}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_07_phase_split_recovery() {
    let (cfg, a) = simulate(0.2, 0.002, 5.0, 700);
    let ratio = a.split.d_tau / cfg.task.distance;
    let pass = (a.split.tau - 0.3).abs() <= cfg.dt + 1e-12 && (0.62..=0.70).contains(&ratio);
    line(
        7,
        pass,
        &format!("tau = {} s, D_tau/D = {ratio:.4}", a.split.tau),
    );
    assert!(pass);
}

#[test]
fn criterion_08_classic_fitts_law() {
    let c = 5.0;
    let w = 0.002;
    let eps = 0.05;
    let target = sigma_from_width(w, eps).unwrap();
    let mut ids = Vec::new();
    let mut mts = Vec::new();
    for (k, id) in [2.0f64, 4.0, 6.0, 8.0].into_iter().enumerate() {
        let d = w * (id.exp2() - 1.0);
        let e = simulate_ensemble(&config(d, w, c, 800 + k as u64)).unwrap();
        let profile = compute_pvp(&e).unwrap();
        let split = find_phase_split(&profile, &e).unwrap();
        let fit = fit_second_phase(&profile, &split, detect_stationary_onset(&profile)).ok();
        let mt = time_to_spread(&profile, &split, fit.as_ref(), target)
            .expect("spread reaches the target");
        ids.push(id);
        mts.push(mt);
    }
    let reg = linear_regression(&ids, &mts).unwrap();
    let analytic = 1.0 / c;
    let pass = reg.r_sq > 0.95 && (reg.slope - analytic).abs() <= 0.1 * analytic;
    line(
        8,
        pass,
        &format!(
            "MT {:?} s; slope {:.4} s/bit vs 1/C' = {analytic}, r2 {:.4}, throughput {:.2} bit/s",
            mts.iter()
                .map(|m| (m * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            reg.slope,
            reg.r_sq,
            1.0 / reg.slope
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_statistics() {
    let p = f_sf(4.779f64, 1.0, 88.0).unwrap();
    let mut pass = (p - 0.031).abs() <= 0.001;

    // Definitional sums of squares on seeded data.
    let mut g = GaussianStream::new(909, 0);
    let groups: Vec<Vec<f64>> = (0..4)
        .map(|k| {
            (0..(5 + k))
                .map(|_| k as f64 * 0.5 + g.next_standard())
                .collect()
        })
        .collect();
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let grand = mean(&all);
    let ssb: f64 = groups
        .iter()
        .map(|x| x.len() as f64 * (mean(x) - grand).powi(2))
        .sum();
    let ssw: f64 = groups
        .iter()
        .map(|x| x.iter().map(|v| (v - mean(x)).powi(2)).sum::<f64>())
        .sum();
    let r1 = one_way_anova(&groups).unwrap();
    let e1 = r1.effect("group").unwrap();
    let f_def = (ssb / 3.0) / (ssw / (all.len() - 4) as f64);
    let one_err = (e1.ss - ssb)
        .abs()
        .max((r1.ss_error - ssw).abs())
        .max((e1.f - f_def).abs());
    pass &= one_err < 1e-10;

    let (na, nb, reps) = (2, 4, 12);
    let cells: Vec<Vec<Vec<f64>>> = (0..na)
        .map(|a| {
            (0..nb)
                .map(|b| {
                    (0..reps)
                        .map(|_| 0.3 * a as f64 + 0.2 * b as f64 + g.next_standard())
                        .collect()
                })
                .collect()
        })
        .collect();
    let all: Vec<f64> = cells.iter().flatten().flatten().copied().collect();
    let grand = mean(&all);
    let ma: Vec<f64> = cells.iter().map(|r| mean(&r.concat())).collect();
    let mb: Vec<f64> = (0..nb)
        .map(|b| mean(&cells.iter().flat_map(|r| r[b].clone()).collect::<Vec<_>>()))
        .collect();
    let r = reps as f64;
    let ss_a: f64 = ma.iter().map(|m| nb as f64 * r * (m - grand).powi(2)).sum();
    let ss_b: f64 = mb.iter().map(|m| na as f64 * r * (m - grand).powi(2)).sum();
    let mut ss_ab = 0.0;
    let mut ss_e = 0.0;
    for a in 0..na {
        for b in 0..nb {
            let mc = mean(&cells[a][b]);
            ss_ab += r * (mc - ma[a] - mb[b] + grand).powi(2);
            ss_e += cells[a][b].iter().map(|v| (v - mc).powi(2)).sum::<f64>();
        }
    }
    let r2 = two_way_anova(&cells).unwrap();
    let two_err = [
        (r2.effect("A").unwrap().ss, ss_a),
        (r2.effect("B").unwrap().ss, ss_b),
        (r2.effect("A:B").unwrap().ss, ss_ab),
        (r2.ss_error, ss_e),
    ]
    .iter()
    .map(|(x, y)| (x - y).abs())
    .fold(0.0, f64::max);
    pass &= two_err < 1e-10 && r2.df_error == na * nb * (reps - 1);

    let xs: Vec<f64> = (0..50).map(|_| g.next_standard()).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 0.7 * x + g.next_standard()).collect();
    let reg = linear_regression(&xs, &ys).unwrap();
    let rho = pearson(&xs, &ys).unwrap();
    let r_err = (reg.r_sq - rho * rho).abs();
    pass &= r_err < 1e-12;
    line(
        9,
        pass,
        &format!("p(F=4.779;1,88) = {p:.5}; one-way err {one_err:.1e}; two-way err {two_err:.1e}; |r2 - rho2| = {r_err:.1e}"),
    );
    assert!(pass);
}

fn aimflow(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_aimflow"))
        .args(args)
        .current_dir(dir)
        .env_remove("FITTS_SEED")
        .output()
        .expect("binary runs")
}

fn pipeline(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let sh = |args: &[&str]| {
        let out = aimflow(args, dir);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    std::fs::create_dir_all(dir.join("reports")).unwrap();
    for (i, d) in ["0.03", "0.126", "0.51"].iter().enumerate() {
        let traj = format!("traj{i}.csv");
        let prof = format!("pvp{i}.csv");
        let rep = format!("reports/fit{i}.json");
        sh(&[
            "simulate",
            "--distance",
            d,
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
            "300",
            "--duration",
            "2.5",
            "--seed",
            "7",
            "--out",
            &traj,
        ]);
        sh(&[
            "pvp",
            "--in",
            &traj,
            "--out",
            &prof,
            "--svg",
            &format!("pvp{i}.svg"),
        ]);
        sh(&[
            "fit",
            "--pvp",
            &prof,
            "--traj",
            &traj,
            "--report",
            &rep,
            "--distance",
            d,
            "--width",
            "0.002",
            "--bootstrap",
            "200",
        ]);
    }
    sh(&["report", "--in", "reports", "--out", "summary.json"]);
    std::fs::write(
        dir.join("table.csv"),
        "group,value\na,1\na,2\nb,3\nb,5\nc,4\nc,4.5\n",
    )
    .unwrap();
    sh(&[
        "anova",
        "--table",
        "table.csv",
        "--design",
        "oneway",
        "--out",
        "effects.csv",
    ]);

    let mut files: Vec<PathBuf> = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push(p);
            }
        }
    }
    files.sort();
    files
        .into_iter()
        .map(|p| {
            (
                p.strip_prefix(dir).unwrap().display().to_string(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn criterion_10_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = pipeline(a.path());
    let second = pipeline(b.path());
    let same = first.len() == second.len() && first.iter().zip(&second).all(|(x, y)| x == y);
    line(
        10,
        same,
        &format!("{} artifacts compared byte for byte", first.len()),
    );
    assert!(same);
}

#[test]
fn criterion_11_dataset_optional() {
    let Some(path) = std::env::var_os("AIMFLOW_PD_DATASET").map(PathBuf::from) else {
        let _ = std::io::stderr().write_all(b"criterion 11: SKIP  set AIMFLOW_PD_DATASET to a TrajectoryFile or a directory of them\n");
        return;
    };
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(&path)
            .unwrap()
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        v.sort();
        v
    } else {
        vec![path]
    };
    let mut taus = Vec::new();
    let mut rates = Vec::new();
    for f in &files {
        let parsed = parse_trajectory_csv::<f64>(f, ParseMode::Permissive).unwrap();
        let r = resample_and_sync(
            &parsed.trajectories,
            TargetRate::Auto,
            StartDetection::FirstSample,
        )
        .unwrap();
        match analyze(&r.ensemble, 0.025) {
            Ok(a) => {
                taus.push(a.split.tau);
                rates.push(a.fit.c_prime);
            }
            Err(e) => eprintln!("{}: {e}", f.display()),
        }
    }
    let (tau, rate) = (mean(&taus), mean(&rates));
    let pass = !taus.is_empty() && (0.25..=0.40).contains(&tau) && (4.0..=8.0).contains(&rate);
    line(
        11,
        pass,
        &format!(
            "{} ensembles: mean tau {tau:.3} s, mean C' {rate:.2} bit/s",
            taus.len()
        ),
    );
    assert!(pass);
}

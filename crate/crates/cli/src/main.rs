use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use aimflow::fitts::{self, FittsParams, MtForm, TaskCondition};
use aimflow::io::{self, AnovaDesign, FitReport, ParseMode};
use aimflow::pvp::{self, StartDetection, TargetRate};
use aimflow::sim::{self, FirstPhaseParams, SimulationConfig};
use aimflow::stats::linear_regression;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use serde_json::json;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "aimflow",
    version,
    about = "Simulate and analyze aimed movements as feedback transmission"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a trajectory ensemble and write it as CSV.
    Simulate(SimulateArgs),
    /// Resample trajectories and compute the positional variance profile.
    Pvp(PvpArgs),
    /// Analyze a profile and write a JSON fit report.
    Fit(FitArgs),
    /// Fixed-effects ANOVA on a long-format table.
    Anova(AnovaArgs),
    /// Predict movement time from the classic law.
    Predict(PredictArgs),
    /// Aggregate fit reports across conditions.
    Report(ReportArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Target distance (m).
    #[arg(long)]
    distance: f64,
    /// Target width (m).
    #[arg(long)]
    width: f64,
    /// Homing-in rate (bit/s).
    #[arg(long)]
    cprime: f64,
    /// First-phase duration (s).
    #[arg(long, default_value_t = 0.3)]
    tau: f64,
    /// First-phase variability constant.
    #[arg(long, default_value_t = fitts::DEFAULT_K)]
    k: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Ensemble duration (s).
    #[arg(long, default_value_t = 3.0)]
    duration: f64,
    #[arg(long, default_value_t = fitts::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Master seed; the FITTS_SEED environment variable is used when the flag is absent.
    #[arg(long, env = "FITTS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct SyncArgs {
    /// Parse errors abort instead of dropping the trial.
    #[arg(long)]
    strict: bool,
    /// Detect movement onset as the first sample faster than this (m/s).
    #[arg(long)]
    onset_velocity: Option<f64>,
}

impl SyncArgs {
    fn start(&self) -> StartDetection<f64> {
        match self.onset_velocity {
            Some(threshold) => StartDetection::Velocity { threshold },
            None => StartDetection::FirstSample,
        }
    }

    fn mode(&self) -> ParseMode {
        if self.strict {
            ParseMode::Strict
        } else {
            ParseMode::Permissive
        }
    }
}

#[derive(Args)]
struct PvpArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Resampling rate in Hz, or `auto`.
    #[arg(long, default_value = "auto")]
    rate: String,
    #[arg(long)]
    out: PathBuf,
    /// Also write an SVG plot of log2 sigma with the second-phase fit.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    sync: SyncArgs,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    pvp: PathBuf,
    #[arg(long)]
    traj: PathBuf,
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = pvp::DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Task distance (m); with --width enables predictions.
    #[arg(long, requires = "width")]
    distance: Option<f64>,
    #[arg(long, requires = "distance")]
    width: Option<f64>,
    #[arg(long, default_value_t = fitts::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = fitts::DEFAULT_K)]
    k: f64,
    /// Bootstrap replicates for the dip test; 0 skips it.
    #[arg(long, default_value_t = pvp::DEFAULT_BOOTSTRAP)]
    bootstrap: usize,
    /// Number of profile quantiles fed to the dip test.
    #[arg(long, default_value_t = 200)]
    dip_points: usize,
    /// Bootstrap seed; the FITTS_SEED environment variable is used when the flag is absent.
    #[arg(long, env = "FITTS_SEED", default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    sync: SyncArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Design {
    Oneway,
    Twoway,
}

#[derive(Args)]
struct AnovaArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long, value_enum)]
    design: Design,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    distance: f64,
    #[arg(long)]
    width: f64,
    #[arg(long)]
    cprime: f64,
    /// Width-form intercept (s).
    #[arg(long)]
    intercept: f64,
    #[arg(long, default_value_t = fitts::DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of fit reports (*.json).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let task = TaskCondition::new(a.distance, a.width)?;
    let mut cfg = SimulationConfig::new(task, a.cprime, a.dt, a.trials, a.duration, a.seed);
    cfg.first_phase = FirstPhaseParams {
        tau: a.tau,
        k: a.k,
        ..FirstPhaseParams::default()
    };
    cfg.epsilon = a.epsilon;
    let ensemble = sim::simulate_ensemble(&cfg)?;
    let mut out = create(&a.out)?;
    io::write_trajectory_csv(&ensemble, &mut out)?;
    out.flush()?;
    Ok(())
}

fn load_ensemble(
    path: &Path,
    rate: TargetRate<f64>,
    sync: &SyncArgs,
) -> Result<pvp::Resampled<f64>> {
    let parsed = io::parse_trajectory_csv::<f64>(path, sync.mode())
        .with_context(|| format!("reading {}", path.display()))?;
    if !parsed.dropped_trials.is_empty() {
        warn!(
            "{} trial(s) dropped while parsing {}",
            parsed.dropped_trials.len(),
            path.display()
        );
    }
    let r = pvp::resample_and_sync(&parsed.trajectories, rate, sync.start())?;
    for rej in &r.rejected {
        warn!("trial {} rejected: {}", rej.trial_id, rej.reason);
    }
    Ok(r)
}

fn parse_rate(s: &str) -> Result<TargetRate<f64>> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TargetRate::Auto);
    }
    let hz: f64 = s
        .parse()
        .with_context(|| format!("--rate expects a number or `auto`, got {s:?}"))?;
    Ok(TargetRate::Hz(hz))
}

fn run_pvp(a: &PvpArgs) -> Result<()> {
    let r = load_ensemble(&a.input, parse_rate(&a.rate)?, &a.sync)?;
    let profile = pvp::compute_pvp(&r.ensemble)?;
    let mut out = create(&a.out)?;
    io::write_profile_csv(&profile, &mut out)?;
    out.flush()?;
    if let Some(svg) = &a.svg {
        let fit = pvp::find_phase_split(&profile, &r.ensemble).and_then(|split| {
            pvp::fit_second_phase(&profile, &split, pvp::detect_stationary_onset(&profile))
        });
        let fit = match fit {
            Ok(f) => Some(f),
            Err(e) => {
                warn!("no second-phase line in the plot: {e}");
                None
            }
        };
        std::fs::write(svg, io::profile_svg(&profile, fit.as_ref()))
            .with_context(|| format!("cannot write {}", svg.display()))?;
    }
    Ok(())
}

fn fit(a: &FitArgs) -> Result<()> {
    let profile: pvp::VarianceProfile<f64> = io::read_profile_csv(open(&a.pvp)?)
        .with_context(|| format!("reading {}", a.pvp.display()))?;
    let rate = 1.0 / (profile.t[1] - profile.t[0]);
    let r = load_ensemble(&a.traj, TargetRate::Hz(rate), &a.sync)?;
    if r.ensemble.grid_len() != profile.len() {
        bail!(
            "profile has {} points but the trajectories give {}; were they produced from the same file?",
            profile.len(),
            r.ensemble.grid_len()
        );
    }

    let verdict = pvp::unimodality_check(&profile, a.threshold)?;
    let split = pvp::find_phase_split(&profile, &r.ensemble)?;
    let onset = pvp::detect_stationary_onset(&profile);
    let second = pvp::fit_second_phase(&profile, &split, onset)?;
    let dip = if a.bootstrap > 0 {
        let samples = pvp::profile_quantiles(&profile.t, &profile.sigma, a.dip_points)?;
        Some(pvp::dip_test(&samples, a.bootstrap, a.seed)?)
    } else {
        None
    };

    let mut task_block = None;
    let mut predictions = None;
    let mut measured = None;
    if let (Some(d), Some(w)) = (a.distance, a.width) {
        let task = TaskCondition::new(d, w)?;
        task_block = Some(io::TaskBlock {
            distance: d,
            width: w,
            id: task.index_of_difficulty(),
        });
        let params = FittsParams::derive(split.tau, second.c_prime, a.epsilon, a.k)?;
        predictions = Some(io::PredictionsBlock {
            epsilon: a.epsilon,
            k: a.k,
            a_prime: params.a_prime.unwrap_or_default(),
            a_prime_width: params.a_prime_width.unwrap_or_default(),
            b_prime: params.b_prime.unwrap_or_default(),
            mt_sigma_form: fitts::predict_mt(&task, &params, MtForm::SigmaForm)?,
            mt_width_form: fitts::predict_mt(&task, &params, MtForm::WidthForm)?,
        });
        let sigma_target = fitts::sigma_from_width(w, a.epsilon)?;
        let mt = pvp::time_to_spread(&profile, &split, Some(&second), sigma_target);
        if mt.is_none() {
            warn!("spread never reaches the endpoint spread {sigma_target} m");
        }
        measured = Some(io::MeasuredBlock { sigma_target, mt });
    }

    let config = json!({
        "command": "fit",
        "threshold": a.threshold,
        "distance": a.distance,
        "width": a.width,
        "epsilon": a.epsilon,
        "k": a.k,
        "bootstrap": a.bootstrap,
        "dip_points": a.dip_points,
        "seed": a.seed,
        "strict": a.sync.strict,
        "onset_velocity": a.sync.onset_velocity,
        "pvp_sha256": io::file_sha256(&a.pvp)?,
        "traj_sha256": io::file_sha256(&a.traj)?,
    });
    let report = FitReport {
        task: task_block,
        phase_split: io::PhaseSplitBlock {
            tau: split.tau,
            sigma0: split.sigma0,
            d_tau: split.d_tau,
        },
        second_phase: io::SecondPhaseBlock {
            c_prime: second.c_prime,
            intercept: second.intercept,
            r_sq: second.r_sq,
            window: [second.fit_window.0, second.fit_window.1],
            stationary_onset: second.stationary_onset,
            points: second.points,
        },
        unimodality: io::UnimodalityBlock {
            sign_changes: verdict.sign_changes,
            is_unimodal: verdict.is_unimodal,
            threshold_fraction: verdict.threshold_fraction,
            dip: dip.map(|d| d.dip),
            dip_p: dip.map(|d| d.p),
        },
        predictions,
        measured,
        provenance: io::Provenance {
            seed: a.seed,
            config_hash: io::config_hash(&config)?,
            tool_version: VERSION.to_string(),
            config,
        },
    };
    let mut out = create(&a.report)?;
    report.write(&mut out)?;
    out.flush()?;
    Ok(())
}

fn anova(a: &AnovaArgs) -> Result<()> {
    let design = match a.design {
        Design::Oneway => AnovaDesign::OneWay,
        Design::Twoway => AnovaDesign::TwoWay,
    };
    let table = io::read_anova_table::<f64>(open(&a.table)?, design)
        .with_context(|| format!("reading {}", a.table.display()))?;
    let result = table.analyze()?;
    let mut out = create(&a.out)?;
    io::write_effects_csv(&result, &mut out)?;
    out.flush()?;
    Ok(())
}

fn predict(a: &PredictArgs) -> Result<()> {
    let task = TaskCondition::new(a.distance, a.width)?;
    if a.cprime.is_nan() || a.cprime <= 0.0 {
        bail!("--cprime must be positive");
    }
    let params = FittsParams::width_form(a.intercept, 1.0 / a.cprime);
    let mt = fitts::predict_mt(&task, &params, MtForm::WidthForm)?;
    // Trim representation noise such as 1.3000000000000003.
    let shown = (mt * 1e9).round() / 1e9;
    println!("MT = {shown} s");
    let sigma = fitts::sigma_from_width(a.width, a.epsilon)?;
    println!(
        "endpoint sigma = {} m at error rate {}",
        (sigma * 1e12).round() / 1e12,
        a.epsilon
    );
    Ok(())
}

fn report(a: &ReportArgs) -> Result<()> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&a.input)
        .with_context(|| format!("cannot read directory {}", a.input.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no fit reports (*.json) in {}", a.input.display());
    }

    let mut conditions = Vec::new();
    let (mut ids, mut mts, mut rates, mut taus) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for p in &paths {
        let r = FitReport::read(open(p)?).with_context(|| format!("reading {}", p.display()))?;
        let name = p
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mt = r.measured.as_ref().and_then(|m| m.mt);
        rates.push(r.second_phase.c_prime);
        taus.push(r.phase_split.tau);
        match (&r.task, mt) {
            (Some(t), Some(mt)) => {
                ids.push(t.id);
                mts.push(mt);
            }
            _ => warn!("{name}: no task or measured MT; left out of the MT-ID regression"),
        }
        conditions.push(json!({
            "file": name,
            "distance": r.task.as_ref().map(|t| t.distance),
            "width": r.task.as_ref().map(|t| t.width),
            "id": r.task.as_ref().map(|t| t.id),
            "tau": r.phase_split.tau,
            "c_prime": r.second_phase.c_prime,
            "r_sq": r.second_phase.r_sq,
            "mt": mt,
        }));
    }
    let fitts_fit = if ids.len() >= 3 {
        let reg = linear_regression(&ids, &mts)?;
        Some(json!({
            "intercept": reg.intercept,
            "slope": reg.slope,
            "r_sq": reg.r_sq,
            "p_slope": reg.p_slope,
            "n": reg.n,
            "throughput": 1.0 / reg.slope,
        }))
    } else {
        warn!(
            "{} condition(s) with MT; at least 3 are needed for the MT-ID regression",
            ids.len()
        );
        None
    };
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let doc = json!({
        "conditions": conditions,
        "fitts": fitts_fit,
        "mean_c_prime": mean(&rates),
        "mean_tau": mean(&taus),
        "tool_version": VERSION,
    });
    let mut out = create(&a.out)?;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Pvp(a) => run_pvp(a),
        Command::Fit(a) => fit(a),
        Command::Anova(a) => anova(a),
        Command::Predict(a) => predict(a),
        Command::Report(a) => report(a),
    }
}

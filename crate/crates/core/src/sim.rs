//! Synthetic ensembles of 1-D aimed movements.
//!
//! Each trial has two phases. Up to `tau` the limb follows a minimum-jerk
//! path to `ρ D` with a per-trial Gaussian offset whose spread grows
//! linearly to `σ0 = k ρ D`. After `tau` one feedback-scheme iteration runs
//! per grid step: the terminal offset is the source value and each trial's
//! deviation from the mean path is its current residual `A - Â_m`. The
//! mean path covers the remaining distance with a second minimum-jerk
//! segment that ends when the theoretical spread reaches the endpoint
//! spread allowed by the target width. Trajectories then hold still.

use log::warn;

use crate::channel::{elias_step, ChannelSpec, SchemeState, SourceSpec};
use crate::error::{domain, Error, Result};
use crate::fitts::{self, TaskCondition, DEFAULT_COVER_FRACTION, DEFAULT_EPSILON, DEFAULT_K};
use crate::rng::GaussianStream;
use crate::scalar::Real;

/// Per-use capacity above which a single correction is unphysically large.
pub const MAX_BITS_PER_USE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstPhaseParams<T> {
    /// Duration of the first phase in seconds.
    pub tau: T,
    /// Fraction of the distance covered at `tau`.
    pub cover_fraction: T,
    /// Variability constant: spread at `tau` is `k` times the distance covered.
    pub k: T,
}

impl<T: Real> Default for FirstPhaseParams<T> {
    fn default() -> Self {
        Self {
            tau: T::lit(0.3),
            cover_fraction: T::lit(DEFAULT_COVER_FRACTION),
            k: T::lit(DEFAULT_K),
        }
    }
}

impl<T: Real> FirstPhaseParams<T> {
    fn validate(&self) -> Result<()> {
        if !(self.tau > T::zero()) {
            return Err(Error::Config(
                "first-phase duration must be positive".into(),
            ));
        }
        if !(self.cover_fraction > T::zero() && self.cover_fraction < T::one()) {
            return Err(Error::Config("cover fraction must lie in (0, 1)".into()));
        }
        if !(self.k >= T::zero()) {
            return Err(Error::Config("k must be non-negative".into()));
        }
        Ok(())
    }

    /// Spread at the end of the first phase, `k ρ D`.
    pub fn sigma0(&self, distance: T) -> T {
        self.k * self.cover_fraction * distance
    }
}

/// Positions of one trial on the ensemble's uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub trial_id: u64,
    pub positions: Vec<T>,
}

/// Synchronized trajectories sharing the grid `t_j = j dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T> {
    dt: T,
    trajectories: Vec<Trajectory<T>>,
}

impl<T: Real> Ensemble<T> {
    pub fn new(dt: T, trajectories: Vec<Trajectory<T>>) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::Input("grid step must be positive".into()));
        }
        let Some(first) = trajectories.first() else {
            return Err(Error::Input("ensemble has no trajectories".into()));
        };
        let len = first.positions.len();
        if len == 0 {
            return Err(Error::Input("trajectories have no samples".into()));
        }
        if let Some(bad) = trajectories.iter().find(|t| t.positions.len() != len) {
            return Err(Error::Input(format!(
                "trial {} has {} samples, expected {len}",
                bad.trial_id,
                bad.positions.len()
            )));
        }
        Ok(Self { dt, trajectories })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn grid_len(&self) -> usize {
        self.trajectories[0].positions.len()
    }

    pub fn duration(&self) -> T {
        T::count(self.grid_len() - 1) * self.dt
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.grid_len())
            .map(|j| T::count(j) * self.dt)
            .collect()
    }

    pub fn trajectories(&self) -> &[Trajectory<T>] {
        &self.trajectories
    }

    pub fn n_trials(&self) -> usize {
        self.trajectories.len()
    }

    /// Positions of every trial at grid index `j`.
    pub fn column(&self, j: usize) -> Vec<T> {
        self.trajectories.iter().map(|t| t.positions[j]).collect()
    }

    /// Multiply every position by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            dt: self.dt,
            trajectories: self
                .trajectories
                .iter()
                .map(|t| Trajectory {
                    trial_id: t.trial_id,
                    positions: t.positions.iter().map(|&x| x * factor).collect(),
                })
                .collect(),
        }
    }
}

/// First-phase samples of one trial on the grid `0, dt, ..., tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstPhase<T> {
    pub positions: Vec<T>,
    /// Signed deviation from the mean path at `tau`, `x(tau) - ρ D`.
    pub offset: T,
}

/// Minimum-jerk shape `10s³ - 15s⁴ + 6s⁵` on `[0, 1]`.
pub fn minimum_jerk<T: Real>(s: T) -> T {
    let s = s.max(T::zero()).min(T::one());
    let s3 = s * s * s;
    s3 * (T::lit(10.0) - T::lit(15.0) * s + T::lit(6.0) * s * s)
}

fn steps_in<T: Real>(span: T, dt: T) -> usize {
    (span / dt).round().to_usize().unwrap_or(0)
}

/// Draws one standard deviate from `rng` for the trial's offset.
pub fn simulate_first_phase<T: Real>(
    task: &TaskCondition<T>,
    fp: &FirstPhaseParams<T>,
    dt: T,
    rng: &mut GaussianStream,
) -> Result<FirstPhase<T>> {
    fp.validate()?;
    if !(dt > T::zero()) || !(dt < fp.tau / T::lit(10.0)) {
        return Err(Error::Config(format!(
            "grid step {dt} is too coarse for a first phase of {}",
            fp.tau
        )));
    }
    let n_tau = steps_in(fp.tau, dt);
    let covered = fp.cover_fraction * task.distance;
    let offset = fp.sigma0(task.distance) * T::lit(rng.next_standard());
    let positions = (0..=n_tau)
        .map(|j| {
            let s = T::count(j) / T::count(n_tau);
            covered * minimum_jerk(s) + offset * s
        })
        .collect();
    Ok(FirstPhase { positions, offset })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig<T> {
    pub task: TaskCondition<T>,
    pub first_phase: FirstPhaseParams<T>,
    /// Rate of the homing-in phase in bits per second.
    pub c_prime: T,
    pub dt: T,
    pub n_trials: usize,
    pub total_duration: T,
    pub master_seed: u64,
    /// Target error rate that sets the endpoint spread.
    pub epsilon: T,
}

impl<T: Real> SimulationConfig<T> {
    pub fn new(
        task: TaskCondition<T>,
        c_prime: T,
        dt: T,
        n_trials: usize,
        total_duration: T,
        master_seed: u64,
    ) -> Self {
        Self {
            task,
            first_phase: FirstPhaseParams::default(),
            c_prime,
            dt,
            n_trials,
            total_duration,
            master_seed,
            epsilon: T::lit(DEFAULT_EPSILON),
        }
    }

    pub fn channel(&self) -> Result<ChannelSpec<T>> {
        ChannelSpec::from_rate(self.c_prime, self.dt)
    }

    /// Number of feedback iterations until the theoretical spread reaches the
    /// endpoint spread for the target width (zero if it already does).
    pub fn second_phase_steps(&self) -> Result<usize> {
        let sigma0 = self.first_phase.sigma0(self.task.distance);
        let target = fitts::sigma_from_width(self.task.width, self.epsilon)?;
        if !(sigma0 > target) {
            return Ok(0);
        }
        let per_use = self.c_prime * self.dt;
        if !(per_use > T::zero()) {
            return Err(Error::Config(
                "a positive rate is needed to shrink the spread".into(),
            ));
        }
        let bits = (sigma0 / target).log2();
        Ok((bits / per_use - T::lit(1e-9))
            .ceil()
            .to_usize()
            .unwrap_or(0))
    }

    /// Predicted end of movement, `tau + steps dt`.
    pub fn movement_end(&self) -> Result<T> {
        let n_tau = steps_in(self.first_phase.tau, self.dt);
        Ok(T::count(n_tau + self.second_phase_steps()?) * self.dt)
    }
}

pub fn simulate_ensemble<T: Real>(config: &SimulationConfig<T>) -> Result<Ensemble<T>> {
    let fp = &config.first_phase;
    fp.validate()?;
    if config.n_trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    if !(config.total_duration > fp.tau) {
        return Err(Error::Config(
            "total duration must exceed the first phase".into(),
        ));
    }
    if !(config.c_prime >= T::zero()) {
        return Err(domain("rate C' must be non-negative"));
    }
    let per_use = config.c_prime * config.dt;
    if per_use > T::lit(MAX_BITS_PER_USE) {
        warn!("{per_use} bits per channel use is an unphysically large per-step correction");
    }
    let channel = config.channel()?;
    let sigma0 = fp.sigma0(config.task.distance);
    let source = SourceSpec::new(sigma0 * sigma0)?;

    let n_tau = steps_in(fp.tau, config.dt);
    let n_total = steps_in(config.total_duration, config.dt);
    let mut n_stop = config.second_phase_steps()?;
    if n_tau + n_stop > n_total {
        warn!(
            "movement needs {} s but the ensemble lasts {} s; trials are truncated",
            config.movement_end()?,
            config.total_duration
        );
        n_stop = n_total - n_tau;
    }

    let distance = config.task.distance;
    let covered = fp.cover_fraction * distance;
    let remaining = distance - covered;
    let mean_path = |m: usize| {
        if n_stop == 0 {
            distance
        } else {
            covered + remaining * minimum_jerk(T::count(m) / T::count(n_stop))
        }
    };

    let mut trajectories = Vec::with_capacity(config.n_trials);
    for trial in 0..config.n_trials as u64 {
        let mut rng = GaussianStream::new(config.master_seed, trial);
        let first = simulate_first_phase(&config.task, fp, config.dt, &mut rng)?;
        let mut positions = first.positions;
        positions.reserve(n_total + 1 - positions.len());

        let source_value = first.offset;
        let mut state = SchemeState::initial(&source);
        for m in 1..=n_stop {
            let z = rng.next_normal(channel.noise_power());
            let residual = if source.sigma0_sq > T::zero() {
                let (next, record) = elias_step(&state, source_value, z, &channel)?;
                state = next;
                source_value - record.estimate
            } else {
                T::zero()
            };
            positions.push(mean_path(m) + residual);
        }
        if n_stop == 0 && positions.len() <= n_total {
            positions.push(distance + source_value);
        }
        let last = *positions.last().expect("non-empty trajectory");
        positions.resize(n_total + 1, last);
        trajectories.push(Trajectory {
            trial_id: trial,
            positions,
        });
    }
    Ensemble::new(config.dt, trajectories)
}

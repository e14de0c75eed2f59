use log::warn;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{Ensemble, Trajectory};

/// Irregularly sampled trajectory as `(t, x)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTrajectory<T> {
    pub trial_id: u64,
    pub samples: Vec<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetRate<T> {
    /// Mean of the per-trajectory average rates, rounded to the nearest Hz.
    Auto,
    Hz(T),
}

/// How movement onset is located before synchronization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartDetection<T> {
    FirstSample,
    /// First sample whose speed to the next one exceeds `threshold` (m/s).
    Velocity {
        threshold: T,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub trial_id: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resampled<T> {
    pub ensemble: Ensemble<T>,
    pub rate: T,
    pub rejected: Vec<Rejection>,
}

fn check(raw: &RawTrajectory<impl Real>) -> std::result::Result<(), String> {
    if raw.samples.len() < 2 {
        return Err(format!("{} samples, need at least 2", raw.samples.len()));
    }
    if raw
        .samples
        .iter()
        .any(|(t, x)| !t.is_finite() || !x.is_finite())
    {
        return Err("non-finite sample".into());
    }
    if let Some(w) = raw.samples.windows(2).find(|w| !(w[1].0 > w[0].0)) {
        return Err(format!(
            "timestamps not strictly increasing at t = {}",
            w[1].0
        ));
    }
    Ok(())
}

fn onset<T: Real>(samples: &[(T, T)], start: StartDetection<T>) -> usize {
    match start {
        StartDetection::FirstSample => 0,
        StartDetection::Velocity { threshold } => samples
            .windows(2)
            .position(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs() > threshold)
            .unwrap_or(0),
    }
}

/// Linear interpolation at `t`, holding the end values outside the range.
fn interpolate<T: Real>(samples: &[(T, T)], t: T) -> T {
    if t <= samples[0].0 {
        return samples[0].1;
    }
    let last = samples[samples.len() - 1];
    if t >= last.0 {
        return last.1;
    }
    let j = samples.partition_point(|s| s.0 <= t);
    let (t0, x0) = samples[j - 1];
    let (t1, x1) = samples[j];
    x0 + (x1 - x0) * (t - t0) / (t1 - t0)
}

/// Put every accepted trajectory on one uniform grid starting at its
/// detected onset, with `x(0) = 0`. Trajectories shorter than the longest
/// one hold their final value.
pub fn resample_and_sync<T: Real>(
    raw: &[RawTrajectory<T>],
    rate: TargetRate<T>,
    start: StartDetection<T>,
) -> Result<Resampled<T>> {
    if raw.is_empty() {
        return Err(Error::Input("no trajectories to resample".into()));
    }
    let mut rejected = Vec::new();
    let mut accepted = Vec::new();
    for r in raw {
        match check(r) {
            Ok(()) => accepted.push(r),
            Err(reason) => {
                warn!("trial {} rejected: {reason}", r.trial_id);
                rejected.push(Rejection {
                    trial_id: r.trial_id,
                    reason,
                });
            }
        }
    }
    if accepted.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            found: 0,
        });
    }

    let rate = match rate {
        TargetRate::Hz(hz) => {
            if !(hz > T::zero()) || !hz.is_finite() {
                return Err(Error::Config(format!(
                    "target rate must be positive, got {hz}"
                )));
            }
            hz
        }
        TargetRate::Auto => {
            let total = accepted
                .iter()
                .map(|r| {
                    let span = r.samples[r.samples.len() - 1].0 - r.samples[0].0;
                    T::count(r.samples.len() - 1) / span
                })
                .sum::<T>();
            let hz = (total / T::count(accepted.len())).round();
            if hz < T::one() {
                return Err(Error::Config("average sampling rate rounds to 0 Hz".into()));
            }
            hz
        }
    };
    let dt = T::one() / rate;

    let shifted: Vec<(u64, Vec<(T, T)>)> = accepted
        .iter()
        .map(|r| {
            let i0 = onset(&r.samples, start);
            let (t0, x0) = r.samples[i0];
            (
                r.trial_id,
                r.samples[i0..]
                    .iter()
                    .map(|&(t, x)| (t - t0, x - x0))
                    .collect(),
            )
        })
        .collect();
    let span = shifted
        .iter()
        .map(|(_, s)| s[s.len() - 1].0)
        .fold(T::zero(), |a, b| a.max(b));
    // Tolerate rounding so a 1 s span at 4 Hz yields exactly 5 points.
    let steps = (span / dt + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    let trajectories = shifted
        .iter()
        .map(|(id, s)| Trajectory {
            trial_id: *id,
            positions: (0..=steps)
                .map(|j| interpolate(s, T::count(j) * dt))
                .collect(),
        })
        .collect();
    Ok(Resampled {
        ensemble: Ensemble::new(dt, trajectories)?,
        rate,
        rejected,
    })
}

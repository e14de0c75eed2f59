use log::warn;

use crate::error::{Error, Result};
use crate::pvp::profile::VarianceProfile;
use crate::pvp::unimodality::{unimodality_check, DEFAULT_THRESHOLD};
use crate::scalar::{mean, Real};
use crate::sim::Ensemble;
use crate::stats::linear_regression;

/// Relative band around the final spread that counts as stationary.
pub const STATIONARY_BAND: f64 = 0.10;

const MIN_FIT_POINTS: usize = 5;

/// Transition between the variance-increasing and decreasing phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSplit<T> {
    /// Time of maximum spread.
    pub tau: T,
    pub sigma0: T,
    /// Mean distance covered at `tau`.
    pub d_tau: T,
    pub tau_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondPhaseFit<T> {
    /// Negated slope of `log2 σ(t)`, bits per second.
    pub c_prime: T,
    /// Intercept of `log2 σ(t)` at `t = 0`, bits.
    pub intercept: T,
    pub r_sq: T,
    pub fit_window: (T, T),
    pub stationary_onset: T,
    pub points: usize,
}

/// `tau` is the earliest grid point of maximal sigma. A non-unimodal
/// profile is accepted with a warning.
pub fn find_phase_split<T: Real>(
    profile: &VarianceProfile<T>,
    ensemble: &Ensemble<T>,
) -> Result<PhaseSplit<T>> {
    if profile.len() != ensemble.grid_len() {
        return Err(Error::Input(format!(
            "profile has {} points but the ensemble grid has {}",
            profile.len(),
            ensemble.grid_len()
        )));
    }
    if profile.len() >= 5 {
        let verdict = unimodality_check(profile, T::lit(DEFAULT_THRESHOLD))?;
        if !verdict.is_unimodal {
            warn!(
                "profile is not unimodal ({} sign changes); phase split may be meaningless",
                verdict.sign_changes
            );
        }
    }
    let i = profile.argmax();
    let column = ensemble.column(i);
    let d_tau = mean(&column.iter().map(|x| x.abs()).collect::<Vec<_>>());
    Ok(PhaseSplit {
        tau: profile.t[i],
        sigma0: profile.sigma[i],
        d_tau,
        tau_index: i,
    })
}

/// Earliest time after the peak from which sigma stays within ±10% of its
/// final value; the grid end if no earlier point qualifies.
pub fn detect_stationary_onset<T: Real>(profile: &VarianceProfile<T>) -> T {
    let last = profile.len() - 1;
    let peak = profile.argmax();
    let fin = profile.sigma[last];
    let band = T::lit(STATIONARY_BAND) * fin;
    let mut onset = last;
    for i in (peak + 1..last).rev() {
        if (profile.sigma[i] - fin).abs() <= band {
            onset = i;
        } else {
            break;
        }
    }
    profile.t[onset]
}

/// Least squares of `log2 σ` on `t` over `[tau, stationary_onset]`.
/// Points with zero spread are dropped with a warning.
pub fn fit_second_phase<T: Real>(
    profile: &VarianceProfile<T>,
    split: &PhaseSplit<T>,
    stationary_onset: T,
) -> Result<SecondPhaseFit<T>> {
    let slack = if profile.len() > 1 {
        (profile.t[1] - profile.t[0]) * T::lit(1e-6)
    } else {
        T::zero()
    };
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    let mut dropped = 0usize;
    for (&t, &s) in profile.t.iter().zip(&profile.sigma) {
        if t + slack < split.tau || t > stationary_onset + slack {
            continue;
        }
        if s > T::zero() {
            ts.push(t);
            logs.push(s.log2());
        } else {
            dropped += 1;
        }
    }
    if dropped > 0 {
        warn!("{dropped} points with zero spread excluded from the second-phase fit");
    }
    if ts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            required: MIN_FIT_POINTS,
            found: ts.len(),
        });
    }
    let reg = linear_regression(&ts, &logs)?;
    Ok(SecondPhaseFit {
        c_prime: -reg.slope,
        intercept: reg.intercept,
        r_sq: reg.r_sq,
        fit_window: (ts[0], ts[ts.len() - 1]),
        stationary_onset,
        points: ts.len(),
    })
}

/// First grid time at or after `tau` where sigma drops to `target`.
pub fn first_time_below<T: Real>(
    profile: &VarianceProfile<T>,
    split: &PhaseSplit<T>,
    target: T,
) -> Option<T> {
    (split.tau_index..profile.len())
        .find(|&i| profile.sigma[i] <= target)
        .map(|i| profile.t[i])
}

/// Time at which the spread reaches `target`.
///
/// `tau` when the peak spread is already at or below the target. Otherwise
/// the crossing of the fitted decay line, which averages out the sampling
/// noise of individual grid points, falling back to the first grid crossing
/// without a fit. The result is never earlier than `tau`.
pub fn time_to_spread<T: Real>(
    profile: &VarianceProfile<T>,
    split: &PhaseSplit<T>,
    fit: Option<&SecondPhaseFit<T>>,
    target: T,
) -> Option<T> {
    if !(target > T::zero()) {
        return None;
    }
    if split.sigma0 <= target {
        return Some(split.tau);
    }
    match fit {
        Some(f) if f.c_prime > T::zero() => {
            Some(((f.intercept - target.log2()) / f.c_prime).max(split.tau))
        }
        _ => first_time_below(profile, split, target),
    }
}

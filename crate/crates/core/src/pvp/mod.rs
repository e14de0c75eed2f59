//! Positional variance profiles: construction, unimodality, phase split and
//! the log-linear fit of the variance-decreasing phase.

mod dip;
mod phase;
mod profile;
mod resample;
mod unimodality;

pub use dip::{dip_statistic, dip_test, profile_quantiles, DipResult, DEFAULT_BOOTSTRAP};
pub use phase::{
    detect_stationary_onset, find_phase_split, first_time_below, fit_second_phase, time_to_spread,
    PhaseSplit, SecondPhaseFit, STATIONARY_BAND,
};
pub use profile::{compute_pvp, compute_pvp_smoothed, VarianceProfile};
pub use resample::{
    resample_and_sync, RawTrajectory, Rejection, Resampled, StartDetection, TargetRate,
};
pub use unimodality::{unimodality_check, UnimodalityVerdict, DEFAULT_THRESHOLD};

use crate::error::Result;
use crate::scalar::Real;
use crate::sim::Ensemble;

/// Everything the standard pipeline extracts from one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis<T> {
    pub profile: VarianceProfile<T>,
    pub verdict: UnimodalityVerdict<T>,
    pub split: PhaseSplit<T>,
    pub stationary_onset: T,
    pub fit: SecondPhaseFit<T>,
}

/// Profile, unimodality verdict, phase split, stationary onset and
/// second-phase fit in one pass.
pub fn analyze<T: Real>(ensemble: &Ensemble<T>, threshold_fraction: T) -> Result<Analysis<T>> {
    let profile = compute_pvp(ensemble)?;
    let verdict = unimodality_check(&profile, threshold_fraction)?;
    let split = find_phase_split(&profile, ensemble)?;
    let stationary_onset = detect_stationary_onset(&profile);
    let fit = fit_second_phase(&profile, &split, stationary_onset)?;
    Ok(Analysis {
        profile,
        verdict,
        split,
        stationary_onset,
        fit,
    })
}

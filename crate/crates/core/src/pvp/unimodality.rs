use crate::error::{Error, Result};
use crate::pvp::profile::VarianceProfile;
use crate::scalar::Real;

/// Relative derivative threshold for counting a sign change.
pub const DEFAULT_THRESHOLD: f64 = 0.025;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodalityVerdict<T> {
    pub sign_changes: usize,
    pub is_unimodal: bool,
    pub threshold_fraction: T,
    /// The derivative is identically zero.
    pub flat: bool,
    pub dip: Option<T>,
    pub dip_p: Option<T>,
}

/// Count sign changes of `dσ/dt`, ignoring values within
/// `±threshold_fraction · max|dσ/dt|`. A profile is unimodal when the
/// derivative changes sign exactly once.
pub fn unimodality_check<T: Real>(
    profile: &VarianceProfile<T>,
    threshold_fraction: T,
) -> Result<UnimodalityVerdict<T>> {
    if profile.len() < 5 {
        return Err(Error::InsufficientData {
            required: 5,
            found: profile.len(),
        });
    }
    if !(threshold_fraction >= T::zero() && threshold_fraction < T::one()) {
        return Err(Error::Domain(
            "threshold fraction must lie in [0, 1)".into(),
        ));
    }
    let peak = profile
        .dsigma_dt
        .iter()
        .fold(T::zero(), |m, d| m.max(d.abs()));
    if !(peak > T::zero()) {
        return Ok(UnimodalityVerdict {
            sign_changes: 0,
            is_unimodal: false,
            threshold_fraction,
            flat: true,
            dip: None,
            dip_p: None,
        });
    }
    let level = threshold_fraction * peak;
    let mut last: Option<bool> = None;
    let mut sign_changes = 0;
    for &d in &profile.dsigma_dt {
        let state = if d > level {
            Some(true)
        } else if d < -level {
            Some(false)
        } else {
            None
        };
        if let Some(s) = state {
            if last.is_some_and(|prev| prev != s) {
                sign_changes += 1;
            }
            last = Some(s);
        }
    }
    Ok(UnimodalityVerdict {
        sign_changes,
        is_unimodal: sign_changes == 1,
        threshold_fraction,
        flat: false,
        dip: None,
        dip_p: None,
    })
}

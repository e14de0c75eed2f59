use crate::channel::{ChannelSpec, SchemeTrace};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Minimum ensemble size for the bound check.
pub const MIN_TRACES: usize = 1000;

/// The two computable ends of `½ log2(σ0²/Dn) ≤ I(A; Ân) ≤ nC`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoReport<T> {
    pub n: usize,
    /// `½ log2(σ̂0² / D̂n)` in bits, from empirical second moments.
    pub lower_bound: T,
    /// `n C` in bits.
    pub budget: T,
    pub slack: T,
    /// Monte Carlo tolerance on `lower_bound`: `k` standard errors.
    pub tolerance: T,
}

impl<T: Real> InfoReport<T> {
    /// `slack ≥ -tolerance`.
    pub fn is_consistent(&self) -> bool {
        self.slack >= -self.tolerance
    }
}

/// Bound check with the default tolerance of 3 standard errors.
pub fn information_bound_check<T: Real>(
    traces: &[SchemeTrace<T>],
    channel: &ChannelSpec<T>,
) -> Result<InfoReport<T>> {
    information_bound_check_with(traces, channel, T::lit(3.0))
}

/// The source variance in the lower bound is the empirical `mean(A²)` of the
/// same ensemble, so source sampling error cancels in the ratio. The
/// standard error comes from the delta method on `ln mean(A²) - ln mean(e²)`.
pub fn information_bound_check_with<T: Real>(
    traces: &[SchemeTrace<T>],
    channel: &ChannelSpec<T>,
    n_standard_errors: T,
) -> Result<InfoReport<T>> {
    if traces.len() < MIN_TRACES {
        return Err(Error::InsufficientData {
            required: MIN_TRACES,
            found: traces.len(),
        });
    }
    let n = traces[0].len();
    if let Some(bad) = traces.iter().position(|t| t.len() != n) {
        return Err(Error::Input(format!(
            "trace {bad} has {} steps, expected {n}",
            traces[bad].len()
        )));
    }

    let sources: Vec<T> = traces.iter().map(|t| t.source_value).collect();
    let estimates: Vec<T> = traces.iter().map(|t| t.final_estimate()).collect();
    information_bound_from_estimates(&sources, &estimates, n, channel, n_standard_errors)
}

/// Bound check for any decoder: `estimates[k]` is the decoded value of
/// `sources[k]` after `n` channel uses.
pub fn information_bound_from_estimates<T: Real>(
    sources: &[T],
    estimates: &[T],
    n: usize,
    channel: &ChannelSpec<T>,
    n_standard_errors: T,
) -> Result<InfoReport<T>> {
    if sources.len() != estimates.len() {
        return Err(Error::Input(format!(
            "{} source values but {} estimates",
            sources.len(),
            estimates.len()
        )));
    }
    if sources.len() < MIN_TRACES {
        return Err(Error::InsufficientData {
            required: MIN_TRACES,
            found: sources.len(),
        });
    }
    let m = T::count(sources.len());
    let src: Vec<T> = sources.iter().map(|&a| a * a).collect();
    let err: Vec<T> = sources
        .iter()
        .zip(estimates)
        .map(|(&a, &e)| (a - e) * (a - e))
        .collect();
    let src_mean = src.iter().copied().sum::<T>() / m;
    let err_mean = err.iter().copied().sum::<T>() / m;
    if !(err_mean > T::zero()) || !(src_mean > T::zero()) {
        return Err(Error::Numerical(
            "empirical distortion or source power is zero".into(),
        ));
    }

    let half = T::lit(0.5);
    let lower_bound = half * (src_mean / err_mean).log2();
    let budget = T::count(n) * channel.capacity();

    let mut var_s = T::zero();
    let mut var_e = T::zero();
    let mut cov = T::zero();
    for (&s, &e) in src.iter().zip(&err) {
        let ds = s - src_mean;
        let de = e - err_mean;
        var_s = var_s + ds * ds;
        var_e = var_e + de * de;
        cov = cov + ds * de;
    }
    let dof = T::count(sources.len() - 1);
    let (var_s, var_e, cov) = (var_s / dof, var_e / dof, cov / dof);
    let var_log = (var_s / (src_mean * src_mean) + var_e / (err_mean * err_mean)
        - T::lit(2.0) * cov / (src_mean * err_mean))
        / m;
    let se_bits = half * var_log.max(T::zero()).sqrt() / T::LN_2();

    Ok(InfoReport {
        n,
        lower_bound,
        budget,
        slack: budget - lower_bound,
        tolerance: n_standard_errors * se_bits,
    })
}

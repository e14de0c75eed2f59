use crate::error::{Error, Result};
use crate::scalar::{sample_variance, Real};
use crate::sim::Ensemble;

/// Cross-trial spread of position over time.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfile<T> {
    pub t: Vec<T>,
    pub sigma: Vec<T>,
    pub var: Vec<T>,
    pub dsigma_dt: Vec<T>,
    pub n_trials: usize,
}

impl<T: Real> VarianceProfile<T> {
    /// Build a profile from a standard-deviation curve; the derivative is
    /// recomputed by finite differences.
    pub fn from_sigma(t: Vec<T>, sigma: Vec<T>, n_trials: usize) -> Result<Self> {
        if t.len() != sigma.len() {
            return Err(Error::Input(
                "time and sigma columns differ in length".into(),
            ));
        }
        if t.len() < 2 {
            return Err(Error::InsufficientData {
                required: 2,
                found: t.len(),
            });
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Input(
                "profile times must be strictly increasing".into(),
            ));
        }
        if sigma.iter().any(|s| !(*s >= T::zero())) {
            return Err(Error::Input(
                "standard deviations must be non-negative".into(),
            ));
        }
        let var = sigma.iter().map(|&s| s * s).collect();
        let dsigma_dt = derivative(&t, &sigma);
        Ok(Self {
            t,
            sigma,
            var,
            dsigma_dt,
            n_trials,
        })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Recompute the derivative from a centered moving average of sigma.
    /// `window <= 1` leaves the profile unchanged.
    pub fn smoothed(mut self, window: usize) -> Self {
        if window > 1 {
            let smooth = moving_average(&self.sigma, window);
            self.dsigma_dt = derivative(&self.t, &smooth);
        }
        self
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.sigma.iter().enumerate() {
            if s > self.sigma[best] {
                best = i;
            }
        }
        best
    }
}

/// Centered differences inside, one-sided at the ends.
pub(crate) fn derivative<T: Real>(t: &[T], y: &[T]) -> Vec<T> {
    let n = y.len();
    if n < 2 {
        return vec![T::zero(); n];
    }
    (0..n)
        .map(|i| {
            let (lo, hi) = match i {
                0 => (0, 1),
                i if i == n - 1 => (n - 2, n - 1),
                i => (i - 1, i + 1),
            };
            (y[hi] - y[lo]) / (t[hi] - t[lo])
        })
        .collect()
}

/// Centered moving average, window truncated at the ends.
pub(crate) fn moving_average<T: Real>(y: &[T], window: usize) -> Vec<T> {
    let half = window / 2;
    (0..y.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(y.len() - 1);
            y[lo..=hi].iter().copied().sum::<T>() / T::count(hi - lo + 1)
        })
        .collect()
}

/// Unbiased cross-trial variance at every grid point.
pub fn compute_pvp<T: Real>(ensemble: &Ensemble<T>) -> Result<VarianceProfile<T>> {
    let n = ensemble.n_trials();
    if n < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            found: n,
        });
    }
    let var: Vec<T> = (0..ensemble.grid_len())
        .map(|j| sample_variance(&ensemble.column(j)))
        .collect();
    let sigma: Vec<T> = var.iter().map(|v| v.sqrt()).collect();
    let t = ensemble.times();
    let dsigma_dt = derivative(&t, &sigma);
    Ok(VarianceProfile {
        t,
        sigma,
        var,
        dsigma_dt,
        n_trials: n,
    })
}

/// [`compute_pvp`] with a moving-average pre-smoother on the derivative.
pub fn compute_pvp_smoothed<T: Real>(
    ensemble: &Ensemble<T>,
    window: usize,
) -> Result<VarianceProfile<T>> {
    compute_pvp(ensemble).map(|p| p.smoothed(window))
}

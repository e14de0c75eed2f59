use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::special::f_sf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionResult<T> {
    pub slope: T,
    pub intercept: T,
    /// Coefficient of determination.
    pub r_sq: T,
    /// Two-sided p-value of the slope, from `F(1, n - 2) = t²`.
    pub p_slope: T,
    pub n: usize,
}

/// Ordinary least squares of `ys` on `xs`.
pub fn linear_regression<T: Real>(xs: &[T], ys: &[T]) -> Result<RegressionResult<T>> {
    if xs.len() != ys.len() {
        return Err(Error::Input(format!(
            "{} x values but {} y values",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData {
            required: 3,
            found: n,
        });
    }
    let nf = T::count(n);
    let mx = xs.iter().copied().sum::<T>() / nf;
    let my = ys.iter().copied().sum::<T>() / nf;
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
        sxy = sxy + dx * dy;
    }
    if !(sxx > T::zero()) {
        return Err(Error::Domain("zero variance in predictor".into()));
    }

    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_sq = if syy > T::zero() {
        (sxy * sxy / (sxx * syy)).min(T::one())
    } else {
        T::zero()
    };

    let sse = (syy - slope * sxy).max(T::zero());
    let dof = T::count(n - 2);
    let p_slope = if slope == T::zero() {
        T::one()
    } else if sse == T::zero() {
        T::zero()
    } else {
        let se_sq = sse / dof / sxx;
        f_sf(slope * slope / se_sq, T::one(), dof)?
    };

    Ok(RegressionResult {
        slope,
        intercept,
        r_sq,
        p_slope,
        n,
    })
}

/// Pearson correlation coefficient.
pub fn pearson<T: Real>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Input(
            "pearson needs two equal-length samples of size >= 2".into(),
        ));
    }
    let nf = T::count(xs.len());
    let mx = xs.iter().copied().sum::<T>() / nf;
    let my = ys.iter().copied().sum::<T>() / nf;
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let syy: T = ys.iter().map(|&y| (y - my) * (y - my)).sum();
    if !(sxx > T::zero()) || !(syy > T::zero()) {
        return Err(Error::Domain("zero variance in correlation input".into()));
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

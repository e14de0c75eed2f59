//! Index-of-difficulty algebra and the local and classic forms of Fitts' law.
//!
//! The local law says the positional spread shrinks at a fixed rate during
//! the homing-in phase, `log2(σ0/σ(t)) = C' t`. Combining it with a
//! first-phase spread proportional to distance, `σ0 = k ρ D`, and a constant
//! error rate `ε` that ties `σ` to the target width gives the classic
//! endpoint law `MT = a' + b' log2(D/W)`.

mod erf;

pub use erf::{erf, erfc, inverse_erf};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Default target error rate.
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Default first-phase variability constant `σ0 = k · (distance covered)`.
pub const DEFAULT_K: f64 = 0.12;
/// Default fraction of the distance covered by the first phase.
pub const DEFAULT_COVER_FRACTION: f64 = 2.0 / 3.0;

/// Target distance and width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskCondition<T> {
    pub distance: T,
    pub width: T,
}

impl<T: Real> TaskCondition<T> {
    pub fn new(distance: T, width: T) -> Result<Self> {
        if !(distance > T::zero()) || !(width > T::zero()) {
            return Err(domain("distance and width must be positive"));
        }
        Ok(Self { distance, width })
    }

    pub fn index_of_difficulty(&self) -> T {
        (T::one() + self.distance / self.width).log2()
    }
}

/// `ID = log2(1 + D/W)` bits.
pub fn index_of_difficulty<T: Real>(distance: T, width: T) -> Result<T> {
    if !(width > T::zero()) {
        return Err(domain("target width must be positive"));
    }
    if !(distance >= T::zero()) {
        return Err(domain("distance must be non-negative"));
    }
    Ok((T::one() + distance / width).log2())
}

/// Local index of difficulty `log2(σ0/σ)` bits.
pub fn local_id<T: Real>(sigma0: T, sigma: T) -> Result<T> {
    if !(sigma0 > T::zero()) || !(sigma > T::zero()) {
        return Err(domain("standard deviations must be positive"));
    }
    Ok((sigma0 / sigma).log2())
}

/// `2√2 erf⁻¹(1 - ε)`: the number of standard deviations spanned by a target
/// that captures a fraction `1 - ε` of Gaussian endpoints.
pub fn coverage_factor<T: Real>(epsilon: T) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(domain("error rate must lie strictly between 0 and 1"));
    }
    Ok(T::lit(2.0) * T::SQRT_2() * inverse_erf(T::one() - epsilon)?)
}

/// Endpoint standard deviation for which `P(|X| ≤ W/2) = 1 - ε`.
pub fn sigma_from_width<T: Real>(width: T, epsilon: T) -> Result<T> {
    if !(width > T::zero()) {
        return Err(domain("target width must be positive"));
    }
    let sigma = width / coverage_factor(epsilon)?;
    if !sigma.is_finite() || sigma > T::lit(1e6) * width {
        warn!("error rate {epsilon} makes the endpoint spread {sigma} unboundedly large");
    }
    Ok(sigma)
}

/// Inverse of [`sigma_from_width`]: the width that a spread `sigma` fills at
/// error rate `epsilon`.
pub fn width_from_sigma<T: Real>(sigma: T, epsilon: T) -> Result<T> {
    if !(sigma > T::zero()) {
        return Err(domain("standard deviation must be positive"));
    }
    Ok(sigma * coverage_factor(epsilon)?)
}

/// Parameters of the two movement-time forms.
///
/// The sigma form is `MT = a' + (1/C') log2(D/σ)` and the width form is
/// `MT = a'_w + b' log2(D/W)`. Fields are optional so a parameter set may
/// carry only one form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittsParams<T> {
    /// First-phase duration in seconds.
    pub a: Option<T>,
    /// Sigma-form intercept in seconds.
    pub a_prime: Option<T>,
    /// Width-form intercept in seconds.
    pub a_prime_width: Option<T>,
    /// Width-form slope in seconds per bit.
    pub b_prime: Option<T>,
    /// Rate of the homing-in phase in bits per second.
    pub c_prime: Option<T>,
    pub epsilon: T,
    pub k: T,
}

impl<T: Real> Default for FittsParams<T> {
    fn default() -> Self {
        Self {
            a: None,
            a_prime: None,
            a_prime_width: None,
            b_prime: None,
            c_prime: None,
            epsilon: T::lit(DEFAULT_EPSILON),
            k: T::lit(DEFAULT_K),
        }
    }
}

impl<T: Real> FittsParams<T> {
    /// Derive both forms from the first-phase duration `a` and the rate `C'`
    /// with `σ0 = k ρ D`, `ρ = 2/3`.
    pub fn derive(a: T, c_prime: T, epsilon: T, k: T) -> Result<Self> {
        Self::derive_with_cover(a, c_prime, epsilon, k, T::lit(DEFAULT_COVER_FRACTION))
    }

    /// `a' = a + log2(k ρ)/C'`, `b' = 1/C'`, `a'_w = a' + log2(2√2 erf⁻¹(1-ε))/C'`.
    pub fn derive_with_cover(
        a: T,
        c_prime: T,
        epsilon: T,
        k: T,
        cover_fraction: T,
    ) -> Result<Self> {
        if !(c_prime > T::zero()) {
            return Err(domain("rate C' must be positive"));
        }
        if !(k > T::zero()) || !(cover_fraction > T::zero() && cover_fraction < T::one()) {
            return Err(domain(
                "k must be positive and the cover fraction in (0, 1)",
            ));
        }
        let inv_rate = c_prime.recip();
        let a_prime = a + (k * cover_fraction).log2() * inv_rate;
        let a_prime_width = a_prime + coverage_factor(epsilon)?.log2() * inv_rate;
        Ok(Self {
            a: Some(a),
            a_prime: Some(a_prime),
            a_prime_width: Some(a_prime_width),
            b_prime: Some(inv_rate),
            c_prime: Some(c_prime),
            epsilon,
            k,
        })
    }

    pub fn sigma_form(a_prime: T, c_prime: T, epsilon: T) -> Self {
        Self {
            a_prime: Some(a_prime),
            c_prime: Some(c_prime),
            epsilon,
            ..Self::default()
        }
    }

    pub fn width_form(a_prime_width: T, b_prime: T) -> Self {
        Self {
            a_prime_width: Some(a_prime_width),
            b_prime: Some(b_prime),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MtForm {
    SigmaForm,
    WidthForm,
}

fn missing(what: &str) -> Error {
    Error::Config(format!("{what} is required for this movement-time form"))
}

/// Predicted movement time in seconds.
///
/// A negative log term (target wider than the distance, or spread larger
/// than the distance) is allowed and logged.
pub fn predict_mt<T: Real>(
    task: &TaskCondition<T>,
    params: &FittsParams<T>,
    form: MtForm,
) -> Result<T> {
    match form {
        MtForm::SigmaForm => {
            let a_prime = params.a_prime.ok_or_else(|| missing("a'"))?;
            let c_prime = params.c_prime.ok_or_else(|| missing("C'"))?;
            if !(c_prime > T::zero()) {
                return Err(domain("rate C' must be positive"));
            }
            let sigma = sigma_from_width(task.width, params.epsilon)?;
            let log_term = (task.distance / sigma).log2();
            if log_term < T::zero() {
                warn!(
                    "distance {} is below the endpoint spread {sigma}",
                    task.distance
                );
            }
            Ok(a_prime + log_term / c_prime)
        }
        MtForm::WidthForm => {
            let a_prime_width = params.a_prime_width.ok_or_else(|| missing("a'_w"))?;
            let b_prime = params.b_prime.ok_or_else(|| missing("b'"))?;
            let log_term = (task.distance / task.width).log2();
            if log_term < T::zero() {
                warn!(
                    "distance {} is below the target width {}",
                    task.distance, task.width
                );
            }
            Ok(a_prime_width + b_prime * log_term)
        }
    }
}

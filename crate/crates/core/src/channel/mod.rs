//! Optimal feedback transmission of a Gaussian value over an AWGN channel.
//!
//! The encoder sends the scaled current estimation error
//! `X_i = alpha_i (A - Â_{i-1})`, the channel adds `Z_i ~ N(0, N)`, and the
//! decoder accumulates MMSE estimates of each unscaled message:
//! `Â_i = Â_{i-1} + (1/alpha_i) P/(P+N) Y_i`. The estimator output is fed
//! back to the encoder without noise. Each use divides the mean squared
//! error by `1 + P/N`, which is exactly capacity.

mod batch;
mod bounds;

pub use batch::{batch_mmse_oracle, BatchEstimate};
pub use bounds::{
    information_bound_check, information_bound_check_with, information_bound_from_estimates,
    InfoReport, MIN_TRACES,
};

use crate::error::{domain, Error, Result};
use crate::rng::GaussianStream;
use crate::scalar::Real;

/// Additive white Gaussian noise channel with power constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec<T> {
    input_power: T,
    noise_power: T,
    capacity: T,
}

impl<T: Real> ChannelSpec<T> {
    pub fn new(input_power: T, noise_power: T) -> Result<Self> {
        let capacity = capacity(input_power, noise_power)?;
        Ok(Self {
            input_power,
            noise_power,
            capacity,
        })
    }

    /// Channel whose per-use capacity yields `rate` bits per second when one
    /// use takes `dt` seconds. Noise power is normalized to 1.
    pub fn from_rate(rate: T, dt: T) -> Result<Self> {
        if !(rate >= T::zero()) || !(dt > T::zero()) {
            return Err(domain("rate must be non-negative and dt positive"));
        }
        let per_use = rate * dt;
        let snr = (T::lit(2.0) * per_use).exp2() - T::one();
        Self::new(snr, T::one())
    }

    pub fn input_power(&self) -> T {
        self.input_power
    }

    pub fn noise_power(&self) -> T {
        self.noise_power
    }

    /// Bits per channel use.
    pub fn capacity(&self) -> T {
        self.capacity
    }

    pub fn snr(&self) -> T {
        self.input_power / self.noise_power
    }

    /// MMSE decoding factor `P / (P + N)`.
    pub fn decode_factor(&self) -> T {
        self.input_power / (self.input_power + self.noise_power)
    }
}

/// Zero-mean Gaussian source `A ~ N(0, sigma0_sq)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec<T> {
    pub sigma0_sq: T,
}

impl<T: Real> SourceSpec<T> {
    pub fn new(sigma0_sq: T) -> Result<Self> {
        if !(sigma0_sq >= T::zero()) || !sigma0_sq.is_finite() {
            return Err(domain("source variance must be finite and non-negative"));
        }
        Ok(Self { sigma0_sq })
    }

    pub fn mean(&self) -> T {
        T::zero()
    }
}

/// Decoder-side state after `iteration` channel uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeState<T> {
    pub iteration: usize,
    pub estimate: T,
    /// Theoretical distortion `D_i`, which also drives the encoder gain.
    pub distortion: T,
}

impl<T: Real> SchemeState<T> {
    pub fn initial(source: &SourceSpec<T>) -> Self {
        Self {
            iteration: 0,
            estimate: T::zero(),
            distortion: source.sigma0_sq,
        }
    }
}

/// One channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord<T> {
    pub gain: T,
    /// Unscaled message `A_i = A - Â_{i-1}`.
    pub message: T,
    pub input: T,
    pub noise: T,
    pub output: T,
    pub estimate: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeTrace<T> {
    pub source_value: T,
    pub steps: Vec<StepRecord<T>>,
}

impl<T: Real> SchemeTrace<T> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_estimate(&self) -> T {
        self.steps.last().map_or(T::zero(), |s| s.estimate)
    }

    /// `A - Â_i`; `i = 0` is the source value itself.
    pub fn residual(&self, i: usize) -> T {
        if i == 0 {
            self.source_value
        } else {
            self.source_value - self.steps[i - 1].estimate
        }
    }

    pub fn outputs(&self) -> Vec<T> {
        self.steps.iter().map(|s| s.output).collect()
    }
}

fn check_channel_powers<T: Real>(p: T, n: T) -> Result<()> {
    if !(n > T::zero()) {
        return Err(domain("noise power must be positive"));
    }
    if !(p >= T::zero()) {
        return Err(domain("input power must be non-negative"));
    }
    if !p.is_finite() || !n.is_finite() {
        return Err(domain("powers must be finite"));
    }
    Ok(())
}

/// `C = ½ log2(1 + P/N)` bits per channel use.
pub fn capacity<T: Real>(input_power: T, noise_power: T) -> Result<T> {
    check_channel_powers(input_power, noise_power)?;
    Ok(T::lit(0.5) * (input_power / noise_power).ln_1p() / T::LN_2())
}

/// Closed form `D_i = sigma0² (1 + P/N)^-i`.
pub fn theoretical_distortion<T: Real>(
    sigma0_sq: T,
    input_power: T,
    noise_power: T,
    i: usize,
) -> Result<T> {
    check_channel_powers(input_power, noise_power)?;
    if !(sigma0_sq >= T::zero()) {
        return Err(domain("source variance must be non-negative"));
    }
    let growth = T::one() + input_power / noise_power;
    let factor = match i32::try_from(i) {
        Ok(k) => growth.powi(-k),
        Err(_) => growth.powf(-T::count(i)),
    };
    Ok(sigma0_sq * factor)
}

/// Gain meeting the power constraint `E[X_i²] = P` given `E[(A - Â_{i-1})²] = D_prev`.
pub fn encoder_gain<T: Real>(input_power: T, prev_distortion: T) -> Result<T> {
    if !(input_power > T::zero()) {
        return Err(domain("encoder gain needs positive input power"));
    }
    if !(prev_distortion > T::zero()) {
        return Err(Error::DegenerateSource(prev_distortion.to_f64_lossy()));
    }
    Ok((input_power / prev_distortion).sqrt())
}

/// One iteration of the scheme with the MMSE decoder.
pub fn elias_step<T: Real>(
    state: &SchemeState<T>,
    source_value: T,
    noise: T,
    channel: &ChannelSpec<T>,
) -> Result<(SchemeState<T>, StepRecord<T>)> {
    elias_step_scaled(state, source_value, noise, channel, T::one())
}

/// Like [`elias_step`], with the decoding factor multiplied by `decode_scale`.
///
/// `decode_scale != 1` gives a deliberately suboptimal decoder; the state's
/// distortion still follows the optimal recursion because it sets the
/// open-loop encoder gains.
pub fn elias_step_scaled<T: Real>(
    state: &SchemeState<T>,
    source_value: T,
    noise: T,
    channel: &ChannelSpec<T>,
    decode_scale: T,
) -> Result<(SchemeState<T>, StepRecord<T>)> {
    let message = source_value - state.estimate;
    let p = channel.input_power();

    if p == T::zero() {
        // Silent channel: nothing is sent and the output carries no information.
        let record = StepRecord {
            gain: T::zero(),
            message,
            input: T::zero(),
            noise,
            output: noise,
            estimate: state.estimate,
        };
        let next = SchemeState {
            iteration: state.iteration + 1,
            ..*state
        };
        return Ok((next, record));
    }

    let gain = encoder_gain(p, state.distortion)?;
    let input = gain * message;
    let output = input + noise;
    let estimate = state.estimate + decode_scale * channel.decode_factor() * output / gain;
    let next = SchemeState {
        iteration: state.iteration + 1,
        estimate,
        distortion: state.distortion / (T::one() + channel.snr()),
    };
    let record = StepRecord {
        gain,
        message,
        input,
        noise,
        output,
        estimate,
    };
    Ok((next, record))
}

/// Run `n` channel uses for a known source value, drawing `Z_i ~ N(0, N)`
/// from `noise`.
pub fn run_elias<T: Real>(
    source_value: T,
    n: usize,
    channel: &ChannelSpec<T>,
    source: &SourceSpec<T>,
    noise: &mut GaussianStream,
) -> Result<SchemeTrace<T>> {
    run_elias_scaled(source_value, n, channel, source, noise, T::one())
}

pub fn run_elias_scaled<T: Real>(
    source_value: T,
    n: usize,
    channel: &ChannelSpec<T>,
    source: &SourceSpec<T>,
    noise: &mut GaussianStream,
    decode_scale: T,
) -> Result<SchemeTrace<T>> {
    if n == 0 {
        return Err(Error::Input("at least one channel use is required".into()));
    }
    let mut state = SchemeState::initial(source);
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let z = noise.next_normal(channel.noise_power());
        let (next, record) = elias_step_scaled(&state, source_value, z, channel, decode_scale)?;
        steps.push(record);
        state = next;
    }
    Ok(SchemeTrace {
        source_value,
        steps,
    })
}

/// Monte Carlo ensemble of traces. Trace `k` draws its source value and then
/// its channel noise from the stream `(master_seed, k)`.
pub fn simulate_traces<T: Real>(
    n_traces: usize,
    n: usize,
    channel: &ChannelSpec<T>,
    source: &SourceSpec<T>,
    master_seed: u64,
) -> Result<Vec<SchemeTrace<T>>> {
    simulate_traces_scaled(n_traces, n, channel, source, master_seed, T::one())
}

pub fn simulate_traces_scaled<T: Real>(
    n_traces: usize,
    n: usize,
    channel: &ChannelSpec<T>,
    source: &SourceSpec<T>,
    master_seed: u64,
    decode_scale: T,
) -> Result<Vec<SchemeTrace<T>>> {
    (0..n_traces)
        .map(|k| {
            let mut stream = GaussianStream::new(master_seed, k as u64);
            let a = stream.next_normal(source.sigma0_sq);
            run_elias_scaled(a, n, channel, source, &mut stream, decode_scale)
        })
        .collect()
}

//! Aimed movements as transmission over a noisy feedback channel.
//!
//! The crate covers the Elias feedback scheme on an AWGN channel, Monte
//! Carlo ensembles of two-phase pointing trajectories, positional variance
//! profiles and their analysis, the statistics used to compare conditions,
//! and the Fitts' law algebra linking the homing-in rate to movement time.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to one of them.

// `!(x > 0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod fitts;
pub mod io;
mod linalg;
pub mod pvp;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ChannelSpec64 = channel::ChannelSpec<f64>;
pub type ChannelSpec32 = channel::ChannelSpec<f32>;
pub type SourceSpec64 = channel::SourceSpec<f64>;
pub type SchemeTrace64 = channel::SchemeTrace<f64>;
pub type InfoReport64 = channel::InfoReport<f64>;
pub type TaskCondition64 = fitts::TaskCondition<f64>;
pub type TaskCondition32 = fitts::TaskCondition<f32>;
pub type FittsParams64 = fitts::FittsParams<f64>;
pub type Ensemble64 = sim::Ensemble<f64>;
pub type Ensemble32 = sim::Ensemble<f32>;
pub type SimulationConfig64 = sim::SimulationConfig<f64>;
pub type VarianceProfile64 = pvp::VarianceProfile<f64>;
pub type VarianceProfile32 = pvp::VarianceProfile<f32>;
pub type AnovaResult64 = stats::AnovaResult<f64>;
pub type RegressionResult64 = stats::RegressionResult<f64>;

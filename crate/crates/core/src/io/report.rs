use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskBlock {
    pub distance: f64,
    pub width: f64,
    pub id: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSplitBlock {
    pub tau: f64,
    pub sigma0: f64,
    pub d_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondPhaseBlock {
    pub c_prime: f64,
    pub intercept: f64,
    pub r_sq: f64,
    pub window: [f64; 2],
    pub stationary_onset: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnimodalityBlock {
    pub sign_changes: usize,
    pub is_unimodal: bool,
    pub threshold_fraction: f64,
    pub dip: Option<f64>,
    pub dip_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionsBlock {
    pub epsilon: f64,
    pub k: f64,
    pub a_prime: f64,
    pub a_prime_width: f64,
    pub b_prime: f64,
    pub mt_sigma_form: f64,
    pub mt_width_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredBlock {
    /// Endpoint spread implied by the width and error rate.
    pub sigma_target: f64,
    /// Time the fitted spread reaches `sigma_target`.
    pub mt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    /// SHA-256 of the canonical JSON of the analysis configuration.
    pub config_hash: String,
    pub tool_version: String,
    /// The configuration that was hashed.
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub task: Option<TaskBlock>,
    pub phase_split: PhaseSplitBlock,
    pub second_phase: SecondPhaseBlock,
    pub unimodality: UnimodalityBlock,
    pub predictions: Option<PredictionsBlock>,
    pub measured: Option<MeasuredBlock>,
    pub provenance: Provenance,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "report field {name} is not finite ({v})"
        )))
    }
}

impl FitReport {
    /// Every numeric field must be finite.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = &self.task {
            finite("task.distance", t.distance)?;
            finite("task.width", t.width)?;
            finite("task.id", t.id)?;
        }
        let p = &self.phase_split;
        finite("phase_split.tau", p.tau)?;
        finite("phase_split.sigma0", p.sigma0)?;
        finite("phase_split.d_tau", p.d_tau)?;
        let s = &self.second_phase;
        finite("second_phase.c_prime", s.c_prime)?;
        finite("second_phase.intercept", s.intercept)?;
        finite("second_phase.r_sq", s.r_sq)?;
        finite("second_phase.window", s.window[0])?;
        finite("second_phase.window", s.window[1])?;
        finite("second_phase.stationary_onset", s.stationary_onset)?;
        let u = &self.unimodality;
        finite("unimodality.threshold_fraction", u.threshold_fraction)?;
        if let Some(d) = u.dip {
            finite("unimodality.dip", d)?;
        }
        if let Some(d) = u.dip_p {
            finite("unimodality.dip_p", d)?;
        }
        if let Some(p) = &self.predictions {
            for (n, v) in [
                ("epsilon", p.epsilon),
                ("k", p.k),
                ("a_prime", p.a_prime),
                ("a_prime_width", p.a_prime_width),
                ("b_prime", p.b_prime),
                ("mt_sigma_form", p.mt_sigma_form),
                ("mt_width_form", p.mt_width_form),
            ] {
                finite(&format!("predictions.{n}"), v)?;
            }
        }
        if let Some(m) = &self.measured {
            finite("measured.sigma_target", m.sigma_target)?;
            if let Some(mt) = m.mt {
                finite("measured.mt", mt)?;
            }
        }
        if self.provenance.config_hash.is_empty() {
            return Err(Error::Input("provenance config hash is empty".into()));
        }
        Ok(())
    }

    pub fn write(&self, out: impl Write) -> Result<()> {
        self.validate()?;
        let mut out = out;
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn read(input: impl Read) -> Result<Self> {
        let report: Self = serde_json::from_reader(input)?;
        report.validate()?;
        Ok(report)
    }
}

/// Lowercase hex SHA-256 of the JSON encoding of `config`.
pub fn config_hash(config: &impl Serialize) -> Result<String> {
    let bytes = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn file_sha256(path: impl AsRef<Path>) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

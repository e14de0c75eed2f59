use std::io::{Read, Write};
use std::path::Path;

use log::warn;

use super::{check_header, parse_field};
use crate::error::{Error, Result};
use crate::pvp::RawTrajectory;
use crate::scalar::Real;
use crate::sim::Ensemble;

pub const TRAJECTORY_HEADER: [&str; 3] = ["trial_id", "t", "x"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Drop offending trials and report them.
    #[default]
    Permissive,
    /// Fail on the first problem.
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowIssue {
    pub line: u64,
    pub trial_id: Option<u64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrajectories<T> {
    /// In order of first appearance.
    pub trajectories: Vec<RawTrajectory<T>>,
    pub issues: Vec<RowIssue>,
    pub dropped_trials: Vec<u64>,
}

pub fn parse_trajectory_csv<T: Real>(
    path: impl AsRef<Path>,
    mode: ParseMode,
) -> Result<ParsedTrajectories<T>> {
    parse_trajectory_reader(std::fs::File::open(path)?, mode)
}

pub fn parse_trajectory_reader<T: Real>(
    reader: impl Read,
    mode: ParseMode,
) -> Result<ParsedTrajectories<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = records.next().transpose()?;
    check_header(header.as_ref(), &TRAJECTORY_HEADER, 1)?;

    let mut order: Vec<u64> = Vec::new();
    let mut samples: std::collections::HashMap<u64, Vec<(T, T)>> = Default::default();
    let mut bad: std::collections::BTreeSet<u64> = Default::default();
    let mut issues = Vec::new();

    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let id = rec.get(0).and_then(|s| s.trim().parse::<u64>().ok());
        let row = (|| -> Result<(u64, T, T)> {
            if rec.len() != 3 {
                return Err(Error::Format {
                    line,
                    message: format!("expected 3 fields, found {}", rec.len()),
                });
            }
            let id: u64 = parse_field(&rec[0], line, "trial_id")?;
            let t: f64 = parse_field(&rec[1], line, "t")?;
            let x: f64 = parse_field(&rec[2], line, "x")?;
            if !t.is_finite() || !x.is_finite() {
                return Err(Error::Format {
                    line,
                    message: "non-finite value".into(),
                });
            }
            Ok((id, T::lit(t), T::lit(x)))
        })();
        match row {
            Ok((id, t, x)) => {
                let entry = samples.entry(id).or_insert_with(|| {
                    order.push(id);
                    Vec::new()
                });
                if let Some(&(prev, _)) = entry.last() {
                    if !(t > prev) {
                        let message = format!("t = {t} does not increase within trial {id}");
                        if mode == ParseMode::Strict {
                            return Err(Error::Format { line, message });
                        }
                        issues.push(RowIssue {
                            line,
                            trial_id: Some(id),
                            message,
                        });
                        bad.insert(id);
                    }
                }
                entry.push((t, x));
            }
            Err(e) => {
                if mode == ParseMode::Strict {
                    return Err(e);
                }
                let message = match e {
                    Error::Format { message, .. } => message,
                    other => other.to_string(),
                };
                if let Some(id) = id {
                    bad.insert(id);
                }
                issues.push(RowIssue {
                    line,
                    trial_id: id,
                    message,
                });
            }
        }
    }

    for issue in &issues {
        warn!("line {}: {}", issue.line, issue.message);
    }
    if !bad.is_empty() {
        warn!("{} trial(s) dropped: {:?}", bad.len(), bad);
    }
    let trajectories: Vec<_> = order
        .into_iter()
        .filter(|id| !bad.contains(id))
        .map(|id| RawTrajectory {
            trial_id: id,
            samples: samples.remove(&id).unwrap_or_default(),
        })
        .collect();
    if trajectories.is_empty() {
        return Err(Error::Input("no trials".into()));
    }
    Ok(ParsedTrajectories {
        trajectories,
        issues,
        dropped_trials: bad.into_iter().collect(),
    })
}

/// One row per trial and grid point, `t = j dt`.
pub fn write_trajectory_csv<T: Real>(ensemble: &Ensemble<T>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    let times = ensemble.times();
    for traj in ensemble.trajectories() {
        let id = traj.trial_id.to_string();
        for (t, x) in times.iter().zip(&traj.positions) {
            w.write_record([id.as_str(), &t.to_string(), &x.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

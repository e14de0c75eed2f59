use std::io::{Read, Write};

use super::{check_header, parse_field};
use crate::error::{Error, Result};
use crate::pvp::VarianceProfile;
use crate::scalar::Real;

pub const PROFILE_HEADER: [&str; 5] = ["t", "sigma", "var", "dsigma_dt", "n_trials"];

pub fn write_profile_csv<T: Real>(profile: &VarianceProfile<T>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    let n = profile.n_trials.to_string();
    for i in 0..profile.len() {
        w.write_record([
            profile.t[i].to_string(),
            profile.sigma[i].to_string(),
            profile.var[i].to_string(),
            profile.dsigma_dt[i].to_string(),
            n.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a profile back; the stored derivative and variance are kept as is.
/// Times must be strictly increasing with a constant step.
pub fn read_profile_csv<T: Real>(input: impl Read) -> Result<VarianceProfile<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = rdr.records();
    let header = records.next().transpose()?;
    check_header(header.as_ref(), &PROFILE_HEADER, 1)?;

    let mut cols: [Vec<T>; 4] = Default::default();
    let mut n_trials = None;
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 5 {
            return Err(Error::Format {
                line,
                message: format!("expected 5 fields, found {}", rec.len()),
            });
        }
        for (k, col) in cols.iter_mut().enumerate() {
            let v: f64 = parse_field(&rec[k], line, PROFILE_HEADER[k])?;
            col.push(T::lit(v));
        }
        let n: usize = parse_field(&rec[4], line, "n_trials")?;
        if n_trials.is_some_and(|m| m != n) {
            return Err(Error::Format {
                line,
                message: "n_trials changes between rows".into(),
            });
        }
        n_trials = Some(n);
    }
    let [t, sigma, var, dsigma_dt] = cols;
    if t.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            found: t.len(),
        });
    }
    let step = t[1] - t[0];
    let tol = step.abs() * T::lit(1e-6);
    if let Some(i) = t
        .windows(2)
        .position(|w| !(w[1] > w[0]) || ((w[1] - w[0]) - step).abs() > tol)
    {
        return Err(Error::Format {
            line: i as u64 + 3,
            message: "profile times must increase with a constant step".into(),
        });
    }
    let mut profile = VarianceProfile::from_sigma(t, sigma, n_trials.unwrap_or(0))?;
    profile.var = var;
    profile.dsigma_dt = dsigma_dt;
    Ok(profile)
}

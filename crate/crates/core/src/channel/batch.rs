use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

/// Linear MMSE estimate of `A` from the full output vector `Y^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchEstimate<T> {
    /// `w = E[Y Yᵀ]⁻¹ E[A Y]` from empirical second moments.
    pub weights: Vec<T>,
    pub estimates: Vec<T>,
}

/// Non-recursive MMSE decoder used to cross-check the incremental one.
///
/// Both `A` and the outputs are zero mean under the model, so the regression
/// has no intercept. Needs at least `10 i` samples for `i` outputs per row.
pub fn batch_mmse_oracle<T: Real>(sources: &[T], outputs: &[Vec<T>]) -> Result<BatchEstimate<T>> {
    if sources.len() != outputs.len() {
        return Err(Error::Input(format!(
            "{} source values but {} output rows",
            sources.len(),
            outputs.len()
        )));
    }
    let uses = outputs.first().map_or(0, Vec::len);
    if uses == 0 {
        return Err(Error::Input("output rows are empty".into()));
    }
    if let Some(bad) = outputs.iter().position(|row| row.len() != uses) {
        return Err(Error::Input(format!(
            "output row {bad} has a different length"
        )));
    }
    let required = 10 * uses;
    if sources.len() < required {
        return Err(Error::InsufficientData {
            required,
            found: sources.len(),
        });
    }

    let m = T::count(sources.len());
    let mut cross = vec![T::zero(); uses];
    let mut gram = vec![T::zero(); uses * uses];
    for (&a, row) in sources.iter().zip(outputs) {
        for j in 0..uses {
            cross[j] = cross[j] + a * row[j];
            for k in j..uses {
                gram[j * uses + k] = gram[j * uses + k] + row[j] * row[k];
            }
        }
    }
    for j in 0..uses {
        cross[j] = cross[j] / m;
        for k in j..uses {
            let v = gram[j * uses + k] / m;
            gram[j * uses + k] = v;
            gram[k * uses + j] = v;
        }
    }

    let weights = linalg::solve(gram, cross, T::lit(1e-12)).ok_or_else(|| {
        Error::Numerical(format!(
            "empirical output covariance is singular ({uses} uses, {} samples)",
            sources.len()
        ))
    })?;
    let estimates = outputs
        .iter()
        .map(|row| row.iter().zip(&weights).map(|(&y, &w)| y * w).sum())
        .collect();
    Ok(BatchEstimate { weights, estimates })
}

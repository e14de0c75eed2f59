use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::special::f_sf;

#[derive(Debug, Clone, PartialEq)]
pub struct AnovaEffect<T> {
    pub name: String,
    pub ss: T,
    pub f: T,
    pub df1: usize,
    pub df2: usize,
    pub p: T,
    /// `SS_effect / SS_total` (not partial).
    pub eta_sq: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnovaResult<T> {
    pub effects: Vec<AnovaEffect<T>>,
    pub ss_error: T,
    pub df_error: usize,
    pub ss_total: T,
}

impl<T: Real> AnovaResult<T> {
    pub fn effect(&self, name: &str) -> Option<&AnovaEffect<T>> {
        self.effects.iter().find(|e| e.name == name)
    }
}

fn effect<T: Real>(
    name: &str,
    ss: T,
    df1: usize,
    ss_error: T,
    df2: usize,
    ss_total: T,
) -> Result<AnovaEffect<T>> {
    let ms = ss / T::count(df1);
    let mse = ss_error / T::count(df2);
    let (f, p) = if mse > T::zero() {
        let f = ms / mse;
        (f, f_sf(f, T::count(df1), T::count(df2))?)
    } else if ms > T::zero() {
        (T::infinity(), T::zero())
    } else {
        (T::zero(), T::one())
    };
    let eta_sq = if ss_total > T::zero() {
        ss / ss_total
    } else {
        T::zero()
    };
    Ok(AnovaEffect {
        name: name.to_string(),
        ss,
        f,
        df1,
        df2,
        p,
        eta_sq,
    })
}

/// One-way fixed-effects ANOVA.
pub fn one_way_anova<T: Real>(groups: &[Vec<T>]) -> Result<AnovaResult<T>> {
    if groups.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            found: groups.len(),
        });
    }
    if let Some(g) = groups.iter().find(|g| g.len() < 2) {
        return Err(Error::InsufficientData {
            required: 2,
            found: g.len(),
        });
    }
    let total_n: usize = groups.iter().map(Vec::len).sum();
    let grand = groups.iter().flatten().copied().sum::<T>() / T::count(total_n);

    let mut ss_between = T::zero();
    let mut ss_within = T::zero();
    for g in groups {
        let m = g.iter().copied().sum::<T>() / T::count(g.len());
        ss_between = ss_between + T::count(g.len()) * (m - grand) * (m - grand);
        ss_within = ss_within + g.iter().map(|&x| (x - m) * (x - m)).sum::<T>();
    }
    let ss_total = ss_between + ss_within;
    let df_error = total_n - groups.len();
    let between = effect(
        "group",
        ss_between,
        groups.len() - 1,
        ss_within,
        df_error,
        ss_total,
    )?;
    Ok(AnovaResult {
        effects: vec![between],
        ss_error: ss_within,
        df_error,
        ss_total,
    })
}

/// Balanced two-way ANOVA with interaction.
///
/// `cells[i][j]` holds the replicates for level `i` of factor A and level `j`
/// of factor B. Effects are named `A`, `B` and `A:B`.
pub fn two_way_anova<T: Real>(cells: &[Vec<Vec<T>>]) -> Result<AnovaResult<T>> {
    let a_levels = cells.len();
    let b_levels = cells.first().map_or(0, Vec::len);
    if a_levels < 2 || b_levels < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            found: a_levels.min(b_levels),
        });
    }
    if cells.iter().any(|row| row.len() != b_levels) {
        return Err(Error::UnsupportedDesign(
            "factors are not fully crossed".into(),
        ));
    }
    let reps = cells[0][0].len();
    if cells.iter().flatten().any(|c| c.len() != reps) {
        return Err(Error::UnsupportedDesign(
            "unbalanced cells; only equal cell sizes are supported".into(),
        ));
    }
    if reps < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            found: reps,
        });
    }

    let r = T::count(reps);
    let cell_mean: Vec<Vec<T>> = cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.iter().copied().sum::<T>() / r)
                .collect()
        })
        .collect();
    let grand = cell_mean.iter().flatten().copied().sum::<T>() / T::count(a_levels * b_levels);
    let a_mean: Vec<T> = cell_mean
        .iter()
        .map(|row| row.iter().copied().sum::<T>() / T::count(b_levels))
        .collect();
    let b_mean: Vec<T> = (0..b_levels)
        .map(|j| cell_mean.iter().map(|row| row[j]).sum::<T>() / T::count(a_levels))
        .collect();

    let ss_a =
        r * T::count(b_levels) * a_mean.iter().map(|&m| (m - grand) * (m - grand)).sum::<T>();
    let ss_b =
        r * T::count(a_levels) * b_mean.iter().map(|&m| (m - grand) * (m - grand)).sum::<T>();
    let mut ss_ab = T::zero();
    let mut ss_error = T::zero();
    for i in 0..a_levels {
        for j in 0..b_levels {
            let resid = cell_mean[i][j] - a_mean[i] - b_mean[j] + grand;
            ss_ab = ss_ab + r * resid * resid;
            ss_error = ss_error
                + cells[i][j]
                    .iter()
                    .map(|&x| (x - cell_mean[i][j]) * (x - cell_mean[i][j]))
                    .sum::<T>();
        }
    }
    let ss_total = ss_a + ss_b + ss_ab + ss_error;
    let df_error = a_levels * b_levels * (reps - 1);
    let effects = vec![
        effect("A", ss_a, a_levels - 1, ss_error, df_error, ss_total)?,
        effect("B", ss_b, b_levels - 1, ss_error, df_error, ss_total)?,
        effect(
            "A:B",
            ss_ab,
            (a_levels - 1) * (b_levels - 1),
            ss_error,
            df_error,
            ss_total,
        )?,
    ];
    Ok(AnovaResult {
        effects,
        ss_error,
        df_error,
        ss_total,
    })
}

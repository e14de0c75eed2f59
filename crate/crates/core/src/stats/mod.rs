//! Regression, fixed-effects ANOVA and the F distribution.

mod anova;
mod regression;
pub mod special;

pub use anova::{one_way_anova, two_way_anova, AnovaEffect, AnovaResult};
pub use regression::{linear_regression, pearson, RegressionResult};
pub use special::{f_cdf, f_sf, ln_gamma, regularized_beta};

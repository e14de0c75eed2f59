//! File formats: trajectory and profile CSV, JSON fit reports, ANOVA tables
//! and SVG plots.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write followed by a parse reproduces every value bit for bit.

mod anova;
mod profile;
mod report;
mod svg;
mod trajectory;

pub use anova::{read_anova_table, write_effects_csv, AnovaDesign, AnovaTable};
pub use profile::{read_profile_csv, write_profile_csv, PROFILE_HEADER};
pub use report::{
    config_hash, file_sha256, FitReport, MeasuredBlock, PhaseSplitBlock, PredictionsBlock,
    Provenance, SecondPhaseBlock, TaskBlock, UnimodalityBlock,
};
pub use svg::profile_svg;
pub use trajectory::{
    parse_trajectory_csv, parse_trajectory_reader, write_trajectory_csv, ParseMode,
    ParsedTrajectories, RowIssue, TRAJECTORY_HEADER,
};

use crate::error::{Error, Result};

pub(crate) fn parse_field<T: std::str::FromStr>(s: &str, line: u64, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Format {
        line,
        message: format!("cannot parse {what} from {s:?}"),
    })
}

pub(crate) fn check_header(
    found: Option<&csv::StringRecord>,
    expected: &[&str],
    line: u64,
) -> Result<()> {
    let ok = found.is_some_and(|h| {
        h.len() == expected.len() && h.iter().zip(expected).all(|(a, b)| a.trim() == *b)
    });
    if ok {
        Ok(())
    } else {
        Err(Error::Format {
            line,
            message: format!("expected header `{}`", expected.join(",")),
        })
    }
}

use std::io::{Read, Write};

use super::{check_header, parse_field};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::{one_way_anova, two_way_anova, AnovaResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnovaDesign {
    /// Columns `group,value`.
    OneWay,
    /// Columns `a,b,value`; every cell must hold the same number of values.
    TwoWay,
}

/// Values grouped by factor levels, levels in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct AnovaTable<T> {
    pub design: AnovaDesign,
    pub levels_a: Vec<String>,
    pub levels_b: Vec<String>,
    /// `cells[a][b]`; a one-way table has a single `b` level.
    pub cells: Vec<Vec<Vec<T>>>,
}

impl<T: Real> AnovaTable<T> {
    pub fn analyze(&self) -> Result<AnovaResult<T>> {
        match self.design {
            AnovaDesign::OneWay => {
                let groups: Vec<Vec<T>> = self.cells.iter().map(|c| c[0].clone()).collect();
                one_way_anova(&groups)
            }
            AnovaDesign::TwoWay => two_way_anova(&self.cells),
        }
    }
}

fn level(levels: &mut Vec<String>, name: &str) -> usize {
    match levels.iter().position(|l| l == name) {
        Some(i) => i,
        None => {
            levels.push(name.to_string());
            levels.len() - 1
        }
    }
}

pub fn read_anova_table<T: Real>(input: impl Read, design: AnovaDesign) -> Result<AnovaTable<T>> {
    let header: &[&str] = match design {
        AnovaDesign::OneWay => &["group", "value"],
        AnovaDesign::TwoWay => &["a", "b", "value"],
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = rdr.records();
    let first = records.next().transpose()?;
    check_header(first.as_ref(), header, 1)?;

    let mut levels_a = Vec::new();
    let mut levels_b = Vec::new();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(Error::Format {
                line,
                message: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let a = level(&mut levels_a, rec[0].trim());
        let b = match design {
            AnovaDesign::OneWay => 0,
            AnovaDesign::TwoWay => level(&mut levels_b, rec[1].trim()),
        };
        let v: f64 = parse_field(&rec[header.len() - 1], line, "value")?;
        if !v.is_finite() {
            return Err(Error::Format {
                line,
                message: "non-finite value".into(),
            });
        }
        rows.push((a, b, T::lit(v)));
    }
    if rows.is_empty() {
        return Err(Error::Input("no observations".into()));
    }
    if design == AnovaDesign::OneWay {
        levels_b.push(String::new());
    }
    let mut cells = vec![vec![Vec::new(); levels_b.len()]; levels_a.len()];
    for (a, b, v) in rows {
        cells[a][b].push(v);
    }
    Ok(AnovaTable {
        design,
        levels_a,
        levels_b,
        cells,
    })
}

/// `effect,F,df1,df2,p,eta_sq`; an infinite F is written as `inf`.
pub fn write_effects_csv<T: Real>(result: &AnovaResult<T>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["effect", "F", "df1", "df2", "p", "eta_sq"])?;
    for e in &result.effects {
        w.write_record([
            e.name.clone(),
            e.f.to_string(),
            e.df1.to_string(),
            e.df2.to_string(),
            e.p.to_string(),
            e.eta_sq.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

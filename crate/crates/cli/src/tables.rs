//! CSV artifacts: training traces, SP traces, dynamics and sweep tables.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cogs::analyzer::DynamicsRow;
use cogs::trainer::{EpochRecord, SpSnapshot};
use num_complex::Complex64;

pub fn write_trace(path: &Path, rows: &[EpochRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["epoch", "train_loss", "test_loss", "train_acc", "test_acc"])?;
    for r in rows {
        w.write_record([
            r.epoch.to_string(),
            r.train_loss.to_string(),
            r.test_loss.to_string(),
            r.train_acc.to_string(),
            r.test_acc.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sp_trace(path: &Path, snaps: &[SpSnapshot]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["epoch", "label", "re", "im"])?;
    for s in snaps {
        for (label, v) in &s.values {
            w.write_record([s.epoch.to_string(), label.clone(), v.re.to_string(), v.im.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_sp_trace(path: &Path) -> Result<Vec<SpSnapshot>> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["epoch", "label", "re", "im"] {
        bail!(cogs::CogsError::Validation(format!("{} is not an SP trace (header {:?})", path.display(), headers)));
    }
    let mut by_epoch: BTreeMap<usize, Vec<(String, Complex64)>> = BTreeMap::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().with_context(|| format!("line {}: bad number {:?}", line + 2, &rec[i]))
        };
        let epoch: usize = rec[0]
            .parse()
            .map_err(|_| cogs::CogsError::Validation(format!("line {}: bad epoch {:?}", line + 2, &rec[0])))?;
        let (re, im) = (parse(2).map_err(validation)?, parse(3).map_err(validation)?);
        by_epoch.entry(epoch).or_default().push((rec[1].to_string(), Complex64::new(re, im)));
    }
    Ok(by_epoch.into_iter().map(|(epoch, values)| SpSnapshot { epoch, values }).collect())
}

fn validation(e: anyhow::Error) -> cogs::CogsError {
    cogs::CogsError::Validation(format!("{e:#}"))
}

pub fn write_dynamics(path: &Path, rows: &[DynamicsRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["epoch", "diag_sum", "offdiag_max", "offdiag_norm", "rn_norm", "rstar_norm"])?;
    for r in rows {
        w.write_record([
            r.epoch.to_string(),
            r.diag_sum.to_string(),
            r.offdiag_max.to_string(),
            r.offdiag_norm.to_string(),
            r.rn_norm.to_string(),
            r.rstar_norm.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Header plus numeric-or-text columns of an arbitrary CSV file.
pub struct Columns {
    pub names: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Columns {
    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let names = r.headers()?.iter().map(str::to_string).collect();
        let rows = r.records().map(|rec| Ok(rec?.iter().map(str::to_string).collect())).collect::<Result<_>>()?;
        Ok(Self { names, rows })
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| {
            cogs::CogsError::Validation(format!("no column {name:?}; available: {}", self.names.join(", "))).into()
        })
    }

    pub fn text(&self, col: usize) -> Vec<String> {
        self.rows.iter().map(|r| r[col].clone()).collect()
    }

    pub fn numbers(&self, col: usize) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r[col].parse::<f64>().map_err(|_| {
                    cogs::CogsError::Validation(format!("row {}: {:?} in {} is not a number", i + 2, r[col], self.names[col]))
                        .into()
                })
            })
            .collect()
    }
}

//! JSON encodings of weights.
//!
//! A weights file carries the real-space network and, optionally, the
//! frequency-space weight it came from. Complex values are written as
//! interleaved `[re, im, re, im, ...]` rows, one row per role and
//! representative frequency.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CogsError, Result};
use crate::group::GroupSpec;
use crate::weight::{RealNet, Role, WeightZ};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealNetJson {
    /// `d` rows of `q` values each.
    pub w_a: Vec<Vec<f64>>,
    pub w_b: Vec<Vec<f64>>,
    pub w_c: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightZJson {
    /// Representative frequencies as flat indices.
    pub freqs: Vec<usize>,
    /// One interleaved row of length `2q` per representative.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightsFile {
    pub group: GroupSpec,
    pub q: usize,
    pub real: RealNetJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq: Option<WeightZJson>,
}

fn rows(flat: &[f64], q: usize) -> Vec<Vec<f64>> {
    flat.chunks(q.max(1)).map(<[f64]>::to_vec).collect()
}

fn flatten(name: &str, rows: &[Vec<f64>], d: usize, q: usize) -> Result<Vec<f64>> {
    if rows.len() != d || rows.iter().any(|r| r.len() != q) {
        return Err(CogsError::Validation(format!("{name} must be {d} rows of {q} values")));
    }
    Ok(rows.concat())
}

impl WeightsFile {
    pub fn from_real(net: &RealNet) -> Self {
        Self {
            group: net.spec.clone(),
            q: net.q,
            real: RealNetJson { w_a: rows(&net.w_a, net.q), w_b: rows(&net.w_b, net.q), w_c: rows(&net.w_c, net.q) },
            freq: None,
        }
    }

    /// Both encodings; the real part is derived from `z`.
    pub fn from_weight(z: &WeightZ) -> Self {
        let mut file = Self::from_real(&z.to_real());
        let encode = |p: Role| {
            (0..z.reps().len())
                .map(|r| z.rep_values(p, r).iter().flat_map(|v| [v.re, v.im]).collect())
                .collect()
        };
        file.freq = Some(WeightZJson { freqs: z.reps().to_vec(), a: encode(Role::A), b: encode(Role::B), c: encode(Role::C) });
        file
    }

    pub fn real_net(&self) -> Result<RealNet> {
        let d = self.group.size();
        RealNet::new(
            &self.group,
            self.q,
            flatten("w_a", &self.real.w_a, d, self.q)?,
            flatten("w_b", &self.real.w_b, d, self.q)?,
            flatten("w_c", &self.real.w_c, d, self.q)?,
        )
    }

    /// Frequency-space weight: the stored one when present, otherwise the
    /// transform of the real network (which drops its constant component).
    pub fn weight(&self) -> Result<WeightZ> {
        let Some(f) = &self.freq else { return Ok(WeightZ::from_real(&self.real_net()?)) };
        let expect = self.group.representatives();
        if f.freqs != expect {
            return Err(CogsError::Validation(format!("frequency list {:?} does not match group {}", f.freqs, self.group)));
        }
        let q = self.q;
        for (name, rows) in [("a", &f.a), ("b", &f.b), ("c", &f.c)] {
            if rows.len() != expect.len() || rows.iter().any(|r| r.len() != 2 * q) {
                return Err(CogsError::Validation(format!("role {name} must be {} rows of {} values", expect.len(), 2 * q)));
            }
        }
        WeightZ::from_rep_fn(&self.group, q, |p, k, j| {
            let r = expect.iter().position(|&x| x == k).expect("representative");
            let row = match p {
                Role::A => &f.a[r],
                Role::B => &f.b[r],
                Role::C => &f.c[r],
            };
            Complex64::new(row[2 * j], row[2 * j + 1])
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{build_f6, F6Params};

    #[test]
    fn round_trips() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let z = build_f6(&spec, &F6Params::default()).unwrap();
        let file = WeightsFile::from_weight(&z);
        let text = serde_json::to_string(&file).unwrap();
        let back: WeightsFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.weight().unwrap().raw(), z.raw());
        assert_eq!(back.real_net().unwrap(), z.to_real());
    }

    #[test]
    fn rejects_wrong_shapes() {
        let spec = GroupSpec::cyclic(5).unwrap();
        let mut file = WeightsFile::from_real(&RealNet::zeros(&spec, 2));
        file.real.w_c.pop();
        assert!(file.real_net().is_err());
    }
}
